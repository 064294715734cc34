"""Closed-form single-polariton theory for the finite array.

Covers the polariton dispersion of the infinite chain, the internal
reflection coefficient at the array edge, the Fabry-Perot condition that
quantizes the even modes, the Lambert-W law for the decay rate of the
brightest state, and the edge-to-center intensity scaling.

Sign convention: the dispersion used throughout is

    cos K = cos phi + sin phi / eps,       eps = sin phi / (cos K - cos phi).

With the reflection coefficient below, this makes r e^{iK(N+1)} equal +1 on
even finite-array modes and -1 on odd ones to machine accuracy, which is
the quantization rule the rest of the module builds on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, PoleError
from .lattice import ArrayConfig, build_single_hamiltonian
from .observables import parity_of
from .spectral import eig_dense

LAMBERT_TOL = 1e-12
LAMBERT_MAX_ITER = 50
POLE_TOL = 1e-12


def _check_phase(phi: float) -> float:
    phi = float(phi)
    if abs(np.sin(phi)) < 1e-12:
        raise ConfigurationError(f"phase {phi} has sin(phi) = 0; dispersion undefined")
    return phi


def dispersion_K(eps, phi: float):
    """Complex Bloch wavevector K(eps) on the branch decaying into the bulk.

    Solves cos K = cos phi + sin phi / eps with Im K >= 0; when Im K = 0
    the tie is broken by Re K in [0, pi].  Scalar in, scalar out; arrays
    broadcast elementwise.
    """
    phi = _check_phase(phi)
    eps_arr = np.asarray(eps, dtype=complex)
    if np.any(eps_arr == 0):
        raise PoleError("dispersion has a pole at eps = 0")
    k = np.arccos(np.cos(phi) + np.sin(phi) / eps_arr)
    k = np.where(k.imag < 0, -k, k)
    if np.isscalar(eps) or eps_arr.ndim == 0:
        return complex(k)
    return k


def dispersion_eps(k, phi: float):
    """Energy eps(K) = sin phi / (cos K - cos phi); inverse of dispersion_K."""
    phi = _check_phase(phi)
    k_arr = np.asarray(k, dtype=complex)
    denom = np.cos(k_arr) - np.cos(phi)
    if np.any(np.abs(denom) < POLE_TOL):
        raise PoleError("eps(K) has a pole where cos K = cos phi")
    out = np.sin(phi) / denom
    if np.isscalar(k) or k_arr.ndim == 0:
        return complex(out)
    return out


def reflection_r(k, phi: float):
    """Internal reflection coefficient of a polariton Bloch wave at the edge.

    r = -(1 - e^{i(phi - K)}) / (1 - e^{i(phi + K)}).  The symbol r avoids
    the clash with the photon-photon distance rho.
    """
    phi = float(phi)
    k_arr = np.asarray(k, dtype=complex)
    denom = 1 - np.exp(1j * (phi + k_arr))
    if np.any(np.abs(denom) < POLE_TOL):
        raise PoleError("reflection coefficient has a pole at K = -phi (mod 2 pi)")
    out = -(1 - np.exp(1j * (phi - k_arr))) / denom
    if np.isscalar(k) or k_arr.ndim == 0:
        return complex(out)
    return out


@dataclass(frozen=True)
class DispersionPoint:
    """Energy, wavevector, and edge reflection amplitude of one polariton."""

    energy: complex
    wavevector: complex
    reflection: complex

    @classmethod
    def from_energy(cls, eps: complex, phi: float) -> "DispersionPoint":
        k = dispersion_K(eps, phi)
        return cls(energy=complex(eps), wavevector=k, reflection=reflection_r(k, phi))


def fabry_perot_residual(eps: complex, n_atoms: int, phi: float) -> float:
    """Distance of r(eps) e^{iK(eps)(N+1)} from 1 (even-mode quantization).

    Even finite-array modes drive this to zero as N grows; odd modes sit
    near 2 because their round-trip phase is -1 instead of +1.
    """
    point = DispersionPoint.from_energy(eps, phi)
    return float(
        abs(point.reflection * np.exp(1j * point.wavevector * (n_atoms + 1)) - 1)
    )


def lambert_w0(x):
    """Principal-branch Lambert W on x >= 0 by Halley iteration.

    Satisfies |W e^W - x| <= 1e-12 max(1, x); the starting guess is the
    usual log-based one, and convergence takes a handful of cubic steps.
    """
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr < 0) or not np.all(np.isfinite(x_arr)):
        raise ConfigurationError("lambert_w0 requires finite x >= 0")
    flat = np.atleast_1d(x_arr).astype(float)
    w = flat / (1 + flat)
    big = flat > np.e
    if np.any(big):
        lx = np.log(flat[big])
        w[big] = lx - np.log(lx)
    for _ in range(LAMBERT_MAX_ITER):
        ew = np.exp(w)
        f = w * ew - flat
        if np.all(np.abs(f) <= LAMBERT_TOL * np.maximum(1.0, flat)):
            break
        wp1 = w + 1
        w = w - f / (ew * wp1 - (w + 2) * f / (2 * wp1))
    else:
        raise RuntimeError("Lambert W iteration did not converge in 50 steps")
    if np.isscalar(x) or x_arr.ndim == 0:
        return float(w[0])
    return w.reshape(x_arr.shape)


def brightest_decay_prediction(n_atoms: int, phi: float, variant: str = "exact") -> float:
    """Predicted radiative rate -Im eps of the brightest single-particle state.

    The exact variant is N / W(2 N sin phi); the asymptotic one replaces
    W(x) by log x - log log x.
    """
    if n_atoms < 2:
        raise ConfigurationError(f"need n_atoms >= 2, got {n_atoms}")
    s = np.sin(phi)
    if s <= 0:
        raise ConfigurationError(f"phase {phi} has sin(phi) <= 0; the decay law needs sin(phi) > 0")
    x = 2 * n_atoms * s
    if variant == "exact":
        return n_atoms / lambert_w0(x)
    if variant == "asymptotic":
        lx = np.log(x)
        if lx <= 0:
            raise ConfigurationError(
                f"asymptotic form needs 2 N sin(phi) > 1, got {x:.3g}"
            )
        return float(n_atoms / (lx - np.log(lx)))
    raise ConfigurationError(f"unknown variant {variant!r}; use 'exact' or 'asymptotic'")


def edge_center_ratio(vec: np.ndarray) -> float:
    """Intensity ratio |psi_{N/2} / psi_1|^2 between array center and edge."""
    vec = np.asarray(vec)
    n = vec.size
    if n < 2 or n % 2:
        raise ConfigurationError(f"need an even number of sites >= 2, got {n}")
    if vec[0] == 0:
        raise ConfigurationError("edge amplitude vanishes; ratio undefined")
    return float(np.abs(vec[n // 2 - 1] / vec[0]) ** 2)


@dataclass(frozen=True)
class ScalingRow:
    """One system size of the superradiance and edge-to-center scaling table."""

    n_atoms: int
    minus_im_eps_numeric: float
    eq8: float
    eq9: float
    q: float
    qn: float
    fp_decay_check: float


def brightest_even_index(dec) -> int:
    """Index of the brightest mode with clean even mirror parity."""
    n = dec.vectors.shape[0]
    for k in range(dec.dimension):
        label, _ = parity_of(dec.vectors[:, k], n)
        if label == "even":
            return k
    raise ConfigurationError("no even-parity mode found")


def scaling_row(dec, n_atoms: int, phi: float) -> ScalingRow:
    """Scaling metrics from one single-excitation eigendecomposition.

    The decay column tracks the overall brightest state; the q ratio uses
    the brightest even state, whose center amplitude is free of the
    half-site node offset that odd modes carry.  The last column is the
    decay check e^{-(N-1) Im K} N sin phi, which the Fabry-Perot analysis
    puts near 1.
    """
    if n_atoms < 4 or n_atoms % 2:
        raise ConfigurationError(f"scaling sizes must be even and >= 4, got {n_atoms}")
    brightest = dec.values[0]
    k_even = brightest_even_index(dec)
    q = edge_center_ratio(dec.vectors[:, k_even])
    k_bloch = dispersion_K(brightest, phi)
    check = float(np.exp(-(n_atoms - 1) * k_bloch.imag) * n_atoms * np.sin(phi))
    return ScalingRow(
        n_atoms=n_atoms,
        minus_im_eps_numeric=float(-brightest.imag),
        eq8=brightest_decay_prediction(n_atoms, phi, "exact"),
        eq9=brightest_decay_prediction(n_atoms, phi, "asymptotic"),
        q=q,
        qn=q * n_atoms,
        fp_decay_check=check,
    )


def edge_center_scaling(n_list, phi: float) -> list[ScalingRow]:
    """Numeric decay and center suppression against the Lambert-W law."""
    phi = _check_phase(phi)
    rows = []
    for n_atoms in n_list:
        n_atoms = int(n_atoms)
        dec = eig_dense(build_single_hamiltonian(ArrayConfig(n_atoms, phi)))
        rows.append(scaling_row(dec, n_atoms, phi))
    return rows


def scaling_table(rows) -> tuple[list[str], list[list]]:
    header = ["N", "minus_im_eps_numeric", "eq8", "eq9", "q", "qN", "fp_decay_check"]
    body = [
        [r.n_atoms, r.minus_im_eps_numeric, r.eq8, r.eq9, r.q, r.qn, r.fp_decay_check]
        for r in rows
    ]
    return header, body

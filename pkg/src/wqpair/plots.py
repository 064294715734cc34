"""Figure rendering for the report paths of the command-line interface.

Every function takes ready-made arrays plus an output path, renders one PNG
with the Agg backend, and returns the path.  Figures accompany the
delimited output; they are presentation only and never feed back into any
computation, which is why manifests list them without content digests.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

DPI = 150


def _finish(fig, out) -> Path:
    out = Path(out)
    fig.tight_layout()
    fig.savefig(out, dpi=DPI)
    plt.close(fig)
    return out


def plot_spectrum(energies, rho, out, single_energies=None) -> Path:
    """Complex-plane spectrum colored by photon-photon distance."""
    energies = np.asarray(energies)
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    if rho is not None:
        sc = ax.scatter(energies.real, energies.imag, c=np.asarray(rho), s=12, cmap="viridis")
        fig.colorbar(sc, ax=ax, label="photon-photon distance")
    else:
        ax.scatter(energies.real, energies.imag, s=12, color="tab:blue")
    if single_energies is not None:
        single_energies = np.asarray(single_energies)
        ax.scatter(
            single_energies.real, single_energies.imag,
            marker="*", s=60, color="tab:cyan", edgecolors="k", linewidths=0.3,
            label="single excitation",
        )
        ax.legend(loc="best")
    ax.set_xlabel("Re eps")
    ax.set_ylabel("Im eps")
    return _finish(fig, out)


def plot_histogram(counts, edges, out) -> Path:
    counts = np.asarray(counts)
    edges = np.asarray(edges)
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.bar(edges[:-1], counts, width=np.diff(edges), align="edge", color="tab:blue", edgecolor="none")
    ax.set_xlabel("photon-photon distance")
    ax.set_ylabel("number of states")
    return _finish(fig, out)


def plot_wavefunction(prob, out) -> Path:
    """Two-photon probability map |Psi_nm|^2 over site indices."""
    prob = np.asarray(prob)
    n = prob.shape[0]
    fig, ax = plt.subplots(figsize=(5.4, 4.8))
    im = ax.imshow(
        prob, origin="lower", extent=(0.5, n + 0.5, 0.5, n + 0.5),
        cmap="magma", interpolation="nearest",
    )
    fig.colorbar(im, ax=ax, label=r"$|\Psi_{nm}|^2$")
    ax.set_xlabel("site n")
    ax.set_ylabel("site m")
    return _finish(fig, out)


def plot_profile(prob, out) -> Path:
    """Single-excitation intensity profile along the array, log scale."""
    prob = np.asarray(prob)
    sites = np.arange(1, prob.size + 1)
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.semilogy(sites, prob, "o-", ms=3, color="tab:red")
    ax.set_xlabel("site n")
    ax.set_ylabel(r"$|\psi_n|^2$")
    return _finish(fig, out)


def plot_decomposition(lambdas, parity, out) -> Path:
    """Coefficient magnitudes of the symmetric decomposition, colored by parity."""
    mags = np.abs(np.asarray(lambdas))
    idx = np.arange(1, mags.size + 1)
    colors = {"even": "tab:red", "odd": "tab:blue", "mixed": "tab:gray"}
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    for label in ("even", "odd", "mixed"):
        mask = np.array([p == label for p in parity])
        if mask.any():
            ax.semilogy(idx[mask], mags[mask], "o", color=colors[label], label=label)
    ax.set_xlabel("term")
    ax.set_ylabel(r"$|\lambda_\nu|$")
    ax.legend(loc="best")
    return _finish(fig, out)


def plot_fourier(power, kgrid, out) -> Path:
    power = np.asarray(power)
    kgrid = np.asarray(kgrid)
    fig, ax = plt.subplots(figsize=(5.4, 4.8))
    im = ax.pcolormesh(kgrid, kgrid, power.T, cmap="magma", shading="nearest")
    fig.colorbar(im, ax=ax, label=r"$|\psi(k_x,k_y)|^2$")
    ax.set_xlabel(r"$k_x$")
    ax.set_ylabel(r"$k_y$")
    return _finish(fig, out)


def plot_scaling(rows, out) -> Path:
    """Brightest-state decay vs the analytic predictions, and the q N check."""
    ns = np.array([r.n_atoms for r in rows])
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.2, 4.0))
    ax1.plot(ns, [r.minus_im_eps_numeric for r in rows], "o-", label="numeric")
    ax1.plot(ns, [r.eq8 for r in rows], "s--", label="N / W(2N sin phi)")
    ax1.plot(ns, [r.eq9 for r in rows], "^:", label="log approximation")
    ax1.set_xlabel("N")
    ax1.set_ylabel("-Im eps of brightest state")
    ax1.legend(loc="best")
    ax2.plot(ns, [r.qn for r in rows], "o-", color="tab:green")
    ax2.set_xlabel("N")
    ax2.set_ylabel("q N")
    return _finish(fig, out)


def plot_disorder_map(result, out) -> Path:
    """Sorted photon-distance map: one horizontal line per realization."""
    rows = result.rows
    img = np.vstack([r.sorted_rho for r in rows])
    fig, ax = plt.subplots(figsize=(6.8, 4.8))
    im = ax.imshow(img, aspect="auto", origin="upper", cmap="turbo", interpolation="nearest")
    fig.colorbar(im, ax=ax, label="photon-photon distance")
    boundaries = np.nonzero(np.diff([r.strength_index for r in rows]))[0]
    for b in boundaries:
        ax.axhline(b + 0.5, color="w", lw=0.8)
    ax.set_xlabel("state (sorted by distance)")
    ax.set_ylabel("realization")
    ax.set_yticks([])
    return _finish(fig, out)

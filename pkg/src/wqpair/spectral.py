"""Dense spectral tools for complex symmetric, non-Hermitian problems.

Three jobs live here: a residual-certified dense eigensolver, the
complex-orthogonal decomposition of a symmetric wavefunction matrix (the
factorization whose vectors obey the unconjugated orthogonality rule
``sum_n v_n w_n = delta``), and the plain 2D discrete Fourier map used to
inspect two-photon wavefunctions in momentum space.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import CertificationError, ConfigurationError, DimensionCapError
from .observables import parity_of

log = logging.getLogger(__name__)

DEFAULT_DIM_CAP = 20_000
RESIDUAL_TOL = 1e-9
QUASI_NULL_TOL = 1e-10
SYMMETRY_TOL = 1e-10
GAP_TOL = 1e-10


def sort_eigenpairs(values: np.ndarray, vectors: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Order eigenpairs brightest first: ascending Im, ties by ascending Re."""
    order = np.lexsort((values.real, values.imag))
    return values[order], vectors[:, order]


@dataclass(frozen=True)
class EigenDecomposition:
    """Right eigenpairs of a dense matrix, residual certified.

    ``values[k]`` pairs with column ``vectors[:, k]`` (unit Euclidean norm);
    ``residuals[k]`` is the two-norm of ``A v - lambda v``.  Pairs are sorted
    brightest first (most negative imaginary part).
    """

    values: np.ndarray
    vectors: np.ndarray
    residuals: np.ndarray

    @property
    def dimension(self) -> int:
        return self.values.size

    @property
    def brightest_index(self) -> int:
        return 0

    def state(self, k: int) -> tuple[complex, np.ndarray]:
        return complex(self.values[k]), self.vectors[:, k]


def check_dimension(dim: int, max_dim: int = DEFAULT_DIM_CAP) -> None:
    """Refuse problem sizes whose dense solve would not fit in memory.

    Raising here before any large allocation keeps an oversized request
    from taking the host down; callers that really want the solve can pass
    a larger ``max_dim``.
    """
    if dim > max_dim:
        raise DimensionCapError(
            f"dimension {dim} exceeds the cap {max_dim}; "
            f"a dense solve needs roughly {3 * dim * dim * 16 / 1e9:.1f} GB"
        )


def eig_dense(mat: np.ndarray, max_dim: int = DEFAULT_DIM_CAP) -> EigenDecomposition:
    """Diagonalize a dense square matrix and certify every eigenpair.

    Delegates to LAPACK and then checks ``|A v - lambda v| <= 1e-9 |A|_F``
    for each pair, raising :class:`CertificationError` naming the first
    offending index otherwise.  The dimension cap keeps accidental huge
    allocations from taking the host down; the estimated footprint is logged
    before the solve.
    """
    mat = np.asarray(mat, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ConfigurationError(f"expected a square matrix, got shape {mat.shape}")
    if not np.all(np.isfinite(mat.real)) or not np.all(np.isfinite(mat.imag)):
        raise ConfigurationError("matrix entries must be finite")
    dim = mat.shape[0]
    check_dimension(dim, max_dim)
    log.info(
        "dense eigensolve of %d x %d (about %.1f MB of workspace)",
        dim, dim, 3 * dim * dim * 16 / 1e6,
    )
    values, vectors = np.linalg.eig(mat)
    vectors = vectors / np.linalg.norm(vectors, axis=0)
    values, vectors = sort_eigenpairs(values, vectors)
    residuals = np.linalg.norm(mat @ vectors - vectors * values, axis=0)
    scale = np.linalg.norm(mat)
    bad = np.nonzero(residuals > RESIDUAL_TOL * scale)[0]
    if bad.size:
        k = int(bad[0])
        raise CertificationError(
            f"eigenpair {k} fails certification: residual {residuals[k]:.3e} "
            f"> {RESIDUAL_TOL:.0e} * {scale:.3e}",
            index=k,
        )
    return EigenDecomposition(values=values, vectors=vectors, residuals=residuals)


@dataclass(frozen=True)
class OrthogonalSymmetricDecomposition:
    """Complex-orthogonal spectral decomposition of a symmetric matrix.

    ``Psi = sum_nu lambdas[nu] * v_nu v_nu^T`` with the columns ``v_nu``
    normalized so that ``sum_n v_n^2 = 1`` (no conjugation).  Terms are
    sorted by descending ``|lambda|``.  A term whose eigenvector is
    quasi-null (``|sum v^2|`` vanishes relative to ``sum |v|^2``) cannot be
    normalized this way; it is kept at unit Euclidean norm, marked
    unresolved, and excluded from reconstruction guarantees.
    """

    lambdas: np.ndarray
    vectors: np.ndarray
    resolved: np.ndarray
    parity: tuple[str, ...]
    parity_scores: np.ndarray
    near_defective: bool

    @property
    def n_terms(self) -> int:
        return self.lambdas.size

    @property
    def n_resolved(self) -> int:
        return int(np.count_nonzero(self.resolved))

    def reconstruct(self, k: int | None = None) -> np.ndarray:
        """Sum of the leading ``k`` resolved terms (all resolved terms if None)."""
        keep = np.nonzero(self.resolved)[0]
        if k is not None:
            keep = keep[:k]
        vec = self.vectors[:, keep]
        return (vec * self.lambdas[keep]) @ vec.T

    def summary(self) -> dict:
        """JSON-ready description: coefficients, parity labels, resolution flags."""
        return {
            "n_terms": self.n_terms,
            "n_resolved": self.n_resolved,
            "near_defective": self.near_defective,
            "lambda_re": self.lambdas.real,
            "lambda_im": self.lambdas.imag,
            "lambda_abs": np.abs(self.lambdas),
            "resolved": [bool(r) for r in self.resolved],
            "parity": list(self.parity),
            "parity_score": self.parity_scores,
        }


def _fix_vector_sign(vec: np.ndarray) -> np.ndarray:
    """Resolve the overall +-1 ambiguity left by unconjugated normalization.

    The entry of largest magnitude is rotated into the right half plane
    (argument in (-pi/2, pi/2]), which makes the output deterministic across
    platforms and LAPACK builds.
    """
    k = int(np.argmax(np.abs(vec)))
    a = np.angle(vec[k])
    if not (-np.pi / 2 < a <= np.pi / 2):
        return -vec
    return vec


def _min_eigenvalue_gap(values: np.ndarray) -> float:
    if values.size < 2:
        return np.inf
    if values.size <= 2000:
        diff = np.abs(values[:, None] - values[None, :])
        np.fill_diagonal(diff, np.inf)
        return float(diff.min())
    # large spectra: adjacent gaps after a 1D sort upper-bound the true gap
    srt = np.sort_complex(values)
    return float(np.abs(np.diff(srt)).min())


def decompose_symmetric(psi: np.ndarray) -> OrthogonalSymmetricDecomposition:
    """Factor a complex symmetric matrix into unconjugated-orthogonal terms.

    Symmetric matrices with non-degenerate spectra have eigenvectors that
    are automatically orthogonal without conjugation; renormalizing each by
    the principal square root of ``sum v^2`` yields the decomposition.  The
    coefficient magnitudes play the role of singular values when plotting.
    """
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim != 2 or psi.shape[0] != psi.shape[1]:
        raise ConfigurationError(f"expected a square matrix, got shape {psi.shape}")
    scale = np.linalg.norm(psi)
    if scale == 0:
        raise ConfigurationError("cannot decompose the zero matrix")
    if np.linalg.norm(psi - psi.T) > SYMMETRY_TOL * scale:
        raise ConfigurationError("matrix is not symmetric (unconjugated) to 1e-10")
    n = psi.shape[0]
    values, vectors = np.linalg.eig(psi)
    order = np.argsort(-np.abs(values), kind="stable")
    values = values[order]
    vectors = vectors[:, order]
    near_defective = _min_eigenvalue_gap(values) < GAP_TOL * scale
    if near_defective:
        log.warning("near-degenerate spectrum; decomposition terms may mix")
    resolved = np.ones(n, dtype=bool)
    out = np.empty_like(vectors)
    for k in range(n):
        v = vectors[:, k]
        s = v @ v
        if abs(s) < QUASI_NULL_TOL * np.vdot(v, v).real:
            resolved[k] = False
            out[:, k] = v / np.linalg.norm(v)
        else:
            out[:, k] = _fix_vector_sign(v / np.sqrt(s))
    labels = []
    scores = np.empty(n)
    for k in range(n):
        label, score = parity_of(out[:, k], n)
        labels.append(label)
        scores[k] = score
    return OrthogonalSymmetricDecomposition(
        lambdas=values,
        vectors=out,
        resolved=resolved,
        parity=tuple(labels),
        parity_scores=scores,
        near_defective=near_defective,
    )


def truncate_decomposition(dec: OrthogonalSymmetricDecomposition, k: int) -> np.ndarray:
    """Leading-``k`` approximation of the decomposed matrix, unit Frobenius norm."""
    if not 1 <= k <= dec.n_resolved:
        raise ConfigurationError(
            f"truncation rank must be in [1, {dec.n_resolved}], got {k}"
        )
    approx = dec.reconstruct(k)
    return approx / np.linalg.norm(approx)


def fourier_grid(n: int) -> np.ndarray:
    """Momentum grid k_j = -pi + 2 pi j / n for j = 0 .. n-1."""
    return -np.pi + 2 * np.pi * np.arange(n) / n


def fourier2d(psi: np.ndarray) -> np.ndarray:
    """2D discrete Fourier map psi(k_x, k_y) = sum e^{-i k_x m - i k_y n} psi_mn.

    Rows index k_x and columns k_y on :func:`fourier_grid`; sites are
    counted 1..N.  The transform is exactly invertible via
    :func:`inverse_fourier2d`.
    """
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim != 2 or psi.shape[0] != psi.shape[1]:
        raise ConfigurationError(f"expected a square matrix, got shape {psi.shape}")
    n = psi.shape[0]
    sites = np.arange(1, n + 1)
    phases = np.exp(-1j * np.outer(fourier_grid(n), sites))
    return phases @ psi @ phases.T


def inverse_fourier2d(fmap: np.ndarray) -> np.ndarray:
    """Exact inverse of :func:`fourier2d` (the phase matrix is sqrt(N)-unitary)."""
    fmap = np.asarray(fmap, dtype=complex)
    n = fmap.shape[0]
    sites = np.arange(1, n + 1)
    phases = np.exp(-1j * np.outer(fourier_grid(n), sites))
    inv = phases.conj().T / n
    return inv @ fmap @ inv.T

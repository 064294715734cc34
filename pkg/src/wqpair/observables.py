"""Per-state metrics for one- and two-excitation eigenstates.

The central quantity is the average photon-photon distance
``rho = sum |n - m| |Psi_nm|^2`` evaluated on the full (n, m) grid with both
orderings counted.  On top of it sit mirror parity, the edge-mass fraction,
a small classification heuristic for the state taxonomy, and the distance
histogram of the full spectrum.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError

PARITY_MIXED_BELOW = 0.99
QUASI_NULL_TOL = 1e-10
DEGENERACY_TOL = 1e-8

LABELS = (
    "scattering",
    "fermionized",
    "bound-pair",
    "edge-bound-pair",
    "interaction-localized",
    "distant-bound",
    "unclassified",
)

# fermionized and interaction-localized are reserved: no detector is
# implemented for them, so classify() never emits these labels.
RESERVED_LABELS = ("fermionized", "interaction-localized")


@dataclass(frozen=True)
class ClassifierThresholds:
    """Tunable cutoffs for the state taxonomy; defaults are heuristics."""

    distant_rho_fraction: float = 0.6
    distant_edge_mass: float = 0.5
    bound_rho: float = 3.0
    edge_bound_edge_mass: float = 0.5


@dataclass(frozen=True)
class TwoExcitationState:
    """One two-photon eigenstate: energy per excitation and amplitude matrix.

    ``amplitudes`` is the symmetric N x N matrix Psi_nm with zero diagonal
    (hard-core constraint) and unit total weight over the full grid,
    ``sum_nm |Psi_nm|^2 = 1``.  ``energy`` is the per-excitation value, half
    the eigenvalue of the pair Hamiltonian.
    """

    energy: complex
    amplitudes: np.ndarray = field(repr=False)
    source: dict | None = field(default=None, compare=False)

    @classmethod
    def from_pair_vector(
        cls, vec: np.ndarray, n_atoms: int, first: np.ndarray, second: np.ndarray,
        pair_energy: complex, source: dict | None = None,
    ) -> "TwoExcitationState":
        """Scatter a pair-basis eigenvector into the symmetric site matrix.

        ``pair_energy`` is the raw eigenvalue of the pair Hamiltonian (the
        total two-excitation energy); the stored energy is half of it.
        """
        psi = np.zeros((n_atoms, n_atoms), dtype=complex)
        psi[first, second] = vec
        psi[second, first] = vec
        total = np.linalg.norm(psi)
        if total == 0:
            raise ConfigurationError("cannot build a state from the zero vector")
        state = cls(energy=complex(pair_energy) / 2, amplitudes=psi / total, source=source)
        state.validate()
        return state

    def validate(self) -> None:
        psi = self.amplitudes
        n = psi.shape[0]
        if psi.shape != (n, n):
            raise ConfigurationError(f"amplitude matrix must be square, got {psi.shape}")
        if np.any(psi != psi.T):
            raise ConfigurationError("amplitude matrix must be exactly symmetric")
        if np.any(np.diagonal(psi) != 0):
            raise ConfigurationError("amplitude diagonal must vanish (hard core)")
        if abs(np.linalg.norm(psi) - 1.0) > 1e-12:
            raise ConfigurationError("amplitudes must have unit total weight")
        if self.energy.imag > 1e-10:
            raise ConfigurationError(
                f"state gains energy (Im eps = {self.energy.imag:.3e} > 1e-10)"
            )

    @property
    def n_atoms(self) -> int:
        return self.amplitudes.shape[0]


def _amplitudes_of(state) -> np.ndarray:
    if isinstance(state, TwoExcitationState):
        return state.amplitudes
    return np.asarray(state, dtype=complex)


def photon_distance(state) -> float:
    """Average photon-photon separation sum_nm |n - m| |Psi_nm|^2."""
    psi = _amplitudes_of(state)
    n = psi.shape[0]
    weight = np.abs(psi) ** 2
    total = weight.sum()
    if total == 0:
        raise ConfigurationError("zero wavefunction has no photon distance")
    sep = np.abs(np.subtract.outer(np.arange(n), np.arange(n)))
    return float((sep * weight).sum() / total)


def _mirror(arr: np.ndarray) -> np.ndarray:
    """Site reflection n -> N + 1 - n, applied to every index of the array."""
    return np.flip(arr)


def parity_of(vec, n_atoms: int) -> tuple[str, float]:
    """Mirror parity of a vector (length N) or amplitude matrix (N x N).

    The score is the magnitude of the unconjugated overlap between the
    state and its mirror image, after unconjugated normalization; it is 1
    for a clean parity eigenstate.  Quasi-null states (vanishing
    unconjugated norm) fall back to the even/odd weight imbalance under the
    ordinary norm.  Both variants are invariant under multiplication by any
    unit-modulus scalar, and the label is ``mixed`` below 0.99.
    """
    arr = _amplitudes_of(vec)
    if arr.ndim == 1:
        if arr.size != n_atoms:
            raise ConfigurationError(f"expected a length-{n_atoms} vector, got {arr.size}")
    elif arr.ndim == 2:
        if arr.shape != (n_atoms, n_atoms):
            raise ConfigurationError(
                f"expected a {n_atoms} x {n_atoms} matrix, got {arr.shape}"
            )
    else:
        raise ConfigurationError(f"expected a vector or a matrix, got ndim={arr.ndim}")
    flat = arr.ravel()
    mirrored = _mirror(arr).ravel()
    mass = np.vdot(flat, flat).real
    if mass == 0:
        raise ConfigurationError("zero state has no parity")
    square = flat @ flat
    if abs(square) >= QUASI_NULL_TOL * mass:
        overlap = (mirrored @ flat) / square
    else:
        even = (flat + mirrored) / 2
        odd = (flat - mirrored) / 2
        overlap = (np.vdot(even, even).real - np.vdot(odd, odd).real) / mass
    score = min(abs(complex(overlap)), 1.0)
    if score < PARITY_MIXED_BELOW:
        return "mixed", score
    return ("even" if complex(overlap).real > 0 else "odd"), score


def pair_mirror_permutation(n_atoms: int, first: np.ndarray, second: np.ndarray) -> np.ndarray:
    """Index permutation implementing the site reflection on the pair basis.

    Entry ``k`` gives the basis index of the mirrored pair
    ``(N - 1 - second[k], N - 1 - first[k])``.  The lexicographic pair order
    does not simply reverse under reflection for N >= 4, so the explicit
    lookup is required.
    """
    lookup = np.full((n_atoms, n_atoms), -1, dtype=int)
    lookup[first, second] = np.arange(first.size)
    perm = lookup[n_atoms - 1 - second, n_atoms - 1 - first]
    if np.any(perm < 0):
        raise ConfigurationError("pair list is not closed under the site reflection")
    return perm


def symmetrize_degenerate_pairs(
    values: np.ndarray, vectors: np.ndarray, tol: float = DEGENERACY_TOL,
    mirror: np.ndarray | None = None,
) -> np.ndarray:
    """Re-mix eigenvectors of (near-)degenerate eigenvalues into parity eigenstates.

    Degenerate groups span a mirror-invariant subspace, so a symmetric and
    an antisymmetric basis of the span always exists; parity evaluated on
    the re-mixed vectors is then well defined.  Non-degenerate columns pass
    through untouched.  ``mirror`` is the row permutation implementing the
    site reflection; the default (reversal) is correct for single-site
    vectors, while pair vectors need :func:`pair_mirror_permutation`.
    """
    values = np.asarray(values)
    out = np.array(vectors, copy=True)
    if mirror is None:
        mirror = np.arange(out.shape[0])[::-1]
    used = np.zeros(values.size, dtype=bool)
    for k in range(values.size):
        if used[k]:
            continue
        group = np.nonzero(np.abs(values - values[k]) <= tol)[0]
        used[group] = True
        if group.size < 2:
            continue
        block = out[:, group]
        even = (block + block[mirror]) / 2
        odd = (block - block[mirror]) / 2
        candidates = []
        for half in (even, odd):
            u, s, _ = np.linalg.svd(half, full_matrices=False)
            for j in range(s.size):
                if s[j] > 1e-8:
                    candidates.append((s[j], u[:, j]))
        candidates.sort(key=lambda item: -item[0])
        if len(candidates) < group.size:
            continue
        for slot, (_, vec) in zip(group, candidates[: group.size]):
            out[:, slot] = vec
    return out


def default_edge_width(n_atoms: int) -> int:
    w = max(2, n_atoms // 10)
    return min(w, max(1, n_atoms // 4))


def edge_sites(n_atoms: int, w: int) -> np.ndarray:
    """Boolean mask of sites within w of an edge (edge atoms at distance 0)."""
    site = np.arange(1, n_atoms + 1)
    return (site - 1 <= w) | (n_atoms - site <= w)


def edge_mass(state, w: int | None = None) -> float:
    """Fraction of |Psi|^2 with both coordinates within w sites of an edge.

    A coordinate n counts as near an edge when its distance to the closest
    boundary atom is at most w, so the mask covers sites 1..w+1 and
    N-w..N on each axis.
    """
    psi = _amplitudes_of(state)
    n = psi.shape[0]
    if w is None:
        w = default_edge_width(n)
    if not 1 <= w <= max(1, n // 4):
        raise ConfigurationError(f"edge width must be in [1, {max(1, n // 4)}], got {w}")
    weight = np.abs(psi) ** 2
    total = weight.sum()
    if total == 0:
        raise ConfigurationError("zero wavefunction has no edge mass")
    near_edge = edge_sites(n, w)
    mask = np.outer(near_edge, near_edge)
    return float(weight[mask].sum() / total)


def classify(
    rho: float, edge: float, n_atoms: int,
    thresholds: ClassifierThresholds = ClassifierThresholds(),
) -> str:
    """Deterministic taxonomy label from the distance and edge-mass metrics."""
    if rho >= thresholds.distant_rho_fraction * (n_atoms - 1) and edge >= thresholds.distant_edge_mass:
        return "distant-bound"
    if rho <= thresholds.bound_rho:
        if edge >= thresholds.edge_bound_edge_mass:
            return "edge-bound-pair"
        return "bound-pair"
    return "scattering"


def center_of_mass_ipr(state) -> float:
    """Inverse participation ratio of the pair's center-of-mass distribution.

    The weight |Psi_nm|^2 is marginalized onto the coordinate sum s = n + m
    and the IPR sum_s P(s)^2 of that distribution is returned.  Values near
    1 mean the pair as a whole sits at one spot; small values mean it is
    spread over the array.
    """
    psi = _amplitudes_of(state)
    n = psi.shape[0]
    weight = np.abs(psi) ** 2
    total = weight.sum()
    if total == 0:
        raise ConfigurationError("zero wavefunction has no localization measure")
    s = np.add.outer(np.arange(n), np.arange(n)).ravel()
    dist = np.bincount(s, weights=weight.ravel(), minlength=2 * n - 1) / total
    return float((dist**2).sum())


def distance_histogram(rhos, n_atoms: int, bins: int = 60) -> tuple[np.ndarray, np.ndarray]:
    """Counts of photon-photon distances over uniform bins on [0, N-1]."""
    rhos = np.asarray(rhos, dtype=float)
    if rhos.size == 0:
        raise ConfigurationError("histogram needs at least one state")
    if bins < 2:
        raise ConfigurationError(f"need at least 2 bins, got {bins}")
    counts, edges = np.histogram(rhos, bins=bins, range=(0.0, float(n_atoms - 1)))
    return counts, edges


@dataclass(frozen=True)
class SpectrumRecord:
    """Summary row for one eigenstate."""

    index: int
    energy: complex
    rho: float
    parity: str
    parity_score: float
    edge_mass: float
    label: str


def spectrum_records(
    pair_values: np.ndarray,
    pair_vectors: np.ndarray,
    n_atoms: int,
    first: np.ndarray,
    second: np.ndarray,
    w: int | None = None,
    thresholds: ClassifierThresholds = ClassifierThresholds(),
    source: dict | None = None,
) -> list[SpectrumRecord]:
    """Metrics for every two-excitation eigenpair, in the given order.

    Eigenvectors of coincident eigenvalues are re-mixed into parity
    eigenstates before scoring, so the parity column stays meaningful for
    degenerate pairs.
    """
    vectors = symmetrize_degenerate_pairs(
        pair_values, pair_vectors,
        mirror=pair_mirror_permutation(n_atoms, first, second),
    )
    records = []
    for k in range(pair_values.size):
        state = TwoExcitationState.from_pair_vector(
            vectors[:, k], n_atoms, first, second, pair_values[k], source=source
        )
        rho = photon_distance(state)
        parity, score = parity_of(state.amplitudes, n_atoms)
        edge = edge_mass(state, w)
        records.append(
            SpectrumRecord(
                index=k,
                energy=state.energy,
                rho=rho,
                parity=parity,
                parity_score=score,
                edge_mass=edge,
                label=classify(rho, edge, n_atoms, thresholds),
            )
        )
    return records


def records_table(records) -> tuple[list[str], list[list]]:
    """Header and rows for the spectrum summary file."""
    header = ["index", "re_eps", "im_eps", "rho", "parity", "parity_score", "edge_mass", "label"]
    rows = [
        [r.index, r.energy.real, r.energy.imag, r.rho, r.parity, r.parity_score, r.edge_mass, r.label]
        for r in records
    ]
    return header, rows


def histogram_table(counts: np.ndarray, edges: np.ndarray) -> tuple[list[str], list[list]]:
    header = ["bin_lo", "bin_hi", "count"]
    rows = [
        [float(edges[i]), float(edges[i + 1]), int(counts[i])] for i in range(counts.size)
    ]
    return header, rows

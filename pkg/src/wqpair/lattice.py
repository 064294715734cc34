"""Waveguide-mediated lattice model for an equidistant atom array.

Energies are measured in units of the single-atom radiative rate into the
waveguide and counted from the atomic resonance, so the clean model is fully
specified by the atom count ``N`` and the hop phase ``phi`` picked up by
guided light between neighbouring atoms.  Optional nearest-neighbour level
shifts model short-range (van der Waals type) interactions and act only in
the two-excitation sector.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError

ORACLE_MAX_ATOMS = 12


@dataclass(frozen=True)
class ArrayConfig:
    """Physical parameters of one atom array.

    Parameters
    ----------
    n_atoms : int
        Number of atoms ``N`` (>= 1; two-excitation builders need >= 2).
    phase : float
        Propagation phase between neighbouring atoms, in radians.
    disorder : tuple of float, optional
        ``N - 1`` nearest-neighbour interaction shifts ``chi_n`` in units of
        the single-atom decay rate.  Defaults to a clean array (all zero).
    """

    n_atoms: int
    phase: float
    disorder: tuple[float, ...] = field(default=())

    def __post_init__(self):
        if int(self.n_atoms) != self.n_atoms or self.n_atoms < 1:
            raise ConfigurationError(f"n_atoms must be a positive integer, got {self.n_atoms!r}")
        if not np.isfinite(self.phase):
            raise ConfigurationError(f"phase must be finite, got {self.phase!r}")
        chi = tuple(float(c) for c in self.disorder) if len(self.disorder) else ()
        if chi and len(chi) != self.n_atoms - 1:
            raise ConfigurationError(
                f"disorder needs exactly {self.n_atoms - 1} entries, got {len(chi)}"
            )
        if chi and not np.all(np.isfinite(chi)):
            raise ConfigurationError("disorder entries must be finite")
        object.__setattr__(self, "disorder", chi)

    @property
    def chi(self) -> np.ndarray:
        """Nearest-neighbour shifts as a length ``N - 1`` array (zeros if clean)."""
        if self.disorder:
            return np.asarray(self.disorder, dtype=float)
        return np.zeros(max(self.n_atoms - 1, 0))

    @property
    def is_clean(self) -> bool:
        return not self.disorder or not np.any(self.chi)


@dataclass(frozen=True)
class PairBasis:
    """Basis of doubly excited states |n, m> with n < m, in lexicographic order.

    Double occupation is excluded by construction, which is how the hard-core
    constraint of two-level atoms enters the model.  Sites are 0-based
    internally; the k-th basis state excites sites ``first[k]`` and
    ``second[k]``.
    """

    n_atoms: int
    first: np.ndarray = field(repr=False, compare=False)
    second: np.ndarray = field(repr=False, compare=False)
    index_of: np.ndarray = field(repr=False, compare=False)

    @classmethod
    def for_atoms(cls, n_atoms: int) -> "PairBasis":
        if n_atoms < 2:
            raise ConfigurationError(f"pair basis needs n_atoms >= 2, got {n_atoms}")
        first, second = np.triu_indices(n_atoms, k=1)
        index_of = np.full((n_atoms, n_atoms), -1, dtype=np.int64)
        index_of[first, second] = np.arange(first.size)
        index_of[second, first] = index_of[first, second]
        return cls(n_atoms=n_atoms, first=first, second=second, index_of=index_of)

    @property
    def dimension(self) -> int:
        return self.first.size

    def pair(self, k: int) -> tuple[int, int]:
        """Sites (0-based) excited by basis state ``k``."""
        return int(self.first[k]), int(self.second[k])


def build_single_hamiltonian(cfg: ArrayConfig) -> np.ndarray:
    """Effective non-Hermitian Hamiltonian in the single-excitation sector.

    Matrix elements are ``-i * exp(i * phi * |n - m|)``, including the
    ``-i`` on the diagonal that encodes single-atom radiative decay.  The
    result is complex symmetric (equal to its plain transpose).  Disorder
    shifts do not act here: they couple only doubly excited atoms.
    """
    n = np.arange(cfg.n_atoms)
    return -1j * np.exp(1j * cfg.phase * np.abs(n[:, None] - n[None, :]))


def build_pair_hamiltonian(cfg: ArrayConfig, basis: PairBasis | None = None) -> np.ndarray:
    """Hamiltonian restricted to the two-excitation pair basis.

    The matrix element between ket pair (p, q) and bra pair (a, b), with
    a < b and p < q, is

        delta_bq H_ap + delta_aq H_bp + delta_bp H_aq + delta_ap H_bq

    where ``H`` is the single-excitation matrix: one excitation hops while
    the shared one stays put.  Nearest-neighbour shifts ``chi_p`` add to the
    diagonal entry of pair (p, p+1).  Eigenvalues are total two-excitation
    energies; callers report the per-excitation value (half of them).

    Assembled per shared site with block scatter-adds, O(N^3) time.
    """
    if cfg.n_atoms < 2:
        raise ConfigurationError("two-excitation sector needs n_atoms >= 2")
    if basis is None:
        basis = PairBasis.for_atoms(cfg.n_atoms)
    elif basis.n_atoms != cfg.n_atoms:
        raise ConfigurationError(
            f"basis is for {basis.n_atoms} atoms, config has {cfg.n_atoms}"
        )
    n_atoms = cfg.n_atoms
    h1 = build_single_hamiltonian(cfg)
    dim = basis.dimension
    mat = np.zeros((dim, dim), dtype=complex)
    look = basis.index_of
    for s in range(n_atoms):
        below = np.arange(0, s)
        above = np.arange(s + 1, n_atoms)
        rows_below = look[below, s] if below.size else below
        rows_above = look[s, above] if above.size else above
        # shared excitation at site s; the other one hops within one side
        # of s or across it (four delta terms; only the diagonal overlaps,
        # which the += accumulation handles).
        if below.size:
            mat[np.ix_(rows_below, rows_below)] += h1[np.ix_(below, below)]
        if above.size:
            mat[np.ix_(rows_above, rows_above)] += h1[np.ix_(above, above)]
        if below.size and above.size:
            mat[np.ix_(rows_above, rows_below)] += h1[np.ix_(above, below)]
            mat[np.ix_(rows_below, rows_above)] += h1[np.ix_(below, above)]
    chi = cfg.chi
    if chi.size and np.any(chi):
        nn = look[np.arange(n_atoms - 1), np.arange(1, n_atoms)]
        mat[nn, nn] += chi
    return mat


def oracle_full_space(cfg: ArrayConfig, basis: PairBasis | None = None) -> np.ndarray:
    """Two-excitation Hamiltonian obtained the slow, unarguable way.

    Builds the full ``2^N`` product space with explicit hard-core raising and
    lowering operators, applies the Hamiltonian plus the nearest-neighbour
    shifts as operators, and projects onto the doubly excited subspace in the
    same pair ordering as :class:`PairBasis`.  Exists purely to validate
    :func:`build_pair_hamiltonian`; capped at ``N <= 12``.
    """
    n_atoms = cfg.n_atoms
    if n_atoms < 2:
        raise ConfigurationError("two-excitation sector needs n_atoms >= 2")
    if n_atoms > ORACLE_MAX_ATOMS:
        raise ConfigurationError(
            f"full-space oracle is capped at {ORACLE_MAX_ATOMS} atoms (got {n_atoms})"
        )
    if basis is None:
        basis = PairBasis.for_atoms(n_atoms)
    dim = 2**n_atoms
    lower = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    eye2 = np.eye(2, dtype=complex)
    ops = []
    for site in range(n_atoms):
        op = np.array([[1.0 + 0j]])
        for m in range(n_atoms):
            op = np.kron(op, lower if m == site else eye2)
        ops.append(op)
    h1 = build_single_hamiltonian(cfg)
    full = np.zeros((dim, dim), dtype=complex)
    for n in range(n_atoms):
        for m in range(n_atoms):
            full += h1[n, m] * (ops[n].conj().T @ ops[m])
    chi = cfg.chi
    for n in range(n_atoms - 1):
        if chi[n]:
            occ_n = ops[n].conj().T @ ops[n]
            occ_next = ops[n + 1].conj().T @ ops[n + 1]
            full += chi[n] * (occ_n @ occ_next)
    vacuum = np.zeros(dim, dtype=complex)
    vacuum[0] = 1.0
    states = np.empty((dim, basis.dimension), dtype=complex)
    for k in range(basis.dimension):
        p, q = basis.pair(k)
        states[:, k] = ops[p].conj().T @ (ops[q].conj().T @ vacuum)
    return states.conj().T @ full @ states


def check_complex_symmetric(mat: np.ndarray, rtol: float = 1e-12) -> bool:
    """True when ``mat`` equals its plain (unconjugated) transpose."""
    mat = np.asarray(mat)
    scale = np.linalg.norm(mat)
    if scale == 0:
        return True
    return np.linalg.norm(mat - mat.T) <= rtol * scale

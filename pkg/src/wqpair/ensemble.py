"""Seeded disorder ensembles and size sweeps.

Disorder enters as independent nearest-neighbour shifts chi_n with zero
mean and dispersion chi^2.  Every realization derives its random stream
from (master_seed, strength_index, realization_index), so sweeps are
reproducible realization by realization regardless of execution order or
worker count.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import __version__
from .analytics import scaling_row, ScalingRow
from .errors import ConfigurationError
from .lattice import ArrayConfig, PairBasis, build_pair_hamiltonian, build_single_hamiltonian
from .matrixio import file_digest
from .observables import spectrum_records
from .spectral import DEFAULT_DIM_CAP, check_dimension, eig_dense

DISTRIBUTIONS = ("uniform", "gaussian")


def realization_seed(master_seed: int, strength_index: int, realization: int) -> np.random.SeedSequence:
    """Independent, documented seed stream for one ensemble member."""
    return np.random.SeedSequence([int(master_seed), int(strength_index), int(realization)])


def draw_disorder(strength: float, n: int, seed, distribution: str = "uniform") -> np.ndarray:
    """Draw n interaction shifts with zero mean and dispersion strength^2.

    The default is uniform on [-sqrt(3) chi, +sqrt(3) chi], which is
    bounded and has exactly the requested dispersion; a gaussian variant
    sits behind the distribution flag.
    """
    if strength < 0 or not np.isfinite(strength):
        raise ConfigurationError(f"disorder strength must be finite and >= 0, got {strength}")
    if n < 1:
        raise ConfigurationError(f"need at least one sample, got n={n}")
    if distribution not in DISTRIBUTIONS:
        raise ConfigurationError(
            f"unknown distribution {distribution!r}; choose from {DISTRIBUTIONS}"
        )
    rng = np.random.default_rng(seed)
    if distribution == "uniform":
        half = np.sqrt(3.0) * strength
        return rng.uniform(-half, half, n)
    return rng.normal(0.0, strength, n)


def pair_distance_profile(
    vectors: np.ndarray, first: np.ndarray, second: np.ndarray, n_atoms: int
) -> tuple[np.ndarray, np.ndarray]:
    """Photon distance and center-of-mass IPR for every pair-basis column.

    Vectorized companion of the per-state observables; one call covers all
    D states of a realization.  Returns (rho, ipr) arrays over columns.
    """
    weight = np.abs(vectors) ** 2
    norms = weight.sum(axis=0)
    if np.any(norms == 0):
        raise ConfigurationError("zero eigenvector column")
    sep = (second - first).astype(float)
    rho = (sep @ weight) / norms
    com = first + second
    onehot = (com[None, :] == np.arange(2 * n_atoms - 1)[:, None]).astype(float)
    masses = (onehot @ weight) / norms
    ipr = (masses**2).sum(axis=0)
    return rho, ipr


@dataclass(frozen=True)
class SweepRow:
    """Sorted distance profile of one disorder realization."""

    strength: float
    strength_index: int
    realization: int
    seed_key: str
    sorted_rho: np.ndarray
    sorted_ipr: np.ndarray


@dataclass(frozen=True)
class FailedRealization:
    strength: float
    strength_index: int
    realization: int
    message: str


def _run_realization(args) -> SweepRow:
    n_atoms, phase, strength, si, ri, master_seed, distribution, max_dim = args
    seq = realization_seed(master_seed, si, ri)
    chi = draw_disorder(strength, n_atoms - 1, seq, distribution)
    cfg = ArrayConfig(n_atoms, phase, tuple(chi))
    basis = PairBasis.for_atoms(n_atoms)
    check_dimension(basis.dimension, max_dim)
    dec = eig_dense(build_pair_hamiltonian(cfg, basis), max_dim)
    rho, ipr = pair_distance_profile(dec.vectors, basis.first, basis.second, n_atoms)
    order = np.argsort(rho, kind="stable")
    return SweepRow(
        strength=float(strength),
        strength_index=si,
        realization=ri,
        seed_key=f"{master_seed}-{si}-{ri}",
        sorted_rho=rho[order],
        sorted_ipr=ipr[order],
    )


@dataclass(frozen=True)
class DisorderSweepResult:
    base: ArrayConfig
    strengths: tuple[float, ...]
    realizations: int
    master_seed: int
    distribution: str
    rows: tuple[SweepRow, ...]
    failures: tuple[FailedRealization, ...]

    @property
    def dimension(self) -> int:
        n = self.base.n_atoms
        return n * (n - 1) // 2

    def rows_at(self, strength_index: int) -> list[SweepRow]:
        return [r for r in self.rows if r.strength_index == strength_index]

    def summary(self) -> list[dict]:
        """Decile statistics per strength: distant states vs bound pairs.

        States are sorted by rho, so the top decile holds the most distant
        states and the bottom decile the tightest bound pairs.
        """
        decile = max(1, self.dimension // 10)
        out = []
        for si, strength in enumerate(self.strengths):
            rows = self.rows_at(si)
            entry = {
                "strength": float(strength),
                "n_ok": len(rows),
                "n_failed": sum(1 for f in self.failures if f.strength_index == si),
            }
            if rows:
                entry["mean_rho_top_decile"] = float(
                    np.mean([r.sorted_rho[-decile:].mean() for r in rows])
                )
                entry["mean_rho_bottom_decile"] = float(
                    np.mean([r.sorted_rho[:decile].mean() for r in rows])
                )
                entry["mean_ipr_top_decile"] = float(
                    np.mean([r.sorted_ipr[-decile:].mean() for r in rows])
                )
                entry["mean_ipr_bottom_decile"] = float(
                    np.mean([r.sorted_ipr[:decile].mean() for r in rows])
                )
            out.append(entry)
        return out

    def map_table(self) -> tuple[list[str], list[list]]:
        """One row per realization: parameters, seed, then the sorted rho vector."""
        header = ["strength", "strength_index", "realization", "seed"]
        header += [f"rho_{k}" for k in range(self.dimension)]
        body = [
            [r.strength, r.strength_index, r.realization, r.seed_key, *r.sorted_rho]
            for r in self.rows
        ]
        return header, body

    def summary_table(self) -> tuple[list[str], list[list]]:
        header = [
            "strength", "n_ok", "n_failed",
            "mean_rho_top_decile", "mean_rho_bottom_decile",
            "mean_ipr_top_decile", "mean_ipr_bottom_decile",
        ]
        body = []
        for entry in self.summary():
            body.append([entry.get(k, "") for k in header])
        return header, body


def disorder_sweep(
    base: ArrayConfig,
    strengths,
    realizations: int,
    master_seed: int,
    distribution: str = "uniform",
    workers: int = 1,
    max_dim: int = DEFAULT_DIM_CAP,
) -> DisorderSweepResult:
    """Run the two-excitation pipeline over a grid of disorder strengths.

    Realizations are independent work units; failures are recorded and
    skipped rather than aborting the sweep.  The chi = 0 profile is
    computed once and shared, which keeps the clean rows bit-identical to
    the clean pipeline by construction.
    """
    strengths = tuple(float(s) for s in strengths)
    if not strengths:
        raise ConfigurationError("need at least one disorder strength")
    if any(b < a for a, b in zip(strengths, strengths[1:])):
        raise ConfigurationError(f"strengths must be sorted ascending, got {strengths}")
    if any(s < 0 for s in strengths):
        raise ConfigurationError("disorder strengths must be >= 0")
    if realizations < 1:
        raise ConfigurationError(f"need at least one realization, got {realizations}")
    if int(master_seed) != master_seed or master_seed < 0:
        raise ConfigurationError(f"master seed must be a non-negative integer, got {master_seed}")
    if not base.is_clean:
        raise ConfigurationError("sweep base config must be clean; disorder is drawn per realization")
    if distribution not in DISTRIBUTIONS:
        raise ConfigurationError(
            f"unknown distribution {distribution!r}; choose from {DISTRIBUTIONS}"
        )
    tasks = []
    for si, strength in enumerate(strengths):
        for ri in range(realizations):
            tasks.append(
                (base.n_atoms, base.phase, strength, si, ri, int(master_seed), distribution, max_dim)
            )
    rows: dict[tuple[int, int], SweepRow] = {}
    failures: list[FailedRealization] = []
    clean_profile: tuple[np.ndarray, np.ndarray] | None = None

    def record(task, row=None, error=None):
        _, _, strength, si, ri, _, _, _ = task
        if row is not None:
            rows[(si, ri)] = row
        else:
            failures.append(FailedRealization(float(strength), si, ri, str(error)))

    clean_tasks = [t for t in tasks if t[2] == 0.0]
    other_tasks = [t for t in tasks if t[2] != 0.0]
    if clean_tasks:
        try:
            template = _run_realization(clean_tasks[0])
            clean_profile = (template.sorted_rho, template.sorted_ipr)
        except Exception as exc:  # noqa: BLE001 - recorded, not swallowed
            for t in clean_tasks:
                record(t, error=exc)
            clean_tasks = []
        for t in clean_tasks:
            _, _, strength, si, ri, seed, _, _ = t
            record(
                t,
                row=SweepRow(
                    strength=0.0,
                    strength_index=si,
                    realization=ri,
                    seed_key=f"{seed}-{si}-{ri}",
                    sorted_rho=clean_profile[0],
                    sorted_ipr=clean_profile[1],
                ),
            )
    if workers > 1 and other_tasks:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {pool.submit(_run_realization, t): t for t in other_tasks}
            for fut, task in futures.items():
                try:
                    record(task, row=fut.result())
                except Exception as exc:  # noqa: BLE001
                    record(task, error=exc)
    else:
        for task in other_tasks:
            try:
                record(task, row=_run_realization(task))
            except Exception as exc:  # noqa: BLE001
                record(task, error=exc)
    ordered = tuple(rows[key] for key in sorted(rows))
    return DisorderSweepResult(
        base=base,
        strengths=strengths,
        realizations=realizations,
        master_seed=int(master_seed),
        distribution=distribution,
        rows=ordered,
        failures=tuple(failures),
    )


@dataclass(frozen=True)
class SizeSweepResult:
    phi: float
    n_list: tuple[int, ...]
    scaling_rows: tuple[ScalingRow, ...]
    single_profiles: dict
    records: dict


def size_sweep(n_list, phi: float, tasks=("single",), max_dim: int = DEFAULT_DIM_CAP) -> SizeSweepResult:
    """Single- and/or two-excitation computations over a list of sizes.

    The ``single`` task produces the superradiance scaling table and the
    brightest-state wavefunction per size; ``two`` produces the spectrum
    records of the pair sector.  An empty task list yields an empty result
    shell (useful to emit a manifest alone).
    """
    n_list = tuple(int(n) for n in n_list)
    if any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise ConfigurationError(f"sizes must be strictly ascending, got {n_list}")
    unknown = set(tasks) - {"single", "two"}
    if unknown:
        raise ConfigurationError(f"unknown sweep tasks {sorted(unknown)}")
    scaling_rows: list[ScalingRow] = []
    profiles: dict[int, np.ndarray] = {}
    records: dict[int, list] = {}
    for n_atoms in n_list:
        if "single" in tasks:
            dec = eig_dense(build_single_hamiltonian(ArrayConfig(n_atoms, phi)), max_dim)
            scaling_rows.append(scaling_row(dec, n_atoms, phi))
            profiles[n_atoms] = dec.vectors[:, 0].copy()
        if "two" in tasks:
            basis = PairBasis.for_atoms(n_atoms)
            check_dimension(basis.dimension, max_dim)
            cfg = ArrayConfig(n_atoms, phi)
            dec = eig_dense(build_pair_hamiltonian(cfg, basis), max_dim)
            records[n_atoms] = spectrum_records(
                dec.values, dec.vectors, n_atoms, basis.first, basis.second,
                source={"n_atoms": n_atoms, "phase": phi},
            )
    return SizeSweepResult(
        phi=float(phi),
        n_list=n_list,
        scaling_rows=tuple(scaling_rows),
        single_profiles=profiles,
        records=records,
    )


def build_manifest(command: str, config: dict, out_dir, data_files, figure_files=()) -> dict:
    """Reproducibility manifest: resolved parameters plus an output inventory.

    Data files carry content digests; figures are listed without digests
    because rasterization is not bit-stable across library versions and
    must not break the rerun-equivalence guarantee of the data.
    """
    from pathlib import Path

    out_dir = Path(out_dir)
    inventory = [
        {"path": name, "sha256": file_digest(out_dir / name)} for name in data_files
    ]
    inventory += [{"path": name, "sha256": None} for name in figure_files]
    return {
        "command": command,
        "version": __version__,
        "config": config,
        "inventory": inventory,
    }

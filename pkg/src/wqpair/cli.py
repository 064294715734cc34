"""Command-line interface wiring the build, diagonalize, and analyze pipelines.

Four subcommands cover the library: ``spectrum`` (complex eigenvalues with
per-state metrics and the distance histogram), ``wavefunction`` (probability
map, symmetric decomposition, truncation, and Fourier map of one selected
state), ``scaling`` (superradiance and edge-to-center laws over a list of
sizes), and ``disorder`` (ensemble sweep over disorder strengths).

Every run writes into one output directory with fixed filenames: the
delimited data, rendered PNG figures, the fully resolved ``config.json``,
and a ``manifest.json`` with content digests of the data files.  Rerunning
a command from a previous run's config file reproduces every data file byte
for byte, so ``config.json`` holds all parameters except the output
directory itself (given on the command line, reflected only by file
location).  Flags override config-file values; unknown config keys are
rejected.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__, plots
from .analytics import scaling_table
from .ensemble import DEFAULT_DIM_CAP, build_manifest, disorder_sweep, size_sweep
from .errors import ConfigurationError, DimensionCapError, PoleError
from .lattice import ArrayConfig, PairBasis, build_pair_hamiltonian, build_single_hamiltonian
from .matrixio import dump_json, load_json, save_matrix_csv, save_real_grid_csv, write_table
from .observables import (
    TwoExcitationState,
    distance_histogram,
    histogram_table,
    parity_of,
    records_table,
    spectrum_records,
)
from .spectral import (
    check_dimension,
    decompose_symmetric,
    eig_dense,
    fourier2d,
    fourier_grid,
    truncate_decomposition,
)

log = logging.getLogger(__name__)

N_LEADING_VECTORS = 4

DEFAULTS: dict[str, dict] = {
    "spectrum": {
        "atoms": 100, "phase": 1.0, "sector": "two", "bins": 60,
        "max_dim": DEFAULT_DIM_CAP,
    },
    "wavefunction": {
        "atoms": 40, "phase": 1.0, "selector": "most-distant", "truncate": 4,
        "max_dim": DEFAULT_DIM_CAP,
    },
    "scaling": {
        "atoms": [40, 80, 160], "phase": 1.0, "max_dim": DEFAULT_DIM_CAP,
    },
    "disorder": {
        "atoms": 40, "phase": 1.0, "strengths": [0.0, 1.0, 2.0, 5.0],
        "realizations": 10, "seed": 0, "distribution": "uniform",
        "workers": 1, "max_fail_fraction": 0.1, "max_dim": DEFAULT_DIM_CAP,
    },
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wqpair",
        description="Exact diagonalization of one and two excitations in a "
        "waveguide-coupled atom array.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--phase", type=float, help="hop phase phi in radians")
        p.add_argument("--out", required=True, help="output directory (created if missing)")
        p.add_argument("--config", help="JSON config from a previous run; flags override it")
        p.add_argument("--max-dim", type=int, dest="max_dim",
                       help="refuse dense eigensolves above this dimension")

    p = sub.add_parser("spectrum", help="eigenvalue spectrum with per-state metrics")
    p.add_argument("--atoms", type=int, help="number of atoms N")
    p.add_argument("--sector", choices=("one", "two"), help="excitation number sector")
    p.add_argument("--bins", type=int, help="bins of the photon-distance histogram")
    common(p)

    p = sub.add_parser("wavefunction", help="probability map and decomposition of one state")
    p.add_argument("selector", nargs="?",
                   help="most-distant | brightest | integer state index")
    p.add_argument("--atoms", type=int, help="number of atoms N")
    p.add_argument("--truncate", type=int, help="terms kept in the truncated decomposition")
    common(p)

    p = sub.add_parser("scaling", help="superradiance and edge-to-center scaling over sizes")
    p.add_argument("--atoms", help="comma-separated ascending sizes, e.g. 40,80,160")
    common(p)

    p = sub.add_parser("disorder", help="two-excitation sweep over disorder strengths")
    p.add_argument("--atoms", type=int, help="number of atoms N")
    p.add_argument("--strengths", help="comma-separated disorder strengths chi")
    p.add_argument("--realizations", type=int, help="realizations per strength")
    p.add_argument("--seed", type=int, help="master seed of the splitting scheme")
    p.add_argument("--distribution", choices=("uniform", "gaussian"),
                   help="disorder distribution (default uniform)")
    p.add_argument("--workers", type=int, help="parallel worker processes")
    common(p)
    return parser


def _int_list(value) -> list[int]:
    if isinstance(value, str):
        value = [p for p in value.split(",") if p.strip()]
    return [int(v) for v in value]


def _float_list(value) -> list[float]:
    if isinstance(value, str):
        value = [p for p in value.split(",") if p.strip()]
    return [float(v) for v in value]


def resolve_config(command: str, ns: argparse.Namespace) -> dict:
    """Merge defaults, config-file values, and explicit flags (in that order)."""
    resolved = dict(DEFAULTS[command])
    if ns.config is not None:
        loaded = load_json(ns.config)
        if not isinstance(loaded, dict):
            raise ConfigurationError(f"config file {ns.config} must hold a JSON object")
        recorded = loaded.pop("command", command)
        if recorded != command:
            raise ConfigurationError(
                f"config file {ns.config} was written by '{recorded}', not '{command}'"
            )
        unknown = sorted(set(loaded) - set(resolved))
        if unknown:
            raise ConfigurationError(
                f"unknown config keys {unknown}; this command accepts {sorted(resolved)} "
                "(the output directory is command-line only)"
            )
        resolved.update(loaded)
    for key in resolved:
        value = getattr(ns, key, None)
        if value is not None:
            resolved[key] = value
    if command == "scaling":
        resolved["atoms"] = _int_list(resolved["atoms"])
    if command == "disorder":
        resolved["strengths"] = _float_list(resolved["strengths"])
    if command == "wavefunction":
        sel = resolved["selector"]
        if isinstance(sel, str) and sel not in ("most-distant", "brightest"):
            try:
                sel = int(sel)
            except ValueError:
                raise ConfigurationError(
                    f"selector must be 'most-distant', 'brightest', or an integer, got {sel!r}"
                ) from None
        resolved["selector"] = sel
    return resolved


def _single_spectrum_rows(dec, n_atoms: int) -> list[list]:
    rows = []
    for k in range(dec.dimension):
        label, score = parity_of(dec.vectors[:, k], n_atoms)
        rows.append([k, float(dec.values[k].real), float(dec.values[k].imag), label, score])
    return rows


def cmd_spectrum(cfg: dict, out: Path):
    n, phi = cfg["atoms"], cfg["phase"]
    array = ArrayConfig(n_atoms=n, phase=phi)
    data: list[str] = []
    figs: list[str] = []
    if cfg["sector"] == "one":
        dec = eig_dense(build_single_hamiltonian(array), max_dim=cfg["max_dim"])
        write_table(out / "spectrum.csv",
                    ["index", "re_eps", "im_eps", "parity", "parity_score"],
                    _single_spectrum_rows(dec, n))
        data.append("spectrum.csv")
        figs.append(plots.plot_spectrum(dec.values, None, out / "spectrum.png").name)
        return data, figs, 0
    basis = PairBasis.for_atoms(n)
    check_dimension(basis.dimension, cfg["max_dim"])
    dec = eig_dense(build_pair_hamiltonian(array, basis), max_dim=cfg["max_dim"])
    records = spectrum_records(dec.values, dec.vectors, n, basis.first, basis.second)
    write_table(out / "spectrum.csv", *records_table(records))
    single = eig_dense(build_single_hamiltonian(array), max_dim=cfg["max_dim"])
    write_table(out / "single.csv", ["index", "re_eps", "im_eps"],
                [[k, float(v.real), float(v.imag)] for k, v in enumerate(single.values)])
    rhos = np.array([r.rho for r in records])
    counts, edges = distance_histogram(rhos, n, bins=cfg["bins"])
    write_table(out / "histogram.csv", *histogram_table(counts, edges))
    data += ["spectrum.csv", "single.csv", "histogram.csv"]
    energies = np.array([r.energy for r in records])
    figs.append(
        plots.plot_spectrum(energies, rhos, out / "spectrum.png",
                            single_energies=single.values).name
    )
    figs.append(plots.plot_histogram(counts, edges, out / "histogram.png").name)
    n_distant = sum(1 for r in records if r.label == "distant-bound")
    log.info("spectrum: %d pair states, %d labeled distant-bound", len(records), n_distant)
    return data, figs, 0


def _select_pair_state(cfg: dict, records) -> int:
    sel = cfg["selector"]
    if sel == "most-distant":
        return int(np.argmax([r.rho for r in records]))
    if not 0 <= sel < len(records):
        raise ConfigurationError(
            f"state index {sel} out of range [0, {len(records) - 1}]"
        )
    return int(sel)


def cmd_wavefunction(cfg: dict, out: Path):
    n, phi = cfg["atoms"], cfg["phase"]
    array = ArrayConfig(n_atoms=n, phase=phi)
    data: list[str] = []
    figs: list[str] = []
    if cfg["selector"] == "brightest":
        dec = eig_dense(build_single_hamiltonian(array), max_dim=cfg["max_dim"])
        vec = dec.vectors[:, dec.brightest_index]
        prob = np.abs(vec) ** 2
        parity, score = parity_of(vec, n)
        write_table(out / "psi2.csv",
                    ["site", "re_psi", "im_psi", "prob"],
                    [[s + 1, float(vec[s].real), float(vec[s].imag), float(prob[s])]
                     for s in range(n)])
        dump_json(
            {
                "sector": "one", "selector": "brightest", "atoms": n, "phase": phi,
                "index": int(dec.brightest_index),
                "re_eps": float(dec.values[dec.brightest_index].real),
                "im_eps": float(dec.values[dec.brightest_index].imag),
                "parity": parity, "parity_score": float(score),
            },
            out / "meta.json",
        )
        data += ["psi2.csv", "meta.json"]
        figs.append(plots.plot_profile(prob, out / "psi2.png").name)
        return data, figs, 0

    basis = PairBasis.for_atoms(n)
    check_dimension(basis.dimension, cfg["max_dim"])
    dec = eig_dense(build_pair_hamiltonian(array, basis), max_dim=cfg["max_dim"])
    records = spectrum_records(dec.values, dec.vectors, n, basis.first, basis.second)
    k = _select_pair_state(cfg, records)
    rec = records[k]
    state = TwoExcitationState.from_pair_vector(
        dec.vectors[:, k], n, basis.first, basis.second, dec.values[k]
    )
    sites = np.arange(1, n + 1, dtype=float)
    save_real_grid_csv(np.abs(state.amplitudes) ** 2, sites, out / "psi2.csv")
    dump_json(
        {
            "sector": "two", "selector": str(cfg["selector"]), "atoms": n, "phase": phi,
            "index": rec.index,
            "re_eps": float(rec.energy.real), "im_eps": float(rec.energy.imag),
            "rho": float(rec.rho), "parity": rec.parity,
            "parity_score": float(rec.parity_score),
            "edge_mass": float(rec.edge_mass), "label": rec.label,
        },
        out / "meta.json",
    )
    data += ["psi2.csv", "meta.json"]
    figs.append(plots.plot_wavefunction(np.abs(state.amplitudes) ** 2, out / "psi2.png").name)
    if cfg["selector"] == "most-distant":
        sym = decompose_symmetric(state.amplitudes)
        dump_json(sym.summary(), out / "svd.json")
        lead = sym.vectors[:, :N_LEADING_VECTORS]
        save_matrix_csv(lead, out / "svd_vectors_re.csv", out / "svd_vectors_im.csv")
        k_trunc = int(cfg["truncate"])
        approx = truncate_decomposition(sym, k_trunc)
        save_real_grid_csv(np.abs(approx) ** 2, sites, out / "psi2_trunc.csv")
        power = np.abs(fourier2d(state.amplitudes)) ** 2
        kgrid = fourier_grid(n)
        save_real_grid_csv(power, kgrid, out / "fourier.csv")
        data += ["svd.json", "svd_vectors_re.csv", "svd_vectors_im.csv",
                 "psi2_trunc.csv", "fourier.csv"]
        figs.append(plots.plot_decomposition(sym.lambdas, sym.parity, out / "svd.png").name)
        figs.append(plots.plot_wavefunction(np.abs(approx) ** 2, out / "psi2_trunc.png").name)
        figs.append(plots.plot_fourier(power, kgrid, out / "fourier.png").name)
        err = np.linalg.norm(approx - state.amplitudes)
        log.info("wavefunction: state %d (%s), %d-term truncation error %.3f",
                 k, rec.label, k_trunc, err)
    return data, figs, 0


def cmd_scaling(cfg: dict, out: Path):
    result = size_sweep(cfg["atoms"], cfg["phase"], tasks=("single",), max_dim=cfg["max_dim"])
    write_table(out / "scaling.csv", *scaling_table(result.scaling_rows))
    data = ["scaling.csv"]
    figs = [plots.plot_scaling(result.scaling_rows, out / "scaling.png").name]
    for n_atoms in result.n_list:
        vec = result.single_profiles[n_atoms]
        prob = np.abs(vec) ** 2
        name = f"profile_{n_atoms}.csv"
        write_table(out / name,
                    ["site", "re_psi", "im_psi", "prob"],
                    [[s + 1, float(vec[s].real), float(vec[s].imag), float(prob[s])]
                     for s in range(n_atoms)])
        data.append(name)
        figs.append(plots.plot_profile(prob, out / f"profile_{n_atoms}.png").name)
    return data, figs, 0


def cmd_disorder(cfg: dict, out: Path):
    base = ArrayConfig(n_atoms=cfg["atoms"], phase=cfg["phase"])
    result = disorder_sweep(
        base,
        strengths=cfg["strengths"],
        realizations=cfg["realizations"],
        master_seed=cfg["seed"],
        distribution=cfg["distribution"],
        workers=cfg["workers"],
        max_dim=cfg["max_dim"],
    )
    write_table(out / "map.csv", *result.map_table())
    write_table(out / "summary.csv", *result.summary_table())
    data = ["map.csv", "summary.csv"]
    figs = [plots.plot_disorder_map(result, out / "map.png").name]
    total = len(result.strengths) * result.realizations
    failed = len(result.failures)
    for f in result.failures:
        log.warning("realization chi=%g #%d failed: %s", f.strength, f.realization, f.message)
    if failed and failed / total > cfg["max_fail_fraction"]:
        log.error("%d of %d realizations failed (> %.0f%% allowed)",
                  failed, total, 100 * cfg["max_fail_fraction"])
        return data, figs, 1
    return data, figs, 0


COMMANDS = {
    "spectrum": cmd_spectrum,
    "wavefunction": cmd_wavefunction,
    "scaling": cmd_scaling,
    "disorder": cmd_disorder,
}


def main(argv=None) -> int:
    """Entry point; returns the process exit code."""
    parser = build_parser()
    ns = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO, stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        cfg = resolve_config(ns.command, ns)
        out = Path(ns.out)
        out.mkdir(parents=True, exist_ok=True)
        dump_json({"command": ns.command, **cfg}, out / "config.json")
        data, figs, code = COMMANDS[ns.command](cfg, out)
        manifest = build_manifest(ns.command, cfg, out, data, figs)
        dump_json(manifest, out / "manifest.json")
        log.info("wrote %d data files and %d figures to %s", len(data), len(figs), out)
        return code
    except (ConfigurationError, PoleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DimensionCapError as exc:
        print(f"error: {exc}\nRaise --max-dim to proceed anyway.", file=sys.stderr)
        return 2


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()

"""Command-line interface: config resolution, outputs, manifests, exit codes."""

import subprocess
import sys

import numpy as np
import pytest

from wqpair.cli import DEFAULTS, build_parser, main, resolve_config
from wqpair.errors import ConfigurationError
from wqpair.lattice import ArrayConfig, PairBasis, build_pair_hamiltonian
from wqpair.matrixio import (
    dump_json,
    file_digest,
    load_json,
    load_real_grid_csv,
    read_table,
)
from wqpair.spectral import eig_dense


def parse(args):
    return build_parser().parse_args(args)


class TestConfigResolution:
    def test_defaults_apply(self):
        ns = parse(["spectrum", "--out", "x"])
        cfg = resolve_config("spectrum", ns)
        assert cfg == DEFAULTS["spectrum"]

    def test_flags_override_defaults(self):
        ns = parse(["spectrum", "--atoms", "12", "--sector", "one", "--out", "x"])
        cfg = resolve_config("spectrum", ns)
        assert cfg["atoms"] == 12 and cfg["sector"] == "one"
        assert cfg["bins"] == DEFAULTS["spectrum"]["bins"]

    def test_config_file_applies_and_flags_win(self, tmp_path):
        path = tmp_path / "c.json"
        dump_json({"command": "spectrum", "atoms": 9, "bins": 5}, path)
        ns = parse(["spectrum", "--config", str(path), "--bins", "7", "--out", "x"])
        cfg = resolve_config("spectrum", ns)
        assert cfg["atoms"] == 9
        assert cfg["bins"] == 7

    def test_unknown_config_key_rejected(self, tmp_path):
        path = tmp_path / "c.json"
        dump_json({"atoms": 9, "bogus": 1}, path)
        ns = parse(["spectrum", "--config", str(path), "--out", "x"])
        with pytest.raises(ConfigurationError, match="bogus"):
            resolve_config("spectrum", ns)

    def test_command_mismatch_rejected(self, tmp_path):
        path = tmp_path / "c.json"
        dump_json({"command": "disorder"}, path)
        ns = parse(["spectrum", "--config", str(path), "--out", "x"])
        with pytest.raises(ConfigurationError, match="disorder"):
            resolve_config("spectrum", ns)

    def test_non_object_config_rejected(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text("[1, 2]\n")
        ns = parse(["spectrum", "--config", str(path), "--out", "x"])
        with pytest.raises(ConfigurationError):
            resolve_config("spectrum", ns)

    def test_selector_normalization(self):
        ns = parse(["wavefunction", "5", "--out", "x"])
        assert resolve_config("wavefunction", ns)["selector"] == 5
        ns = parse(["wavefunction", "brightest", "--out", "x"])
        assert resolve_config("wavefunction", ns)["selector"] == "brightest"
        ns = parse(["wavefunction", "sideways", "--out", "x"])
        with pytest.raises(ConfigurationError):
            resolve_config("wavefunction", ns)

    def test_list_flags_parsed(self):
        ns = parse(["scaling", "--atoms", "16,32", "--out", "x"])
        assert resolve_config("scaling", ns)["atoms"] == [16, 32]
        ns = parse(["disorder", "--strengths", "0,1.5", "--out", "x"])
        assert resolve_config("disorder", ns)["strengths"] == [0.0, 1.5]


class TestSpectrumCommand:
    def test_two_sector_outputs(self, tmp_path):
        out = tmp_path / "run"
        code = main(["spectrum", "--atoms", "6", "--out", str(out)])
        assert code == 0
        for name in ("spectrum.csv", "single.csv", "histogram.csv",
                     "config.json", "manifest.json", "spectrum.png", "histogram.png"):
            assert (out / name).exists()
        header, rows = read_table(out / "spectrum.csv")
        assert len(rows) == 15
        # energies in the file equal the direct eigensolve exactly (17g round trip)
        basis = PairBasis.for_atoms(6)
        dec = eig_dense(build_pair_hamiltonian(ArrayConfig(6, 1.0), basis))
        assert float(rows[0][1]) == dec.values[0].real / 2
        assert float(rows[0][2]) == dec.values[0].imag / 2

    def test_manifest_digests_verify(self, tmp_path):
        out = tmp_path / "run"
        assert main(["spectrum", "--atoms", "5", "--out", str(out)]) == 0
        manifest = load_json(out / "manifest.json")
        assert manifest["command"] == "spectrum"
        for entry in manifest["inventory"]:
            if entry["sha256"] is not None:
                assert file_digest(out / entry["path"]) == entry["sha256"]
            else:
                assert entry["path"].endswith(".png")

    def test_one_sector_outputs(self, tmp_path):
        out = tmp_path / "run"
        assert main(["spectrum", "--atoms", "8", "--sector", "one", "--out", str(out)]) == 0
        header, rows = read_table(out / "spectrum.csv")
        assert header == ["index", "re_eps", "im_eps", "parity", "parity_score"]
        assert len(rows) == 8
        assert not (out / "histogram.csv").exists()

    def test_dimension_cap_exit_code(self, tmp_path, capsys):
        code = main(["spectrum", "--atoms", "300", "--out", str(tmp_path / "x")])
        assert code == 2
        err = capsys.readouterr().err
        assert "exceeds the cap" in err and "--max-dim" in err


class TestWavefunctionCommand:
    def test_most_distant_outputs(self, tmp_path):
        out = tmp_path / "run"
        assert main(["wavefunction", "most-distant", "--atoms", "10",
                     "--truncate", "3", "--out", str(out)]) == 0
        meta = load_json(out / "meta.json")
        assert meta["sector"] == "two"
        values, axis = load_real_grid_csv(out / "psi2.csv")
        assert values.shape == (10, 10)
        assert np.array_equal(axis, np.arange(1, 11, dtype=float))
        assert values.sum() == pytest.approx(1.0, abs=1e-12)
        svd = load_json(out / "svd.json")
        assert svd["n_terms"] == 10  # decomposition of the 10 x 10 amplitude matrix
        trunc, _ = load_real_grid_csv(out / "psi2_trunc.csv")
        assert trunc.sum() == pytest.approx(1.0, abs=1e-12)
        power, kaxis = load_real_grid_csv(out / "fourier.csv")
        assert power.shape == (10, 10) and kaxis[0] == -np.pi
        for name in ("psi2.png", "svd.png", "psi2_trunc.png", "fourier.png"):
            assert (out / name).exists()

    def test_most_distant_state_is_argmax_rho(self, tmp_path):
        out = tmp_path / "run"
        assert main(["wavefunction", "most-distant", "--atoms", "8", "--out", str(out)]) == 0
        meta = load_json(out / "meta.json")
        spectrum_dir = tmp_path / "spectrum"
        assert main(["spectrum", "--atoms", "8", "--out", str(spectrum_dir)]) == 0
        _, rows = read_table(spectrum_dir / "spectrum.csv")
        rhos = [float(r[3]) for r in rows]
        assert meta["index"] == int(np.argmax(rhos))
        assert meta["rho"] == pytest.approx(max(rhos))

    def test_index_selector_matches_direct_eigensolve(self, tmp_path):
        out = tmp_path / "run"
        assert main(["wavefunction", "0", "--atoms", "3", "--out", str(out)]) == 0
        values, _ = load_real_grid_csv(out / "psi2.csv")
        basis = PairBasis.for_atoms(3)
        dec = eig_dense(build_pair_hamiltonian(ArrayConfig(3, 1.0), basis))
        psi = np.zeros((3, 3), dtype=complex)
        psi[basis.first, basis.second] = dec.vectors[:, 0]
        psi += psi.T
        psi /= np.linalg.norm(psi)
        assert np.max(np.abs(values - np.abs(psi) ** 2)) < 1e-15
        assert not (out / "svd.json").exists()  # decomposition is opt-in via most-distant

    def test_brightest_single_sector(self, tmp_path):
        out = tmp_path / "run"
        assert main(["wavefunction", "brightest", "--atoms", "16", "--out", str(out)]) == 0
        meta = load_json(out / "meta.json")
        assert meta["sector"] == "one"
        header, rows = read_table(out / "psi2.csv")
        assert header == ["site", "re_psi", "im_psi", "prob"]
        probs = np.array([float(r[3]) for r in rows])
        assert probs.sum() == pytest.approx(1.0, abs=1e-12)
        # the brightest mode piles up at the array edges
        assert probs[0] > probs[7] and probs[-1] > probs[7]

    def test_index_out_of_range(self, tmp_path, capsys):
        code = main(["wavefunction", "99", "--atoms", "3", "--out", str(tmp_path / "x")])
        assert code == 2
        assert "out of range" in capsys.readouterr().err


class TestScalingCommand:
    def test_outputs_and_columns(self, tmp_path):
        out = tmp_path / "run"
        assert main(["scaling", "--atoms", "16,32,64", "--out", str(out)]) == 0
        header, rows = read_table(out / "scaling.csv")
        assert header == ["N", "minus_im_eps_numeric", "eq8", "eq9", "q", "qN", "fp_decay_check"]
        assert [int(r[0]) for r in rows] == [16, 32, 64]
        for n in (16, 32, 64):
            assert (out / f"profile_{n}.csv").exists()
            assert (out / f"profile_{n}.png").exists()
        # numeric decay within 10% of the Lambert-W prediction at N >= 50
        last = rows[-1]
        assert abs(float(last[1]) - float(last[2])) / float(last[1]) < 0.10


class TestDisorderCommand:
    def test_single_clean_row_equals_clean_profile(self, tmp_path):
        out = tmp_path / "run"
        assert main(["disorder", "--atoms", "8", "--strengths", "0",
                     "--realizations", "1", "--out", str(out)]) == 0
        _, rows = read_table(out / "map.csv")
        assert len(rows) == 1
        got = np.array([float(x) for x in rows[0][4:]])
        from wqpair.ensemble import pair_distance_profile

        basis = PairBasis.for_atoms(8)
        dec = eig_dense(build_pair_hamiltonian(ArrayConfig(8, 1.0), basis))
        rho, _ = pair_distance_profile(dec.vectors, basis.first, basis.second, 8)
        assert np.array_equal(got, np.sort(rho))

    def test_summary_has_decile_columns(self, tmp_path):
        out = tmp_path / "run"
        assert main(["disorder", "--atoms", "8", "--strengths", "0,2",
                     "--realizations", "2", "--seed", "4", "--out", str(out)]) == 0
        header, rows = read_table(out / "summary.csv")
        assert "mean_rho_top_decile" in header
        assert len(rows) == 2

    def test_gaussian_flag_recorded(self, tmp_path):
        out = tmp_path / "run"
        assert main(["disorder", "--atoms", "6", "--strengths", "0,1",
                     "--realizations", "1", "--distribution", "gaussian",
                     "--out", str(out)]) == 0
        assert load_json(out / "config.json")["distribution"] == "gaussian"


class TestEntryPoint:
    def test_module_invocation(self, tmp_path):
        result = subprocess.run(
            [sys.executable, "-m", "wqpair.cli", "spectrum", "--atoms", "4",
             "--sector", "one", "--out", str(tmp_path / "run")],
            capture_output=True, text=True,
        )
        assert result.returncode == 0
        assert (tmp_path / "run" / "spectrum.csv").exists()

    def test_version_flag(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["--version"])
        assert exc.value.code == 0
        assert "wqpair" in capsys.readouterr().out

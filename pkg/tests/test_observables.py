"""Distance, parity, edge, and taxonomy observables."""

import numpy as np
import pytest

from wqpair.errors import ConfigurationError
from wqpair.lattice import ArrayConfig, PairBasis, build_pair_hamiltonian
from wqpair.observables import (
    ClassifierThresholds,
    TwoExcitationState,
    center_of_mass_ipr,
    classify,
    default_edge_width,
    distance_histogram,
    edge_mass,
    edge_sites,
    histogram_table,
    pair_mirror_permutation,
    parity_of,
    photon_distance,
    records_table,
    spectrum_records,
    symmetrize_degenerate_pairs,
)
from wqpair.spectral import eig_dense


def pair_state(n, entries, energy=-1j):
    """Build a TwoExcitationState from {(a, b): amplitude} with a < b."""
    basis = PairBasis.for_atoms(n)
    vec = np.zeros(basis.dimension, dtype=complex)
    for (a, b), amp in entries.items():
        vec[basis.index_of[a, b]] = amp
    return TwoExcitationState.from_pair_vector(
        vec, n, basis.first, basis.second, 2 * energy
    )


class TestTwoExcitationState:
    def test_build_from_pair_vector(self):
        state = pair_state(4, {(0, 3): 1.0})
        assert state.n_atoms == 4
        assert state.energy == -1j
        assert state.amplitudes[0, 3] == state.amplitudes[3, 0]
        assert np.linalg.norm(state.amplitudes) == pytest.approx(1.0, abs=1e-15)
        assert np.all(np.diagonal(state.amplitudes) == 0)

    def test_energy_is_half_the_pair_eigenvalue(self):
        state = pair_state(3, {(0, 1): 1.0}, energy=0.5 - 2j)
        assert state.energy == 0.5 - 2j

    def test_zero_vector_rejected(self):
        basis = PairBasis.for_atoms(3)
        with pytest.raises(ConfigurationError):
            TwoExcitationState.from_pair_vector(
                np.zeros(3, dtype=complex), 3, basis.first, basis.second, -2j
            )

    def test_gainy_energy_rejected(self):
        with pytest.raises(ConfigurationError):
            pair_state(3, {(0, 1): 1.0}, energy=0.5 + 1e-6j)


class TestPhotonDistance:
    def test_single_pair(self):
        assert photon_distance(pair_state(5, {(0, 4): 1.0})) == pytest.approx(4.0)
        assert photon_distance(pair_state(5, {(1, 2): 1.0})) == pytest.approx(1.0)

    def test_weighted_superposition(self):
        state = pair_state(6, {(0, 5): 1.0, (2, 3): 1.0})
        assert photon_distance(state) == pytest.approx(3.0)  # equal weights on 5 and 1

    def test_accepts_raw_matrix(self):
        state = pair_state(4, {(0, 2): 1.0})
        assert photon_distance(state.amplitudes) == pytest.approx(2.0)


class TestParity:
    def test_even_vector(self):
        label, score = parity_of(np.array([1.0, 2.0, 2.0, 1.0]), 4)
        assert label == "even" and score == pytest.approx(1.0)

    def test_odd_vector(self):
        label, score = parity_of(np.array([1.0, 2.0, -2.0, -1.0]), 4)
        assert label == "odd" and score == pytest.approx(1.0)

    def test_mixed_vector(self):
        label, score = parity_of(np.array([1.0, 0.0, 0.0, 0.0]), 4)
        assert label == "mixed" and score < 0.99

    def test_phase_invariance(self, rng):
        vec = np.array([1.0, -0.3, -0.3, 1.0], dtype=complex)
        for _ in range(5):
            rotated = vec * np.exp(1j * rng.uniform(0, 2 * np.pi))
            label, score = parity_of(rotated, 4)
            assert label == "even" and score == pytest.approx(1.0)

    def test_quasi_null_falls_back_to_weight_split(self):
        label, score = parity_of(np.array([1.0, 1j]), 2)
        assert label == "mixed" and score == pytest.approx(0.0)

    def test_matrix_parity(self):
        state = pair_state(4, {(0, 3): 1.0, (1, 2): 0.5})
        label, score = parity_of(state.amplitudes, 4)
        assert label == "even" and score == pytest.approx(1.0)

    def test_odd_matrix(self):
        state = pair_state(4, {(0, 1): 1.0, (2, 3): -1.0})
        label, score = parity_of(state.amplitudes, 4)
        assert label == "odd" and score == pytest.approx(1.0)

    def test_size_mismatch_rejected(self):
        with pytest.raises(ConfigurationError):
            parity_of(np.ones(3), 4)


class TestEdgeMetrics:
    def test_edge_sites_inclusive_distance(self):
        mask = edge_sites(10, 2)
        expected = [True, True, True, False, False, False, False, True, True, True]
        assert list(mask) == expected

    def test_default_edge_width(self):
        assert default_edge_width(100) == 10
        assert default_edge_width(40) == 4
        assert default_edge_width(10) == 2
        assert default_edge_width(4) == 1

    def test_corner_state_has_full_edge_mass(self):
        state = pair_state(20, {(0, 19): 1.0})
        assert edge_mass(state, w=1) == pytest.approx(1.0)

    def test_center_state_has_zero_edge_mass(self):
        state = pair_state(20, {(9, 10): 1.0})
        assert edge_mass(state, w=2) == pytest.approx(0.0)

    def test_mixed_state_mass_fraction(self):
        state = pair_state(20, {(0, 19): 1.0, (9, 10): 1.0})
        assert edge_mass(state, w=1) == pytest.approx(0.5)


class TestClassify:
    def test_all_labels_reachable(self):
        n = 100
        assert classify(70.0, 0.8, n) == "distant-bound"
        assert classify(1.5, 0.1, n) == "bound-pair"
        assert classify(1.5, 0.9, n) == "edge-bound-pair"
        assert classify(30.0, 0.1, n) == "scattering"

    def test_custom_thresholds(self):
        th = ClassifierThresholds(distant_rho_fraction=0.1, distant_edge_mass=0.0)
        assert classify(15.0, 0.0, 100, th) == "distant-bound"


class TestCenterOfMassIpr:
    def test_delta_peak(self):
        assert center_of_mass_ipr(pair_state(10, {(2, 4): 1.0})) == pytest.approx(1.0)

    def test_two_equal_peaks(self):
        state = pair_state(10, {(0, 2): 1.0, (5, 9): 1.0})
        assert center_of_mass_ipr(state) == pytest.approx(0.5)

    def test_same_center_of_mass_adds_up(self):
        # (0,4) and (1,3) share total site index 4
        state = pair_state(10, {(0, 4): 1.0, (1, 3): 1.0})
        assert center_of_mass_ipr(state) == pytest.approx(1.0)


class TestDegenerateSymmetrization:
    def test_mirror_permutation_involution(self):
        for n in (2, 3, 4, 7):
            b = PairBasis.for_atoms(n)
            perm = pair_mirror_permutation(n, b.first, b.second)
            assert np.array_equal(perm[perm], np.arange(b.dimension))
            assert np.array_equal(b.first[perm], n - 1 - b.second)
            assert np.array_equal(b.second[perm], n - 1 - b.first)

    def test_pair_order_does_not_simply_reverse(self):
        b = PairBasis.for_atoms(4)
        perm = pair_mirror_permutation(4, b.first, b.second)
        assert not np.array_equal(perm, np.arange(b.dimension)[::-1])

    def test_degenerate_doublet_gets_clean_parity(self, rng):
        n = 4
        b = PairBasis.for_atoms(n)
        perm = pair_mirror_permutation(n, b.first, b.second)
        even = rng.normal(size=b.dimension) + 1j * rng.normal(size=b.dimension)
        even = (even + even[perm]) / 2
        odd = rng.normal(size=b.dimension) + 1j * rng.normal(size=b.dimension)
        odd = (odd - odd[perm]) / 2
        mix1 = even + 0.6 * odd
        mix2 = even - 1.4 * odd
        values = np.array([1.0 - 1j, 1.0 - 1j, 4.0 - 2j])
        spectator = rng.normal(size=b.dimension) + 0j
        vectors = np.column_stack([
            mix1 / np.linalg.norm(mix1), mix2 / np.linalg.norm(mix2), spectator,
        ])
        out = symmetrize_degenerate_pairs(values, vectors, mirror=perm)
        parities = set()
        for k in range(2):
            col = out[:, k]
            if np.linalg.norm(col - col[perm]) < 1e-12:
                parities.add("even")
            if np.linalg.norm(col + col[perm]) < 1e-12:
                parities.add("odd")
        assert parities == {"even", "odd"}
        assert np.array_equal(out[:, 2], spectator)

    def test_non_degenerate_input_untouched(self, rng):
        values = np.array([1.0, 2.0, 3.0])
        vectors = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        out = symmetrize_degenerate_pairs(values, vectors)
        assert np.array_equal(out, vectors)


class TestHistogram:
    def test_counts_and_range(self, rng):
        rhos = rng.uniform(0, 9, size=57)
        counts, edges = distance_histogram(rhos, 10, bins=9)
        assert counts.sum() == 57
        assert edges[0] == 0.0 and edges[-1] == 9.0

    def test_errors(self):
        with pytest.raises(ConfigurationError):
            distance_histogram([], 10)
        with pytest.raises(ConfigurationError):
            distance_histogram([1.0], 10, bins=1)

    def test_table_shape(self, rng):
        counts, edges = distance_histogram(rng.uniform(0, 4, size=10), 5, bins=4)
        header, rows = histogram_table(counts, edges)
        assert header == ["bin_lo", "bin_hi", "count"]
        assert len(rows) == 4
        assert sum(r[2] for r in rows) == 10


class TestSpectrumRecords:
    def test_three_atom_records(self):
        n, phi = 3, 1.0
        basis = PairBasis.for_atoms(n)
        dec = eig_dense(build_pair_hamiltonian(ArrayConfig(n, phi), basis))
        records = spectrum_records(dec.values, dec.vectors, n, basis.first, basis.second)
        assert len(records) == 3
        for k, rec in enumerate(records):
            assert rec.index == k
            assert rec.energy == dec.values[k] / 2
            assert 0.0 <= rec.rho <= n - 1
            assert rec.parity in ("even", "odd", "mixed")
            assert 0.0 <= rec.edge_mass <= 1.0 + 1e-12
            assert rec.label in ("distant-bound", "bound-pair", "edge-bound-pair", "scattering")

    def test_clean_spectrum_has_clean_parities(self):
        n = 8
        basis = PairBasis.for_atoms(n)
        dec = eig_dense(build_pair_hamiltonian(ArrayConfig(n, 0.7), basis))
        records = spectrum_records(dec.values, dec.vectors, n, basis.first, basis.second)
        assert all(r.parity_score > 0.999 for r in records)

    def test_records_table_round_trip(self, tmp_path):
        from wqpair.matrixio import read_table, write_table

        n = 4
        basis = PairBasis.for_atoms(n)
        dec = eig_dense(build_pair_hamiltonian(ArrayConfig(n, 1.0), basis))
        records = spectrum_records(dec.values, dec.vectors, n, basis.first, basis.second)
        header, rows = records_table(records)
        assert header[:4] == ["index", "re_eps", "im_eps", "rho"]
        path = tmp_path / "records.csv"
        write_table(path, header, rows)
        _, got = read_table(path)
        assert float(got[0][1]) == records[0].energy.real

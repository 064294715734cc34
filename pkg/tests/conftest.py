"""Shared fixtures.

The N = 100 clean two-excitation eigenproblem (dimension 4950) takes a few
minutes to solve, so it is computed once per session and shared by every
test that needs it.
"""

from __future__ import annotations

from types import SimpleNamespace

import numpy as np
import pytest

from wqpair.lattice import ArrayConfig, PairBasis, build_pair_hamiltonian
from wqpair.observables import spectrum_records
from wqpair.spectral import eig_dense


@pytest.fixture(scope="session")
def pair100():
    """Clean N = 100, phi = 1 two-excitation sector: eigenpairs plus records."""
    n, phi = 100, 1.0
    basis = PairBasis.for_atoms(n)
    ham = build_pair_hamiltonian(ArrayConfig(n, phi), basis)
    dec = eig_dense(ham)
    del ham
    records = spectrum_records(dec.values, dec.vectors, n, basis.first, basis.second)
    return SimpleNamespace(
        n_atoms=n, phi=phi, basis=basis,
        values=dec.values, vectors=dec.vectors, records=records,
    )


@pytest.fixture()
def rng():
    return np.random.default_rng(2024)

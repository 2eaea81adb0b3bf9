import math

import numpy as np
import pytest

from heunchain.entanglement import c_spectrum_direct
from heunchain.ground_state import chop, fermi_index, full_correlation, hamiltonian_spectrum
from heunchain.manybody import (
    annihilators,
    correlation_expectations,
    entanglement_entropy,
    ground_state,
)
from heunchain.models import ChainSpec, SoQ3Params, Su2Params, build_model


def test_canonical_anticommutation():
    c = annihilators(3)
    eye = np.eye(8)
    for m in range(3):
        for n in range(3):
            np.testing.assert_array_equal(c[m] @ c[n].T + c[n].T @ c[m], eye * (m == n))
            np.testing.assert_array_equal(c[m] @ c[n] + c[n] @ c[m], 0)


def test_too_many_sites():
    with pytest.raises(ValueError):
        annihilators(13)


def test_ground_energy_matches_fermi_sea():
    chain, _ = build_model(Su2Params(4, 0.8, 0.15))
    e, _ = ground_state(chain)
    fd = fermi_index(hamiltonian_spectrum(chain))
    assert e == pytest.approx(fd.ground_energy, abs=1e-12)


@pytest.mark.parametrize("chain", [
    build_model(Su2Params(4, 1.3, 0.2))[0],
    ChainSpec(4, [0.3, -0.2, 0.1, 0.4], [1 + 0.5j, -0.3j, 0.7]),
])
def test_correlation_orientation(chain):
    spec = hamiltonian_spectrum(chain)
    cf = full_correlation(spec, fermi_index(spec))
    # full_correlation[m, n] is <c_n^dag c_m>
    np.testing.assert_allclose(correlation_expectations(chain).T, cf.entries, atol=1e-12)


def test_worked_example_entropy():
    chain, _ = build_model(Su2Params(2, math.pi / 2, 0.5))
    s = entanglement_entropy(chain, 1)
    assert s == pytest.approx(-0.25 * math.log(0.25) - 0.75 * math.log(0.75), abs=1e-12)


@pytest.mark.parametrize("params", [Su2Params(5, 0.9, 0.1), SoQ3Params(9, 6, 0.05), SoQ3Params(9, 7, 0.01)])
def test_manybody_matches_nu_sum(params):
    chain, _ = build_model(params)
    spec = hamiltonian_spectrum(chain)
    cf = full_correlation(spec, fermi_index(spec))
    for ell in range(chain.sites):
        assert abs(entanglement_entropy(chain, ell) - c_spectrum_direct(chop(cf, ell)).entropy) <= 1e-9

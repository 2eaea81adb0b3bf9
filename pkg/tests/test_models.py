import math

import numpy as np
import pytest

from heunchain.errors import ConfigError
from heunchain.ground_state import hamiltonian_spectrum
from heunchain.models import (
    BispectralData,
    ChainSpec,
    SoQ3Params,
    Su11Params,
    Su2Params,
    TruncationConfig,
    _soq3_hopping_magnitude,
    build_hamiltonian,
    custom_chain,
    soq3_chain,
    su11_chain,
    su2_chain,
    verify_bispectral,
)
from heunchain.spectral import eig_tridiagonal, gauge_to_real


def test_su2_worked_example():
    chain, bd = su2_chain(Su2Params(2, math.pi / 2, 0.5))
    # cos(pi/2) is 6e-17, so B is b up to round-off
    np.testing.assert_allclose(chain.fields_B, [0.5, 0.5, 0.5], atol=1e-15)
    np.testing.assert_allclose(chain.hoppings_J, [-math.sqrt(2) / 2] * 2, rtol=1e-15)
    np.testing.assert_array_equal(bd.lam, [1, 0, -1])
    np.testing.assert_allclose(bd.analytic_omega, [-1.5, -0.5, 0.5])
    np.testing.assert_allclose(hamiltonian_spectrum(chain).values, [-1.5, -0.5, 0.5], atol=1e-14)
    h = build_hamiltonian(chain)
    np.testing.assert_allclose(h.diag, [-0.5, -0.5, -0.5], atol=1e-15)


@pytest.mark.parametrize("two_s,b", [(3, 0.1), (6, -0.7)])
def test_su2_decoupled(two_s, b):
    chain, bd = su2_chain(Su2Params(two_s, 0.0, b))
    assert not np.any(chain.hoppings_J)
    s = two_s / 2
    np.testing.assert_allclose(np.sort(-chain.fields_B), np.arange(two_s + 1) - s - b)
    np.testing.assert_allclose(bd.analytic_omega, np.arange(two_s + 1) - s - b)


def test_su2_zero_mode_constructs():
    # three sites are needed for a mode at exactly zero energy
    _, bd = su2_chain(Su2Params(2, math.pi / 2, 0.0))
    np.testing.assert_allclose(bd.analytic_omega, [-1, 0, 1])


def test_su11_decoupled():
    chain, bd = su11_chain(Su11Params(1.0, 0.0, -2.0), size=8)
    assert not np.any(chain.hoppings_J)
    np.testing.assert_allclose(-chain.fields_B[:3], [-1.5, -0.5, 0.5])
    np.testing.assert_allclose(bd.analytic_omega[:3], [-1.5, -0.5, 0.5])


def test_su11_first_hopping():
    chain, _ = su11_chain(Su11Params(2.0, 0.5, -5.0, TruncationConfig(initial_size=64)))
    assert chain.sites == 64
    assert chain.hoppings_J[0] == pytest.approx(-0.5 * math.sinh(0.5) * math.sqrt(2), rel=1e-15)


def test_su11_empty_sea_constructs():
    _, bd = su11_chain(Su11Params(1.0, 0.3, 0.0), size=16)
    assert np.all(bd.analytic_omega > 0)


def test_su11_low_spectrum_converges_with_size():
    p = Su11Params(1.0, 1.0, -3.0)
    errs = []
    for m in (64, 128, 256):
        chain, bd = su11_chain(p, m)
        w = hamiltonian_spectrum(chain).values[:11]
        errs.append(np.max(np.abs(w - bd.analytic_omega[:11])))
    assert errs[-1] <= 1e-8
    assert errs[2] <= errs[1] + 1e-12 and errs[1] <= errs[0] + 1e-12


def test_soq3_uniform_exact():
    chain, bd = soq3_chain(SoQ3Params(10, 8, 0.3))
    np.testing.assert_array_equal(chain.hoppings_J, np.full(8, -0.5))
    np.testing.assert_array_equal(chain.fields_B, np.full(9, -0.3))
    # the general formula agrees with the exact value to round-off
    np.testing.assert_allclose(_soq3_hopping_magnitude(10, 8), 1.0, rtol=1e-14)


def test_soq3_two_site():
    chain, bd = soq3_chain(SoQ3Params(4, 1, 0.0))
    assert chain.sites == 2
    r = math.sin(math.pi / 8)
    np.testing.assert_allclose(bd.lam, [-r, r], rtol=1e-15)
    np.testing.assert_allclose(hamiltonian_spectrum(chain).values, [-r, r], rtol=1e-13)


@pytest.mark.parametrize("big", [5, 11, 30])
def test_soq3_uniform_spectrum(big):
    d = big - 2
    chain, bd = soq3_chain(SoQ3Params(big, d, 0.0))
    k = np.arange(d + 1)
    expected = np.sin(np.pi * (2 * k - d) / (2 * big))
    dense = np.linalg.eigvalsh(build_hamiltonian(chain).to_dense())
    np.testing.assert_allclose(dense, expected, atol=1e-13)
    np.testing.assert_allclose(bd.analytic_omega, expected, atol=1e-15)


def test_soq3_rejects_bad_sqrt_argument():
    with pytest.raises(ConfigError):
        _soq3_hopping_magnitude(3, 5)
    with pytest.raises(ValueError):
        SoQ3Params(6, 6, 0.0)


def test_build_hamiltonian_trivial():
    h = build_hamiltonian(ChainSpec(3, [1.0, -2.0, 0.5], [0.0, 0.0]))
    np.testing.assert_allclose(np.sort(eig_tridiagonal(gauge_to_real(h)[0]).values), np.sort([-1, 2, -0.5]))
    one = build_hamiltonian(ChainSpec(1, [2.0], []))
    np.testing.assert_array_equal(one.to_dense(), [[-2.0]])


def test_chain_spec_validation():
    with pytest.raises(ValueError):
        ChainSpec(3, [0, 0], [1, 1])
    with pytest.raises(ValueError):
        ChainSpec(0, [], [])
    assert not ChainSpec(3, [0, 0, 0], [1, 0]).irreducible


def test_custom_chain_needs_extra_lambda():
    with pytest.raises(ConfigError):
        custom_chain([0, 0], [1.0], [0.0, 1.0])
    chain, bd = custom_chain([0, 0], [1.0], [0.0, 1.0, 2.0])
    assert bd.lambda_next == 2.0


def test_analytic_omega_must_ascend():
    with pytest.raises(ValueError):
        BispectralData([0, 1], 2, analytic_omega=[1.0, 0.0])


def test_truncation_sizes():
    assert list(TruncationConfig(64, 2.0, 1e-10, 256).sizes()) == [64, 128, 256]
    with pytest.raises(ValueError):
        TruncationConfig(growth_factor=1.0)


def test_bispectral_examples():
    for chain, bd in (su2_chain(Su2Params(6, 1.0, 0.2)), soq3_chain(SoQ3Params(12, 10, 0.1))):
        rep = verify_bispectral(chain, bd, hamiltonian_spectrum(chain))
        assert rep.recurrence_residual <= 1e-10
        assert rep.difference_residual <= 1e-10
    single = ChainSpec(1, [0.3], [])
    rep = verify_bispectral(single, BispectralData([0.5], -0.5, None, [0.0], []), hamiltonian_spectrum(single))
    assert rep.recurrence_residual == 0 and rep.difference_residual == 0


def test_bispectral_detects_wrong_dual():
    chain, bd = su2_chain(Su2Params(6, 1.0, 0.2))
    wrong = BispectralData(bd.lam, bd.lambda_next, bd.analytic_omega, bd.dual_B, 1.1 * bd.dual_J)
    rep = verify_bispectral(chain, wrong, hamiltonian_spectrum(chain))
    assert rep.difference_residual > 1e-3


def test_su11_bispectral_window():
    chain, bd = su11_chain(Su11Params(1.0, 1.0, -3.0), 256)
    rep = verify_bispectral(chain, bd, hamiltonian_spectrum(chain), modes=32)
    assert rep.recurrence_residual <= 1e-10 and rep.difference_residual <= 1e-10


@pytest.mark.parametrize("params", [Su2Params(9, 0.7, 0.1), SoQ3Params(20, 13, 0.05), SoQ3Params(20, 18, 0.0)])
def test_lambda_distinct(params):
    from heunchain.models import build_model

    _, bd = build_model(params)
    assert bd.min_lambda_gap() > 0

import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from defbec import lambda_core as lc
from defbec.constants import EPS0, HBAR, TWO_PI
from defbec.deformed_algebra import CondensateParams


def test_derived_rates_sodium(sodium_atoms):
    g_opt, g_mag = lc.derived_rates(sodium_atoms)
    assert g_opt / TWO_PI == pytest.approx(5e6, rel=1e-15)
    assert g_mag / TWO_PI == pytest.approx(38e3, rel=1e-15)


def test_derived_rates_zero():
    atoms = lc.AtomicParams(0.0, 0.0, 0.0, 1.0, 2.0, 1e-30, 1e-30)
    assert lc.derived_rates(atoms) == (0.0, 0.0)


@pytest.mark.parametrize("kwargs", [
    dict(gamma31=-1.0),
    dict(omega12=3.0),
    dict(mu32=0.0),
])
def test_atomic_params_invariants(kwargs):
    base = dict(gamma31=1.0, gamma32=1.0, gamma12=1.0, omega12=1.0, omega_opt=2.0, mu32=1e-30, mu31=1e-30)
    base.update(kwargs)
    with pytest.raises(ValueError):
        lc.AtomicParams(**base)


def test_field_params_warns_outside_weak_probe():
    with pytest.warns(UserWarning):
        lc.FieldParams(g1=1.0, g2=0.5)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        lc.FieldParams(g1=1.0, g2=0.01)


def test_gamma_at_zero_detuning():
    rates = (3.0, 0.5)
    g1 = 2.0
    assert lc.gamma_factor(0.0, g1, rates) == pytest.approx(-1j * (2 * 3.0 + g1**2 / 0.5))


def test_gamma_without_coupling():
    assert lc.gamma_factor(7.0, 0.0, (3.0, 0.5)) == pytest.approx(7.0 - 6j)


def test_gamma_two_photon_pole():
    with pytest.raises(ZeroDivisionError):
        lc.gamma_factor(0.0, 1.0, (1.0, 0.0))
    # no coupling, no pole
    assert lc.gamma_factor(0.0, 0.0, (1.0, 0.0)) == pytest.approx(-2j)


def test_gamma_sodium_value(sodium_config):
    rates = lc.derived_rates(sodium_config.atoms())
    d = TWO_PI * 10e6
    g1 = sodium_config.g1
    want = d - 2j * rates[0] + g1**2 / (1j * rates[1] - d)
    assert lc.gamma_factor(d, g1, rates) == pytest.approx(want, rel=1e-15)


@settings(max_examples=50, deadline=None)
@given(st.floats(-1e9, 1e9), st.floats(0, 1e9), st.floats(1e3, 1e8), st.floats(1e2, 1e7))
def test_gamma_is_dissipative(delta, g1, g_opt, g_mag):
    assert np.imag(lc.gamma_factor(delta, g1, (g_opt, g_mag))) < 0


def test_rho32_without_coupling():
    r1, _ = lc.rho32_coefficients(0.0, 0.0, (2.0, 1.0))
    assert r1 == pytest.approx(1j / 4.0)


def test_rho32_eit_suppression(sodium_config):
    rates = lc.derived_rates(sodium_config.atoms())
    r1, _ = lc.rho32_coefficients(0.0, sodium_config.g1, rates)
    assert abs(r1.real) <= 1e-15 * abs(r1)
    assert abs(r1) < 1e-2 / (2 * rates[0])


def test_rho32_third_order_vanishes_for_real_gamma(monkeypatch):
    monkeypatch.setattr(lc, "gamma_factor", lambda *a: 3.0 + 0j)
    _, r3 = lc.rho32_coefficients(0.0, 1.0, (1.0, 1.0))
    assert r3 == 0


def test_steady_state_without_coupling_has_unit_ratios(sodium_atoms, detunings):
    for d in detunings[::10]:
        ss = lc.steady_state(sodium_atoms, d, 0.0)
        assert ss.L_l == pytest.approx(1.0, rel=1e-15)
        assert ss.gamma_opt == (sodium_atoms.gamma31 + sodium_atoms.gamma32) / 2


def test_coupling_chain(sodium_config, sodium_atoms):
    cond = CondensateParams.build(1e14, density=3.3e18)
    cc = lc.coupling_constants(sodium_atoms, cond, TWO_PI * 3e6, sodium_config.g1)
    V = 1e14 / 3.3e18
    k0 = 22e-30 * math.sqrt(TWO_PI * 5.1e14 / (2 * HBAR * EPS0 * V))
    assert cc.k0 == pytest.approx(k0, rel=1e-14)
    # regression fixture recorded from the formula above
    assert cc.k0 == pytest.approx(5235.127093421951, rel=1e-12)
    assert cc.K1 / cc.k1 == pytest.approx(1e7, rel=1e-15)
    assert cc.K2 / cc.k2 == pytest.approx(1e7, rel=1e-15)
    ss = lc.steady_state(sodium_atoms, TWO_PI * 3e6, sodium_config.g1)
    assert cc.k1 == pytest.approx(cc.k0 * ss.L_l, rel=1e-14)
    assert cc.k2 == pytest.approx(cc.k0**3 * ss.L_nl, rel=1e-14)


def test_coupling_without_coupling_field(sodium_atoms):
    cond = CondensateParams.build(100)
    cc = lc.coupling_constants(sodium_atoms, cond, 0.3, 0.0)
    assert cc.k1 == pytest.approx(cc.k0, rel=1e-15)


def test_coupling_rejects_bad_volume(sodium_atoms):
    with pytest.raises(ValueError):
        lc.coupling_constants(sodium_atoms, CondensateParams.build(10), 0.0, 1.0, quant_volume=0.0)


def test_dark_state_without_probe(sodium_atoms, sodium_config):
    rho = lc.liouville_steady_state(sodium_atoms, lc.FieldParams(g1=sodium_config.g1, g2=0.0, delta=1e6))
    want = np.zeros((3, 3))
    want[1, 1] = 1.0
    assert np.allclose(rho, want, atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.floats(-2e8, 2e8), st.floats(1e5, 2e8), st.floats(0, 3e7))
def test_density_matrix_invariants(delta, g1, g2):
    atoms = lc.AtomicParams(3e7, 3e7, 2e5, 1e10, 3e15, 2e-29, 2e-29)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        fields = lc.FieldParams(g1=g1, g2=g2, delta=delta)
    rho = lc.liouville_steady_state(atoms, fields)
    assert abs(np.trace(rho) - 1) <= 1e-12
    assert np.max(np.abs(rho - rho.conj().T)) <= 1e-12
    assert np.min(np.linalg.eigvalsh(rho)) >= -1e-10


def test_no_dissipation_is_singular():
    atoms = lc.AtomicParams(0.0, 0.0, 0.0, 1.0, 2.0, 1e-30, 1e-30)
    with pytest.raises(np.linalg.LinAlgError):
        lc.liouville_steady_state(atoms, lc.FieldParams(g1=1.0, g2=0.01))


def test_perturbative_fit_exact_cubic():
    c0, c1, c3 = 0.1 - 0.2j, 3.0 + 1.0j, -0.5j
    g = np.array([0.5, 1.0, 2.0, 3.0])
    rho = c0 + c1 * g + c3 * g**3
    got = lc.perturbative_fit(zip(g, rho))
    assert got == pytest.approx((c0, c1, c3), rel=1e-12)


def test_perturbative_fit_rank_deficient():
    with pytest.raises(np.linalg.LinAlgError):
        lc.perturbative_fit([(1.0, 1j), (1.0, 1j), (1.0, 1j)])


def test_perturbative_fit_against_liouville(sodium_atoms, sodium_config):
    g_opt, _ = lc.derived_rates(sodium_atoms)
    delta = TWO_PI * 7e6
    samples = []
    for s in (1, 2, 4):
        g2 = s * 1e-4 * g_opt
        rho = lc.liouville_steady_state(sodium_atoms, lc.FieldParams(g1=sodium_config.g1, g2=g2, delta=delta))
        samples.append((g2, lc.rho32(rho)))
    _, c1, _ = lc.perturbative_fit(samples)
    r1, _ = lc.rho32_coefficients(delta, sodium_config.g1, lc.derived_rates(sodium_atoms))
    assert abs(c1 - r1) <= 1e-3 * abs(r1)


def test_gamma_factor_vectorised(detunings):
    rates = (1e7, 1e5)
    vec = lc.gamma_factor(detunings, 1e8, rates)
    assert vec.shape == detunings.shape
    assert vec[3] == lc.gamma_factor(detunings[3], 1e8, rates)


def test_series_linear_term_is_inverse_gamma(sodium_atoms, sodium_config, detunings):
    c1, _ = lc.liouville_rho32_series(sodium_atoms, detunings, sodium_config.g1)
    ref = 1.0 / lc.gamma_factor(detunings, sodium_config.g1, lc.derived_rates(sodium_atoms))
    assert np.max(np.abs(c1 - ref) / np.abs(ref)) <= 1e-12


@pytest.mark.parametrize("delta_hz", [0.0, 3e6, -7e6, 15e6])
def test_series_cubic_term_matches_full_steady_state(sodium_atoms, sodium_config, delta_hz):
    d = TWO_PI * delta_hz
    c1, c3 = lc.liouville_rho32_series(sodium_atoms, d, sodium_config.g1)
    g2 = 3e-4 * lc.derived_rates(sodium_atoms)[0]
    rho = lc.rho32(lc.liouville_steady_state(sodium_atoms, lc.FieldParams(g1=sodium_config.g1, g2=g2, delta=d)))
    # next correction is O(g2^2) relative to the cubic term
    assert abs((rho / g2 - c1) / g2**2 - c3) <= 1e-3 * abs(c3)


def test_series_scalar_and_array_agree(sodium_atoms, sodium_config, detunings):
    _, arr = lc.liouville_rho32_series(sodium_atoms, detunings, sodium_config.g1)
    assert lc.liouville_rho32_series(sodium_atoms, detunings[5], sodium_config.g1)[1] == arr[5]


def test_closed_form_cubic_term_disagrees_with_master_equation(sodium_atoms, sodium_config):
    # the closed form misses the dark-state suppression of the cubic response
    d = TWO_PI * 7e6
    _, exact = lc.liouville_rho32_series(sodium_atoms, d, sodium_config.g1)
    _, closed = lc.rho32_coefficients(d, sodium_config.g1, lc.derived_rates(sodium_atoms))
    assert abs(exact / closed) < 0.2


def test_third_order_switch(sodium_atoms, sodium_config):
    cond = CondensateParams.build(1e14)
    d = TWO_PI * 7e6
    a = lc.coupling_constants(sodium_atoms, cond, d, sodium_config.g1)
    b = lc.coupling_constants(sodium_atoms, cond, d, sodium_config.g1, third_order="closed_form")
    assert a.k1 == b.k1 and a.k2 != b.k2
    with pytest.raises(ValueError):
        lc.coupling_constants(sodium_atoms, cond, d, sodium_config.g1, third_order="other")

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from defbec import dispersion_pulse as dp
from defbec.constants import C
from defbec.validate import doublet_chi, lorentzian_chi


def test_refractive_index_examples():
    assert dp.refractive_index(0.0) == 1.0
    assert dp.refractive_index(3.0) == 2.0
    for chi in (1e-3, -1e-3, 1e-3j, (1 + 1j) * 7e-4):
        assert abs(dp.refractive_index(chi) - (1 + chi / 2)) <= 1e-6


def test_refractive_index_branch_point():
    with pytest.raises(ArithmeticError):
        dp.refractive_index(np.array([0.0, -1.0]))


@given(st.complex_numbers(max_magnitude=1e6, allow_nan=False, allow_infinity=False))
def test_principal_branch(chi):
    if chi == -1:
        return
    assert dp.refractive_index(chi).real >= 0


def test_group_index_constant_and_linear():
    w = np.linspace(1.0, 2.0, 11)
    assert np.allclose(dp.group_index(w, np.full(11, 1.7)), 1.7, atol=1e-15)
    s = 0.01
    assert np.allclose(dp.group_index(w, 1 + s * w), 1 + 2 * s * w, atol=1e-14)


def test_group_index_grid_errors():
    with pytest.raises(ValueError):
        dp.group_index(np.array([1.0, 2.0]), np.ones(2))
    with pytest.raises(ValueError):
        dp.group_index(np.array([1.0, 3.0, 2.0]), np.ones(3))


def test_group_index_lorentzian_against_analytic():
    w0, gam = 1e9, 1e6
    w = w0 + np.linspace(-5 * gam, 5 * gam, 10001)
    chi, dchi = lorentzian_chi(w, w0, gam, 5e-4)
    fd = dp.group_index(w, dp.refractive_index(chi))
    an = dp.group_index_analytic(w, chi, dchi)
    assert np.max(np.abs(fd[1:-1] - an[1:-1]) / np.abs(an[1:-1])) <= 1e-6


def test_complex_group_index_real_part_matches():
    w = np.linspace(1.0, 2.0, 101)
    n = dp.refractive_index(0.1 * np.exp(1j * w))
    assert np.allclose(dp.group_index_complex(w, n).real, dp.group_index(w, n), atol=1e-14)


def test_classify_examples():
    labels = dp.classify(np.array([1.7e7, 1.0, -5.0, 0.5, 0.0]))
    assert list(labels) == ["subluminal", "luminal", "superluminal", "superluminal", "luminal"]
    assert dp.group_velocity(np.array([-5.0]))[0] < 0


@given(st.lists(st.floats(-1e8, 1e8), min_size=1, max_size=20), st.floats(1e-3, 1e3))
def test_classify_ignores_time_axis_scale(ng, scale):
    # classification is a function of n_g only; rescaling time leaves n_g alone
    ng = np.array(ng)
    w = np.arange(ng.size) * scale
    assert list(dp.classify(ng)) == list(dp.classify(ng + 0 * w))


def test_dispersion_bundle():
    w = np.linspace(1e9, 1.1e9, 50)
    res = dp.dispersion(w, np.zeros(50))
    # edge stencils on a float grid leave rounding of order omega * eps
    assert np.allclose(res.n_group, 1.0, rtol=0, atol=1e-10)
    assert np.all(res.classification == "luminal")


def test_zero_crossings():
    x = np.array([0.0, 1.0, 2.0, 3.0])
    assert dp.zero_crossings(x, np.array([-1.0, 1.0, 1.0, -1.0])) == pytest.approx([0.5, 2.5])
    assert dp.zero_crossings(x, np.ones(4)) == []


def test_delta_to_omega():
    assert np.allclose(dp.delta_to_omega([-1.0, 2.0], 10.0), [9.0, 12.0])


@pytest.fixture(scope="module")
def pulse_setup():
    carrier = 2 * np.pi * 5.1e14
    omega = carrier + np.linspace(-2 * np.pi * 200e6, 2 * np.pi * 200e6, 40001)
    t = np.linspace(-40e-6, 40e-6, 2**15, endpoint=False)
    return carrier, omega, t, dp.gaussian_envelope(t, 1e-6)


def test_gaussian_fwhm():
    t = np.linspace(-5, 5, 100001)
    inten = np.abs(dp.gaussian_envelope(t, 2.0)) ** 2
    above = t[inten >= 0.5]
    assert above[-1] - above[0] == pytest.approx(2.0, abs=2e-4)


def test_vacuum_transit(pulse_setup):
    carrier, omega, t, env = pulse_setup
    run = dp.propagate_pulse(omega, np.zeros(omega.size), carrier, t, env, 1e-4)
    assert abs(run.transit_time - 1e-4 / C) <= t[1] - t[0]
    # lossless: envelope energy conserved
    assert np.sum(np.abs(run.envelope_out) ** 2) == pytest.approx(np.sum(np.abs(env) ** 2), rel=1e-12)


def test_nondispersive_slab(pulse_setup):
    carrier, omega, t, env = pulse_setup
    n0 = 1.5
    run = dp.propagate_pulse(omega, np.full(omega.size, n0**2 - 1), carrier, t, env, 1e-4)
    assert abs(run.measured_delay - (n0 - 1) * 1e-4 / C) <= t[1] - t[0]
    assert run.predicted_delay == pytest.approx((n0 - 1) * 1e-4 / C, rel=1e-12)


def test_slow_light_delay_is_measured(pulse_setup):
    carrier, omega, t, env = pulse_setup
    chi, _ = lorentzian_chi(omega, carrier, 2 * np.pi * 20e6, 2 * np.pi * 20e6 * 2e-7)
    # absorbing line: carrier inside its normal-dispersion wing
    run = dp.propagate_pulse(omega, chi, carrier + 2 * np.pi * 60e6, t, env, 1e-2)
    assert run.n_group_carrier > 1
    assert run.measured_delay > 0
    assert abs(run.measured_delay - run.predicted_delay) <= 0.05 * abs(run.predicted_delay)


def test_gain_doublet_superluminal(pulse_setup):
    carrier, omega, t, env = pulse_setup
    chi, dchi = doublet_chi(omega, carrier, 2 * np.pi * 20e6, 2 * np.pi * 1e6, 2 * np.pi * 2e4)
    run = dp.propagate_pulse(omega, chi, carrier, t, env, 1e-4)
    analytic = dp.group_index_analytic(carrier, *doublet_chi(np.array([carrier]), carrier, 2 * np.pi * 20e6,
                                                             2 * np.pi * 1e6, 2 * np.pi * 2e4))[0]
    assert run.n_group_carrier < 0
    assert run.n_group_carrier == pytest.approx(analytic, rel=1e-4)
    assert run.measured_delay < 0
    assert abs(run.measured_delay - run.predicted_delay) <= 0.05 * abs(run.predicted_delay)


def test_bandwidth_guard(pulse_setup):
    carrier, _, t, env = pulse_setup
    narrow = carrier + np.linspace(-1e6, 1e6, 101)
    with pytest.raises(ValueError):
        dp.propagate_pulse(narrow, np.zeros(101), carrier, t, env, 1e-4)


def test_slab_length_guard(pulse_setup):
    carrier, omega, t, env = pulse_setup
    with pytest.raises(ValueError):
        dp.propagate_pulse(omega, np.zeros(omega.size), carrier, t, env, 0.0)


@settings(max_examples=10, deadline=None)
@given(st.floats(1.01, 3.0), st.floats(1e-5, 1e-2))
def test_nondispersive_property(n0, length):
    carrier = 2 * np.pi * 5.1e14
    omega = carrier + np.linspace(-2 * np.pi * 200e6, 2 * np.pi * 200e6, 4001)
    t = np.linspace(-40e-6, 40e-6, 2**13, endpoint=False)
    run = dp.propagate_pulse(omega, np.full(omega.size, n0**2 - 1), carrier, t, dp.gaussian_envelope(t, 1e-6), length)
    assert abs(run.measured_delay - (n0 - 1) * length / C) <= t[1] - t[0]

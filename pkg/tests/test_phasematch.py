from functools import partial

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import brentq

import oracles
from tospdc import (
    HE11,
    HE12,
    FiberSpec,
    NoPhasematchError,
    PhasematchSolution,
    PumpSpec,
    Spectral,
    find_phasematch_radius,
    find_phasematch_wavelength,
    frequency_sum,
    group_slowness,
    nonlinear_phase,
    phase_mismatch,
    phasematch_scan,
    pm_function,
    propagation_constant,
    pump_envelope,
    sigma_for_duration,
    sigma_from_ghz_label,
)
from tospdc.phasematch import FWHM_FACTOR, degenerate_mismatch

TRIPLET = Spectral.from_wavelength(1.596e-6)
R_1596 = 0.39518479e-6  # frozen solver output
R_1400 = 0.343869196e-6  # frozen solver output


@pytest.fixture(scope="module")
def solution():
    return find_phasematch_radius(TRIPLET)


def test_design_radius(solution):
    assert solution.fiber_radius == pytest.approx(0.395e-6, rel=0.02)
    assert solution.fiber_radius == pytest.approx(R_1596, rel=1e-7)
    assert abs(solution.residual) < 1e-4
    assert solution.pump_freq.value == 3 * solution.degenerate_freq.value


def test_design_radius_against_independent_oracle(solution):
    omega = TRIPLET.value

    def mismatch(radius):
        return oracles.beta(radius, 3 * omega, 3) - 3 * oracles.beta(radius, omega, 1)

    radius = brentq(mismatch, 0.37e-6, 0.42e-6, xtol=1e-15)
    assert solution.fiber_radius == pytest.approx(radius, rel=1e-7)


def test_radius_at_1400nm(solution):
    sol = find_phasematch_radius(Spectral.from_wavelength(1.4e-6))
    assert sol.fiber_radius == pytest.approx(R_1400, rel=1e-7)
    assert sol.fiber_radius < solution.fiber_radius


def test_monotone_radius_scan():
    lam = np.linspace(1.2e-6, 1.8e-6, 13)
    radii = [s.fiber_radius for s in phasematch_scan(lam)]
    assert np.all(np.diff(radii) > 0)


def test_deterministic(solution):
    again = find_phasematch_radius(TRIPLET)
    assert again.fiber_radius == solution.fiber_radius


def test_no_phasematch_in_bracket():
    with pytest.raises(NoPhasematchError) as info:
        find_phasematch_radius(TRIPLET, bracket=(0.6e-6, 1.0e-6))
    assert info.value.bracket == (0.6e-6, 1.0e-6)
    assert "no phasematching" in str(info.value)


def test_inverse_search_recovers_wavelength(solution):
    back = find_phasematch_wavelength(FiberSpec(solution.fiber_radius))
    assert back.degenerate_freq.wavelength == pytest.approx(1.596e-6, rel=1e-6)


def test_solution_requires_exact_tripling():
    with pytest.raises(ValueError):
        PhasematchSolution(0.4e-6, TRIPLET, Spectral(3.0000001 * TRIPLET.value), 0.0)


def test_degenerate_mismatch_signs(solution):
    assert abs(degenerate_mismatch(FiberSpec(solution.fiber_radius), TRIPLET)) < 1e-4
    assert degenerate_mismatch(FiberSpec(2e-6), TRIPLET) > 0


@pytest.mark.parametrize("radius", [0.36e-6, 0.41e-6, 0.5e-6, 0.8e-6, 1.5e-6])
def test_degenerate_mismatch_continuous(radius):
    base = degenerate_mismatch(FiberSpec(radius), TRIPLET)
    steps = [abs(degenerate_mismatch(FiberSpec(radius * (1 + d)), TRIPLET) - base) for d in (1e-4, 1e-6, 1e-8)]
    assert steps[0] > steps[1] > steps[2]
    assert steps[2] < 1e-3 * max(steps[0], 1.0)


def test_pm_function_identities():
    L = 0.1
    assert pm_function(0.0, L) == 1 + 0j
    assert abs(pm_function(2 * np.pi / L, L)) < 1e-15
    assert abs(pm_function(np.pi / L, L)) == pytest.approx(2 / np.pi, rel=1e-14)


@settings(max_examples=1000)
@given(st.floats(-1e6, 1e6), st.floats(1e-7, 10.0))
def test_pm_function_bounded(dk, length):
    assert abs(pm_function(dk, length)) <= 1 + 1e-15


def test_sigma_duration_relation():
    sigma = sigma_from_ghz_label(23.5)
    assert sigma == 2.35e10
    assert FWHM_FACTOR / sigma == pytest.approx(100e-12, rel=0.01)
    assert sigma_for_duration(100e-12) == pytest.approx(2.355e10, rel=1e-3)


def test_pump_envelope_values():
    pump = PumpSpec(Spectral(3e15), 2e10, 20.0, 1e8)
    assert pump_envelope(3e15, pump) == 1.0
    assert pump_envelope(3e15 + 2e10, pump) == pytest.approx(np.exp(-1), rel=1e-12)


@settings(max_examples=100)
@given(st.lists(st.floats(1.1e15, 1.25e15), min_size=3, max_size=3))
def test_pump_envelope_permutation(w):
    pump = PumpSpec(Spectral(3.55e15), 2.355e10, 20.0, 1e8)
    ref = pump_envelope(frequency_sum(*w), pump)
    for perm in ([w[1], w[2], w[0]], [w[2], w[1], w[0]], [w[0], w[2], w[1]]):
        assert pump_envelope(frequency_sum(*perm), pump) == ref


def test_pump_spec_conventions():
    pump = PumpSpec.from_average_power(Spectral(3e15), sigma_for_duration(100e-12), 0.2, 100e6)
    assert pump.peak_power == pytest.approx(20.0, rel=1e-12)
    assert pump.t_fwhm == pytest.approx(100e-12, rel=1e-12)
    doubled = pump.with_sigma(2 * pump.sigma)
    assert doubled.peak_power == pytest.approx(40.0, rel=1e-12)
    assert pump.with_sigma(2 * pump.sigma, keep="peak_power").peak_power == pump.peak_power
    for bad in ((0.0, 20.0, 1e8), (1e10, -1.0, 1e8), (1e10, 20.0, 0.0)):
        with pytest.raises(ValueError):
            PumpSpec(Spectral(3e15), *bad)


class _Coeffs:
    def __init__(self, gp, gr, gs, gi):
        self.gamma_p, self.gamma_pr, self.gamma_ps, self.gamma_pi = gp, gr, gs, gi


def test_nonlinear_phase_algebra():
    coeffs = _Coeffs(0.4, 0.05, 0.05, 0.05)
    assert nonlinear_phase(coeffs, 0.0) == 0.0
    assert nonlinear_phase(coeffs, 20.0) == pytest.approx((0.4 - 6 * 0.05) * 20.0, rel=1e-14)
    assert nonlinear_phase(_Coeffs(1.0, 0.1, 0.2, 0.3), 2.0) == pytest.approx((1.0 - 1.2) * 2.0)


def test_nonlinear_phase_negligible_at_design(design):
    phi = nonlinear_phase(design.nonlinear, design.pump.peak_power)
    assert abs(phi) * design.length < 0.1 * np.pi


@pytest.fixture(scope="module")
def ks(solution):
    fiber = FiberSpec(solution.fiber_radius)
    return partial(propagation_constant, fiber, HE12), partial(propagation_constant, fiber, HE11), fiber


def test_phase_mismatch_degenerate(solution, ks):
    kp, k, _ = ks
    w = solution.degenerate_freq.value
    assert abs(phase_mismatch(kp, k, w, w, w)) < 1e-4
    assert phase_mismatch(kp, k, w, w, w, phi_nl=0.3) == pytest.approx(0.3, abs=1e-4)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-2e12, 2e12), min_size=3, max_size=3))
def test_phase_mismatch_permutation(ks, offsets):
    kp, k, _ = ks
    w = TRIPLET.value + np.asarray(offsets)
    ref = phase_mismatch(kp, k, *w)
    for perm in ((1, 2, 0), (2, 1, 0), (0, 2, 1), (1, 0, 2), (2, 0, 1)):
        assert phase_mismatch(kp, k, *w[list(perm)]) == ref


def test_phase_mismatch_detuning(solution, ks):
    kp, k, fiber = ks
    w = solution.degenerate_freq.value
    nu = 1e-5 * w
    change = phase_mismatch(kp, k, w + nu, w, w) - phase_mismatch(kp, k, w, w, w)
    k1 = oracles.five_point(lambda x: oracles.beta(solution.fiber_radius, x, 1), w, 1e-4 * w)
    kp1 = group_slowness(fiber, HE12, 3 * w)
    assert change == pytest.approx((kp1 - k1) * nu, rel=1e-3)

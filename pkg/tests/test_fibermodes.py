import numpy as np
import pytest
from scipy.constants import c
from scipy.integrate import quad

import oracles
from tospdc import (
    FUSED_SILICA,
    HE11,
    HE12,
    FiberSpec,
    ModeLabel,
    ModeSolverError,
    NotGuidedError,
    Spectral,
    boundary_mismatch,
    group_slowness,
    index_derivative,
    mode_field,
    propagation_constant,
    refractive_index,
    solve_mode,
    write_profile_csv,
)

RADIUS = 0.395e-6
TRIPLET = Spectral.from_wavelength(1.596e-6)
PUMP = Spectral.from_wavelength(0.532e-6)


@pytest.fixture(scope="module")
def fiber():
    return FiberSpec(RADIUS)


def test_fiber_validation():
    with pytest.raises(ValueError):
        FiberSpec(-1e-6)
    with pytest.raises(ValueError):
        FiberSpec(1e-6, length=0)
    with pytest.raises(ValueError):
        ModeLabel(0)


def test_v_number_precheck(fiber):
    v = fiber.v_number(PUMP)
    assert v == pytest.approx(4.97, abs=0.01)
    assert v > 3.8317


def test_he11_matches_brute_force_scan(fiber):
    mode = solve_mode(fiber, TRIPLET, HE11)
    n1 = float(oracles.silica_index(1.596))
    roots = oracles.hybrid_roots(RADIUS, 1.596e-6, n1)
    assert len(roots) == 1
    assert mode.n_eff == pytest.approx(roots[0], rel=1e-10)
    assert 1.0 < mode.n_eff < 1.1  # weakly guided
    assert mode.v_number == pytest.approx(1.62, abs=0.01)


def test_he12_is_third_hybrid_root(fiber):
    # l = 1 roots at the pump in descending n_eff: HE11, EH11, HE12
    mode = solve_mode(fiber, PUMP, HE12)
    n1 = float(oracles.silica_index(0.532))
    roots = oracles.hybrid_roots(RADIUS, 0.532e-6, n1)
    assert len(roots) == 3
    assert mode.n_eff == pytest.approx(roots[2], rel=1e-10)
    assert solve_mode(fiber, PUMP, HE11).n_eff == pytest.approx(roots[0], rel=1e-10)


@pytest.mark.parametrize("label, freq", [(HE11, TRIPLET), (HE11, PUMP), (HE12, PUMP)])
def test_solution_invariants(fiber, label, freq):
    mode = solve_mode(fiber, freq, label)
    assert mode.n_cladding < mode.n_eff < mode.n_core
    assert abs(mode.residual) < 1e-10
    assert mode.beta == pytest.approx(mode.n_eff * freq.value / c, rel=1e-12)


def test_root_ordering(fiber):
    assert solve_mode(fiber, PUMP, HE11).n_eff > solve_mode(fiber, PUMP, HE12).n_eff


def test_large_core_plane_wave_limit():
    freq = Spectral.from_wavelength(1.0e-6)
    mode = solve_mode(FiberSpec(50e-6), freq, HE11)
    assert mode.n_core - mode.n_eff < 1e-3


def test_he12_below_cutoff_reports_v(fiber):
    with pytest.raises(NotGuidedError) as info:
        solve_mode(fiber, TRIPLET, HE12)
    assert info.value.v_number == pytest.approx(fiber.v_number(TRIPLET))
    assert "V" in str(info.value)


def test_he12_between_nominal_and_true_cutoff():
    # air cladding pushes the true HE12 cutoff above the weak-guidance 3.8317
    freq = PUMP
    n1 = float(refractive_index(FUSED_SILICA, freq))
    radius = 3.85 * freq.wavelength / (2 * np.pi * np.sqrt(n1**2 - 1))
    with pytest.raises((ModeSolverError, NotGuidedError)):
        solve_mode(FiberSpec(radius), freq, HE12)


def test_n_eff_continuity(fiber):
    omega = 2 * np.pi * c / np.linspace(1.2e-6, 1.8e-6, 50)
    n = propagation_constant(fiber, HE11, omega) * c / omega
    d = np.abs(np.diff(n))
    for i in range(1, d.size - 1):
        assert d[i] <= 10 * max(d[i - 1], d[i + 1])


def test_boundary_conditions(fiber):
    for label, freq in [(HE11, TRIPLET), (HE12, PUMP)]:
        mismatch = boundary_mismatch(solve_mode(fiber, freq, label))
        assert max(mismatch.values()) < 1e-6


def plane_norm(mode):
    """Direct polar quadrature of e_x^2 through the Cartesian evaluator."""
    phi = np.linspace(0, 2 * np.pi, 16, endpoint=False)

    def ring(r):
        return r * np.sum(mode_field(mode, r * np.cos(phi), r * np.sin(phi)) ** 2) * (2 * np.pi / phi.size)

    a = mode.fiber.core_radius
    outer = mode.profile.extent(1e-14)
    core = quad(ring, 0, a, epsabs=0, epsrel=1e-11, limit=200)[0]
    clad = quad(ring, a, outer, epsabs=0, epsrel=1e-11, limit=400, points=[2 * a, 5 * a, 20 * a])[0]
    return core + clad


@pytest.mark.parametrize("label, freq", [(HE11, TRIPLET), (HE12, PUMP)])
def test_normalisation_by_direct_quadrature(fiber, label, freq):
    assert plane_norm(solve_mode(fiber, freq, label)) == pytest.approx(1.0, abs=1e-4)


def test_normalisation_density_invariance(fiber):
    for label, freq in [(HE11, TRIPLET), (HE12, PUMP)]:
        profile = solve_mode(fiber, freq, label).profile
        assert abs(profile.power(2) - profile.power(1)) < 1e-4


def test_he11_single_lobe(fiber):
    mode = solve_mode(fiber, TRIPLET, HE11)
    f0 = mode.amplitude
    assert np.argmax(np.abs(f0)) == 0
    # e_x jumps up at the glass-air interface (normal D is continuous), so
    # the decreasing envelope is checked within each layer
    inside = mode.radius < RADIUS
    assert np.all(np.diff(f0[inside]) <= 0)
    assert np.all(np.diff(f0[~inside]) <= 0)
    assert np.all(f0 > 0)


def test_he12_one_radial_sign_change(fiber):
    f0 = solve_mode(fiber, PUMP, HE12).amplitude
    signs = np.sign(f0[np.abs(f0) > 1e-9 * np.abs(f0).max()])
    assert np.count_nonzero(np.diff(signs)) == 1


def test_mode_field_matches_radial_sampling(fiber):
    mode = solve_mode(fiber, PUMP, HE12)
    r = mode.radius[::97]
    on_x = mode_field(mode, r, np.zeros_like(r))
    assert np.allclose(on_x, mode.amplitude[::97] + mode.amplitude_cos2phi[::97], rtol=1e-12, atol=0)
    # tail beyond the sampled grid comes from the modified Bessel form
    far = 20 * RADIUS
    assert np.isfinite(mode_field(mode, far, 0.0))


def test_group_slowness_against_stencil_oracle(fiber):
    w0 = TRIPLET.value
    k1 = group_slowness(fiber, HE11, TRIPLET)
    expected = oracles.five_point(lambda w: oracles.beta(RADIUS, w, 1), w0, 1e-4 * w0)
    assert k1 == pytest.approx(expected, rel=1e-6)
    assert k1 > solve_mode(fiber, TRIPLET, HE11).n_eff / c


def test_group_slowness_step_halving(fiber):
    a = group_slowness(fiber, HE11, TRIPLET)
    b = group_slowness(fiber, HE11, TRIPLET, rel_step=0.5e-5)
    assert abs(a - b) < 1e-6 * a


def test_group_slowness_bulk_limit():
    freq = Spectral.from_wavelength(1.0e-6)
    n = float(refractive_index(FUSED_SILICA, freq))
    n_group = n + freq.value * index_derivative(FUSED_SILICA, freq)
    assert group_slowness(FiberSpec(50e-6), HE11, freq) == pytest.approx(n_group / c, rel=1e-3)


def test_profile_csv(tmp_path, fiber):
    path = tmp_path / "he12.csv"
    mode = solve_mode(fiber, PUMP, HE12)
    write_profile_csv(mode, path)
    lines = path.read_text().splitlines()
    assert lines[0].split(",")[:2] == ["radius_m", "amplitude"]
    assert len(lines) == mode.radius.size + 1

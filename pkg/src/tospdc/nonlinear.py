"""Transverse overlap integrals: effective area, nonlinear coefficients and
free-space Gaussian coupling.

Profiles are anything exposing ``harmonics(r) -> (f0, f2)`` for a field
``f0(r) + f2(r) cos(2 phi)``, plus ``knots``, ``decay_length``, ``extent()``
and ``power()``. The azimuthal average of products is done analytically, so
every overlap reduces to a 1-D radial Gauss-Legendre sum.

The third-order susceptibility only lives in the silica core, so overlaps
used for nonlinear coefficients are truncated at the core radius.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.constants import c, epsilon_0
from scipy.optimize import minimize_scalar

from .dispersion import Spectral, angular_frequency, refractive_index
from .quadrature import evanescent_edges, panel_nodes

__all__ = [
    "CHI3_SILICA",
    "GaussianBeam",
    "NonInteriorMaximum",
    "NonlinearSet",
    "NormalizationError",
    "effective_area",
    "gamma_coefficient",
    "gaussian_coupling",
    "maximize_coupling",
    "nonlinear_set",
    "overlap_integral",
    "spm_xpm_coefficients",
]

CHI3_SILICA = 2.0e-22  # m^2/V^2
NORM_TOL = 1e-3
# <cos(2 phi)^k> over a period, k = 0..4
_COS2_MOMENTS = np.array([1.0, 0.0, 0.5, 0.0, 0.375])


class NormalizationError(ValueError):
    """A profile handed to an overlap integral is not unit-normalised."""


class NonInteriorMaximum(UserWarning):
    """Coupling maximum found at the edge of the search bracket."""


@dataclass(frozen=True)
class GaussianBeam:
    """Unit-power Gaussian amplitude with 1/e^2 intensity radius ``waist``."""

    waist: float

    def __post_init__(self):
        if not self.waist > 0:
            raise ValueError("waist must be positive")

    def harmonics(self, r):
        r = np.asarray(r, dtype=float)
        f0 = np.sqrt(2 / (np.pi * self.waist**2)) * np.exp(-((r / self.waist) ** 2))
        return f0, np.zeros_like(f0)

    def __call__(self, x, y):
        return self.harmonics(np.hypot(x, y))[0]

    knots: tuple = ()

    @property
    def decay_length(self) -> float:
        return self.waist / 2

    def extent(self, tol: float = 1e-12) -> float:
        return self.waist * np.sqrt(np.log(1 / tol))

    def power(self, density: int = 1) -> float:
        return 1.0


def _as_profile(obj):
    return getattr(obj, "profile", obj)


def _nodes(profiles, limit=None, density=1, tol=1e-12):
    knots = sorted({k for p in profiles for k in p.knots})
    outer = min(p.extent(tol) for p in profiles)
    if limit is not None:
        outer = min(outer, limit)
        knots = sorted({*(k for k in knots if k < limit), limit})
    knots = [k for k in knots if k < outer]
    scale = min(p.decay_length for p in profiles)
    first = min([scale, *(k / 2 for k in knots)]) if knots else scale
    edges = [0.0]
    lo = 0.0
    for k in knots:
        n = max(2, int(np.ceil((k - lo) / first)))
        edges.extend(np.linspace(lo, k, n + 1)[1:])
        lo = k
    if outer > lo:
        tail = evanescent_edges(lo, first, scale, outer)
        edges.extend(tail[1:])
    edges = np.asarray(edges)
    if density > 1:
        edges = np.concatenate(
            [[edges[0]], *(np.linspace(a, b, density + 1)[1:] for a, b in zip(edges[:-1], edges[1:]))]
        )
    r, w = panel_nodes(edges)
    return r, 2 * np.pi * r * w


def _product_mean(harmonics):
    # closed-form expansion for up to four factors, vectorised over nodes
    coeffs = [np.ones_like(harmonics[0][0])]
    for f0, f2 in harmonics:
        new = [np.zeros_like(f0) for _ in range(len(coeffs) + 1)]
        for k, ck in enumerate(coeffs):
            new[k] = new[k] + ck * f0
            new[k + 1] = new[k + 1] + ck * f2
        coeffs = new
    return sum(_COS2_MOMENTS[k] * ck for k, ck in enumerate(coeffs))


def overlap_integral(profiles, limit: float | None = None, density: int = 1) -> float:
    """Integral over the plane (or the disc r < ``limit``) of the product of fields."""
    profiles = [_as_profile(p) for p in profiles]
    r, w = _nodes(profiles, limit, density)
    return float(np.sum(w * _product_mean([p.harmonics(r) for p in profiles])))


def _check_normalised(profiles, density=1):
    for p in profiles:
        norm = p.power(density)
        if abs(norm - 1) > NORM_TOL:
            raise NormalizationError(f"profile norm {norm:.6g} deviates from 1 by more than {NORM_TOL:g}")


def effective_area(pump, r_mode, s_mode, i_mode, limit: float | None = None, density: int = 1) -> float:
    """1 / |overlap of the four fields| in m^2.

    ``limit`` restricts the integral to the nonlinear disc r < limit (the
    fiber core); ``None`` integrates over the whole plane.
    """
    profiles = [_as_profile(p) for p in (pump, r_mode, s_mode, i_mode)]
    _check_normalised(profiles)
    return 1.0 / abs(overlap_integral(profiles, limit, density))


def gamma_coefficient(chi3: float, pump_freq, n_p: float, a_eff: float) -> float:
    """3 chi3 w_p / (4 eps0 c^2 n_p^2 A_eff), in 1/(W m)."""
    omega = angular_frequency(pump_freq)
    return 3 * chi3 * omega / (4 * epsilon_0 * c**2 * n_p**2 * a_eff)


def _kerr_prefactor(chi3, omega, n):
    return 3 * chi3 * omega / (4 * epsilon_0 * c**2 * n**2)


def spm_xpm_coefficients(pump_mode, r_mode, s_mode, i_mode, chi3: float = CHI3_SILICA, limit="core"):
    """(gamma_p, gamma_pr, gamma_ps, gamma_pi) in 1/(W m).

    gamma_p uses the quartic pump overlap; gamma_pmu the pump-probe overlap
    of squared moduli. Each carries the Kerr prefactor at the frequency of
    the field acquiring the phase, with the bulk core index there.
    """
    if limit == "core":
        limit = pump_mode.fiber.core_radius
    pump = _as_profile(pump_mode)
    _check_normalised([pump, *(_as_profile(m) for m in (r_mode, s_mode, i_mode))])
    core = pump_mode.fiber.core

    def pref(mode):
        return _kerr_prefactor(chi3, mode.freq.value, refractive_index(core, mode.freq))

    gamma_p = pref(pump_mode) * overlap_integral([pump] * 4, limit)
    cross = []
    for mode in (r_mode, s_mode, i_mode):
        prof = _as_profile(mode)
        cross.append(pref(mode) * overlap_integral([pump, pump, prof, prof], limit))
    return (gamma_p, *cross)


@dataclass(frozen=True)
class NonlinearSet:
    a_eff: float
    gamma: float
    gamma_p: float
    gamma_pr: float
    gamma_ps: float
    gamma_pi: float
    chi3: float
    n_p: float
    pump_freq: Spectral
    conventions: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        for name in ("a_eff", "gamma", "gamma_p", "gamma_pr", "gamma_ps", "gamma_pi", "chi3", "n_p"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        expected = gamma_coefficient(self.chi3, self.pump_freq, self.n_p, self.a_eff)
        if abs(self.gamma - expected) > 1e-10 * expected:
            raise ValueError("gamma inconsistent with a_eff")


def nonlinear_set(pump_mode, r_mode, s_mode=None, i_mode=None, chi3: float = CHI3_SILICA) -> NonlinearSet:
    """All nonlinear coefficients for an HE12 pump and three HE11 photons.

    Degenerate designs may pass a single triplet mode.
    """
    s_mode = s_mode or r_mode
    i_mode = i_mode or r_mode
    fiber = pump_mode.fiber
    limit = fiber.core_radius
    a_eff = effective_area(pump_mode, r_mode, s_mode, i_mode, limit=limit)
    n_p = float(refractive_index(fiber.core, pump_mode.freq))
    gamma = gamma_coefficient(chi3, pump_mode.freq, n_p, a_eff)
    g_p, g_pr, g_ps, g_pi = spm_xpm_coefficients(pump_mode, r_mode, s_mode, i_mode, chi3)
    conventions = {
        "chi3_m2_per_V2": chi3,
        "field": "dominant transverse component e_x = f0(r) + f2(r) cos(2 phi), unit integral of e_x^2",
        "overlap_region": f"silica core, r < {limit:.6e} m",
        "gamma_index": f"bulk {fiber.core.name} index at pump frequency",
        "gamma_frequency": "pump center frequency",
        "spm_overlap": "integral |f_p|^4",
        "xpm_overlap": "integral |f_p|^2 |f_mu|^2",
        "xpm_prefactor": "3 chi3 w_mu / (4 eps0 c^2 n(w_mu)^2), bulk index",
    }
    return NonlinearSet(a_eff, gamma, g_p, g_pr, g_ps, g_pi, chi3, n_p, pump_mode.freq, conventions)


def gaussian_coupling(pump_mode, beam_waist, density: int = 1) -> float:
    """Power coupling |<g|f_p>|^2 of a co-polarised Gaussian waist at the fiber face.

    ``beam_waist`` may also be any unit-power profile, e.g. another mode.
    """
    beam = beam_waist if hasattr(beam_waist, "harmonics") or hasattr(beam_waist, "profile") else GaussianBeam(beam_waist)
    beam = _as_profile(beam)
    return overlap_integral([_as_profile(pump_mode), beam], density=density) ** 2


def maximize_coupling(pump_mode, bracket=(0.4e-6, 1.5e-6), tol: float = 1e-9):
    """Waist (m) maximising :func:`gaussian_coupling` inside ``bracket``.

    Bounded Brent search (golden-section steps with parabolic acceleration).
    A maximum sitting on the bracket edge raises a :class:`NonInteriorMaximum`
    warning.
    """
    lo, hi = bracket
    res = minimize_scalar(
        lambda w: -gaussian_coupling(pump_mode, w),
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": tol / 10},
    )
    waist = float(res.x)
    fraction = -float(res.fun)
    edge = min(waist - lo, hi - waist) < 2 * tol
    if edge or fraction < max(gaussian_coupling(pump_mode, lo), gaussian_coupling(pump_mode, hi)):
        warnings.warn(f"coupling maximum at bracket edge ({waist:.4e} m)", NonInteriorMaximum, stacklevel=2)
    return waist, fraction

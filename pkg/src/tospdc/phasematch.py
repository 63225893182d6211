"""Degenerate phasematching, phase mismatch and the pump/phasematching factors.

The pump travels in HE12 at three times the triplet frequency; the three
generated photons share HE11. Sign convention throughout: pump wavenumber
minus the sum of the generated-photon wavenumbers.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import brentq

from ._parallel import parallel_map
from .dispersion import Spectral, angular_frequency
from .fibermodes import HE11, HE12, FiberSpec, ModeSolverError, NotGuidedError, solve_mode

__all__ = [
    "FWHM_FACTOR",
    "NoPhasematchError",
    "PhasematchSolution",
    "PumpSpec",
    "degenerate_mismatch",
    "find_phasematch_radius",
    "find_phasematch_wavelength",
    "frequency_sum",
    "nonlinear_phase",
    "phase_mismatch",
    "phasematch_scan",
    "pm_function",
    "pump_envelope",
    "sigma_for_duration",
    "sigma_from_ghz_label",
    "sorted_triplet",
]

# intensity FWHM duration times sigma for the exp[-(w - w0)^2 / sigma^2] envelope
FWHM_FACTOR = 2 * np.sqrt(2 * np.log(2))
RESIDUAL_TOL = 1e-4  # rad/m
DEFAULT_BRACKET = (0.15e-6, 1.0e-6)


def sigma_for_duration(t_fwhm: float) -> float:
    """Envelope bandwidth (rad/s) whose intensity FWHM duration is ``t_fwhm``."""
    return FWHM_FACTOR / t_fwhm


def sigma_from_ghz_label(value: float) -> float:
    """Read a bandwidth quoted in 'GHz' as 1e9 rad/s per unit (23.5 -> 2.35e10 rad/s)."""
    return value * 1e9


@dataclass(frozen=True)
class PumpSpec:
    """Gaussian-envelope pulsed pump.

    ``peak_power`` is used directly; :meth:`from_average_power` derives it as
    pulse energy over the intensity FWHM duration.
    """

    center_freq: Spectral
    sigma: float
    peak_power: float
    rep_rate: float
    avg_power: float | None = None

    def __post_init__(self):
        for name in ("sigma", "peak_power", "rep_rate"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.avg_power is not None:
            if not self.avg_power > 0:
                raise ValueError("avg_power must be positive")
            expected = self.avg_power / (self.rep_rate * self.t_fwhm)
            if not np.isclose(self.peak_power, expected, rtol=1e-12):
                raise ValueError("peak_power inconsistent with avg_power")

    @classmethod
    def from_average_power(cls, center_freq: Spectral, sigma: float, avg_power: float, rep_rate: float):
        if not (sigma > 0 and avg_power > 0 and rep_rate > 0):
            raise ValueError("sigma, avg_power and rep_rate must be positive")
        peak = avg_power / (rep_rate * (FWHM_FACTOR / sigma))
        return cls(center_freq, sigma, peak, rep_rate, avg_power)

    @property
    def t_fwhm(self) -> float:
        return FWHM_FACTOR / self.sigma

    @property
    def pulse_energy(self) -> float:
        return self.peak_power * self.t_fwhm

    def with_sigma(self, sigma: float, keep: str = "avg_power") -> "PumpSpec":
        """Change the bandwidth holding either the average or the peak power."""
        if keep == "avg_power":
            avg = self.avg_power if self.avg_power is not None else self.pulse_energy * self.rep_rate
            return PumpSpec.from_average_power(self.center_freq, sigma, avg, self.rep_rate)
        if keep == "peak_power":
            return replace(self, sigma=sigma, avg_power=None)
        raise ValueError("keep must be 'avg_power' or 'peak_power'")


@dataclass(frozen=True)
class PhasematchSolution:
    fiber_radius: float
    degenerate_freq: Spectral
    pump_freq: Spectral
    residual: float

    def __post_init__(self):
        if self.pump_freq.value != 3 * self.degenerate_freq.value:
            raise ValueError("pump frequency must be exactly three times the triplet frequency")


def degenerate_mismatch(fiber: FiberSpec, triplet_freq) -> float:
    """k_HE12(3w) - 3 k_HE11(w) in rad/m."""
    omega = float(angular_frequency(triplet_freq))
    k_pump = solve_mode(fiber, 3 * omega, HE12).beta
    k_triplet = solve_mode(fiber, omega, HE11).beta
    return k_pump - 3 * k_triplet


class NoPhasematchError(RuntimeError):
    def __init__(self, bracket, values):
        self.bracket = bracket
        self.values = values
        super().__init__(
            f"no phasematching in bracket {bracket[0] * 1e6:.4g}-{bracket[1] * 1e6:.4g} um: "
            f"mismatch {values[0]!r}, {values[1]!r} rad/m"
        )


def _mismatch_at_radius(radius, omega, template):
    return degenerate_mismatch(template.with_radius(radius), omega)


def find_phasematch_radius(
    triplet_freq, bracket=DEFAULT_BRACKET, fiber: FiberSpec | None = None
) -> PhasematchSolution:
    """Radius where k_HE12(3w) = 3 k_HE11(w).

    The lower bracket end is raised to the HE12 cutoff radius when needed,
    since the mismatch is undefined below it.
    """
    template = fiber or FiberSpec(bracket[0])
    omega = float(angular_frequency(triplet_freq))
    lo, hi = map(float, bracket)
    lo = max(lo, _hE12_cutoff_radius(template, 3 * omega) * (1 + 1e-3))
    if not lo < hi:
        raise NoPhasematchError(bracket, (np.nan, np.nan))
    lo = _first_solvable_radius(lo, hi, omega, template)
    f_lo = _mismatch_at_radius(lo, omega, template)
    f_hi = _mismatch_at_radius(hi, omega, template)
    if np.sign(f_lo) == np.sign(f_hi):
        raise NoPhasematchError((lo, hi), (f_lo, f_hi))
    radius = brentq(
        _mismatch_at_radius, lo, hi, args=(omega, template),
        xtol=1e-22, rtol=4 * np.finfo(float).eps, maxiter=400,
    )
    residual = _mismatch_at_radius(radius, omega, template)
    if abs(residual) >= RESIDUAL_TOL:
        raise RuntimeError(f"phasematch residual {residual:g} rad/m above tolerance")
    return PhasematchSolution(radius, Spectral(omega), Spectral(3 * omega), residual)


def _solvable(radius, omega, template):
    try:
        _mismatch_at_radius(radius, omega, template)
    except (NotGuidedError, ModeSolverError):
        return False
    return True


def _first_solvable_radius(lo, hi, omega, template):
    # With air cladding the true HE12 cutoff sits a little above the nominal
    # J1 zero, and root detection right at cutoff is unreliable, so step up
    # in 1% increments until both modes solve.
    radius = lo
    while radius < hi:
        if _solvable(radius, omega, template):
            return radius
        radius *= 1.01
    raise NoPhasematchError((lo, hi), (np.nan, np.nan))


def _hE12_cutoff_radius(fiber: FiberSpec, omega: float) -> float:
    from scipy.constants import c

    from .fibermodes import cutoff_v

    n1, n2 = fiber.indices(omega)
    return cutoff_v(HE12) / (omega / c * np.sqrt(n1**2 - n2**2))


def _scan_one(args):
    wavelength, bracket = args
    return find_phasematch_radius(Spectral.from_wavelength(wavelength), bracket)


def phasematch_scan(wavelengths, bracket=DEFAULT_BRACKET, workers: int | None = None):
    """Phasematching radius for each degenerate wavelength, in input order."""
    jobs = [(float(lam), bracket) for lam in wavelengths]
    return parallel_map(_scan_one, jobs, workers=workers)


def nonlinear_phase(coeffs, peak_power: float) -> float:
    """[gamma_p - 2 (gamma_pr + gamma_ps + gamma_pi)] P in rad/m."""
    return (coeffs.gamma_p - 2 * (coeffs.gamma_pr + coeffs.gamma_ps + coeffs.gamma_pi)) * peak_power


def phase_mismatch(pump_k, triplet_k, w_r, w_s, w_i, phi_nl: float = 0.0):
    """Delta k for arbitrary (broadcastable) triplet frequencies.

    ``pump_k`` and ``triplet_k`` map angular frequency to wavenumber for the
    HE12 and HE11 modes respectively (tabulated splines or direct solves).
    """
    lo, mid, hi = sorted_triplet(w_r, w_s, w_i)
    total = (lo + mid) + hi
    k_lo, k_mid, k_hi = triplet_k(lo), triplet_k(mid), triplet_k(hi)
    return pump_k(total) - ((k_lo + k_mid) + k_hi) + phi_nl


def sorted_triplet(w_r, w_s, w_i):
    """Elementwise ascending order of three frequency arrays.

    Summing in this order makes every derived quantity bit-identical under
    permutations of the arguments.
    """
    w = np.sort(np.stack(np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (w_r, w_s, w_i)))), axis=0)
    return w[0], w[1], w[2]


def frequency_sum(w_r, w_s, w_i):
    lo, mid, hi = sorted_triplet(w_r, w_s, w_i)
    return (lo + mid) + hi


def pm_function(delta_k, length: float):
    """sinc(L dk / 2) exp(i L dk / 2) with sinc(x) = sin(x) / x."""
    if not length > 0:
        raise ValueError("length must be positive")
    half = 0.5 * length * np.asarray(delta_k, dtype=float)
    return (np.sinc(half / np.pi) * np.exp(1j * half))[()]


def pump_envelope(freq_sum, pump: PumpSpec):
    """exp[-(w - w_p)^2 / sigma^2] evaluated at the summed frequency."""
    detuning = np.asarray(freq_sum, dtype=float) - pump.center_freq.value
    return np.exp(-((detuning / pump.sigma) ** 2))[()]


def find_phasematch_wavelength(fiber: FiberSpec, bracket=(1.0e-6, 2.2e-6)) -> PhasematchSolution:
    """Degenerate wavelength phasematched by a fiber of fixed radius."""
    def mismatch(omega):
        return degenerate_mismatch(fiber, omega)

    w_lo = Spectral.from_wavelength(bracket[1]).value
    w_hi = Spectral.from_wavelength(bracket[0]).value
    # long-wavelength end: step towards shorter wavelengths until HE12 solves
    while True:
        try:
            mismatch(w_lo)
            break
        except (NotGuidedError, ModeSolverError):
            w_lo *= 1.01
            if w_lo >= w_hi:
                raise NoPhasematchError(bracket, (np.nan, np.nan)) from None
    f_lo, f_hi = mismatch(w_lo), mismatch(w_hi)
    if np.sign(f_lo) == np.sign(f_hi):
        raise NoPhasematchError(bracket, (f_lo, f_hi))
    omega = brentq(mismatch, w_lo, w_hi, xtol=1e-3, rtol=4 * np.finfo(float).eps, maxiter=400)
    residual = mismatch(omega)
    if abs(residual) >= RESIDUAL_TOL:
        raise RuntimeError(f"phasematch residual {residual:g} rad/m above tolerance")
    return PhasematchSolution(fiber.core_radius, Spectral(omega), Spectral(3 * omega), residual)

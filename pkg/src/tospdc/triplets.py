"""Three-photon joint spectrum, state normalisation and absolute triplet rate.

Conventions
-----------
* ``k``, ``k'`` and ``n`` of the generated photons are HE11 quantities; the
  pump wavenumber and the index ``n_p`` in the state normalisation and the
  rate prefactor are HE12 quantities (``n = k c / omega``).
* The nonlinear coefficient comes from the :class:`~tospdc.nonlinear.NonlinearSet`
  and keeps its own conventions (bulk silica index, core-only overlap).

Rate integration
----------------
The rate integrand is a narrow Gaussian in the frequency sum ``s`` times a
sinc^2 ring structure in the plane ``s = const``. Frequencies are written as

    omega_j = omega_0 + t / 3 + rho * d_j(theta)

where ``d(theta)`` spans the plane orthogonal to (1, 1, 1) and ``t = s - w_p``.
The Jacobian of (w_r, w_s, w_i) -> (t, rho, theta) is ``rho / sqrt(3)``; with
``Q = rho^2`` the area element is ``dQ dtheta / (2 sqrt 3)``. Gauss-Legendre
nodes cover ``|t| <= 6 sigma``, a uniform periodic rule covers theta and
Gauss-Legendre panels cover Q up to the ray's 40th sinc zero, beyond which an
asymptotic tail estimate is added.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.constants import c, epsilon_0, hbar
from scipy.interpolate import CubicSpline

from .dispersion import Spectral
from .fibermodes import HE11, HE12, FiberSpec, ModeLabel, propagation_constant, solve_mode
from .nonlinear import CHI3_SILICA, NonlinearSet, nonlinear_set
from .phasematch import (
    PhasematchSolution,
    PumpSpec,
    find_phasematch_radius,
    find_phasematch_wavelength,
    frequency_sum,
    phase_mismatch,
    pm_function,
    pump_envelope,
    sigma_for_duration,
    sorted_triplet,
)
from .quadrature import gauss_legendre

__all__ = [
    "GridTooLarge",
    "JointSpectrumGrid",
    "ModeDispersion",
    "QuadratureOptions",
    "QuadratureWarning",
    "RateResult",
    "SourceDesign",
    "design_point",
    "figure2_design",
    "full_joint_amplitude",
    "jsi_grid",
    "joint_amplitude",
    "marginal_spectrum",
    "mode_length_factor",
    "triplet_rate",
    "zeta",
]

FIGURE2_LENGTH = 0.6e-6  # m, as printed; 0.6 mm would give visible PM structure
FIGURE2_SIGMA = 5.1e12  # rad/s
TABLE_POINTS = 201
_E1 = np.array([1.0, -1.0, 0.0]) / np.sqrt(2)
_E2 = np.array([1.0, 1.0, -2.0]) / np.sqrt(6)


class GridTooLarge(ValueError):
    pass


class QuadratureWarning(RuntimeWarning):
    pass


class ModeDispersion:
    """Cubic-spline interpolant of beta(omega) for one mode over a window."""

    def __init__(self, fiber: FiberSpec, label: ModeLabel, lo: float, hi: float, points: int = TABLE_POINTS):
        if not 0 < lo < hi:
            raise ValueError("table window must satisfy 0 < lo < hi")
        self.fiber = fiber
        self.label = label
        self.lo, self.hi = lo, hi
        self.omega = np.linspace(lo, hi, points)
        self.beta = propagation_constant(fiber, label, self.omega)
        self._spline = CubicSpline(self.omega, self.beta)

    def covers(self, lo: float, hi: float) -> bool:
        return self.lo <= lo and hi <= self.hi

    def _check(self, omega):
        omega = np.asarray(omega, dtype=float)
        if omega.size and (omega.min() < self.lo or omega.max() > self.hi):
            raise ValueError(
                f"frequency outside tabulated {self.label} window [{self.lo:.6e}, {self.hi:.6e}] rad/s"
            )
        return omega

    def k(self, omega):
        return self._spline(self._check(omega))[()]

    def k1(self, omega):
        """Group slowness dk/domega (s/m)."""
        return self._spline(self._check(omega), 1)[()]

    def n(self, omega):
        omega = self._check(omega)
        return (self._spline(omega) * c / omega)[()]


@dataclass(eq=False)
class SourceDesign:
    fiber: FiberSpec
    pump: PumpSpec
    phasematch: PhasematchSolution
    nonlinear: NonlinearSet
    _tables: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not np.isclose(self.pump.center_freq.value, self.phasematch.pump_freq.value, rtol=1e-12, atol=0):
            raise ValueError("pump center frequency must equal three times the degenerate frequency")
        if self.fiber.core_radius != self.phasematch.fiber_radius:
            raise ValueError("fiber radius differs from the phasematched radius")

    @property
    def omega0(self) -> float:
        return self.phasematch.degenerate_freq.value

    @property
    def omega_p(self) -> float:
        return self.pump.center_freq.value

    @property
    def length(self) -> float:
        return self.fiber.length

    def dispersion(self, label: ModeLabel, lo: float, hi: float) -> ModeDispersion:
        """Tabulated dispersion of ``label`` covering [lo, hi], cached per design."""
        table = self._tables.get(label)
        if table is None or not table.covers(lo, hi):
            if table is not None:
                lo, hi = min(lo, table.lo), max(hi, table.hi)
            table = ModeDispersion(self.fiber, label, lo, hi)
            self._tables[label] = table
        return table

    def triplet_table(self, *omegas) -> ModeDispersion:
        lo = min(float(np.min(w)) for w in omegas)
        hi = max(float(np.max(w)) for w in omegas)
        pad = 1e-3 * self.omega0
        return self.dispersion(HE11, min(lo, self.omega0) - pad, max(hi, self.omega0) + pad)

    def pump_table(self, *sums) -> ModeDispersion:
        lo = min(float(np.min(s)) for s in sums)
        hi = max(float(np.max(s)) for s in sums)
        pad = max(6 * self.pump.sigma, 1e-4 * self.omega_p)
        return self.dispersion(HE12, min(lo, self.omega_p) - pad, max(hi, self.omega_p) + pad)

    @property
    def n_p(self) -> float:
        """HE12 effective index at the pump center frequency."""
        return float(self.pump_table(self.omega_p).n(self.omega_p))

    def with_length(self, length: float) -> "SourceDesign":
        return SourceDesign(self.fiber.with_length(length), self.pump, self.phasematch, self.nonlinear, self._tables_for(self.fiber.with_length(length)))

    def with_pump(self, pump: PumpSpec) -> "SourceDesign":
        return SourceDesign(self.fiber, pump, self.phasematch, self.nonlinear, self._tables)

    def _tables_for(self, fiber: FiberSpec) -> dict:
        # dispersion depends on the cross-section only, so tables carry over
        shared = {}
        for label, table in self._tables.items():
            clone = object.__new__(ModeDispersion)
            clone.__dict__.update(table.__dict__)
            clone.fiber = fiber
            shared[label] = clone
        return shared


def design_point(
    wavelength: float | None = 1.596e-6,
    radius: float | None = None,
    length: float = 0.1,
    avg_power: float = 0.2,
    rep_rate: float = 100e6,
    sigma: float | None = None,
    t_fwhm: float = 100e-12,
    peak_power: float | None = None,
    chi3: float = CHI3_SILICA,
) -> SourceDesign:
    """Assemble a degenerate source design.

    Give either the degenerate ``wavelength`` (the radius is solved for) or
    the fiber ``radius`` (the wavelength is solved for). ``sigma`` defaults
    to the bandwidth of a ``t_fwhm`` pulse; ``peak_power`` overrides the
    average-power conversion.
    """
    if (wavelength is None) == (radius is None):
        raise ValueError("give exactly one of wavelength and radius")
    if radius is None:
        pm = find_phasematch_radius(Spectral.from_wavelength(wavelength))
    else:
        pm = find_phasematch_wavelength(FiberSpec(radius))
    fiber = FiberSpec(pm.fiber_radius, length)
    sigma = sigma_for_duration(t_fwhm) if sigma is None else sigma
    if peak_power is None:
        pump = PumpSpec.from_average_power(pm.pump_freq, sigma, avg_power, rep_rate)
    else:
        pump = PumpSpec(pm.pump_freq, sigma, peak_power, rep_rate)
    triplet_mode = solve_mode(fiber, pm.degenerate_freq, HE11)
    pump_mode = solve_mode(fiber, pm.pump_freq, HE12)
    coeffs = nonlinear_set(pump_mode, triplet_mode, chi3=chi3)
    return SourceDesign(fiber, pump, pm, coeffs)


def figure2_design(design: SourceDesign) -> SourceDesign:
    """Visualisation preset: L = 0.6 um, sigma = 5.1e12 rad/s, same fiber cross-section."""
    pump = replace(design.pump, sigma=FIGURE2_SIGMA, avg_power=None)
    return design.with_length(FIGURE2_LENGTH).with_pump(pump)


def _delta_k(design: SourceDesign, w_r, w_s, w_i, phi_nl: float = 0.0):
    lo, _, hi = sorted_triplet(w_r, w_s, w_i)
    triplet = design.triplet_table(lo, hi)
    total = frequency_sum(w_r, w_s, w_i)
    pump = design.pump_table(total)
    return phase_mismatch(pump.k, triplet.k, w_r, w_s, w_i, phi_nl)


def joint_amplitude(design: SourceDesign, w_r, w_s, w_i, phi_nl: float = 0.0):
    """F = alpha(w_r + w_s + w_i) * phi(Delta k), vectorised."""
    dk = _delta_k(design, w_r, w_s, w_i, phi_nl)
    alpha = pump_envelope(frequency_sum(w_r, w_s, w_i), design.pump)
    return alpha * pm_function(dk, design.length)


def mode_length_factor(design: SourceDesign, omega):
    """sqrt(hbar w / (pi eps0 n^2)) with the HE11 effective index."""
    omega = np.asarray(omega, dtype=float)
    n = design.triplet_table(omega).n(omega)
    return np.sqrt(hbar * omega / (np.pi * epsilon_0 * n**2))


def full_joint_amplitude(design: SourceDesign, w_r, w_s, w_i, phi_nl: float = 0.0):
    """G = l(w_r) l(w_s) l(w_i) F(w_r, w_s, w_i)."""
    lo, mid, hi = sorted_triplet(w_r, w_s, w_i)
    ell = (mode_length_factor(design, lo) * mode_length_factor(design, mid)) * mode_length_factor(design, hi)
    return ell * joint_amplitude(design, w_r, w_s, w_i, phi_nl)


def zeta(design: SourceDesign, delta_k: float) -> float:
    """State amplitude for quantisation spacing ``delta_k`` (rad/m); depends on delta_k."""
    if not delta_k > 0:
        raise ValueError("delta_k must be positive")
    p = design.pump
    num = 2 * (2 * np.pi) ** 1.5 * epsilon_0**3 * c**3 * design.n_p**3 * p.peak_power
    num *= design.length**2 * design.nonlinear.gamma**2
    den = hbar**2 * design.omega_p**2 * p.sigma
    return float(np.sqrt(num / den) * delta_k**1.5)


@dataclass(frozen=True)
class QuadratureOptions:
    n_zeros: int = 40
    n_t: int = 24
    n_theta: int = 36
    order: int = 8
    sigma_window: float = 6.0
    refine: bool = True
    table_points: int = TABLE_POINTS

    def __post_init__(self):
        if self.n_theta % 6:
            raise ValueError("n_theta must be a multiple of 6 to keep the permutation symmetry")

    def refined(self) -> "QuadratureOptions":
        return replace(self, n_t=2 * self.n_t, n_theta=2 * self.n_theta, order=2 * self.order)


@dataclass(frozen=True)
class RateResult:
    triplets_per_second: float
    quadrature_error: float
    converged: bool = True
    integration_metadata: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class _NodeSet:
    omegas: np.ndarray  # (3, n) triplet frequencies
    weights: np.ndarray  # integrand times quadrature weight
    integral: float
    tail: float


def _rate_prefactor(design: SourceDesign) -> float:
    p = design.pump
    return (
        2**3 * 3**2 * hbar * c**3 * design.n_p**3 / (np.pi**2 * design.omega_p**2)
        * design.length**2 * design.nonlinear.gamma**2 * p.peak_power * p.rep_rate / p.sigma**2
    )


def _directions(n_theta: int):
    theta = 2 * np.pi * np.arange(n_theta) / n_theta
    return np.outer(np.cos(theta), _E1) + np.outer(np.sin(theta), _E2)  # (n_theta, 3)


def _window_estimate(design: SourceDesign, opts: QuadratureOptions) -> float:
    # Transverse half-width from the local GVD: L/2 * k''/2 * Q = n_zeros * pi
    w0, h = design.omega0, 2e-3 * design.omega0
    beta = propagation_constant(design.fiber, HE11, np.array([w0 - h, w0, w0 + h]))
    k2 = abs(beta[0] - 2 * beta[1] + beta[2]) / h**2
    q_max = 4 * opts.n_zeros * np.pi / (design.length * max(k2, 1e-30))
    rho = 1.5 * np.sqrt(q_max)
    return min(rho * np.sqrt(2 / 3), 0.3 * w0)


def _ray_limits(design: SourceDesign, dirs, n_zeros: int, half_width: float):
    """Q at which each ray's sinc argument has moved by n_zeros * pi."""
    w0, L = design.omega0, design.length
    reach = np.max(np.abs(dirs), axis=1)
    table = design.triplet_table(w0 - half_width, w0 + half_width)
    rho_cap = (half_width - 1e-9 * w0) / reach
    frac = np.linspace(0.0, 1.0, 4001) ** 2  # uniform in Q
    rho = np.sqrt(frac)[None, :] * rho_cap[:, None]
    om = w0 + rho[..., None] * dirs[:, None, :]
    total = frequency_sum(om[..., 0], om[..., 1], om[..., 2])
    pump = design.pump_table(total)
    dk = phase_mismatch(pump.k, table.k, om[..., 0], om[..., 1], om[..., 2])
    phase = 0.5 * L * np.abs(dk - dk[:, :1])
    hit = phase >= n_zeros * np.pi
    if not np.all(hit.any(axis=1)):
        return None
    idx = hit.argmax(axis=1)
    rows = np.arange(len(dirs))
    p0, p1 = phase[rows, idx - 1], phase[rows, idx]
    q0, q1 = rho[rows, idx - 1] ** 2, rho[rows, idx] ** 2
    return q0 + (n_zeros * np.pi - p0) / (p1 - p0) * (q1 - q0)


def _weight(table: ModeDispersion, omega):
    k = table.k(omega)
    return table.k1(omega) * omega / (k * c / omega) ** 2


def _integrate(design: SourceDesign, opts: QuadratureOptions, half_width: float) -> _NodeSet:
    w0, wp, L = design.omega0, design.omega_p, design.length
    sigma = design.pump.sigma
    dirs = _directions(opts.n_theta)
    q_max = _ray_limits(design, dirs, opts.n_zeros, half_width)
    if q_max is None:
        raise _WindowTooSmall
    table = design.triplet_table(w0 - half_width, w0 + half_width)

    xt, wt = gauss_legendre(opts.n_t)
    t = opts.sigma_window * sigma * xt
    wt = opts.sigma_window * sigma * wt
    xq, wq = gauss_legendre(opts.order)
    n_panels = 2 * opts.n_zeros
    # Q nodes per ray: uniform panels in Q, Gauss-Legendre inside each
    u = (np.arange(n_panels)[:, None] + 0.5 * (xq[None, :] + 1)).ravel() / n_panels
    uw = np.tile(0.5 * wq, n_panels) / n_panels
    q = q_max[:, None] * u[None, :]  # (n_theta, n_q)
    qw = q_max[:, None] * uw[None, :]
    rho = np.sqrt(q)

    om = w0 + t[:, None, None, None] / 3 + rho[None, :, :, None] * dirs[None, :, None, :]
    w_r, w_s, w_i = om[..., 0], om[..., 1], om[..., 2]
    total = frequency_sum(w_r, w_s, w_i)
    pump = design.pump_table(total)
    dk = phase_mismatch(pump.k, table.k, w_r, w_s, w_i)
    lo, mid, hi = sorted_triplet(w_r, w_s, w_i)
    weight = (_weight(table, lo) * _weight(table, mid)) * _weight(table, hi)
    envelope = np.exp(-2 * ((total - wp) / sigma) ** 2)
    sinc2 = np.sinc(0.5 * L * dk / np.pi) ** 2
    measure = wt[:, None, None] * (2 * np.pi / opts.n_theta) * qw[None, :, :] / (2 * np.sqrt(3))
    values = weight * envelope * sinc2 * measure

    # Tail beyond the last sinc zero: sinc^2 averages to 1/(2 x^2), so the
    # remainder of each ray is envelope * 2/(L |dDk/dQ|) * 1/(2 x_end).
    slope = np.abs((dk[..., -1] - dk[..., -2]) / (q[None, :, -1] - q[None, :, -2]))
    x_end = 0.5 * L * np.abs(dk[..., -1])
    smooth = weight[..., -1] * envelope[..., -1]
    tail_density = smooth * 2 / (L * slope) / (2 * x_end)
    tail = np.sum(tail_density * wt[:, None] * (2 * np.pi / opts.n_theta) / (2 * np.sqrt(3)))

    return _NodeSet(
        omegas=np.stack([w_r.ravel(), w_s.ravel(), w_i.ravel()]),
        weights=values.ravel(),
        integral=float(values.sum()),
        tail=float(tail),
    )


class _WindowTooSmall(Exception):
    pass


def _integrate_adaptive(design: SourceDesign, opts: QuadratureOptions):
    half_width = _window_estimate(design, opts)
    for _ in range(4):
        try:
            return _integrate(design, opts, half_width), half_width
        except _WindowTooSmall:
            half_width = min(2 * half_width, 0.45 * design.omega0)
    raise RuntimeError("transverse integration window does not reach the requested number of sinc zeros")


def _rate_nodes(design: SourceDesign, opts: QuadratureOptions):
    coarse, half_width = _integrate_adaptive(design, opts)
    if not opts.refine:
        return coarse, None, half_width
    fine, _ = _integrate_adaptive(design, opts.refined())
    return fine, coarse, half_width


def triplet_rate(design: SourceDesign, quad_opts: QuadratureOptions | None = None) -> RateResult:
    """Triplets generated per second.

    The error bar is the change under one refinement (doubling every node
    count) plus half of the asymptotic tail correction. A refinement change
    above 5% marks the result as not converged and raises a
    :class:`QuadratureWarning`.
    """
    opts = quad_opts or QuadratureOptions()
    fine, coarse, half_width = _rate_nodes(design, opts)
    pref = _rate_prefactor(design)
    total = pref * (fine.integral + fine.tail)
    error = 0.5 * pref * fine.tail
    converged = True
    if coarse is not None:
        change = pref * abs((fine.integral + fine.tail) - (coarse.integral + coarse.tail))
        error += change
        converged = change <= 0.05 * abs(total)
        if not converged:
            warnings.warn(f"rate quadrature changed by {change / total:.2%} under refinement", QuadratureWarning, stacklevel=2)
    meta = {
        "prefactor": pref,
        "integral": fine.integral,
        "tail_correction": fine.tail,
        "nodes": int(fine.weights.size),
        "n_zeros": opts.n_zeros,
        "sigma_window": opts.sigma_window,
        "transverse_half_width_rad_per_s": half_width,
        "n_p": design.n_p,
        "gamma_per_W_m": design.nonlinear.gamma,
        "peak_power_W": design.pump.peak_power,
    }
    return RateResult(float(total), float(error), converged, meta)


def marginal_spectrum(
    design: SourceDesign,
    quad_opts: QuadratureOptions | None = None,
    points: int = 201,
    keep: str = "r",
):
    """Single-photon spectral density (triplets/s per rad/s) for one photon.

    At each kept frequency the other two photons are parameterised by the
    summed-frequency offset ``t`` and their half difference ``v`` (unit
    Jacobian); ``t`` uses the rate's Gauss-Legendre rule and ``v`` panels
    out to the ``n_zeros``-th sinc zero. Returns ``(omega, density)`` on a
    uniform grid spanning the rate integration window.
    """
    if keep not in ("r", "s", "i"):
        raise ValueError("keep must be one of 'r', 's', 'i'")
    opts = quad_opts or QuadratureOptions()
    w0, wp, L = design.omega0, design.omega_p, design.length
    sigma = design.pump.sigma
    half_width = _integrate_adaptive(design, replace(opts, refine=False))[1]
    kept = w0 + np.linspace(-half_width, half_width, points)
    table = design.triplet_table(w0 - 1.6 * half_width, w0 + 1.6 * half_width)

    xt, wt = gauss_legendre(opts.n_t)
    t = opts.sigma_window * sigma * xt
    wt = opts.sigma_window * sigma * wt
    # v range: where the sinc argument at t = 0 has moved n_zeros * pi from v = 0
    v_probe = np.linspace(0.0, half_width, 4001)
    rest = wp - kept[:, None]
    dk_probe = _mismatch_pair(design, table, kept[:, None], rest, v_probe[None, :])
    phase = 0.5 * L * np.abs(dk_probe - dk_probe[:, :1])
    hit = phase >= opts.n_zeros * np.pi
    idx = np.where(hit.any(axis=1), hit.argmax(axis=1), v_probe.size - 1)
    v_max = v_probe[idx]

    xq, wq = gauss_legendre(opts.order)
    n_panels = 4 * opts.n_zeros
    u = (np.arange(n_panels)[:, None] + 0.5 * (xq[None, :] + 1)).ravel() / n_panels
    uw = np.tile(0.5 * wq, n_panels) / n_panels
    u = np.concatenate([-u[::-1], u])
    uw = np.concatenate([uw[::-1], uw])

    density = np.empty(points)
    for n, (w_keep, vm) in enumerate(zip(kept, v_max)):
        v = vm * u[None, :]
        rest = wp + t[:, None] - w_keep
        om_a = 0.5 * rest + v
        om_b = 0.5 * rest - v
        w_k = np.full_like(om_a, w_keep)
        total = frequency_sum(w_k, om_a, om_b)
        pump = design.pump_table(total)
        dk = phase_mismatch(pump.k, table.k, w_k, om_a, om_b)
        lo, mid, hi = sorted_triplet(w_k, om_a, om_b)
        weight = (_weight(table, lo) * _weight(table, mid)) * _weight(table, hi)
        envelope = np.exp(-2 * ((total - wp) / sigma) ** 2)
        sinc2 = np.sinc(0.5 * L * dk / np.pi) ** 2
        density[n] = np.sum(weight * envelope * sinc2 * wt[:, None] * (vm * uw)[None, :])
    return kept, _rate_prefactor(design) * density


def _mismatch_pair(design, table, w_keep, rest, v):
    om_a = 0.5 * rest + v
    om_b = 0.5 * rest - v
    w_k = np.broadcast_to(w_keep, np.broadcast(om_a, w_keep).shape)
    total = frequency_sum(w_k, om_a, om_b)
    pump = design.pump_table(total)
    return phase_mismatch(pump.k, table.k, w_k, om_a, om_b)


@dataclass(frozen=True, eq=False)
class JointSpectrumGrid:
    axes: tuple
    values: np.ndarray
    kind: str
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        for ax in self.axes:
            d = np.diff(ax)
            if not (np.all(d > 0) and np.allclose(d, d[0], rtol=1e-9, atol=0)):
                raise ValueError("axes must be strictly increasing and uniformly spaced")


def jsi_grid(design: SourceDesign, n_points: int = 41, half_span: float | None = None, kind: str = "JSI", max_cells: int = 10**7) -> JointSpectrumGrid:
    """Sample PM, PSA, JSA or JSI on a cubic grid centred on the degenerate point.

    ``half_span`` defaults to three pump bandwidths per axis.
    """
    kind = kind.upper()
    if kind not in {"PM", "PSA", "JSA", "JSI"}:
        raise ValueError(f"unknown grid kind {kind!r}")
    cells = n_points**3
    if cells > max_cells:
        side = int(np.floor(max_cells ** (1 / 3)))
        raise GridTooLarge(f"{cells} cells exceed the budget of {max_cells}; use at most {side} points per axis")
    half_span = 3 * design.pump.sigma if half_span is None else half_span
    w0 = design.omega0
    offsets = np.arange(n_points) - (n_points - 1) / 2
    step = 2 * half_span / (n_points - 1)
    axis = w0 + step * offsets
    i, j, k = np.meshgrid(offsets, offsets, offsets, indexing="ij", sparse=True)
    # pump detuning from integer index sums, so it is exactly constant on
    # planes of constant w_r + w_s + w_i
    detuning = (3 * w0 - design.omega_p) + step * (i + j + k)
    alpha = np.exp(-((detuning / design.pump.sigma) ** 2))
    values = alpha
    if kind != "PSA":
        w_r, w_s, w_i = np.broadcast_arrays(axis[:, None, None], axis[None, :, None], axis[None, None, :])
        phi = pm_function(_delta_k(design, w_r, w_s, w_i), design.length)
        values = {"PM": phi, "JSA": alpha * phi, "JSI": np.abs(alpha * phi) ** 2}[kind]
    else:
        values = np.broadcast_to(alpha, (n_points,) * 3).copy()
    meta = {
        "length_m": design.length,
        "sigma_rad_per_s": design.pump.sigma,
        "omega_p_rad_per_s": design.omega_p,
        "degenerate_omega_rad_per_s": w0,
        "step_rad_per_s": step,
    }
    return JointSpectrumGrid((axis, axis, axis), values, kind, meta)

"""Exact vector HE(1,m) modes of a silica rod surrounded by air.

Effective indices come from the full hybrid-mode characteristic equation.
For overlap integrals each mode is reduced to its dominant transverse
Cartesian component ``e_x``, which for an ``l = 1`` hybrid mode is

    e_x(r, phi) = f0(r) + f2(r) * cos(2 phi)

with ``f0`` built from J0/K0 and ``f2`` from J2/K2 (Snyder & Love field
tables). The profile is normalised so that the integral of ``e_x**2`` over
the transverse plane is one.
"""

from __future__ import annotations

import csv
import functools
from dataclasses import dataclass, field

import numpy as np
from scipy.constants import c
from scipy.optimize import brentq
from scipy.special import jn_zeros, jv, kve

from .dispersion import AIR, FUSED_SILICA, Material, Spectral, angular_frequency, refractive_index
from .quadrature import evanescent_edges, panel_nodes

__all__ = [
    "HE11",
    "HE12",
    "FiberSpec",
    "ModeLabel",
    "ModeProfile",
    "ModeSolution",
    "ModeSolverError",
    "NotGuidedError",
    "boundary_mismatch",
    "characteristic_residual",
    "cutoff_v",
    "group_slowness",
    "mode_field",
    "propagation_constant",
    "solve_mode",
    "write_profile_csv",
]

N_SCAN = 2000
GRID_POINTS = 2000
GRID_EXTENT = 8.0  # in core radii
POLE_LIMIT = 1e6
RESIDUAL_LIMIT = 1e-10


@dataclass(frozen=True)
class FiberSpec:
    """Step-index rod: ``core`` material of radius ``core_radius`` in ``cladding``."""

    core_radius: float
    length: float = 0.1
    core: Material = FUSED_SILICA
    cladding: Material = AIR

    def __post_init__(self):
        if not self.core_radius > 0:
            raise ValueError("core_radius must be positive")
        if not self.length > 0:
            raise ValueError("length must be positive")

    def indices(self, freq) -> tuple[float, float]:
        n1 = refractive_index(self.core, freq)
        n2 = refractive_index(self.cladding, freq)
        if not n1 > n2:
            raise ValueError("core index must exceed cladding index")
        return n1, n2

    def v_number(self, freq) -> float:
        omega = angular_frequency(freq)
        n1, n2 = self.indices(omega)
        return omega / c * self.core_radius * np.sqrt(n1**2 - n2**2)

    def with_radius(self, radius: float) -> "FiberSpec":
        return FiberSpec(radius, self.length, self.core, self.cladding)

    def with_length(self, length: float) -> "FiberSpec":
        return FiberSpec(self.core_radius, length, self.core, self.cladding)


@dataclass(frozen=True)
class ModeLabel:
    radial_order: int
    family: str = "HE"
    azimuthal_order: int = 1

    def __post_init__(self):
        if self.family != "HE" or self.azimuthal_order != 1:
            raise ValueError("only HE(1,m) modes are supported")
        if self.radial_order < 1:
            raise ValueError("radial order starts at 1")

    def __str__(self):
        return f"{self.family}{self.azimuthal_order}{self.radial_order}"


HE11 = ModeLabel(1)
HE12 = ModeLabel(2)


def cutoff_v(label: ModeLabel) -> float:
    """Nominal HE(1,m) cutoff V-number (0 for HE11, zeros of J1 otherwise).

    The exact cutoff of a high-contrast rod lies slightly above this value;
    between the two the solver reports :class:`ModeSolverError`.
    """
    if label.radial_order == 1:
        return 0.0
    return float(jn_zeros(1, label.radial_order - 1)[-1])


class NotGuidedError(ValueError):
    """Requested mode is below cutoff."""

    def __init__(self, label: ModeLabel, freq: float, v_number: float):
        self.label = label
        self.freq = freq
        self.v_number = v_number
        lam = 2 * np.pi * c / freq
        super().__init__(
            f"{label} not guided at {lam * 1e6:.6g} um: V = {v_number:.6g} "
            f"(cutoff {cutoff_v(label):.6g})"
        )


class ModeSolverError(RuntimeError):
    """No acceptable root bracket for a mode that should be guided."""

    def __init__(self, message: str, diagnostics: dict):
        self.diagnostics = diagnostics
        super().__init__(f"{message}; scan diagnostics: {diagnostics}")


def _k_ratio(w):
    # K1'(w) / (w K1(w)), computed with scaled Bessels to survive large w
    return -(kve(0, w) + kve(2, w)) / (2 * w * kve(1, w))


def _he_sides(u, v, n1, n2):
    """Left and right sides of the l = 1 HE characteristic equation."""
    w = np.sqrt(v * v - u * u)
    n_eff = np.sqrt(n1**2 - (n1**2 - n2**2) * (u / v) ** 2)
    kr = _k_ratio(w)
    inv = 1 / u**2 + 1 / w**2
    delta = (n1**2 - n2**2) / (2 * n1**2)
    root = np.sqrt(delta**2 * kr**2 + (n_eff / n1) ** 2 * inv**2)
    lhs = jv(0, u) / (u * jv(1, u))
    rhs = -(n1**2 + n2**2) / (2 * n1**2) * kr + 1 / u**2 - root
    return lhs, rhs


def characteristic_residual(u, v, n1, n2):
    """Scale-free residual |lhs - rhs| / (|lhs| + |rhs|) of the HE equation."""
    lhs, rhs = _he_sides(u, v, n1, n2)
    return np.abs(lhs - rhs) / (np.abs(lhs) + np.abs(rhs))


def _find_u_roots(v, n1, n2, n_scan=N_SCAN):
    # Uniform scan in u = a k0 sqrt(n1^2 - n_eff^2), equivalent to scanning
    # n_eff but with root spacing independent of V.
    u = v * (np.arange(n_scan) + 0.5) / n_scan
    # the 1/w^2 terms cancel as w -> 0, so the scan may run up to cutoff
    u = np.append(u, v * (1 - 1e-9))
    lhs, rhs = _he_sides(u, v, n1, n2)
    f = lhs - rhs
    flips = np.nonzero(np.sign(f[:-1]) * np.sign(f[1:]) < 0)[0]
    roots, rejected = [], 0
    g = lambda x: np.subtract(*_he_sides(x, v, n1, n2))
    for i in flips:
        if abs(f[i]) > POLE_LIMIT or abs(f[i + 1]) > POLE_LIMIT:
            rejected += 1
            continue
        root = brentq(g, u[i], u[i + 1], xtol=1e-15 * v, rtol=4 * np.finfo(float).eps, maxiter=200)
        if characteristic_residual(root, v, n1, n2) < RESIDUAL_LIMIT:
            roots.append(root)
        else:
            rejected += 1  # sign flip across a pole of J0/J1
    return roots, {"v_number": v, "scan_points": n_scan, "sign_changes": len(flips), "rejected": rejected}


@dataclass(frozen=True, eq=False)
class ModeProfile:
    """Normalised dominant transverse component of an HE(1,m) mode."""

    core_radius: float
    u: float
    w: float
    a1: float
    a2: float
    scale: float = 1.0

    def harmonics(self, r):
        """Return ``(f0, f2)``: the isotropic and cos(2 phi) radial parts."""
        r = np.asarray(r, dtype=float)
        rho = r / self.core_radius
        inside = rho < 1
        rho_in = np.where(inside, rho, 0.0)
        rho_out = np.where(inside, 1.0, rho)
        j1 = jv(1, self.u)
        k1 = kve(1, self.w)
        decay = np.exp(-self.w * (rho_out - 1))
        out_pref = self.u / self.w / k1 * decay
        f0 = np.where(inside, self.a1 * jv(0, self.u * rho_in) / j1,
                      out_pref * self.a1 * kve(0, self.w * rho_out))
        f2 = np.where(inside, self.a2 * jv(2, self.u * rho_in) / j1,
                      -out_pref * self.a2 * kve(2, self.w * rho_out))
        return self.scale * f0, self.scale * f2

    def __call__(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        r = np.hypot(x, y)
        f0, f2 = self.harmonics(r)
        cos2 = np.where(r > 0, (x * x - y * y) / np.where(r > 0, r * r, 1.0), 1.0)
        return f0 + f2 * cos2

    @property
    def knots(self) -> tuple[float, ...]:
        return (self.core_radius,)

    @property
    def decay_length(self) -> float:
        """1/e length of the evanescent amplitude outside the core."""
        return self.core_radius / self.w

    def extent(self, tol: float = 1e-12) -> float:
        """Radius beyond which the amplitude is below ``tol`` of its edge value."""
        return self.core_radius + self.decay_length * np.log(1 / tol)

    def quadrature(self, density: int = 1, tol: float = 1e-12, outer: float | None = None):
        """Radial nodes and 2 pi r-weighted weights covering the profile."""
        a = self.core_radius
        outer = self.extent(tol) if outer is None else outer
        edges = np.linspace(0.0, min(a, outer), 2 * density + 1)
        if outer > a:
            clad = evanescent_edges(a, a / 2, self.decay_length, outer)
            fine = [np.linspace(lo, hi, density + 1)[1:] for lo, hi in zip(clad[:-1], clad[1:])]
            edges = np.concatenate([edges, *fine])
        r, wts = panel_nodes(edges)
        return r, 2 * np.pi * r * wts

    def power(self, density: int = 1) -> float:
        """Integral of e_x**2 over the plane (azimuthal average taken analytically)."""
        r, wts = self.quadrature(density)
        f0, f2 = self.harmonics(r)
        return float(np.sum(wts * (f0**2 + 0.5 * f2**2)))


@dataclass(frozen=True, eq=False)
class ModeSolution:
    label: ModeLabel
    freq: Spectral
    fiber: FiberSpec
    n_eff: float
    beta: float
    u: float
    w: float
    v_number: float
    residual: float
    profile: ModeProfile
    radius: np.ndarray = field(repr=False)
    amplitude: np.ndarray = field(repr=False)
    amplitude_cos2phi: np.ndarray = field(repr=False)

    @property
    def n_core(self) -> float:
        return self.fiber.indices(self.freq)[0]

    @property
    def n_cladding(self) -> float:
        return self.fiber.indices(self.freq)[1]


def _field_coefficients(u, w, v):
    j1, k1 = jv(1, u), kve(1, w)
    b1 = (jv(0, u) - jv(2, u)) / (2 * u * j1)
    b2 = -(kve(0, w) + kve(2, w)) / (2 * w * k1)
    f2 = (v / (u * w)) ** 2 / (b1 + b2)
    return (f2 - 1) / 2, (f2 + 1) / 2


@functools.lru_cache(maxsize=4096)
def _solve(fiber: FiberSpec, omega: float, m: int):
    label = ModeLabel(m)
    n1, n2 = fiber.indices(omega)
    v = omega / c * fiber.core_radius * np.sqrt(n1**2 - n2**2)
    if v <= cutoff_v(label):
        raise NotGuidedError(label, omega, v)
    roots, diag = _find_u_roots(v, n1, n2)
    if len(roots) < m:
        raise ModeSolverError(f"found {len(roots)} HE(1,m) roots, need {m}", diag)
    u = roots[m - 1]
    w = np.sqrt(v * v - u * u)
    n_eff = np.sqrt(n1**2 - (n1**2 - n2**2) * (u / v) ** 2)
    a1, a2 = _field_coefficients(u, w, v)
    profile = ModeProfile(fiber.core_radius, u, w, a1, a2)
    # sign convention: positive on axis
    sign = np.sign(profile.harmonics(0.0)[0])
    profile = ModeProfile(fiber.core_radius, u, w, a1, a2, sign / np.sqrt(profile.power()))
    radius = np.linspace(0.0, GRID_EXTENT * fiber.core_radius, GRID_POINTS)
    f0, f2 = profile.harmonics(radius)
    return ModeSolution(
        label=label,
        freq=Spectral(omega),
        fiber=fiber,
        n_eff=float(n_eff),
        beta=float(n_eff * omega / c),
        u=float(u),
        w=float(w),
        v_number=float(v),
        residual=float(characteristic_residual(u, v, n1, n2)),
        profile=profile,
        radius=radius,
        amplitude=f0,
        amplitude_cos2phi=f2,
    )


def solve_mode(fiber: FiberSpec, freq, label: ModeLabel = HE11) -> ModeSolution:
    """Solve HE(1,m) at ``freq``; roots are counted from the largest n_eff.

    Raises :class:`NotGuidedError` below cutoff and :class:`ModeSolverError`
    when the scan does not produce enough clean brackets.
    """
    return _solve(fiber, float(angular_frequency(freq)), label.radial_order)


def propagation_constant(fiber: FiberSpec, label: ModeLabel, omega) -> np.ndarray | float:
    """beta(omega) in rad/m; vectorised over ``omega`` by repeated solves."""
    omega_arr = np.asarray(omega, dtype=float)
    out = np.array([solve_mode(fiber, om, label).beta for om in omega_arr.ravel()])
    return out.reshape(omega_arr.shape)[()]


def mode_field(mode: ModeSolution, x, y):
    """Normalised dominant transverse field at Cartesian points (metres)."""
    return mode.profile(x, y)


def group_slowness(fiber: FiberSpec, label: ModeLabel, freq, rel_step: float = 1e-5) -> float:
    """k'(omega) = d beta / d omega in s/m.

    Central difference at relative step ``rel_step`` combined with the
    half-step estimate by one Richardson extrapolation.
    """
    omega = float(angular_frequency(freq))

    def central(h):
        hw = h * omega
        b_plus = solve_mode(fiber, omega + hw, label).beta
        b_minus = solve_mode(fiber, omega - hw, label).beta
        return (b_plus - b_minus) / (2 * hw)

    d_h = central(rel_step)
    d_half = central(rel_step / 2)
    return (4 * d_half - d_h) / 3


def boundary_mismatch(mode: ModeSolution) -> dict[str, float]:
    """Relative jumps of E_phi, E_z and D_r across the core boundary."""
    p = mode.profile
    a = p.core_radius
    inner, outer = a * (1 - 1e-13), a * (1 + 1e-13)
    n1, n2 = mode.n_core, mode.n_cladding
    (f0i, f2i), (f0o, f2o) = p.harmonics(inner), p.harmonics(outer)
    # e_r ~ (f0 + f2) cos(phi), e_phi ~ -(f0 - f2) sin(phi)
    er_i, er_o = f0i + f2i, f0o + f2o
    ep_i, ep_o = f0i - f2i, f0o - f2o
    # e_z ~ (1/beta)(f0' + f2' + 2 f2 / r) cos(phi) on either side
    h = 1e-6 * a

    def ez(r0, side):
        rr = r0 + side * np.array([0.0, h, 2 * h])
        f0, f2 = p.harmonics(rr)
        d = side * (-3 * (f0 + f2)[0] + 4 * (f0 + f2)[1] - (f0 + f2)[2]) / (2 * h)
        return (d + 2 * f2[0] / r0) / mode.beta

    ez_i, ez_o = ez(inner, -1), ez(outer, +1)
    rel = lambda x, y: abs(x - y) / max(abs(x), abs(y))
    return {
        "e_phi": rel(ep_i, ep_o),
        "d_r": rel(n1**2 * er_i, n2**2 * er_o),
        "e_z": rel(ez_i, ez_o),
    }


def write_profile_csv(mode: ModeSolution, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["radius_m", "amplitude", "amplitude_cos2phi"])
        for r, a0, a2 in zip(mode.radius, mode.amplitude, mode.amplitude_cos2phi):
            writer.writerow([f"{r:.10e}", f"{a0:.12e}", f"{a2:.12e}"])

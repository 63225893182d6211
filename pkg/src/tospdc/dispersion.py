"""Material refractive-index models and spectral unit handling.

Fused silica uses the three-term Malitson Sellmeier fit (20 degC). Air is
treated as an exact n = 1 medium. All frequencies are carried internally as
angular frequency in rad/s; wavelengths only appear at the API boundary.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.constants import c

__all__ = [
    "AIR",
    "FUSED_SILICA",
    "DomainError",
    "Material",
    "MaterialKind",
    "Spectral",
    "angular_frequency",
    "index_derivative",
    "refractive_index",
]


class DomainError(ValueError):
    """Frequency outside the validity window of a material model."""


class MaterialKind(enum.Enum):
    FUSED_SILICA = "fused_silica"
    AIR = "air"


@dataclass(frozen=True)
class Material:
    """An isotropic dielectric described by Sellmeier terms.

    ``sellmeier_terms`` holds ``(strength, resonance_wavelength_m)`` pairs.
    An empty tuple means a dispersionless medium with n = 1.
    """

    kind: MaterialKind
    sellmeier_terms: tuple[tuple[float, float], ...] = ()
    valid_wavelengths: tuple[float, float] = (0.0, np.inf)

    def __post_init__(self):
        if self.kind is MaterialKind.FUSED_SILICA:
            if len(self.sellmeier_terms) != 3:
                raise ValueError("fused silica needs exactly three Sellmeier terms")
            for strength, resonance in self.sellmeier_terms:
                if strength <= 0 or resonance <= 0:
                    raise ValueError("Sellmeier strengths and resonances must be positive")
        if self.kind is MaterialKind.AIR and self.sellmeier_terms:
            raise ValueError("air is modelled without Sellmeier terms")

    @property
    def name(self) -> str:
        return self.kind.value


FUSED_SILICA = Material(
    MaterialKind.FUSED_SILICA,
    (
        (0.6961663, 0.0684043e-6),
        (0.4079426, 0.1162414e-6),
        (0.8974794, 9.896161e-6),
    ),
    valid_wavelengths=(0.21e-6, 6.7e-6),
)

AIR = Material(MaterialKind.AIR)


@dataclass(frozen=True, order=True)
class Spectral:
    """A positive optical frequency, stored as angular frequency (rad/s)."""

    value: float

    def __post_init__(self):
        if not np.isfinite(self.value) or self.value <= 0:
            raise ValueError(f"angular frequency must be positive, got {self.value!r}")

    @classmethod
    def from_wavelength(cls, wavelength: float) -> "Spectral":
        """Build from a vacuum wavelength in metres."""
        return cls(2 * np.pi * c / wavelength)

    @classmethod
    def from_hz(cls, frequency: float) -> "Spectral":
        return cls(2 * np.pi * frequency)

    @property
    def wavelength(self) -> float:
        return 2 * np.pi * c / self.value

    @property
    def hz(self) -> float:
        return self.value / (2 * np.pi)

    def __mul__(self, factor: float) -> "Spectral":
        return Spectral(self.value * factor)

    __rmul__ = __mul__

    def __truediv__(self, factor: float) -> "Spectral":
        return Spectral(self.value / factor)


def angular_frequency(freq) -> np.ndarray | float:
    """Accept a :class:`Spectral`, a float or an array of rad/s values."""
    if isinstance(freq, Spectral):
        return freq.value
    return freq


def _check_window(material: Material, omega):
    lo, hi = material.valid_wavelengths
    lam = 2 * np.pi * c / np.asarray(omega, dtype=float)
    if np.any(~np.isfinite(lam)) or np.any(lam < lo) or np.any(lam > hi):
        raise DomainError(
            f"{material.name} index model valid for vacuum wavelengths "
            f"{lo * 1e6:g}-{hi * 1e6:g} um; got "
            f"{np.min(lam) * 1e6:.6g}-{np.max(lam) * 1e6:.6g} um"
        )


def _sellmeier_n2(material: Material, omega):
    # wavelength in metres; resonances are stored in metres as well
    lam2 = (2 * np.pi * c / omega) ** 2
    n2 = 1.0
    for strength, resonance in material.sellmeier_terms:
        n2 = n2 + strength * lam2 / (lam2 - resonance**2)
    return n2


def refractive_index(material: Material, freq):
    """Phase index n(omega) of ``material``.

    ``freq`` may be a :class:`Spectral` or rad/s values (scalar or array).
    Raises :class:`DomainError` outside the model's validity window.
    """
    omega = angular_frequency(freq)
    if not material.sellmeier_terms:
        if np.ndim(omega):
            return np.ones(np.shape(omega))
        return 1.0
    _check_window(material, omega)
    return np.sqrt(_sellmeier_n2(material, np.asarray(omega, dtype=float)))[()]


def _analytic_dn_domega(material: Material, omega):
    lam = 2 * np.pi * c / omega
    lam2 = lam**2
    n = np.sqrt(_sellmeier_n2(material, omega))
    # d(n^2)/d(lam) summed over terms, then chain rule to omega
    dn2_dlam = 0.0
    for strength, resonance in material.sellmeier_terms:
        dn2_dlam = dn2_dlam - 2 * strength * resonance**2 * lam / (lam2 - resonance**2) ** 2
    dlam_domega = -lam / omega
    return dn2_dlam / (2 * n) * dlam_domega


def index_derivative(material: Material, freq, rel_step: float = 1e-6, analytic: bool = False):
    """dn/domega in s/rad.

    Central difference with step ``rel_step * omega`` by default; pass
    ``analytic=True`` for the closed-form Sellmeier derivative.
    """
    omega = angular_frequency(freq)
    if not material.sellmeier_terms:
        if np.ndim(omega):
            return np.zeros(np.shape(omega))
        return 0.0
    omega = np.asarray(omega, dtype=float)
    h = rel_step * omega
    _check_window(material, omega - h)
    _check_window(material, omega + h)
    if analytic:
        return _analytic_dn_domega(material, omega)[()]
    # difference of n^2 assembled term by term so the subtraction never
    # cancels catastrophically at small steps
    lam_p = 2 * np.pi * c / (omega + h)
    lam_m = 2 * np.pi * c / (omega - h)
    dlam2 = (lam_m - lam_p) * (lam_m + lam_p)  # lam_m**2 - lam_p**2 > 0
    dn2 = 0.0
    for strength, resonance in material.sellmeier_terms:
        r2 = resonance**2
        dn2 = dn2 + strength * r2 * dlam2 / ((lam_p**2 - r2) * (lam_m**2 - r2))
    n_plus = np.sqrt(_sellmeier_n2(material, omega + h))
    n_minus = np.sqrt(_sellmeier_n2(material, omega - h))
    return (dn2 / (n_plus + n_minus) / (2 * h))[()]

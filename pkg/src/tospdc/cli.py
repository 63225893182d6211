"""Command-line front end.

Every subcommand writes a CSV (header row first) and a sibling JSON manifest
with the same stem. Configuration comes from an optional TOML file with
``[design]``, ``[pump]`` and ``[numerics]`` tables; command-line flags win.

Exit codes: 0 ok, 2 configuration error, 3 no phasematching / mode not
guided, 4 rate quadrature did not converge (outputs are still written).
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
from scipy.constants import c

from . import __version__
from ._parallel import parallel_map
from .dispersion import FUSED_SILICA, Spectral
from .fibermodes import HE11, HE12, FiberSpec, ModeSolverError, NotGuidedError, solve_mode
from .nonlinear import CHI3_SILICA, gaussian_coupling, nonlinear_set
from .phasematch import FWHM_FACTOR, NoPhasematchError, find_phasematch_radius, find_phasematch_wavelength, sigma_for_duration, sigma_from_ghz_label
from .triplets import QuadratureOptions, design_point, figure2_design, jsi_grid, marginal_spectrum, triplet_rate

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

EXIT_OK, EXIT_CONFIG, EXIT_NO_PHASEMATCH, EXIT_QUADRATURE = 0, 2, 3, 4
SUBCOMMANDS = ("phasematch", "modes", "gamma-scan", "coupling-scan", "jsi", "rate", "spectrum")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    """Resolved inputs for one run; every physical field names its unit."""

    wavelength_um: float | None = 1.596
    radius_um: float | None = None
    length_cm: float = 10.0
    avg_power_mw: float = 200.0
    rep_rate_mhz: float = 100.0
    sigma: str = "100ps"
    chi3_m2_per_V2: float = CHI3_SILICA
    numerics: dict = field(default_factory=dict)
    out: str | None = None
    # subcommand-specific
    lengths_cm: list = field(default_factory=list)
    scan_um: list = field(default_factory=list)
    mode: str = "HE12"
    mode_wavelength_um: float | None = None
    preset: str = "figure2"
    n_points: int = 41
    kind: str = "JSI"

    def validate(self):
        if (self.wavelength_um is None) == (self.radius_um is None):
            raise ConfigError("exactly one of wavelength_um and radius_um must be set")
        for name in ("wavelength_um", "radius_um"):
            value = getattr(self, name)
            if value is not None and not value > 0:
                raise ConfigError(f"{name} must be positive")
        for name in ("length_cm", "avg_power_mw", "rep_rate_mhz", "chi3_m2_per_V2"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive")
        if any(not v > 0 for v in self.lengths_cm):
            raise ConfigError("lengths must be positive")
        if self.scan_um and (len(self.scan_um) != 3 or not 0 < self.scan_um[0] < self.scan_um[1] or int(self.scan_um[2]) < 1):
            raise ConfigError("scan needs START STOP COUNT with 0 < START < STOP and COUNT >= 1")
        if self.mode not in ("HE11", "HE12"):
            raise ConfigError("mode must be HE11 or HE12")
        if self.preset not in ("figure2", "design"):
            raise ConfigError("preset must be figure2 or design")
        if self.n_points < 2:
            raise ConfigError("n_points must be at least 2")
        self.sigma_rad_per_s()
        self.quadrature()

    def sigma_rad_per_s(self) -> float:
        return parse_sigma(self.sigma)

    def quadrature(self) -> QuadratureOptions:
        allowed = {"n_zeros", "n_t", "n_theta", "order", "sigma_window"}
        extra = set(self.numerics) - allowed - {"n_points"}
        if extra:
            raise ConfigError(f"unknown numerics keys: {sorted(extra)}")
        try:
            return QuadratureOptions(**{k: v for k, v in self.numerics.items() if k in allowed})
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc


def parse_sigma(text) -> float:
    """Bandwidth in rad/s from ``'23.5GHz_paper'``, ``'100ps'`` or a plain rad/s number."""
    if isinstance(text, (int, float)):
        value = float(text)
    else:
        s = str(text).strip()
        try:
            if s.endswith("GHz_paper"):
                value = sigma_from_ghz_label(float(s[: -len("GHz_paper")]))
            elif s.endswith("ps"):
                value = sigma_for_duration(float(s[:-2]) * 1e-12)
            else:
                value = float(s)
        except ValueError:
            raise ConfigError(f"cannot parse sigma {text!r}") from None
    if not value > 0:
        raise ConfigError("sigma must be positive")
    return value


_FILE_KEYS = {
    "design": {"wavelength_um", "radius_um", "length_cm", "chi3_m2_per_V2"},
    "pump": {"avg_power_mw", "rep_rate_mhz", "sigma"},
}


def load_config_file(path) -> dict:
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    values = {}
    for section, keys in _FILE_KEYS.items():
        table = data.get(section, {})
        unknown = set(table) - keys
        if unknown:
            raise ConfigError(f"unknown keys in [{section}]: {sorted(unknown)}")
        values.update(table)
    if "numerics" in data:
        values["numerics"] = dict(data["numerics"])
    unknown_sections = set(data) - {"design", "pump", "numerics"}
    if unknown_sections:
        raise ConfigError(f"unknown sections: {sorted(unknown_sections)}")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tospdc", description="Photon-triplet fiber source design tools")
    parser.add_argument("--version", action="version", version=f"tospdc {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML file with [design], [pump], [numerics]")
    common.add_argument("--out", help="output CSV path (manifest goes next to it)")
    common.add_argument("--wavelength-um", type=float, help="degenerate triplet wavelength")
    common.add_argument("--radius-um", type=float, help="fiber radius (wavelength is then solved for)")
    common.add_argument("--chi3", type=float, dest="chi3_m2_per_V2", help="chi3 in m^2/V^2")
    pump = argparse.ArgumentParser(add_help=False)
    pump.add_argument("--avg-power-mw", type=float)
    pump.add_argument("--rep-rate-mhz", type=float)
    pump.add_argument("--sigma", help="'23.5GHz_paper', '100ps' or rad/s")

    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("phasematch", parents=[common], help="phasematching radius vs wavelength")
    p.add_argument("--scan", nargs=3, type=float, metavar=("START_UM", "STOP_UM", "COUNT"), dest="scan_um")

    p = sub.add_parser("modes", parents=[common], help="export a mode profile")
    p.add_argument("--mode", choices=["HE11", "HE12"])
    p.add_argument("--mode-wavelength-um", type=float, help="defaults to the pump (HE12) or triplet (HE11) wavelength")

    p = sub.add_parser("gamma-scan", parents=[common], help="effective area and gamma vs wavelength")
    p.add_argument("--scan", nargs=3, type=float, metavar=("START_UM", "STOP_UM", "COUNT"), dest="scan_um")

    p = sub.add_parser("coupling-scan", parents=[common], help="Gaussian coupling into HE12 vs waist")
    p.add_argument("--scan", nargs=3, type=float, metavar=("START_UM", "STOP_UM", "COUNT"), dest="scan_um")

    p = sub.add_parser("jsi", parents=[common, pump], help="joint spectrum on a 3-D grid")
    p.add_argument("--preset", choices=["figure2", "design"])
    p.add_argument("--n-points", type=int)
    p.add_argument("--kind", choices=["PM", "PSA", "JSA", "JSI"])
    p.add_argument("--length-cm", type=float)

    p = sub.add_parser("rate", parents=[common, pump], help="triplet generation rate")
    p.add_argument("--length-cm", type=float, nargs="+", dest="lengths_cm")

    p = sub.add_parser("spectrum", parents=[common, pump], help="single-photon marginal spectrum")
    p.add_argument("--length-cm", type=float)
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    file_values = load_config_file(args.config) if getattr(args, "config", None) else {}
    flags = {k: v for k, v in vars(args).items() if k not in ("config", "command") and v is not None}
    for source in (file_values, flags):
        if source.get("wavelength_um") is not None and source.get("radius_um") is not None:
            raise ConfigError("exactly one of wavelength_um and radius_um must be set")
    values = dict(file_values)
    # the independent variable given last wins
    for source in (file_values, flags):
        if "radius_um" in source:
            values["wavelength_um"] = None
        elif "wavelength_um" in source:
            values["radius_um"] = None
    values.update(flags)
    if "lengths_cm" in values:
        values["length_cm"] = values["lengths_cm"][-1]
    try:
        cfg = RunConfig(**values)
        cfg.validate()
    except TypeError as exc:
        raise ConfigError(f"bad value type: {exc}") from exc
    return cfg


def _design(cfg: RunConfig, length_cm: float | None = None):
    return design_point(
        wavelength=None if cfg.wavelength_um is None else cfg.wavelength_um * 1e-6,
        radius=None if cfg.radius_um is None else cfg.radius_um * 1e-6,
        length=(length_cm or cfg.length_cm) * 1e-2,
        avg_power=cfg.avg_power_mw * 1e-3,
        rep_rate=cfg.rep_rate_mhz * 1e6,
        sigma=cfg.sigma_rad_per_s(),
        chi3=cfg.chi3_m2_per_V2,
    )


def _fmt(x) -> str:
    return f"{float(x) + 0.0:.10g}"  # no negative zeros


def _scan(cfg: RunConfig, default):
    start, stop, count = cfg.scan_um or default
    return np.linspace(start, stop, int(count))


def _gamma_row(wavelength_um, chi3):
    pm = find_phasematch_radius(Spectral.from_wavelength(wavelength_um * 1e-6))
    fiber = FiberSpec(pm.fiber_radius)
    coeffs = nonlinear_set(solve_mode(fiber, pm.pump_freq, HE12), solve_mode(fiber, pm.degenerate_freq, HE11), chi3=chi3)
    return [wavelength_um, pm.fiber_radius * 1e6, coeffs.a_eff * 1e12, coeffs.gamma * 1e3]


def _phasematch_row(wavelength_um):
    pm = find_phasematch_radius(Spectral.from_wavelength(wavelength_um * 1e-6))
    return [wavelength_um, pm.fiber_radius * 1e6, pm.residual]


def _rows_phasematch(cfg):
    if cfg.scan_um:
        wavelengths = [float(w) for w in _scan(cfg, None)]
    elif cfg.wavelength_um is not None:
        wavelengths = [cfg.wavelength_um]
    else:
        pm = find_phasematch_wavelength(FiberSpec(cfg.radius_um * 1e-6))
        return _PM_HEADER, [[pm.degenerate_freq.wavelength * 1e6, pm.fiber_radius * 1e6, pm.residual]], {}
    return _PM_HEADER, parallel_map(_phasematch_row, wavelengths), {}


_PM_HEADER = ["wavelength_um", "radius_um", "residual_rad_per_m"]


def _rows_modes(cfg):
    design = _design(cfg)
    label = HE12 if cfg.mode == "HE12" else HE11
    if cfg.mode_wavelength_um:
        freq = Spectral.from_wavelength(cfg.mode_wavelength_um * 1e-6)
    else:
        freq = design.phasematch.pump_freq if label == HE12 else design.phasematch.degenerate_freq
    mode = solve_mode(design.fiber, freq, label)
    rows = [[r, a0, a2] for r, a0, a2 in zip(mode.radius, mode.amplitude, mode.amplitude_cos2phi)]
    meta = {
        "mode": str(label),
        "mode_wavelength_um": freq.wavelength * 1e6,
        "n_eff": mode.n_eff,
        "v_number": mode.v_number,
        "radius_um": design.fiber.core_radius * 1e6,
        "amplitude": "f0(r), azimuthally uniform part of e_x",
        "amplitude_cos2phi": "f2(r), coefficient of cos(2 phi) in e_x",
    }
    return ["radius_m", "amplitude", "amplitude_cos2phi"], rows, meta


def _rows_gamma(cfg):
    wavelengths = [float(w) for w in _scan(cfg, (1.2, 1.8, 13))]
    rows = parallel_map(_gamma_row, wavelengths, cfg.chi3_m2_per_V2)
    return ["wavelength_um", "radius_um", "a_eff_um2", "gamma_per_W_km"], rows, {}


def _rows_coupling(cfg):
    design = _design(cfg)
    pump_mode = solve_mode(design.fiber, design.phasematch.pump_freq, HE12)
    waists = _scan(cfg, (0.2, 2.0, 91))
    rows = [[w, gaussian_coupling(pump_mode, w * 1e-6)] for w in waists]
    meta = {"radius_um": design.fiber.core_radius * 1e6, "coupling": "power fraction |<g|f_p>|^2"}
    return ["waist_um", "coupling_fraction"], rows, meta


def _rows_jsi(cfg):
    design = _design(cfg)
    if cfg.preset == "figure2":
        design = figure2_design(design)
    grid = jsi_grid(design, n_points=cfg.n_points, kind=cfg.kind)
    ax = grid.axes[0]
    values = grid.values
    rows = []
    for i, wr in enumerate(ax):
        for j, ws in enumerate(ax):
            for k, wi in enumerate(ax):
                v = values[i, j, k]
                rows.append([wr, ws, wi, v.real if np.iscomplexobj(values) else v] + ([v.imag] if np.iscomplexobj(values) else []))
    header = ["w_r", "w_s", "w_i", "value"] + (["value_imag"] if np.iscomplexobj(values) else [])
    meta = {
        "preset": cfg.preset,
        "kind": grid.kind,
        "axes": {"w_r": _axis_meta(ax), "w_s": _axis_meta(ax), "w_i": _axis_meta(ax)},
        "units": {"w_r": "rad/s", "w_s": "rad/s", "w_i": "rad/s"},
        **grid.metadata,
    }
    if cfg.preset == "figure2":
        meta["preset_note"] = "L = 0.6 um and sigma = 5.1e12 rad/s taken as printed; 0.6 mm is a plausible alternative reading"
    return header, rows, meta


def _axis_meta(ax):
    return {"start": float(ax[0]), "stop": float(ax[-1]), "points": int(ax.size), "step": float(ax[1] - ax[0])}


def _rows_rate(cfg):
    lengths = cfg.lengths_cm or [cfg.length_cm]
    design = _design(cfg, lengths[0])
    opts = cfg.quadrature()
    rows, converged, details = [], True, []
    for length in lengths:
        result = triplet_rate(design.with_length(length * 1e-2), opts)
        converged &= bool(result.converged)
        rows.append([length, result.triplets_per_second, result.quadrature_error])
        details.append({k: float(v) if isinstance(v, (float, np.floating)) else v for k, v in result.integration_metadata.items()})
    meta = {"converged": converged, "quadrature": details}
    return ["length_cm", "rate_per_s", "error_per_s"], rows, meta


def _rows_spectrum(cfg):
    design = _design(cfg)
    omega, density = marginal_spectrum(design, cfg.quadrature())
    lam = 2 * np.pi * c / omega
    per_um = density * omega / lam * 1e-6  # |d omega / d lambda| = omega / lambda
    order = np.argsort(lam)
    rows = [[lam[i] * 1e6, per_um[i]] for i in order]
    return ["wavelength_um", "density"], rows, {"density_units": "triplets per second per um"}


_HANDLERS = {
    "phasematch": _rows_phasematch,
    "modes": _rows_modes,
    "gamma-scan": _rows_gamma,
    "coupling-scan": _rows_coupling,
    "jsi": _rows_jsi,
    "rate": _rows_rate,
    "spectrum": _rows_spectrum,
}


def _conventions(cfg: RunConfig) -> dict:
    return {
        "tool": "tospdc",
        "version": __version__,
        "chi3_m2_per_V2": cfg.chi3_m2_per_V2,
        "sellmeier": {"model": "Malitson fused silica, 20 degC", "terms": [list(t) for t in FUSED_SILICA.sellmeier_terms]},
        "cladding": "air, n = 1",
        "sigma_rad_per_s": cfg.sigma_rad_per_s(),
        "sigma_convention": f"alpha = exp[-(w - w_p)^2 / sigma^2]; t_fwhm = {FWHM_FACTOR:.6f} / sigma; 'GHz_paper' means 1e9 rad/s",
        "peak_power_convention": "P = avg_power / (rep_rate * t_fwhm)",
        "field_reduction": "dominant transverse component e_x of the exact HE mode",
        "gamma_convention": "bulk silica index at the pump, overlap over the silica core",
        "rate_indices": "HE12 effective index for n_p, HE11 effective indices in the integrand",
        "tolerances": {
            "phasematch_residual_rad_per_m": 1e-4,
            "mode_root_residual": 1e-10,
            "quadrature": asdict(cfg.quadrature()),
        },
    }


def _render_csv(header, rows) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue().encode()


def run(subcommand: str, cfg: RunConfig) -> int:
    """Execute one subcommand and write its CSV plus manifest. Returns the exit status."""
    if subcommand not in _HANDLERS:
        raise ConfigError(f"unknown subcommand {subcommand!r}")
    header, rows, meta = _HANDLERS[subcommand](cfg)
    payload = _render_csv(header, rows)
    out = Path(cfg.out or f"{subcommand}.csv")
    config_record = {k: v for k, v in asdict(cfg).items() if k != "out"}
    config_hash = hashlib.sha256(json.dumps(config_record, sort_keys=True).encode()).hexdigest()
    manifest = {
        "subcommand": subcommand,
        "config": config_record,
        "config_sha256": config_hash,
        "output": out.name,
        "output_sha256": hashlib.sha256(payload).hexdigest(),
        "conventions": _conventions(cfg),
        "details": meta,
    }
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_bytes(payload)
    out.with_suffix(".json").write_text(json.dumps(manifest, indent=2, sort_keys=True, default=float) + "\n")
    if subcommand == "rate" and not meta.get("converged", True):
        return EXIT_QUADRATURE
    return EXIT_OK


def _fail(code: int, kind: str, reason: str) -> int:
    print(json.dumps({"error": kind, "exit_code": code, "reason": reason}), file=sys.stderr)
    return code


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        return run(args.command, cfg)
    except ConfigError as exc:
        return _fail(EXIT_CONFIG, "config", str(exc))
    except (NoPhasematchError, NotGuidedError, ModeSolverError) as exc:
        return _fail(EXIT_NO_PHASEMATCH, "no-phasematch", str(exc).replace("\n", " "))


if __name__ == "__main__":
    sys.exit(main())

"""JSON run configuration and CSV/JSON/SVG result files."""

from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import jsonschema

from .params import (
    LaserInput,
    MaterialInput,
    ParameterError,
    SimulationConfig,
    SystemParams,
    build_params,
)
from .smbe import PulseShape

FORMATS = ("csv", "json", "svg")

DEFAULTS = {
    "laser": {
        "mean_photon_number": 1e4,
        "pulse_fwhm_cycles": 3.0,
    },
    "material": {
        "carrier_number": 1.0,
    },
    "simulation": {
        "harmonic_cutoff": 9,
        "grid_points": 2048,
        "grid_halfwidth_sigmas": 8.0,
        "omega_samples": 2201,
        "omega_min_over_wl": 0.5,
        "omega_max_over_wl": 11.5,
        "interaction_cycles": 3.0,
        "envelope": "cos2",
        "fwhm_cycles": 3.0,
        "total_cycles": 8.0,
        "samples_per_cycle": 256,
        "n0_override": None,
    },
    "output": {
        "directory": "out",
        "formats": ["csv", "svg"],
    },
}

_pos = {"type": "number", "exclusiveMinimum": 0}

SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["laser", "material"],
    "properties": {
        "laser": {
            "type": "object",
            "additionalProperties": False,
            "required": ["wavelength_um", "intensity_W_cm2"],
            "properties": {
                "wavelength_um": _pos,
                "intensity_W_cm2": {"type": "number", "minimum": 0},
                "mean_photon_number": {"type": "number", "minimum": 1},
                "pulse_fwhm_cycles": _pos,
            },
        },
        "material": {
            "type": "object",
            "additionalProperties": False,
            "required": ["lattice_constant_angstrom", "band_halfwidth_eV"],
            "properties": {
                "lattice_constant_angstrom": _pos,
                "band_halfwidth_eV": _pos,
                "carrier_number": {"type": "number", "minimum": 0},
            },
        },
        "simulation": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "harmonic_cutoff": {"type": "integer", "minimum": 2},
                "grid_points": {"type": "integer", "minimum": 16},
                "grid_halfwidth_sigmas": _pos,
                "omega_samples": {"type": "integer", "minimum": 2},
                "omega_min_over_wl": {"type": "number", "minimum": 0},
                "omega_max_over_wl": _pos,
                "interaction_cycles": _pos,
                "envelope": {"enum": ["flat", "cos2", "gaussian"]},
                "fwhm_cycles": _pos,
                "total_cycles": _pos,
                "samples_per_cycle": {"type": "integer", "minimum": 64},
                "n0_override": {"type": ["number", "null"], "minimum": 1},
            },
        },
        "output": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "directory": {"type": "string", "minLength": 1},
                "formats": {
                    "type": "array",
                    "items": {"enum": list(FORMATS)},
                    "uniqueItems": True,
                },
            },
        },
    },
}


class ConfigError(ValueError):
    """Malformed, schema-violating or physically invalid configuration."""


@dataclass(frozen=True)
class SimulationSettings:
    harmonic_cutoff: int
    grid_points: int
    grid_halfwidth_sigmas: float
    omega_samples: int
    omega_min_over_wl: float
    omega_max_over_wl: float
    interaction_cycles: float
    envelope: str
    fwhm_cycles: float
    total_cycles: float
    samples_per_cycle: int
    n0_override: float | None


@dataclass(frozen=True)
class OutputSettings:
    directory: Path
    formats: tuple[str, ...]


@dataclass(frozen=True)
class RunConfig:
    laser: LaserInput
    material: MaterialInput
    simulation: SimulationSettings
    output: OutputSettings
    resolved: dict

    def system_params(self) -> SystemParams:
        s = self.simulation
        sim = SimulationConfig(
            harmonic_cutoff=s.harmonic_cutoff,
            interaction_cycles=s.interaction_cycles,
            envelope=s.envelope,
            fwhm_cycles=s.fwhm_cycles,
            n0_override=s.n0_override,
        )
        return build_params(self.laser, self.material, sim)

    def pulse(self) -> PulseShape:
        s = self.simulation
        return PulseShape(s.envelope, s.fwhm_cycles, s.total_cycles, s.samples_per_cycle)

    def with_output(self, directory: str | None = None,
                    formats: Sequence[str] | None = None) -> "RunConfig":
        resolved = copy.deepcopy(self.resolved)
        if directory is not None:
            resolved["output"]["directory"] = str(directory)
        if formats:
            resolved["output"]["formats"] = list(dict.fromkeys(formats))
        return _from_resolved(resolved)


def _path(error: jsonschema.ValidationError) -> str:
    parts = [str(p) for p in error.absolute_path]
    return ".".join(parts) if parts else "<root>"


def _merge_defaults(doc: dict) -> dict:
    resolved = copy.deepcopy(DEFAULTS)
    for section, values in doc.items():
        resolved.setdefault(section, {}).update(values)
    return resolved


def _from_resolved(resolved: dict) -> RunConfig:
    lz, mt, sm, out = (resolved[k] for k in ("laser", "material", "simulation", "output"))
    try:
        laser = LaserInput(
            wavelength_um=float(lz["wavelength_um"]),
            peak_intensity_w_cm2=float(lz["intensity_W_cm2"]),
            mean_photon_number=float(lz["mean_photon_number"]),
            pulse_fwhm_cycles=float(lz["pulse_fwhm_cycles"]),
        )
        material = MaterialInput(
            lattice_constant_angstrom=float(mt["lattice_constant_angstrom"]),
            band_halfwidth_ev=float(mt["band_halfwidth_eV"]),
            carrier_number=float(mt["carrier_number"]),
        )
        sim = SimulationSettings(**sm)
        if not sim.omega_min_over_wl < sim.omega_max_over_wl:
            raise ParameterError("simulation.omega_min_over_wl must be < omega_max_over_wl")
        # validate the pulse invariants eagerly
        PulseShape(sim.envelope, sim.fwhm_cycles, sim.total_cycles, sim.samples_per_cycle)
    except ParameterError as exc:
        raise ConfigError(str(exc)) from exc
    output = OutputSettings(Path(out["directory"]), tuple(out["formats"]))
    return RunConfig(laser, material, sim, output, resolved)


def parse_config(text: str) -> RunConfig:
    """Validate a JSON document and fill every omitted field with its default."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON: {exc}") from exc
    validator = jsonschema.Draft7Validator(SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        msg = "; ".join(f"{_path(e)}: {e.message}" for e in errors)
        raise ConfigError(f"schema violation: {msg}")
    return _from_resolved(_merge_defaults(doc))


def load_config(path: str | Path) -> RunConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text)


def format_value(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (int,)) and not isinstance(x, bool):
        return str(x)
    x = float(x)
    if math.isnan(x):
        return "nan"
    return f"{x:.17g}"


def _json_value(x):
    if isinstance(x, str) or isinstance(x, int):
        return x
    x = float(x)
    return None if math.isnan(x) or math.isinf(x) else x


def write_table(directory: Path, name: str, columns: Sequence[str], rows: Sequence[Sequence],
                config: RunConfig) -> list[Path]:
    """Write ``name``.csv (+ config sidecar) and/or ``name``.json per configured formats."""
    written = []
    fmts = config.output.formats
    try:
        directory.mkdir(parents=True, exist_ok=True)
        if "csv" in fmts:
            path = directory / f"{name}.csv"
            lines = [",".join(columns)]
            lines += [",".join(format_value(v) for v in row) for row in rows]
            path.write_text("\n".join(lines) + "\n", encoding="utf-8")
            sidecar = directory / f"{name}.config.json"
            sidecar.write_text(_dump(config.resolved), encoding="utf-8")
            written += [path, sidecar]
        if "json" in fmts:
            path = directory / f"{name}.json"
            doc = {
                "columns": list(columns),
                "rows": [[_json_value(v) for v in row] for row in rows],
                "config": config.resolved,
            }
            path.write_text(_dump(doc), encoding="utf-8")
            written.append(path)
    except OSError as exc:
        raise OSError(f"cannot write results to {directory}: {exc}") from exc
    return written


def _dump(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, default=str) + "\n"


SVG_COLORS = ("#c0392b", "#2c6fbb", "#27ae60", "#8e44ad")


def svg_line_plot(series: Sequence[tuple[Sequence[float], Sequence[float], str]], *,
                  title: str, xlabel: str, ylabel: str, logx: bool = False,
                  logy: bool = True, floor_decades: float = 12.0,
                  width: int = 720, height: int = 440) -> str:
    """Minimal polyline chart. Non-positive values are clipped on log axes."""
    left, right, top, bottom = 80, 20, 40, 60
    pw, ph = width - left - right, height - top - bottom

    def tx(v):
        return [math.log10(x) if logx else x for x in v]

    all_y = [y for _, ys, _ in series for y in ys if (y > 0 or not logy) and math.isfinite(y)]
    ymax = max(all_y) if all_y else 1.0
    if logy:
        ymax_l = math.log10(ymax)
        ymin_l = max(math.log10(min(all_y)), ymax_l - floor_decades) if all_y else ymax_l - 1

        def ty(v):
            return [max(math.log10(y), ymin_l) if y > 0 else ymin_l for y in v]
        y0, y1 = ymin_l, ymax_l
    else:
        y0, y1 = min(all_y), ymax

        def ty(v):
            return list(v)
    xs_all = [x for xs, _, _ in series for x in tx(xs)]
    x0, x1 = min(xs_all), max(xs_all)
    if x1 == x0:
        x1 = x0 + 1
    if y1 == y0:
        y1 = y0 + 1

    def px(x):
        return left + (x - x0) / (x1 - x0) * pw

    def py(y):
        return top + (1 - (y - y0) / (y1 - y0)) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
        f'<text x="{width / 2:.1f}" y="24" text-anchor="middle" font-size="16">{title}</text>',
        f'<text x="{left + pw / 2:.1f}" y="{height - 15}" text-anchor="middle" font-size="13">{xlabel}</text>',
        f'<text x="18" y="{top + ph / 2:.1f}" text-anchor="middle" font-size="13" '
        f'transform="rotate(-90 18 {top + ph / 2:.1f})">{ylabel}</text>',
    ]
    for k in range(5):
        xv = x0 + (x1 - x0) * k / 4
        yv = y0 + (y1 - y0) * k / 4
        xl = f"1e{xv:.1f}" if logx else f"{xv:.3g}"
        yl = f"1e{yv:.1f}" if logy else f"{yv:.3g}"
        out.append(f'<text x="{px(xv):.1f}" y="{top + ph + 18}" text-anchor="middle" font-size="11">{xl}</text>')
        out.append(f'<text x="{left - 6}" y="{py(yv) + 4:.1f}" text-anchor="end" font-size="11">{yl}</text>')
    for i, (xs, ys, label) in enumerate(series):
        color = SVG_COLORS[i % len(SVG_COLORS)]
        pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(tx(xs), ty(ys)))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.2" points="{pts}"/>')
        out.append(f'<text x="{left + pw - 10}" y="{top + 18 + 16 * i}" text-anchor="end" '
                   f'font-size="12" fill="{color}">{label}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(directory: Path, name: str, svg: str, config: RunConfig) -> list[Path]:
    if "svg" not in config.output.formats:
        return []
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"{name}.svg"
    path.write_text(svg, encoding="utf-8")
    return [path]

"""Command-line entry point: ``qhhg <subcommand> ...``.

Exit codes: 0 success, 2 configuration error (including an unwritable output
directory), 3 numerical-regime rejection.
Errors go to stderr prefixed with ``ERROR <code>:``.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import analytic, quantum, smbe
from .io import ConfigError, RunConfig, load_config, svg_line_plot, write_svg, write_table
from .params import (
    LaserInput,
    MaterialInput,
    ParameterError,
    RegimeError,
    SimulationConfig,
    bloch_ratio,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_REGIME = 3


def _log(args, msg: str) -> None:
    if not args.quiet:
        print(msg)


def _warn(msg: str) -> None:
    print(f"WARNING: {msg}", file=sys.stderr)


def _outdir(cfg: RunConfig) -> Path:
    return cfg.output.directory


def cmd_spectrum(args, cfg: RunConfig) -> list[Path]:
    params = cfg.system_params()
    s = cfg.simulation
    series = analytic.spectrum(params, s.omega_min_over_wl, s.omega_max_over_wl, s.omega_samples)
    rows = list(zip(series.omega_over_wl, series.intensity))
    files = write_table(_outdir(cfg), "spectrum", ["omega_over_wl", "intensity"], rows, cfg)
    svg = svg_line_plot(
        [(series.omega_over_wl, series.intensity, "closed form")],
        title=f"Intraband emission, omega_B/omega_L = {params.bloch_ratio:.3g}",
        xlabel="Omega / omega_L", ylabel="intensity (arb. u.)",
    )
    return files + write_svg(_outdir(cfg), "spectrum", svg, cfg)


def cmd_scan(args, cfg: RunConfig) -> list[Path]:
    i0 = np.geomspace(args.i0_min, args.i0_max, args.i0_points)
    s = cfg.simulation
    sim = SimulationConfig(harmonic_cutoff=s.harmonic_cutoff, interaction_cycles=s.interaction_cycles,
                           envelope=s.envelope, fwhm_cycles=s.fwhm_cycles, n0_override=s.n0_override)
    rows = analytic.intensity_scan(cfg.laser, cfg.material, args.harmonic, i0, sim)
    name = f"scan_h{args.harmonic}"
    files = write_table(_outdir(cfg), name, ["intensity_W_cm2", "harmonic_intensity"], rows, cfg)
    xs, ys = zip(*rows)
    svg = svg_line_plot([(xs, ys, f"harmonic {args.harmonic}")], title="Harmonic yield vs. laser intensity",
                        xlabel="I0 (W/cm^2)", ylabel="intensity (arb. u.)", logx=True, floor_decades=30)
    return files + write_svg(_outdir(cfg), name, svg, cfg)


def _quantum_state(cfg: RunConfig):
    params = cfg.system_params()
    s = cfg.simulation
    grid = quantum.QuadratureGrid.for_params(params, s.grid_halfwidth_sigmas, s.grid_points)
    return params, quantum.build_state(params, grid)


def quantum_observables(params, state: quantum.QuadratureState) -> list[tuple[str, float]]:
    grid = state.grid
    rows = [
        ("q_mean", quantum.expectation_qfunc(state, lambda q: q)),
        ("q_mean_initial", quantum.expectation_qfunc_initial(state, lambda q: q)),
        ("p_drift_formula", quantum.momentum_drift_formula(params, state.t)),
    ]
    try:
        rows.append(("p_drift_grid", quantum.momentum_drift(params, state.t, grid).grid))
    except RegimeError as exc:
        _warn(str(exc))
        rows.append(("p_drift_grid", math.nan))
    for j in params.harmonics:
        rows.append((f"n_{j}", quantum.harmonic_mean_photons(state, j)))
    rho = quantum.reduced_density_laser(state)
    rows += [
        ("trace_laser", rho.trace()),
        ("purity_laser", rho.purity()),
        ("entropy_laser", quantum.entanglement_entropy(rho)),
    ]
    c = quantum.conditioned_state_overlap(state)
    rows.append(("conditioned_overlap_abs", abs(c)))
    try:
        cond = quantum.conditioned_norm_and_entropy(state)
        rows += [("conditioned_norm_squared", cond.norm_squared),
                 ("entropy_conditioned", cond.entropy)]
    except quantum.NoGenerationError as exc:
        _warn(str(exc))
        rows += [("conditioned_norm_squared", 1.0 - abs(c) ** 2), ("entropy_conditioned", math.nan)]
    return rows


def cmd_quantum(args, cfg: RunConfig) -> list[Path]:
    params, state = _quantum_state(cfg)
    rows = quantum_observables(params, state)
    files = write_table(_outdir(cfg), "quantum_observables", ["observable", "value"], rows, cfg)
    if args.wigner is not None:
        a = state.column(args.wigner)
        span = 4.0 + math.sqrt(2.0) * float(np.max(np.abs(a)))
        axis = np.linspace(-span, span, 121)
        w = quantum.harmonic_mode_wigner(state, args.wigner, axis, axis)
        wrows = [(q, p, w[i, k]) for i, q in enumerate(axis) for k, p in enumerate(axis)]
        files += write_table(_outdir(cfg), f"wigner_h{args.wigner}", ["q", "p", "wigner"], wrows, cfg)
    return files


def cmd_compare(args, cfg: RunConfig) -> list[Path]:
    params = cfg.system_params()
    pulse = cfg.pulse()
    s = cfg.simulation
    out = _outdir(cfg)
    t = params.t_start + smbe.analytic_window(pulse)
    ana = analytic.spectrum(params, s.omega_min_over_wl, s.omega_max_over_wl, s.omega_samples, t)
    norm = smbe.odd_peak_norm(ana.omega_over_wl, ana.intensity) or 1.0
    ana_i = ana.intensity / norm
    sm = smbe.emission_spectrum(smbe.classical_current(params, pulse), s.omega_max_over_wl,
                                s.omega_min_over_wl)
    peaks = smbe.compare_backends(params, pulse)
    files = write_table(out, "spectrum_analytic", ["omega_over_wl", "intensity"],
                        list(zip(ana.omega_over_wl, ana_i)), cfg)
    files += write_table(out, "spectrum_smbe", ["omega_over_wl", "intensity"],
                         list(zip(sm.omega_over_wl, sm.intensity)), cfg)
    files += write_table(out, "compare_peaks", ["harmonic", "peak_db_analytic", "peak_db_smbe", "delta_db"],
                         [(p.harmonic, p.peak_db_analytic, p.peak_db_smbe, p.delta_db) for p in peaks], cfg)
    for p in peaks:
        if not p.found:
            _warn(f"harmonic {p.harmonic}: peak not found above noise floor")
    svg = svg_line_plot(
        [(ana.omega_over_wl, ana_i, "closed form"), (sm.omega_over_wl, sm.intensity, "semiclassical current")],
        title=f"Intraband emission, omega_B/omega_L = {params.bloch_ratio:.3g}",
        xlabel="Omega / omega_L", ylabel="intensity (norm. to strongest odd peak)",
    )
    return files + write_svg(out, "fig1", svg, cfg)


def cmd_bloch_ratio(args) -> None:
    laser = LaserInput(args.wavelength_um, args.intensity)
    material = MaterialInput(args.lattice_angstrom, 1.0)
    print(f"{bloch_ratio(laser, material):.6g}")


COMMANDS = {
    "spectrum": cmd_spectrum,
    "scan": cmd_scan,
    "quantum": cmd_quantum,
    "compare": cmd_compare,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qhhg", description="Intraband HHG: closed-form quantum-optical "
                                 "solution and semiclassical baseline")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, config_required=True):
        p.add_argument("--config", required=config_required, help="JSON run configuration")
        p.add_argument("--out", help="output directory (overrides output.directory)")
        p.add_argument("--format", action="append", choices=["csv", "json", "svg"],
                       help="output format, repeatable (overrides output.formats)")
        p.add_argument("--quiet", action="store_true")

    common(sub.add_parser("spectrum", help="closed-form emission spectrum"))
    p = sub.add_parser("scan", help="harmonic intensity vs. laser peak intensity")
    common(p)
    p.add_argument("--harmonic", type=int, default=5)
    p.add_argument("--i0-min", type=float, default=1e10)
    p.add_argument("--i0-max", type=float, default=3e12)
    p.add_argument("--i0-points", type=int, default=200)
    p = sub.add_parser("quantum", help="quantum observables of the post-interaction state")
    common(p)
    p.add_argument("--wigner", type=int, metavar="J", help="also write the Wigner grid of harmonic J")
    common(sub.add_parser("compare", help="closed form vs. semiclassical current peaks"))
    p = sub.add_parser("bloch-ratio", help="omega_B/omega_L from laser and lattice")
    p.add_argument("--wavelength-um", type=float, required=True)
    p.add_argument("--intensity", type=float, required=True, help="peak intensity, W/cm^2")
    p.add_argument("--lattice-angstrom", type=float, required=True)
    p.add_argument("--quiet", action="store_true")
    return ap


def cli_dispatch(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        if args.command == "bloch-ratio":
            cmd_bloch_ratio(args)
            return EXIT_OK
        if args.command == "scan" and not (0 < args.i0_min < args.i0_max and args.i0_points >= 2):
            raise ConfigError("scan needs 0 < --i0-min < --i0-max and --i0-points >= 2")
        cfg = load_config(args.config).with_output(args.out, args.format)
        files = COMMANDS[args.command](args, cfg)
        for f in files:
            _log(args, str(f))
        return EXIT_OK
    except (ConfigError, ParameterError, OSError) as exc:
        print(f"ERROR {EXIT_CONFIG}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except RegimeError as exc:
        print(f"ERROR {EXIT_REGIME}: {exc}", file=sys.stderr)
        return EXIT_REGIME


def main() -> None:
    sys.exit(cli_dispatch())


if __name__ == "__main__":
    main()

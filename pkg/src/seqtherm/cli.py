"""Command-line front end: curve computation, figure presets, CSV/JSON output.

Units at this interface are fixed once and for all: ``--tau`` is in units
of 1/gamma and temperatures are in units of the qubit gap, so gamma never
appears as a flag.  Every output file gets a ``<out>.meta.json`` sidecar
recording the parameters, the seed, and the tool version, enough to
reproduce it byte for byte.

Exit codes: 0 success, 1 compute-budget violation, 2 invalid usage,
3 I/O failure.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from .bloch import BathParams, QubitState, thermal_state
from .ensemble import DegenerateBandError, EnsembleSpec, band_curve, bandwidth_ratio
from .fisher import BudgetError, ProtocolSpec, fi_iid, fi_sms
from .povm import MeasurementFamily
from .trajectory import crb_report

__all__ = ["main", "PRESETS"]

_FMT = ".12g"

PRESETS = {
    # figure-reproduction parameter sets; grids/sample counts are defaults
    # that can be overridden on the command line
    "fig3": dict(kind="bandwidth", n_max=7, tau=4.0, phi=0.0),
    "fig4a": dict(kind="ensemble", n=3, tau=4.0, phi=0.0),
    "fig4b": dict(kind="ensemble", n=7, tau=4.0, phi=0.0),
    # the long-time panels give no numeric tau; 10/gamma is deep in the
    # collapsed regime
    "fig4-collapse": dict(kind="ensemble", n=3, tau=10.0, phi=0.0),
    "fig5-iid": dict(kind="phi-scan", scheme="iid", n=3, tau=9.5,
                     phis=(0.0, math.pi / 8, math.pi / 6)),
    "fig5-sms": dict(kind="phi-scan", scheme="sms", n=3, tau=9.5,
                     phis=(0.0, math.pi / 8, math.pi / 6)),
    # short-interval regime where the sequential scheme wins outright
    "fig6-short-tau": dict(kind="ensemble", n=3, tau=2.0, phi=math.pi / 8),
}


class UsageError(ValueError):
    pass


def _fmt(x: float) -> str:
    return format(x, _FMT)


def parse_rho0(token: str):
    """Input-state token: a named state or explicit 'rx,ry,rz'."""
    named = {
        "ground": QubitState.ground(),
        "excited": QubitState.excited(),
        "maxmixed": QubitState.maximally_mixed(),
    }
    if token in named:
        return named[token]
    if token == "thermal":
        return "thermal"  # resolved per temperature at evaluation time
    parts = token.split(",")
    if len(parts) != 3:
        raise UsageError(
            f"--rho0 must be ground|excited|thermal|maxmixed|rx,ry,rz, got {token!r}"
        )
    try:
        r = [float(p) for p in parts]
    except ValueError as exc:
        raise UsageError(f"--rho0 components must be numbers: {exc}") from exc
    try:
        return QubitState(*r)
    except ValueError as exc:
        raise UsageError(f"--rho0 invalid: {exc}") from exc


def _resolve_rho0(rho0, bath: BathParams) -> QubitState:
    return thermal_state(bath) if rho0 == "thermal" else rho0


def _check_phi(phi: float) -> float:
    if not 0.0 <= phi <= math.pi / 4:
        raise UsageError(f"--phi must lie in [0, pi/4] ~ [0, 0.7853982], got {phi}")
    return phi


def _temperature_grid(args) -> np.ndarray:
    if not args.T_min < args.T_max:
        raise UsageError(f"--T-min must be below --T-max, got {args.T_min}, {args.T_max}")
    if args.T_steps < 2:
        raise UsageError(f"--T-steps must be >= 2, got {args.T_steps}")
    if args.T_min <= 0.0:
        raise UsageError(f"--T-min must be positive, got {args.T_min}")
    return np.linspace(args.T_min, args.T_max, args.T_steps)


def _load_config(path: str) -> dict:
    """Flat key=value file mirroring the long flag names."""
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            values[key.strip()] = value.strip()
    return values


def _apply_config(args, parser_keys: dict):
    """Fill unset flags from the config file; unknown keys are errors."""
    if not getattr(args, "config", None):
        return
    for key, value in _load_config(args.config).items():
        if key not in parser_keys:
            raise UsageError(f"unknown config key {key!r}")
        dest, cast = parser_keys[key]
        if getattr(args, dest) is None:
            setattr(args, dest, cast(value))


def _write_text(path: str, text: str):
    with open(path, "w", newline="") as fh:
        fh.write(text)


def _write_sidecar(path: str, subcommand: str, params: dict):
    meta = {
        "tool": "seqtherm",
        "version": __version__,
        "subcommand": subcommand,
        "params": params,
    }
    with open(path + ".meta.json", "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _csv(header: list[str], rows: list[list[str]]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(row) for row in rows)
    return "\n".join(lines) + "\n"


def _fi_value(scheme: str, n: int, tau: float, family: MeasurementFamily,
              rho0, T: float) -> float:
    bath = BathParams(T)
    state = _resolve_rho0(rho0, bath)
    spec = ProtocolSpec(scheme, n, tau, state, family)
    return (fi_iid if scheme == "iid" else fi_sms)(spec, bath).value


def _fi_curve_rows(scheme, n, tau, family, rho0, rho0_token, grid):
    rows = []
    for T in grid:
        fi = _fi_value(scheme, n, tau, family, rho0, T)
        rows.append([scheme, str(n), _fmt(tau), _fmt(family.phi), _fmt(T),
                     rho0_token, _fmt(fi)])
    return rows


def _ensemble_rows(schemes, n, tau, family, grid, ens, threads):
    rows = []
    for scheme in schemes:
        curve = band_curve(scheme, n, tau, family, grid, ens, threads=threads)
        for k, T in enumerate(grid):
            rows.append([scheme, str(n), _fmt(tau), _fmt(family.phi), _fmt(T),
                         _fmt(curve.fi_min[k]), _fmt(curve.fi_mean[k]),
                         _fmt(curve.fi_max[k])])
    return rows


def _emit(args, header, rows, subcommand, params):
    if args.format == "csv":
        text = _csv(header, rows)
    else:
        text = json.dumps(
            [dict(zip(header, row)) for row in rows], indent=2
        ) + "\n"
    _write_text(args.out, text)
    _write_sidecar(args.out, subcommand, params)


def _cmd_fi_curve(args):
    family = MeasurementFamily(_check_phi(args.phi))
    rho0 = parse_rho0(args.rho0)
    grid = _temperature_grid(args)
    rows = _fi_curve_rows(args.scheme, args.n, args.tau, family, rho0,
                          args.rho0, grid)
    params = dict(scheme=args.scheme, n=args.n, tau=args.tau, phi=args.phi,
                  rho0=args.rho0, T_min=args.T_min, T_max=args.T_max,
                  T_steps=args.T_steps, format=args.format)
    _emit(args, ["scheme", "n", "tau", "phi", "T", "rho0", "FI"],
          rows, "fi-curve", params)


def _cmd_ensemble(args):
    family = MeasurementFamily(_check_phi(args.phi))
    grid = _temperature_grid(args)
    ens = EnsembleSpec(args.samples, args.seed,
                       include_poles=not args.no_poles)
    schemes = ["iid", "sms"] if args.scheme == "both" else [args.scheme]
    rows = _ensemble_rows(schemes, args.n, args.tau, family, grid, ens,
                          args.threads)
    params = dict(scheme=args.scheme, n=args.n, tau=args.tau, phi=args.phi,
                  samples=args.samples, seed=args.seed,
                  include_poles=not args.no_poles, T_min=args.T_min,
                  T_max=args.T_max, T_steps=args.T_steps, format=args.format)
    _emit(args, ["scheme", "n", "tau", "phi", "T", "fi_min", "fi_mean", "fi_max"],
          rows, "ensemble", params)


def _cmd_bandwidth(args):
    family = MeasurementFamily(_check_phi(args.phi))
    grid = _temperature_grid(args)
    ens = EnsembleSpec(args.samples, args.seed)
    result = bandwidth_ratio(args.n_max, args.tau, family, grid, ens,
                             threads=args.threads)
    rows = [
        [str(n), _fmt(ds), _fmt(di), _fmt(r)]
        for n, ds, di, r in zip(result.n_values, result.delta_sms,
                                result.delta_iid, result.ratio)
    ]
    params = dict(n_max=args.n_max, tau=args.tau, phi=args.phi,
                  samples=args.samples, seed=args.seed, T_min=args.T_min,
                  T_max=args.T_max, T_steps=args.T_steps,
                  peak_T=result.peak_T, format=args.format)
    _emit(args, ["n", "delta_fi_sms", "delta_fi_iid", "ratio"],
          rows, "bandwidth", params)


def _cmd_trajectory(args):
    family = MeasurementFamily(_check_phi(args.phi))
    rho0 = parse_rho0(args.rho0)
    bath = BathParams(args.true_T)
    state = _resolve_rho0(rho0, bath)
    spec = ProtocolSpec(args.scheme, args.n, args.tau, state, family)
    report = crb_report(spec, bath, args.trials, args.seed,
                        (args.T_lo, args.T_hi))
    payload = dict(
        scheme=report.scheme, n=report.n, tau=args.tau, phi=args.phi,
        true_T=report.true_T, trials=report.trials, seed=report.seed,
        rmse=report.rmse, crb=report.crb, ratio=report.ratio,
        boundary_hits=report.boundary_hits, flat_count=report.flat_count,
    )
    _write_text(args.out, json.dumps(payload, indent=2) + "\n")
    params = dict(scheme=args.scheme, n=args.n, tau=args.tau, phi=args.phi,
                  rho0=args.rho0, true_T=args.true_T, trials=args.trials,
                  seed=args.seed, T_lo=args.T_lo, T_hi=args.T_hi)
    _write_sidecar(args.out, "trajectory", params)


def _cmd_preset(args):
    if args.id not in PRESETS:
        raise UsageError(f"unknown preset {args.id!r}; known: {sorted(PRESETS)}")
    p = PRESETS[args.id]
    grid = np.linspace(0.05, 3.0, args.T_steps)
    params = dict(preset=args.id, samples=args.samples, seed=args.seed,
                  T_steps=args.T_steps, **{k: v for k, v in p.items()
                                           if k != "phis"})
    if "phis" in p:
        params["phis"] = list(p["phis"])
    if p["kind"] == "bandwidth":
        ens = EnsembleSpec(args.samples, args.seed)
        family = MeasurementFamily(p["phi"])
        result = bandwidth_ratio(p["n_max"], p["tau"], family, grid, ens,
                                 threads=args.threads)
        rows = [[str(n), _fmt(ds), _fmt(di), _fmt(r)]
                for n, ds, di, r in zip(result.n_values, result.delta_sms,
                                        result.delta_iid, result.ratio)]
        params["peak_T"] = result.peak_T
        _emit(args, ["n", "delta_fi_sms", "delta_fi_iid", "ratio"],
              rows, "preset", params)
    elif p["kind"] == "ensemble":
        ens = EnsembleSpec(args.samples, args.seed)
        family = MeasurementFamily(p["phi"])
        rows = _ensemble_rows(["iid", "sms"], p["n"], p["tau"], family, grid,
                              ens, args.threads)
        _emit(args, ["scheme", "n", "tau", "phi", "T", "fi_min", "fi_mean",
                     "fi_max"], rows, "preset", params)
    else:  # phi-scan
        rows = []
        for phi in p["phis"]:
            family = MeasurementFamily(phi)
            rows.extend(_fi_curve_rows(p["scheme"], p["n"], p["tau"], family,
                                       QubitState.ground(), "ground", grid))
        _emit(args, ["scheme", "n", "tau", "phi", "T", "rho0", "FI"],
              rows, "preset", params)


def _add_common(sub, *, grid=True, seed=False):
    keys = {}

    def add(flag, dest, cast, **kw):
        sub.add_argument(flag, dest=dest, type=cast, default=None, **kw)
        keys[flag.lstrip("-")] = (dest, cast)

    sub.add_argument("--config", default=None,
                     help="flat key=value file; flags take precedence")
    sub.add_argument("--out", required=True, help="output file path")
    sub.add_argument("--format", choices=["csv", "json"], default="csv")
    sub.add_argument("--threads", type=int, default=None,
                     help="worker threads (default: THERMO_THREADS or 1)")
    if grid:
        add("--T-min", "T_min", float)
        add("--T-max", "T_max", float)
        add("--T-steps", "T_steps", int)
    if seed:
        add("--seed", "seed", int)
    return keys, add


def build_parser() -> tuple[argparse.ArgumentParser, dict]:
    parser = argparse.ArgumentParser(
        prog="seqtherm",
        description="Fisher information of sequential vs measure-and-reprepare "
                    "qubit thermometry (tau in 1/gamma, T in qubit-gap units)",
    )
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)
    config_keys = {}

    sub = subs.add_parser("fi-curve", help="FI vs temperature for one input state")
    keys, add = _add_common(sub)
    add("--scheme", "scheme", str, choices=["iid", "sms"])
    add("--n", "n", int)
    add("--tau", "tau", float)
    add("--phi", "phi", float)
    add("--rho0", "rho0", str)
    sub.set_defaults(func=_cmd_fi_curve, keys=keys, defaults=dict(
        scheme="iid", n=1, tau=1.0, phi=0.0, rho0="ground",
        T_min=0.05, T_max=3.0, T_steps=200))

    sub = subs.add_parser("ensemble", help="min/mean/max FI bands over sampled inputs")
    keys, add = _add_common(sub, seed=True)
    add("--scheme", "scheme", str, choices=["iid", "sms", "both"])
    add("--n", "n", int)
    add("--tau", "tau", float)
    add("--phi", "phi", float)
    add("--samples", "samples", int)
    sub.add_argument("--no-poles", action="store_true",
                     help="do not append the ground/excited poles")
    sub.set_defaults(func=_cmd_ensemble, keys=keys, defaults=dict(
        scheme="both", n=3, tau=4.0, phi=0.0, samples=1000, seed=0,
        T_min=0.05, T_max=3.0, T_steps=200))

    sub = subs.add_parser("bandwidth", help="SMS/IID band-width ratio vs n")
    keys, add = _add_common(sub, seed=True)
    add("--n-max", "n_max", int)
    add("--tau", "tau", float)
    add("--phi", "phi", float)
    add("--samples", "samples", int)
    sub.set_defaults(func=_cmd_bandwidth, keys=keys, defaults=dict(
        n_max=7, tau=4.0, phi=0.0, samples=1000, seed=0,
        T_min=0.05, T_max=3.0, T_steps=200))

    sub = subs.add_parser("trajectory", help="simulate records, MLE, RMSE vs CRB")
    keys, add = _add_common(sub, grid=False, seed=True)
    add("--scheme", "scheme", str, choices=["iid", "sms"])
    add("--n", "n", int)
    add("--tau", "tau", float)
    add("--phi", "phi", float)
    add("--rho0", "rho0", str)
    add("--true-T", "true_T", float)
    add("--trials", "trials", int)
    add("--T-lo", "T_lo", float)
    add("--T-hi", "T_hi", float)
    sub.set_defaults(func=_cmd_trajectory, keys=keys, defaults=dict(
        scheme="sms", n=32, tau=1.0, phi=0.0, rho0="ground", true_T=1.0,
        trials=1000, seed=0, T_lo=0.1, T_hi=5.0))

    sub = subs.add_parser("preset", help="figure-reproduction parameter sets")
    sub.add_argument("id", help=f"one of {sorted(PRESETS)}")
    keys, add = _add_common(sub, grid=False, seed=True)
    add("--samples", "samples", int)
    add("--T-steps", "T_steps", int)
    sub.set_defaults(func=_cmd_preset, keys=keys, defaults=dict(
        samples=1000, seed=0, T_steps=200))

    return parser, config_keys


def main(argv=None) -> int:
    parser, _ = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        _apply_config(args, args.keys)
        for dest, value in args.defaults.items():
            if getattr(args, dest) is None:
                setattr(args, dest, value)
        args.func(args)
    except BudgetError as exc:
        print(f"seqtherm: {exc}", file=sys.stderr)
        return 1
    except (UsageError, DegenerateBandError, ValueError) as exc:
        print(f"seqtherm: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"seqtherm: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Every subcommand writes CSV (default) or JSON to stdout or ``--output``.
Outputs carry a metadata block with the tool version, the fully resolved
parameters and the seed, so any file can be regenerated from itself.

Exit codes: 0 success, 1 a verification check failed, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import datetime as _dt
import io
import json
import math
import os
import sys
import tempfile

import numpy as np

from . import __version__, checks
from .distribution import (
    AMU_KG,
    MaxwellParams,
    ThermalState,
    UnitSystem,
    params_from_state,
    speed_cdf,
    speed_density,
)
from .errors import ConvergenceError, DomainError
from .kinetics import (
    DEFAULT_COLLISION_TIME,
    ActivationSpec,
    TailModel,
    fever_report,
    reaction_time,
    tail_fraction,
)
from .random_walk import (
    WalkSpec,
    diffusion_coefficient_from_walk,
    diffusion_length,
    simulate_walks,
)
from .rng import SeedSpec
from .sampler import empirical_moments, ks_statistic, sample_batch

SCHEMA_VERSION = "1"
DEFAULT_TEMPERATURE = 310.0
DEFAULT_MASS_AMU = 1.0
DEFAULT_POINTS = 101
DEFAULT_SPEED_SCALES = 6.0


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- output

def _fmt(x):
    if isinstance(x, bool) or x is None:
        return str(x).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.16e}"
    return str(x)


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    return x


def _metadata(args, command, parameters, seed=None):
    meta = {
        "tool": "maxkin",
        "version": __version__,
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "parameters": parameters,
        "seed": seed,
    }
    if not args.no_timestamp:
        meta["timestamp"] = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    return meta


def _render(fmt, metadata, columns=None, rows=None, report=None, extra=None):
    if fmt == "json":
        doc = {"metadata": metadata}
        if report is not None:
            doc["report"] = report
        else:
            doc["rows"] = [dict(zip(columns, r)) for r in rows]
        doc.update(extra or {})
        return json.dumps(_jsonable(doc), indent=2, allow_nan=False) + "\n"

    buf = io.StringIO()
    buf.write("# " + json.dumps(_jsonable(metadata), sort_keys=True, allow_nan=False) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    if report is not None:
        columns = list(report)
        rows = [[report[k] for k in columns]]
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(x) for x in r])
    return buf.getvalue()


def _emit(text, output):
    if output is None or output == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    directory = os.path.dirname(os.path.abspath(output))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".maxkin-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, output)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------- argument helpers

def _positive_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not (math.isfinite(v) and v > 0):
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return v


def _nonneg_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not (math.isfinite(v) and v >= 0):
        raise argparse.ArgumentTypeError(f"must be non-negative: {text!r}")
    return v


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer: {text!r}")
    return v


def _u64(text):
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("must be an unsigned 64-bit integer")
    return v


def _output_parent():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", "-o", metavar="PATH", default=None,
                   help="write here instead of standard output")
    p.add_argument("--no-timestamp", action="store_true",
                   help="omit the timestamp from the metadata block")
    return p


def _thermal_parent():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("-T", "--temperature", type=_positive_float, default=DEFAULT_TEMPERATURE,
                   help="kelvin, or reduced temperature with --reduced (default 310)")
    p.add_argument("--reduced", action="store_true", help="dimensionless units, k = 1")
    g = p.add_mutually_exclusive_group()
    g.add_argument("-m", "--mass", type=_positive_float,
                   help="reduced mass (only with --reduced; default 1)")
    g.add_argument("--mass-amu", type=_positive_float,
                   help=f"molecular mass in amu (default {DEFAULT_MASS_AMU:g})")
    g.add_argument("--mass-kg", type=_positive_float, help="molecular mass in kg")
    return p


def _seed_parent():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=_u64, default=0)
    p.add_argument("--stream", type=_u64, default=0, help="base stream id")
    p.add_argument("--workers", type=_positive_int, default=1,
                   help="threads; output does not depend on this")
    return p


def _resolve_state(args):
    if args.reduced:
        if args.mass_amu is not None or args.mass_kg is not None:
            raise UsageError("--mass-amu/--mass-kg cannot be combined with --reduced; use -m")
        mass = args.mass if args.mass is not None else 1.0
        state = ThermalState(args.temperature, mass, UnitSystem.REDUCED)
        params = {"unit_system": "Reduced", "temperature": args.temperature, "mass": mass}
    else:
        if args.mass is not None:
            raise UsageError("-m/--mass is only valid with --reduced; use --mass-amu or --mass-kg")
        if args.mass_kg is not None:
            mass_kg = args.mass_kg
        else:
            mass_kg = (args.mass_amu if args.mass_amu is not None else DEFAULT_MASS_AMU) * AMU_KG
        state = ThermalState(args.temperature, mass_kg, UnitSystem.SI)
        params = {"unit_system": "SI", "temperature_K": args.temperature, "mass_kg": mass_kg}
    return state, params


# ---------------------------------------------------------------- commands

def cmd_pdf(args):
    if args.points < 2:
        raise UsageError("--points must be at least 2")
    state, params = _resolve_state(args)
    p = params_from_state(state)
    max_speed = args.max_speed if args.max_speed is not None else DEFAULT_SPEED_SCALES / math.sqrt(p.c)
    s = np.linspace(0.0, max_speed, args.points)
    rows = list(zip(s, speed_density(s, p), speed_cdf(s, p)))
    params.update({"c": p.c, "max_speed": max_speed, "points": args.points})
    meta = _metadata(args, "pdf", params)
    return _render(args.format, meta, ["speed", "speed_density", "speed_cdf"], rows), 0


def cmd_fever(args):
    if not 0 < args.baseline_fraction <= 1:
        raise UsageError("--baseline-fraction must lie in (0, 1]")
    rep = fever_report(args.t_base, args.t_new, args.baseline_fraction, args.model)
    report = {
        "model": rep.model.value,
        "t_base": rep.t_base,
        "t_new": rep.t_new,
        "mean_energy_change_percent": 100.0 * (rep.t_new / rep.t_base - 1.0),
        "lambda_base": rep.lambda_base,
        "lambda_new": rep.lambda_new,
        "fraction_base": rep.fraction_base,
        "fraction_new": rep.fraction_new,
        "ratio": rep.ratio,
        "relative_change": rep.relative_change,
        "percent_change": rep.percent_change,
    }
    params = {"t_base": args.t_base, "t_new": args.t_new,
              "baseline_fraction": args.baseline_fraction, "model": rep.model.value}
    return _render(args.format, _metadata(args, "fever", params), report=report), 0


def cmd_sample(args):
    if args.c is not None:
        p = MaxwellParams(args.c)
        params = {"c": args.c}
    else:
        state, params = _resolve_state(args)
        p = params_from_state(state)
        params["c"] = p.c
    seed = SeedSpec(args.seed, args.stream)
    batch = sample_batch(args.n, p, seed, workers=args.workers)
    v = batch.velocities
    speeds = batch.speeds()
    rows = [(i, *v[i], speeds[i]) for i in range(batch.count)]
    summary = {"n": batch.count, "mean_vx": float(v[:, 0].mean()),
               "mean_vy": float(v[:, 1].mean()), "mean_vz": float(v[:, 2].mean()),
               "mean_speed": float(speeds.mean()),
               "mean_squared_speed": float(np.mean(speeds * speeds)),
               "ks_statistic": ks_statistic(batch)}
    if batch.count >= 2:
        summary["component_variance"] = [float(x) for x in empirical_moments(batch).variance]
    params.update({"n": args.n, "stream": args.stream})
    meta = _metadata(args, "sample", params, seed=args.seed)
    columns = ["index", "vx", "vy", "vz", "speed"]
    if args.format == "json":
        return _render("json", meta, columns, rows, extra={"summary": summary}), 0
    rows.append(("mean", summary["mean_vx"], summary["mean_vy"], summary["mean_vz"],
                 summary["mean_speed"]))
    return _render("csv", meta, columns, rows), 0


def cmd_tail(args):
    if args.ea is not None:
        if args.mass is not None or args.mass_amu is not None or args.mass_kg is not None:
            raise UsageError("tail takes no mass flag")
        units = UnitSystem.REDUCED if args.reduced else UnitSystem.SI
        state = ThermalState(args.temperature, 1.0, units)
        spec = ActivationSpec.from_energy(args.ea, state)
        params = {"e_activation": args.ea, "temperature": args.temperature,
                  "unit_system": units.value}
    else:
        lam = args.lam if args.lam is not None else -math.log(1e-12)
        spec = ActivationSpec(lam)
        params = {"lambda": lam}
    model = TailModel(args.model)
    frac = tail_fraction(spec, model)
    params.update({"model": model.value, "collision_time": args.collision_time})
    report = {"model": model.value, "lambda": spec.lam, "fraction": frac,
              "collision_time": args.collision_time,
              "reaction_time": reaction_time(frac, args.collision_time) if frac > 0 else math.inf}
    if not math.isfinite(report["reaction_time"]):
        raise UsageError("tail fraction underflows; reaction time is unbounded")
    return _render(args.format, _metadata(args, "tail", params), report=report), 0


def cmd_walk(args):
    seed = SeedSpec(args.seed, args.stream)
    spec = WalkSpec(args.steps, args.dim, args.step_length, args.trials, seed)
    summary = simulate_walks(spec, workers=args.workers)
    report = {"steps": args.steps, "dimension": args.dim, "step_length": args.step_length,
              "trials": args.trials}
    for axis, m in zip("xyz", summary.mean_displacement):
        report[f"mean_displacement_{axis}"] = m
    report.update({
        "mean_squared_displacement": summary.mean_squared_displacement,
        "msd_standard_error": summary.standard_error(),
        "expected_msd": args.steps * args.step_length ** 2,
        "variance_of_squared_displacement": summary.variance_of_squared_displacement,
    })
    if args.step_time is not None:
        d = diffusion_coefficient_from_walk(args.step_length, args.step_time, args.dim)
        report["diffusion_coefficient"] = d
        report["diffusion_length"] = diffusion_length(d, args.steps * args.step_time, args.dim)
    params = {"steps": args.steps, "dimension": args.dim, "step_length": args.step_length,
              "trials": args.trials, "stream": args.stream, "step_time": args.step_time}
    return _render(args.format, _metadata(args, "walk", params, seed=args.seed), report=report), 0


def cmd_verify(args):
    overrides = {
        "gauss_integral": args.tol_gauss,
        "normalization": args.tol_normalization,
        "mean_energy": args.tol_mean_energy,
        "mean_energy_quadrature": args.tol_mean_energy_quadrature,
        "separability": args.tol_separability,
        "isotropy": args.tol_isotropy,
    }
    results = checks.run_all(overrides, ks_n=args.ks_n, seed=args.seed)
    rows = [(c.name, c.measured, c.tolerance, "PASS" if c.passed else "FAIL") for c in results]
    params = {k: v for k, v in overrides.items() if v is not None}
    params["ks_n"] = args.ks_n
    meta = _metadata(args, "verify", params, seed=args.seed)
    text = _render(args.format, meta, ["check", "measured", "tolerance", "status"], rows)
    return text, 0 if all(c.passed for c in results) else 1


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    out, thermal, seeded = _output_parent(), _thermal_parent(), _seed_parent()
    parser = argparse.ArgumentParser(prog="maxkin", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"maxkin {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pdf", parents=[thermal, out], help="tabulate speed density and CDF")
    p.add_argument("--max-speed", type=_positive_float,
                   help="largest tabulated speed (default 6/sqrt(c))")
    p.add_argument("--points", type=int, default=DEFAULT_POINTS)
    p.set_defaults(func=cmd_pdf)

    p = sub.add_parser("fever", parents=[out], help="temperature sensitivity of the fast fraction")
    p.add_argument("--t-base", type=_positive_float, default=310.0)
    p.add_argument("--t-new", type=_positive_float, default=311.0)
    p.add_argument("--baseline-fraction", type=_positive_float, default=1e-12)
    p.add_argument("--model", choices=[m.value for m in TailModel], default="exponential")
    p.set_defaults(func=cmd_fever)

    p = sub.add_parser("sample", parents=[thermal, seeded, out], help="seeded velocity samples")
    p.add_argument("-n", type=_positive_int, default=1000)
    p.add_argument("--c", type=_positive_float, help="distribution parameter; overrides T/mass")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("tail", parents=[thermal, out],
                       help="fast-particle fraction and reaction time")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--lambda", dest="lam", type=_nonneg_float,
                   help="reduced activation energy E_a/kT (default ln 1e12)")
    g.add_argument("--ea", type=_nonneg_float,
                   help="activation energy in J (or reduced units with --reduced); uses -T")
    p.add_argument("--model", choices=[m.value for m in TailModel], default="exact")
    p.add_argument("--collision-time", type=_positive_float, default=DEFAULT_COLLISION_TIME)
    p.set_defaults(func=cmd_tail)

    p = sub.add_parser("walk", parents=[seeded, out], help="lattice random walks")
    p.add_argument("--steps", type=_positive_int, default=100)
    p.add_argument("--dim", type=int, choices=(1, 2, 3), default=1)
    p.add_argument("--trials", type=_positive_int, default=10_000)
    p.add_argument("--step-length", type=_positive_float, default=1.0)
    p.add_argument("--step-time", type=_positive_float,
                   help="duration of one step; adds D and the diffusion length")
    p.set_defaults(func=cmd_walk)

    p = sub.add_parser("verify", parents=[out], help="run the built-in oracle suite")
    p.add_argument("--tol-gauss", type=_positive_float)
    p.add_argument("--tol-normalization", type=_positive_float)
    p.add_argument("--tol-mean-energy", type=_positive_float)
    p.add_argument("--tol-mean-energy-quadrature", type=_positive_float)
    p.add_argument("--tol-separability", type=_positive_float)
    p.add_argument("--tol-isotropy", type=_positive_float)
    p.add_argument("--ks-n", type=_positive_int, default=100_000)
    p.add_argument("--seed", type=_u64, default=0)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text, code = args.func(args)
    except (UsageError, DomainError) as exc:
        parser.exit(2, f"maxkin {args.command}: error: {exc}\n")
    except ConvergenceError as exc:
        parser.exit(1, f"maxkin {args.command}: quadrature did not converge: {exc}\n")
    _emit(text, args.output)
    return code


if __name__ == "__main__":
    sys.exit(main())

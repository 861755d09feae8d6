"""Command-line front end: ``spindimer {fit,profile,thresholds,verify}``.

Exit statuses
-------------
0  success
2  usage error (bad flags or grid specification)
3  input/output error
4  parse error in an input file
5  fit did not converge
6  verification tolerance exceeded
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys

import numpy as np

from . import thresholds as th
from .dimer import REFERENCE_PARAMS, DimerParams, model_moment
from .errors import CurveParseError, InvalidInputError
from .fitting import FIT_SPACES, fit, load_curve
from .measures import FIELDS, correlation_table
from .units import UnitSystem
from .verification import DEFAULT_SAMPLES, TOLERANCES, run_verification

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_PARSE = 4
EXIT_NOT_CONVERGED = 5
EXIT_VERIFY_FAILED = 6

logger = logging.getLogger("spindimer")


class UsageError(Exception):
    pass


def _json_safe(obj):
    """Replace non-finite floats by None so the output is strict JSON."""
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, np.generic):
        return _json_safe(obj.item())
    return obj


def dumps_json(obj) -> str:
    # json writes floats with repr(), the shortest string that round-trips
    return json.dumps(_json_safe(obj), indent=2, allow_nan=False) + "\n"


def _write(text: str, path: str | None):
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(text)


def _params_from(args) -> DimerParams:
    J, g = REFERENCE_PARAMS.J, REFERENCE_PARAMS.g
    if getattr(args, "params_from", None):
        with open(args.params_from, encoding="utf-8") as f:
            saved = json.load(f)
        J, g = saved["J_K"], saved["g"]
    if args.J is not None:
        J = args.J
    if args.g is not None:
        g = args.g
    try:
        return DimerParams(J, g)
    except InvalidInputError as exc:
        raise UsageError(str(exc)) from None


def temperature_grid(tmin: float, tmax: float, count: int, scale: str) -> np.ndarray:
    if not (tmin > 0 and tmin < tmax):
        raise UsageError("temperature grid needs 0 < tmin < tmax")
    if count < 2:
        raise UsageError("temperature grid needs at least 2 points")
    if scale == "log":
        return np.geomspace(tmin, tmax, count)
    return np.linspace(tmin, tmax, count)


def profile_table(params: DimerParams, T) -> dict[str, np.ndarray]:
    return correlation_table(model_moment(params, T), T)


def format_profile_csv(params: DimerParams, table) -> str:
    buf = io.StringIO()
    buf.write(f"# J_K={params.J!r}, g={params.g!r}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(FIELDS)
    for i in range(len(table["T"])):
        writer.writerow([repr(float(table[k][i])) for k in FIELDS])
    return buf.getvalue()


def format_profile_json(params: DimerParams, table) -> str:
    rows = [{k: float(table[k][i]) for k in FIELDS} for i in range(len(table["T"]))]
    return dumps_json({"parameters": {"J": params.J, "g": params.g}, "rows": rows})


def cmd_fit(args) -> int:
    if not args.input:
        raise UsageError("fit requires --input")
    curve = load_curve(args.input, args.units)
    initial = None
    if args.J is not None or args.g is not None:
        initial = DimerParams(args.J if args.J is not None else -100.0,
                              args.g if args.g is not None else 2.0)
    result = fit(curve, initial, fit_space=args.fit_space, background=args.background)
    _write(dumps_json(result.to_json_dict()), args.output)
    for d in result.diagnostics:
        logger.warning(d)
    return EXIT_OK if result.converged else EXIT_NOT_CONVERGED


def cmd_profile(args) -> int:
    params = _params_from(args)
    T = temperature_grid(args.tmin, args.tmax, args.tcount, args.tscale)
    table = profile_table(params, T)
    if args.format == "csv":
        _write(format_profile_csv(params, table), args.output)
    else:
        _write(format_profile_json(params, table), args.output)
    return EXIT_OK


def cmd_thresholds(args) -> int:
    params = _params_from(args)
    limit = args.clamp_stability if args.clamp_stability > 0 else None
    report = th.threshold_report(params, epsilon=args.epsilon, delta=args.delta,
                                 purity_measure=args.purity_measure,
                                 stability_limit=limit)
    _write(dumps_json(report.to_json_dict()), args.output)
    return EXIT_OK


def cmd_verify(args, closed_forms=None) -> int:
    summary = run_verification(args.seed, args.samples, closed_forms)
    lines = [f"oracle verification: {summary.n_samples} samples, seed {summary.seed}"]
    for name, dev in summary.max_deviation.items():
        tol, rel = TOLERANCES[name]
        status = "ok" if dev <= tol else "FAIL"
        kind = "rel" if rel else "abs"
        lines.append(f"  {name:<22s} max {kind} deviation {dev:.3e}  (tol {tol:g})  {status}")
    lines.extend(f"  {f}" for f in summary.failures)
    lines.append("PASSED" if summary.passed else "FAILED")
    _write("\n".join(lines) + "\n", args.output)
    return EXIT_OK if summary.passed else EXIT_VERIFY_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spindimer",
        description="Spin-1/2 dimer susceptibility fits and thermal quantum correlations.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, params=True):
        p.add_argument("--output", "-o", default=None, help="output path (default stdout)")
        if params:
            p.add_argument("--J", type=float, default=None, help="exchange coupling in K")
            p.add_argument("--g", type=float, default=None, help="Lande factor")

    p = sub.add_parser("fit", help="fit J and g to a susceptibility curve")
    common(p)
    p.add_argument("--input", "-i", help="CSV file with columns T (K), chi")
    p.add_argument("--units", type=UnitSystem.parse, default=UnitSystem.CGS,
                   help="si | cgs | mub-fu-oe (default cgs)")
    p.add_argument("--fit-space", choices=FIT_SPACES, default="chiT")
    p.add_argument("--background", action="store_true",
                   help="also fit a temperature-independent offset")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("profile", help="correlation measures over a temperature grid")
    common(p)
    p.add_argument("--params-from", help="JSON written by the fit subcommand")
    p.add_argument("--tmin", type=float, default=2.0)
    p.add_argument("--tmax", type=float, default=1e4)
    p.add_argument("--tcount", type=int, default=400)
    p.add_argument("--tscale", choices=("linear", "log"), default="log")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("thresholds", help="characteristic temperatures")
    common(p)
    p.add_argument("--params-from", help="JSON written by the fit subcommand")
    p.add_argument("--epsilon", type=float, default=th.DEFAULT_EPSILON)
    p.add_argument("--delta", type=float, default=th.DEFAULT_DELTA)
    p.add_argument("--purity-measure", choices=th.PURITY_MEASURES, default="eof")
    p.add_argument("--clamp-stability", type=float, default=th.DEFAULT_STABILITY_LIMIT,
                   help="material stability limit in K for annotations (0 disables)")
    p.set_defaults(func=cmd_thresholds)

    p = sub.add_parser("verify", help="cross-check closed forms against the oracle")
    common(p, params=False)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except CurveParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (KeyError, json.JSONDecodeError) as exc:
        print(f"parse error in parameter file: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InvalidInputError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

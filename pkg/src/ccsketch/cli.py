"""Command-line surface.

Subcommands: plan, sketch build|merge, estimate, simulate, bounds-curve,
oracle.  Every command is deterministic given its flags (all randomness is
seeded), so outputs are byte-identical across reruns and --jobs settings.

Exit codes: 0 success, 2 usage or parse error, 3 infeasible regime,
4 data integrity (strict-turnstile violation and friends), 5 numeric
failure.

The moment order is always specified through --gap (= 1 - alpha): parsing
alpha itself and forming 1 - alpha would throw away every significant
digit at gap = 1e-6.
"""

import argparse
import io
import json
import math
import sys

import numpy as np

from . import bounds, entropy, montecarlo, sketch as sketch_mod
from ._backend import BACKEND
from .errors import (CCSketchError, ConfigurationError, DegenerateInputError,
                     DomainError, FormatError, InfeasibleRegimeError,
                     NonPositiveMinimumError, NoRootError, NumericError,
                     StreamIndexError, TurnstileViolationError)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INFEASIBLE = 3
EXIT_DATA = 4
EXIT_NUMERIC = 5


def _fmt(x):
    """Shortest round-trip decimal for a float; stable across runs."""
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    return repr(float(x))


def _emit(text, out_path):
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w") as fh:
            fh.write(text)


def _json_report(obj, out_path):
    _emit(json.dumps(obj, sort_keys=True, indent=2) + "\n", out_path)


def _csv_cell(value):
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return _fmt(value)
    return str(value)


def _report_out(report, schema, fmt, out_path):
    """One-record report as JSON (default) or a single-row versioned CSV."""
    if fmt == "json":
        _json_report(report, out_path)
    else:
        keys = sorted(report)
        text = (f"# ccsketch-csv {schema} v1\n" + ",".join(keys) + "\n"
                + ",".join(_csv_cell(report[k]) for k in keys) + "\n")
        _emit(text, out_path)


def read_stream_file(path):
    """Parse 'index increment' lines; '#' comments and blanks are skipped.

    Returns (indices, increments) arrays; any bad line is reported with its
    1-based line number."""
    indices, increments = [], []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            body = line.strip()
            if not body or body.startswith("#"):
                continue
            parts = body.split()
            if len(parts) != 2:
                raise FormatError(
                    f"{path}: line {lineno}: expected 'index increment', "
                    f"got {body!r}")
            try:
                idx = int(parts[0])
                inc = float(parts[1])
            except ValueError:
                raise FormatError(
                    f"{path}: line {lineno}: cannot parse {body!r}") from None
            if idx < 0:
                raise FormatError(
                    f"{path}: line {lineno}: negative index {idx}")
            if not math.isfinite(inc):
                raise FormatError(
                    f"{path}: line {lineno}: non-finite increment")
            indices.append(idx)
            increments.append(inc)
    return (np.array(indices, dtype=np.uint64),
            np.array(increments, dtype=np.float64))


def _grid_from_args(args):
    if not (0 < args.eps_min < args.eps_max):
        raise ConfigurationError("need 0 < --eps-min < --eps-max")
    if args.eps_points < 1:
        raise ConfigurationError("--eps-points must be >= 1")
    return montecarlo.default_epsilon_grid(args.eps_min, args.eps_max,
                                           args.eps_points)


# ---------------------------------------------------------------- commands

def cmd_plan(args):
    query = bounds.BoundQuery(args.epsilon, args.delta, args.gap)
    plan = bounds.sample_size(query.epsilon, query.fail_prob, query.gap)
    k_eval = max(plan.k, 1)
    right = bounds.right_tail_bound(query.epsilon, query.gap, k_eval)
    eps_left = min(query.epsilon, 1.0 - 1e-12)
    left = bounds.left_tail_bound(eps_left, query.gap, k_eval)
    report = {
        "epsilon": args.epsilon,
        "fail_prob": args.delta,
        "gap": args.gap,
        "k_fractional": plan.k_fractional,
        "k": plan.k,
        "right_tail_bound_at_k": right if plan.k >= 1 else 1.0,
        "left_tail_bound_at_k": left.value if plan.k >= 1 else 0.0,
        "left_tail_underflow": left.underflow,
    }
    _report_out(report, "plan", args.format, args.out)
    return EXIT_OK


def _build_config(args):
    if args.unbounded:
        domain = None
    elif args.domain is not None:
        domain = args.domain
    else:
        raise ConfigurationError("pass --domain SIZE or --unbounded")
    return sketch_mod.SketchConfig(args.gap, args.k, args.seed, domain)


def cmd_sketch_build(args):
    config = _build_config(args)
    indices, increments = read_stream_file(args.input)
    sk = sketch_mod.CCSketch(config)
    sk.update_batch(indices, increments)
    sketch_mod.save_sketch(sk, args.out)
    _json_report({"f1": sk.f1, "updates": len(indices), "path": args.out},
                 None)
    return EXIT_OK


def cmd_sketch_merge(args):
    sketches = [sketch_mod.load_sketch(p) for p in args.inputs]
    merged = sketches[0]
    for other in sketches[1:]:
        merged = merged.merge(other)
    sketch_mod.save_sketch(merged, args.out)
    _json_report({"f1": merged.f1, "inputs": len(sketches),
                  "path": args.out}, None)
    return EXIT_OK


def cmd_estimate(args):
    sk = sketch_mod.load_sketch(args.sketch)
    if args.what == "moment":
        est = sk.estimate_moment()
        report = {"what": "moment", "value": est.value, "alpha": est.alpha,
                  "k": est.k_used, "f1": sk.f1}
    else:
        family = "tsallis" if args.what == "shannon" else args.what
        est = entropy.shannon_from_sketch(sk, family)
        report = {"what": args.what, "family": est.family,
                  "value": est.value, "alpha": est.alpha, "f1": sk.f1}
    _report_out(report, "estimate", args.format, args.out)
    return EXIT_OK


def _write_curve_csv(curve, fh):
    fh.write("# ccsketch-csv simulate v1\n")
    fh.write("epsilon,empirical_prob,bound,trials\n")
    for p in curve.points:
        emp = (f"<{_fmt(1.0 / p.trials)}" if p.exceed_count == 0
               else _fmt(p.empirical_prob))
        fh.write(f"{_fmt(p.epsilon)},{emp},{_fmt(p.bound)},{p.trials}\n")


def write_simulate_csv(curve):
    buf = io.StringIO()
    _write_curve_csv(curve, buf)
    return buf.getvalue()


def write_figure1_csv(curves):
    """CSV for concatenated panels; adds gap and k columns so panels stay
    distinguishable."""
    buf = io.StringIO()
    buf.write("# ccsketch-csv figure1 v1\n")
    buf.write("gap,k,epsilon,empirical_prob,bound,trials\n")
    for curve in curves:
        for p in curve.points:
            emp = (f"<{_fmt(1.0 / p.trials)}" if p.exceed_count == 0
                   else _fmt(p.empirical_prob))
            buf.write(f"{_fmt(curve.spec.gap)},{curve.spec.k},"
                      f"{_fmt(p.epsilon)},{emp},{_fmt(p.bound)},{p.trials}\n")
    return buf.getvalue()


def _curve_json(curve):
    return {
        "schema": "ccsketch.simulate.v1",
        "gap": curve.spec.gap,
        "k": curve.spec.k,
        "trials": curve.spec.trials,
        "base_seed": curve.spec.base_seed,
        "rows": [{"epsilon": p.epsilon, "empirical_prob": p.empirical_prob,
                  "exceed_count": p.exceed_count,
                  "bound": None if math.isnan(p.bound) else p.bound}
                 for p in curve.points],
    }


def cmd_simulate(args):
    spec = montecarlo.SimulationSpec(args.gap, args.k, _grid_from_args(args),
                                     args.trials, args.seed)
    curve = montecarlo.simulate_right_tail(spec, jobs=args.jobs)
    if args.format == "json":
        _json_report(_curve_json(curve), args.out)
    else:
        _emit(write_simulate_csv(curve), args.out)
    return EXIT_OK


def cmd_bounds_curve(args):
    grid = _grid_from_args(args)
    rows = []
    for eps in grid:
        try:
            right = bounds.right_tail_bound(float(eps), args.gap, args.k)
        except InfeasibleRegimeError:
            right = math.nan
        if eps < 1.0:
            left = bounds.left_tail_bound(float(eps), args.gap, args.k)
            left_value, left_under = left.value, left.underflow
        else:
            left_value, left_under = math.nan, False
        rows.append((float(eps), right, left_value, left_under))
    if args.format == "json":
        _json_report({
            "schema": "ccsketch.bounds-curve.v1",
            "gap": args.gap, "k": args.k,
            "rows": [{"epsilon": e,
                      "right_tail": None if math.isnan(r) else r,
                      "left_tail": None if math.isnan(l) else l,
                      "left_underflow": u}
                     for e, r, l, u in rows]}, args.out)
    else:
        buf = io.StringIO()
        buf.write("# ccsketch-csv bounds-curve v1\n")
        buf.write("epsilon,right_tail,left_tail,left_underflow\n")
        for e, r, l, u in rows:
            buf.write(f"{_fmt(e)},{_fmt(r)},{_fmt(l)},{int(u)}\n")
        _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_oracle(args):
    indices, increments = read_stream_file(args.input)
    if args.domain is None:
        raise ConfigurationError(
            "oracle needs --domain; it materializes the dense vector")
    vec = np.zeros(args.domain)
    if len(indices) and indices.max() >= np.uint64(args.domain):
        bad = int(indices[indices >= np.uint64(args.domain)][0])
        raise StreamIndexError(
            f"index {bad} outside declared domain of size {args.domain}")
    np.add.at(vec, indices.astype(np.int64), increments)
    if np.any(vec < 0.0):
        worst = int(np.argmin(vec))
        raise TurnstileViolationError(
            f"final frequency of index {worst} is {vec[worst]}; the stream "
            f"is not strict-turnstile")
    alpha = 1.0 - args.gap
    f_alpha = sketch_mod.exact_moment(vec, alpha)
    f1 = float(vec.sum())
    _report_out({
        "alpha": alpha, "gap": args.gap,
        "f_alpha": f_alpha, "f1": f1,
        "shannon": entropy.shannon_exact(vec),
        "renyi": entropy.renyi_entropy(f_alpha, f1, alpha),
        "tsallis": entropy.tsallis_entropy(f_alpha, f1, alpha),
    }, "oracle", args.format, args.out)
    return EXIT_OK


# ------------------------------------------------------------------ parser

def _add_grid_flags(p):
    p.add_argument("--eps-min", type=float, default=1e-4)
    p.add_argument("--eps-max", type=float, default=1e-1)
    p.add_argument("--eps-points", type=int, default=30)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ccsketch",
        description="Frequency moments near order 1 and stream entropy via "
                    "maximally skewed stable projection sketches.")
    parser.add_argument("--version", action="version",
                        version=f"ccsketch 0.1.0 (backend: {BACKEND})")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="minimum projection count for a target "
                                    "accuracy/confidence")
    p.add_argument("--epsilon", type=float, required=True,
                   help="relative error target")
    p.add_argument("--delta", type=float, required=True,
                   help="allowed failure probability")
    p.add_argument("--gap", type=float, required=True, help="1 - alpha")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_plan)

    ps = sub.add_parser("sketch", help="build or merge sketch files")
    psub = ps.add_subparsers(dest="subcommand", required=True)

    p = psub.add_parser("build", help="ingest a text stream file")
    p.add_argument("--input", required=True)
    p.add_argument("--gap", type=float, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--domain", type=int, default=None)
    p.add_argument("--unbounded", action="store_true",
                   help="skip index validation (hashed key spaces)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sketch_build)

    p = psub.add_parser("merge", help="merge sketches sharing one config")
    p.add_argument("--out", required=True)
    p.add_argument("inputs", nargs="+")
    p.set_defaults(func=cmd_sketch_merge)

    p = sub.add_parser("estimate", help="estimate a moment or entropy from "
                                        "a sketch file")
    p.add_argument("--sketch", required=True)
    p.add_argument("--what", required=True,
                   choices=("moment", "renyi", "tsallis", "shannon"))
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("simulate", help="simulated tail probabilities vs "
                                        "the analytic bound")
    p.add_argument("--gap", type=float, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--trials", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    _add_grid_flags(p)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("bounds-curve", help="right/left tail bounds over an "
                                            "epsilon grid")
    p.add_argument("--gap", type=float, required=True)
    p.add_argument("--k", type=int, default=1)
    _add_grid_flags(p)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_bounds_curve)

    p = sub.add_parser("oracle", help="exact moments and entropies of a "
                                      "stream file (dense)")
    p.add_argument("--input", required=True)
    p.add_argument("--gap", type=float, required=True)
    p.add_argument("--domain", type=int, required=True)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_oracle)

    return parser


_EXIT_BY_ERROR = (
    (InfeasibleRegimeError, EXIT_INFEASIBLE),
    ((NonPositiveMinimumError, TurnstileViolationError, StreamIndexError,
      DegenerateInputError), EXIT_DATA),
    ((NumericError, NoRootError), EXIT_NUMERIC),
    ((FormatError, ConfigurationError, DomainError), EXIT_USAGE),
)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CCSketchError as exc:
        for kinds, code in _EXIT_BY_ERROR:
            if isinstance(exc, kinds):
                print(f"ccsketch: error: {exc}", file=sys.stderr)
                return code
        print(f"ccsketch: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"ccsketch: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def console_main():
    sys.exit(main())


if __name__ == "__main__":
    console_main()

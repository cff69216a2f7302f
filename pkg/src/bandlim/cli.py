"""Command-line interface: tables, experiments, and verification runs.

Subcommands
-----------
constants    c_r values from every source, bounds, tau, C(k)
gap-table    maximum-gap threshold table (CSV matches the 4-decimal layout)
reconstruct  Hermite-iteration experiment or blind run from a sample file
frame        frame-algorithm experiment (empirical or analytic bounds)
verify       inequality / extremal / zeros / uniqueness check corpus
zeros        double-zero gap scans over squared random signals

Exit codes: 0 success, 1 verification failure, 2 precondition violation,
3 divergence, 4 I/O failure.  JSON outputs embed {seed, version, config};
all output is deterministic for a fixed command line (no timestamps).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import __version__
from .analysis import (
    _gauss_quad,
    aah_extremal,
    double_zero_gap,
    random_clamped_function,
    square_signal,
    uniqueness_check,
    verify_ws,
    verify_ws_2r,
)
from .constants import (
    PRINTED_TAU,
    c_of_k,
    characteristic_mu,
    cr_bounds,
    gap_thresholds,
    tau,
    wirtinger_constant,
)
from .errors import DivergenceError, GapConditionError, NotAFrameError
from .reconstruct import (
    empirical_frame_bounds,
    iterate_frame,
    iterate_hermite,
    report_to_json_dict,
)
from .sampling import make_partition, sampleset_from_json_dict, take_samples
from .signal import default_period, random_signal, signal_to_json_dict

_VERIFY_CHECKS = ("ws", "ws-2r", "aah-equality", "double-zero", "uniqueness")


def parse_sigma(text):
    """Bandlimit parser: 'pi', 'N*pi', 'Npi' or a plain decimal."""
    t = str(text).strip().lower().replace(" ", "")
    try:
        if t == "pi":
            return math.pi
        if t.endswith("*pi"):
            return float(t[:-3]) * math.pi
        if t.endswith("pi"):
            return float(t[:-2]) * math.pi
        return float(t)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"cannot parse sigma {text!r}; use a decimal, 'pi' or 'N*pi'"
        )


def parse_k_range(text):
    """k list parser: '7', '1,2,10' or '40..42'."""
    ks = []
    for token in str(text).split(","):
        token = token.strip()
        if ".." in token:
            lo, hi = token.split("..", 1)
            ks.extend(range(int(lo), int(hi) + 1))
        else:
            ks.append(int(token))
    if not ks or any(k < 1 for k in ks):
        raise argparse.ArgumentTypeError(f"invalid k list {text!r}")
    return ks


def _emit(text, path):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _json_text(obj):
    return json.dumps(obj, indent=2) + "\n"


def _csv_text(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _meta(args, seed=None):
    config = {
        key: value
        for key, value in sorted(vars(args).items())
        if key not in ("func", "output") and value is not None
    }
    meta = {"version": __version__, "config": config}
    if seed is not None:
        meta["seed"] = seed
    return meta


def _add_common(parser, with_seed=True):
    parser.add_argument("--sigma", type=parse_sigma, default=math.pi,
                        help="bandlimit; accepts decimals, 'pi', 'N*pi' (default pi)")
    parser.add_argument("--period", type=float, default=None,
                        help="torus period (default 20 nominal wavelengths)")
    if with_seed:
        parser.add_argument("--seed", type=int, default=0, help="PRNG seed")
    parser.add_argument("--format", choices=("csv", "json"), default=None,
                        help="output format (default depends on the command)")
    parser.add_argument("--output", default=None, help="output path (default stdout)")


def cmd_constants(args):
    rows = []
    records = []
    for r in range(1, args.r_max + 1):
        bounds = cr_bounds(r)
        entry = {"r": r, "lower": bounds.lower, "upper": bounds.upper,
                 "asymptotic": bounds.asymptotic}
        sources = []
        if r <= 3:
            sources.append("printed")
        if r <= 2:
            sources.append("characteristic_equation")
        sources.append("eigensolver")
        for source in sources:
            value = wirtinger_constant(r, source)
            entry[source] = value.value
            if source == "eigensolver":
                entry["uncertainty"] = value.uncertainty
                entry["in_bounds"] = bounds.lower <= value.value <= bounds.upper
            rows.append((r, source, repr(value.value), repr(value.uncertainty),
                         repr(bounds.lower), repr(bounds.upper)))
        records.append(entry)
    if args.format == "csv":
        text = _csv_text(("r", "source", "value", "uncertainty", "lower", "upper"), rows)
    else:
        payload = {
            "meta": _meta(args),
            "mu": characteristic_mu(),
            "tau": {"printed": PRINTED_TAU, "root_find": tau("root_find")},
            "cr": records,
            "c_of_k": {str(k): c_of_k(k) for k in range(1, args.k_max + 1)},
        }
        text = _json_text(payload)
    _emit(text, args.output)
    return 0


def cmd_gap_table(args):
    if args.k is not None:
        ks = args.k
    else:
        ks = list(range(1, args.k_max + 1))
    source = args.cr_source
    if args.upper:
        source = "upper_bound"
    rows = []
    records = []
    for k in ks:
        g = gap_thresholds(k, args.sigma, source)
        rows.append((k, f"{g.L_taylor:.4f}", f"{g.L_hermite:.4f}", g.cr_source))
        records.append({"k": k, "L_taylor": g.L_taylor, "L_hermite": g.L_hermite,
                        "cr_source": g.cr_source})
    if args.format == "json":
        text = _json_text({"meta": _meta(args), "rows": records})
    else:
        text = _csv_text(("k", "L_taylor", "L_hermite", "cr_source"), rows)
    _emit(text, args.output)
    return 0


def _run_iteration(args, method):
    sigma = args.sigma
    if args.input is not None:
        with open(args.input, "r", encoding="utf-8") as fh:
            samples = sampleset_from_json_dict(json.load(fh))
        reference = None
    else:
        T = args.period if args.period is not None else default_period(sigma)
        reference = random_signal(args.seed, T, sigma, real_flag=args.real)
        points = make_partition(T, args.delta, args.jitter, args.seed)
        samples = take_samples(reference, points, args.k)
    if method == "hermite":
        signal, report = iterate_hermite(
            samples, sigma, n_max=args.iters, tol=args.tol, reference=reference,
            grid_N=args.grid,
        )
        extra = {}
    else:
        signal, report = iterate_frame(
            samples, sigma, bounds=args.bounds, n_max=args.iters, tol=args.tol,
            reference=reference,
        )
        emp = empirical_frame_bounds(samples, sigma)
        extra = {"A_emp": emp.A_emp, "B_emp": emp.B_emp}
    if args.format == "csv":
        rows = [
            (n, repr(err), repr(bound))
            for n, (err, bound) in enumerate(zip(report.errors, report.bound_curve))
        ]
        text = _csv_text(("n", "error", "bound"), rows)
    else:
        payload = {
            "meta": _meta(args, seed=args.seed if args.input is None else None),
            "report": report_to_json_dict(report),
            "signal": signal_to_json_dict(signal),
        }
        payload.update(extra)
        text = _json_text(payload)
    _emit(text, args.output)
    return 0 if report.converged else 3


def cmd_reconstruct(args):
    return _run_iteration(args, "hermite")


def cmd_frame(args):
    return _run_iteration(args, "frame")


def _verify_records(args):
    sigma = args.sigma
    T = args.period if args.period is not None else default_period(sigma)
    trials = args.trials
    rng = np.random.default_rng(args.seed)
    records = []

    def wants(name):
        return args.only is None or args.only == name

    if wants("ws") or wants("ws-2r"):
        for r in (1, 2, 3):
            for i in range(trials):
                a = float(rng.uniform(-2.0, 2.0))
                b = a + float(rng.uniform(0.5, 3.0))
                fn = random_clamped_function(int(rng.integers(2**32)), a, b, r)
                if wants("ws"):
                    res = verify_ws(fn, r)
                    records.append({
                        "check": "ws", "inputs": {"r": r, "a": a, "b": b, "trial": i},
                        "lhs": res["lhs"], "rhs": res["rhs"], "holds": res["holds"],
                    })
                if wants("ws-2r"):
                    res = verify_ws_2r(fn, r)
                    records.append({
                        "check": "ws-2r", "inputs": {"r": r, "a": a, "b": b, "trial": i},
                        "lhs": res["lhs"], "rhs": res["rhs"], "holds": res["holds"],
                    })

    if wants("aah-equality"):
        for i in range(10):
            a = float(rng.uniform(-3.0, 3.0))
            b = a + float(rng.uniform(0.5, 4.0))
            fn = aah_extremal(a, b)
            num = _gauss_quad(lambda x: np.abs(fn.deriv(x, 0)) ** 2, a, b)
            den = _gauss_quad(lambda x: np.abs(fn.deriv(x, 2)) ** 2, a, b)
            quotient = num / den
            predicted = (1.0 / tau("root_find")) * ((b - a) / math.pi) ** 4
            holds = abs(quotient - predicted) <= 1e-6 * predicted
            records.append({
                "check": "aah-equality", "inputs": {"a": a, "b": b, "trial": i},
                "lhs": quotient, "rhs": predicted, "holds": holds,
            })

    if wants("double-zero"):
        ratios = []
        for i in range(trials):
            seed_i = int(rng.integers(2**32))
            g = random_signal(seed_i, T, sigma, real_flag=True)
            out = double_zero_gap(square_signal(g))
            if not out["vacuous"]:
                ratios.append(out["max_gap"] / out["threshold"])
            records.append({
                "check": "double-zero",
                "inputs": {"seed": seed_i, "n_zeros": len(out["zeros"]),
                           "vacuous": out["vacuous"]},
                "lhs": out["max_gap"], "rhs": out["threshold"],
                "holds": out["consistent"],
            })
        if ratios:
            # sharpness record: how close the corpus came to the bound
            records.append({
                "check": "double-zero",
                "inputs": {"summary": "observed_min_ratio", "trials": trials},
                "lhs": min(ratios), "rhs": 1.0, "holds": min(ratios) > 1.0,
            })

    if wants("uniqueness"):
        threshold = math.pi * tau("root_find") ** 0.25 / sigma
        for i in range(trials):
            seed_i = int(rng.integers(2**32))
            jitter = float(rng.uniform(0.0, 0.6))
            points = make_partition(T, 0.98 * threshold, jitter, seed_i)
            out = uniqueness_check(points, T, sigma)
            records.append({
                "check": "uniqueness",
                "inputs": {"seed": seed_i, "jitter": jitter, "n_points": len(points)},
                "lhs": out["min_singular_value"], "rhs": 0.0,
                "holds": out["unique"],
            })
    return records


def cmd_verify(args):
    if args.only is not None and args.only not in _VERIFY_CHECKS:
        raise ValueError(
            f"unknown check {args.only!r}; expected one of {', '.join(_VERIFY_CHECKS)}"
        )
    if args.format == "csv":
        raise ValueError("verify emits JSON records; use --format json")
    records = _verify_records(args)
    all_hold = all(rec["holds"] for rec in records)
    payload = {
        "meta": _meta(args, seed=args.seed),
        "records": records,
        "all_hold": all_hold,
    }
    _emit(_json_text(payload), args.output)
    if not all_hold:
        failed = [rec["check"] for rec in records if not rec["holds"]]
        print(f"failed checks: {', '.join(sorted(set(failed)))}", file=sys.stderr)
        return 1
    return 0


def cmd_zeros(args):
    if args.format == "csv":
        raise ValueError("zeros emits JSON records; use --format json")
    sigma = args.sigma
    T = args.period if args.period is not None else default_period(sigma)
    rng = np.random.default_rng(args.seed)
    records = []
    for i in range(args.trials):
        seed_i = int(rng.integers(2**32))
        g = random_signal(seed_i, T, sigma, real_flag=True)
        out = double_zero_gap(square_signal(g), zero_tol=args.zero_tol)
        records.append({
            "trial": i, "seed": seed_i, "n_zeros": len(out["zeros"]),
            "max_gap": out["max_gap"], "threshold": out["threshold"],
            "consistent": out["consistent"], "vacuous": out["vacuous"],
        })
    all_consistent = all(rec["consistent"] for rec in records)
    payload = {
        "meta": _meta(args, seed=args.seed),
        "records": records,
        "all_consistent": all_consistent,
    }
    _emit(_json_text(payload), args.output)
    return 0 if all_consistent else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="bandlim",
        description="Band-limited reconstruction from nonuniform derivative samples.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("constants", help="c_r values, bounds, tau, C(k)")
    p.add_argument("--r-max", type=int, default=8, help="largest r (default 8)")
    p.add_argument("--k-max", type=int, default=10, help="largest k for C(k)")
    _add_common(p, with_seed=False)
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("gap-table", help="maximum-gap threshold table")
    p.add_argument("--k-max", type=int, default=10, help="rows k=1..k_max")
    p.add_argument("--k", type=parse_k_range, default=None,
                   help="explicit k list, e.g. '40..42' or '1,2,10'")
    p.add_argument("--upper", action="store_true",
                   help="use the factorial upper bound for every row")
    p.add_argument("--cr-source", default=None,
                   help="override the c_k source policy for all rows")
    _add_common(p, with_seed=False)
    p.set_defaults(func=cmd_gap_table)

    for name, helptext in (
        ("reconstruct", "Hermite-operator iteration"),
        ("frame", "relaxed frame iteration"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--k", type=int, default=1, help="derivative orders sampled")
        p.add_argument("--delta", type=float, default=0.5,
                       help="maximum-gap target for the partition")
        p.add_argument("--jitter", type=float, default=0.3,
                       help="partition jitter in [0, 1)")
        p.add_argument("--iters", type=int, default=30, help="iteration cap")
        p.add_argument("--tol", type=float, default=1e-10,
                       help="relative update-norm stop threshold")
        p.add_argument("--grid", type=int, default=None, help="dense grid size")
        p.add_argument("--real", action="store_true",
                       help="generate a real-valued test signal")
        p.add_argument("--input", default=None,
                       help="SampleSet JSON path (blind mode)")
        if name == "frame":
            p.add_argument("--bounds", choices=("empirical", "analytic"),
                           default="empirical", help="frame-bound source for rho")
        _add_common(p)
        p.set_defaults(func=cmd_reconstruct if name == "reconstruct" else cmd_frame)

    p = sub.add_parser("verify", help="inequality and zeros check corpus")
    p.add_argument("--only", default=None,
                   help=f"run one check: {', '.join(_VERIFY_CHECKS)}")
    p.add_argument("--trials", type=int, default=10, help="corpus size per check")
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("zeros", help="double-zero gap scans")
    p.add_argument("--trials", type=int, default=10, help="number of signals")
    p.add_argument("--zero-tol", type=float, default=1e-7,
                   help="double-zero classification tolerance")
    _add_common(p)
    p.set_defaults(func=cmd_zeros)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (GapConditionError, NotAFrameError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DivergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())

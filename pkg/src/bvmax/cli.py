"""Command-line front end: ``bvmax {thresholds,classify,maximizer,sweep,verify}``.

Single-point commands print JSON, sweeps write CSV.  Exit codes: 0 success,
1 verification violation, 2 invalid input, 3 I/O failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .classifier import DEFAULT_EQ_TOL, classify, maximizer_set
from .constants import ProblemParams, critical_b0, gn_best_constant
from .oracle import RadialStepFunction, functional_value, monte_carlo_bound_check
from .thresholds import alpha_c, alpha_v

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INVALID = 2
EXIT_IO = 3

THREADS_ENV = "BVMAX_THREADS"
SWEEP_COLUMNS = ("alpha_v", "alpha_c", "d_alpha", "verdict", "case_label", "note")

log = logging.getLogger("bvmax")


class InvalidInput(Exception):
    pass


def _jsonable(obj):
    if isinstance(obj, float):
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        if math.isnan(obj):
            return "nan"
        return obj
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        return _jsonable(obj.item())
    return obj


def _emit(payload) -> None:
    sys.stdout.write(json.dumps(_jsonable(payload), indent=2) + "\n")


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return "%.17g" % x
    return str(x)


def _params(ns, alpha_default=None) -> ProblemParams:
    missing = [k for k in ("n", "a", "b", "q") if getattr(ns, k) is None]
    if missing:
        raise InvalidInput("missing required flag(s): " + ", ".join("--" + k for k in missing))
    alpha = ns.alpha if ns.alpha is not None else alpha_default
    if alpha is None:
        raise InvalidInput("missing required flag: --alpha")
    try:
        return ProblemParams(ns.n, ns.a, ns.b, ns.q, alpha)
    except (TypeError, ValueError) as exc:
        raise InvalidInput(str(exc)) from exc


def _thread_count() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw == "":
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise InvalidInput(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    if n < 1:
        raise InvalidInput(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return n


# commands --------------------------------------------------------------------

def cmd_thresholds(ns) -> int:
    P = _params(ns, alpha_default=1.0)
    out = {
        "params": {"N": P.N, "a": P.a, "b": P.b, "q": P.q},
        "conjugate": P.conjugate,
        "E_q": gn_best_constant(P.N, P.q),
        "b0": critical_b0(P.N, P.q),
        "alpha_v": alpha_v(P).to_dict(),
        "alpha_c": alpha_c(P).to_dict() if P.is_critical else None,
    }
    _emit(out)
    return EXIT_OK


def cmd_classify(ns) -> int:
    P = _params(ns)
    _emit(classify(P, ns.eq_tol).to_dict())
    return EXIT_OK


def cmd_maximizer(ns) -> int:
    P = _params(ns)
    report = classify(P, ns.eq_tol)
    balls = []
    for m in maximizer_set(P, ns.eq_tol, report=report):
        u = RadialStepFunction.ball(m.radius, m.sign * m.height, P.N)
        entry = m.to_dict()
        entry["functional_value"] = functional_value(u, P.alpha, P.q)
        balls.append(entry)
    _emit({
        "params": {"N": P.N, "a": P.a, "b": P.b, "q": P.q, "alpha": P.alpha},
        "verdict": report.verdict,
        "case_label": report.case_label,
        "d_alpha": report.d_alpha,
        "note": "every translate of a listed ball is also a maximizer",
        "maximizers": balls,
    })
    return EXIT_OK


def _sweep_values(ns) -> list:
    if ns.count < 1:
        raise InvalidInput("--count must be >= 1")
    if not (math.isfinite(ns.lo) and math.isfinite(ns.hi)) or ns.lo > ns.hi:
        raise InvalidInput("need finite --lo <= --hi")
    if ns.log:
        if ns.lo <= 0:
            raise InvalidInput("--log spacing needs --lo > 0")
        return list(np.geomspace(ns.lo, ns.hi, ns.count))
    return list(np.linspace(ns.lo, ns.hi, ns.count))


def _sweep_point(base: dict, name: str, value: float, eq_tol: float) -> list:
    kw = dict(base)
    if name == "n":
        if value != int(value):
            return [value, None, None, None, "skipped", "", "non-integer dimension"]
        value = int(value)
    kw[name] = value
    try:
        P = ProblemParams(kw["n"], kw["a"], kw["b"], kw["q"], kw["alpha"])
    except (TypeError, ValueError) as exc:
        return [value, None, None, None, "skipped", "", str(exc)]
    try:
        rep = classify(P, eq_tol)
    except (ValueError, FloatingPointError) as exc:
        return [value, None, None, None, "skipped", "", f"numerical failure: {exc}"]
    ac = rep.alpha_c.value if rep.alpha_c is not None else None
    note = "degenerate" if rep.degenerate else ""
    return [value, rep.alpha_v.value, ac, rep.d_alpha, rep.verdict, rep.case_label, note]


def cmd_sweep(ns) -> int:
    name = ns.param
    base = {k: getattr(ns, k) for k in ("n", "a", "b", "q", "alpha")}
    missing = [k for k, v in base.items() if v is None and k != name]
    if missing:
        raise InvalidInput("missing fixed flag(s): " + ", ".join("--" + k for k in missing))
    values = _sweep_values(ns)
    workers = _thread_count()
    if workers > 1 and len(values) > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            rows = list(ex.map(lambda v: _sweep_point(base, name, v, ns.eq_tol), values))
    else:
        rows = [_sweep_point(base, name, v, ns.eq_tol) for v in values]

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow((name,) + SWEEP_COLUMNS)
    for row in rows:
        writer.writerow([_fmt(x) for x in row])
    text = buf.getvalue()
    if ns.out is None or ns.out == "-":
        sys.stdout.write(text)
    else:
        try:
            with open(ns.out, "w", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"error: cannot write {ns.out}: {exc}", file=sys.stderr)
            return EXIT_IO
    return EXIT_OK


def cmd_verify(ns) -> int:
    P = _params(ns)
    if ns.samples < 1:
        raise InvalidInput("--samples must be >= 1")
    if not 0 <= ns.seed < 2**64:
        raise InvalidInput("--seed must be a 64-bit unsigned integer")
    seeds = ()
    if ns.maximizer_seeds:
        seeds = tuple(m.radius for m in maximizer_set(P, ns.eq_tol) if m.sign > 0)
    report = monte_carlo_bound_check(P, ns.samples, ns.seed, seed_radii=seeds,
                                     workers=_thread_count())
    _emit(report)
    bad = report["violations"] + report["gn_violations"] + report["reduction_violations"]
    if bad:
        print(f"verification failed: {report['violations']} bound, "
              f"{report['gn_violations']} GN, {report['reduction_violations']} reduction "
              "violations", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


# parser ----------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INVALID)


def _add_params(p, alpha=True):
    p.add_argument("--n", type=int, help="dimension N >= 2")
    p.add_argument("--a", type=float, help="exponent on the TV norm")
    p.add_argument("--b", type=float, help="exponent on the L1 norm")
    p.add_argument("--q", type=float, help="Lebesgue exponent, 1 < q <= N/(N-1)")
    if alpha:
        p.add_argument("--alpha", type=float, help="weight alpha > 0")
    p.add_argument("--eq-tol", type=float, default=DEFAULT_EQ_TOL,
                   help="relative tolerance for alpha equal to a threshold")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bvmax", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log diagnostics to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("thresholds", help="alpha_v, alpha_c, E_q and b0")
    _add_params(p)
    p.set_defaults(func=cmd_thresholds)

    p = sub.add_parser("classify", help="attainability verdict and theorem clause")
    _add_params(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("maximizer", help="explicit ball maximizers")
    _add_params(p)
    p.set_defaults(func=cmd_maximizer)

    p = sub.add_parser("sweep", help="CSV sweep over one parameter")
    _add_params(p)
    p.add_argument("--param", required=True, choices=("n", "a", "b", "q", "alpha"))
    p.add_argument("--lo", type=float, required=True)
    p.add_argument("--hi", type=float, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--log", action="store_true", help="geometric spacing")
    p.add_argument("--out", help="CSV path (default: stdout)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="Monte Carlo check of D_alpha against the oracle")
    _add_params(p)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-maximizer-seeds", dest="maximizer_seeds", action="store_false",
                   help="do not add the known maximizer radii to the sample")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return ns.func(ns)
    except InvalidInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except BrokenPipeError:
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

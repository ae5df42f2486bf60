"""``swnfock`` command line.

Exit status: 0 on converged/passing results, 1 on unreadable or invalid
input, 2 on a domain violation, 3 on non-convergence or an undetermined or
failing verification. A JSON (or CSV) report is always written to stdout.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np
from gmpy2 import mpq

from . import schemas
from .approx import ApproxSchedule, convergence_report
from .errors import DimensionMismatch, DomainViolation, IncompatibleGrid, NoConvergence
from .expvec import (
    DEFAULT_TRUNCATION,
    Verdict,
    divergence_probe,
    exchange_limits_report,
    gram,
    series_vs_closed,
)
from .kernel import KernelConfig, kernel
from .numeric import MODES, QComplex, format_real, numeric_mode, using_mode
from .swnalg import vacuum_expectation, word_from_json
from .testfn import SampledFunction, StepFunction

EXIT_OK, EXIT_INPUT, EXIT_DOMAIN, EXIT_UNSETTLED = 0, 1, 2, 3


class InputError(Exception):
    pass


# output ----------------------------------------------------------------------

def _encode(obj) -> str:
    """JSON text with floats at 17 significant digits and exact rationals as strings."""
    if obj is None or isinstance(obj, (bool, str)):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj) + 0.0
        if not math.isfinite(x):
            return json.dumps(str(x))
        return format(x, ".17g")
    if isinstance(obj, QComplex):
        return _encode({"re": format_real(obj.re), "im": format_real(obj.im)})
    if type(obj) is type(mpq(0)) or isinstance(obj, Fraction):
        return json.dumps(format_real(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        return _encode({"re": obj.real, "im": obj.imag})
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_encode(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_encode(v) for v in obj) + "]"
    if hasattr(obj, "to_json"):
        return _encode(obj.to_json())
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj) -> str:
    return _encode(obj)


# input -----------------------------------------------------------------------

def _read_json(path: str, what: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{what}: cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{what}: {path} is not valid JSON ({exc.msg} at line {exc.lineno})") from exc


def load_function(path: str, what: str = "f"):
    data = _read_json(path, what)
    if isinstance(data, dict) and "cells" in data:
        schemas.validate(data, schemas.STEP_FUNCTION, what)
        try:
            return StepFunction.from_json(data)
        except (ValueError, DimensionMismatch) as exc:
            raise InputError(f"{what}: field cells: {exc}") from exc
    schemas.validate(data, schemas.SAMPLED_FUNCTION, what)
    try:
        return SampledFunction.from_json(data)
    except (ValueError, DimensionMismatch) as exc:
        raise InputError(f"{what}: field values: {exc}") from exc


def load_step(path: str, what: str = "f") -> StepFunction:
    f = load_function(path, what)
    if not isinstance(f, StepFunction):
        raise InputError(f"{what}: field cells: a step function is required here")
    return f


def load_sampled(path: str, levels, what: str = "f") -> SampledFunction:
    f = load_function(path, what)
    if isinstance(f, SampledFunction):
        return f
    if f.dim != 1:
        raise InputError(f"{what}: field dim: only one-dimensional functions can be sampled")
    support = f.support() or f.boxes
    if not support:
        raise InputError(f"{what}: field cells: empty step function has no sampling domain")
    lo = min(float(b.lo[0]) for b in support)
    hi = max(float(b.hi[0]) for b in support)
    return SampledFunction.from_step(f, lo, hi, max(levels))


def parse_levels(text: str) -> list[int]:
    try:
        levels = [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise InputError(f"levels: {exc}") from exc
    return levels


# subcommands -----------------------------------------------------------------

def _cfg(args) -> KernelConfig:
    return KernelConfig(c=args.c, tol=args.tol, quad_cells=args.quad_cells,
                        max_refinements=args.max_refinements)


def cmd_kernel(args):
    f = load_function(args.f, "f")
    g = load_function(args.g, "g") if args.g else f
    return kernel(f, g, _cfg(args)), EXIT_OK


def cmd_moment(args):
    data = _read_json(args.word, "word")
    schemas.validate(data, schemas.WORD, "word")
    try:
        word = word_from_json(data)
    except ValueError as exc:
        raise InputError(f"word: {exc}") from exc
    value = vacuum_expectation(word, args.c)
    return {"value": value, "numeric_mode": numeric_mode()}, EXIT_OK


def _series_status(diag) -> int:
    if diag.verdict is Verdict.CONVERGED:
        return EXIT_OK
    if diag.domain_violation:
        return EXIT_DOMAIN
    return EXIT_UNSETTLED


def cmd_verify(args):
    f = load_step(args.f, "f")
    g = load_step(args.g, "g") if args.g else f
    diag = series_vs_closed(f, g, args.c, args.M, args.tol)
    return diag, _series_status(diag)


def cmd_probe(args):
    f = load_step(args.f, "f")
    diag = divergence_probe(f, args.c, args.M, args.tol)
    return diag, _series_status(diag)


def cmd_gram(args):
    folder = Path(args.fs)
    if not folder.is_dir():
        raise InputError(f"fs: {folder} is not a directory")
    paths = sorted(folder.glob("*.json"))
    if not paths:
        raise InputError(f"fs: no *.json files in {folder}")
    fs = [load_step(str(p), p.name) for p in paths]
    report = gram(fs, args.c)
    return report, EXIT_OK if report.verdict else EXIT_UNSETTLED


def cmd_approx(args):
    levels = parse_levels(args.levels)
    sched = ApproxSchedule(tuple(levels))
    f = load_sampled(args.f, levels)
    report = convergence_report(f, sched, _cfg(args))
    return report, EXIT_OK if report.passed else EXIT_UNSETTLED


def cmd_exchange(args):
    levels = parse_levels(args.levels)
    sched = ApproxSchedule(tuple(levels))
    f = load_sampled(args.f, levels)
    report = exchange_limits_report(f, sched, args.c, args.M, tol=args.limit_tol, cfg=_cfg(args))
    return report, EXIT_OK if report.passed else EXIT_UNSETTLED


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--numeric-mode", choices=MODES, default=argparse.SUPPRESS,
                        help="exact rationals or double precision (default: rational)")
    common.add_argument("--format", choices=("json", "csv"), default=argparse.SUPPRESS,
                        help="report format; csv applies to tabular reports")

    parser = argparse.ArgumentParser(prog="swnfock", parents=[common],
                                     description="Square-of-white-noise Fock representation toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("--c", type=float, default=1.0, help="SWN constant c > 0")
        p.set_defaults(func=func)
        return p

    def quad(p, tol=1e-10):
        p.add_argument("--tol", type=float, default=tol)
        p.add_argument("--quad-cells", type=int, default=1024)
        p.add_argument("--max-refinements", type=int, default=10)

    p = add("kernel", cmd_kernel, "closed-form / quadrature kernel <ψ(f), ψ(g)>")
    p.add_argument("--f", required=True)
    p.add_argument("--g")
    quad(p)

    p = add("moment", cmd_moment, "vacuum expectation of a generator word")
    p.add_argument("--word", required=True)

    p = add("verify", cmd_verify, "series partial sums against the closed form")
    p.add_argument("--f", required=True)
    p.add_argument("--g")
    p.add_argument("--M", type=int, default=DEFAULT_TRUNCATION)
    p.add_argument("--tol", type=float, default=1e-8)

    p = add("probe", cmd_probe, "divergence diagnostics for possibly inadmissible f")
    p.add_argument("--f", required=True)
    p.add_argument("--M", type=int, default=200)
    p.add_argument("--tol", type=float, default=1e-8)

    p = add("gram", cmd_gram, "Gram matrix of exponential vectors with PSD check")
    p.add_argument("--fs", required=True, help="directory of step-function JSON files")

    p = add("approx", cmd_approx, "dominated step approximation convergence table")
    p.add_argument("--f", required=True)
    p.add_argument("--levels", default="16,64,256,1024")
    quad(p)

    p = add("exchange", cmd_exchange, "exchange-of-limits table over (level, truncation)")
    p.add_argument("--f", required=True)
    p.add_argument("--levels", default="16,64,256,1024")
    p.add_argument("--M", type=int, default=30)
    p.add_argument("--limit-tol", type=float, default=1e-4)
    quad(p)
    return parser


def _emit(result, fmt: str, out) -> None:
    if fmt == "csv" and hasattr(result, "to_csv"):
        out.write(result.to_csv())
    else:
        out.write(dumps(result) + "\n")


def _error(kind: str, message: str, code: int) -> int:
    sys.stdout.write(dumps({"error": kind, "message": message}) + "\n")
    print(f"swnfock: {kind}: {message}", file=sys.stderr)
    return code


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    mode = getattr(args, "numeric_mode", "rational")
    fmt = getattr(args, "format", "json")
    try:
        with using_mode(mode):
            result, code = args.func(args)
    except (InputError, schemas.SchemaError) as exc:
        return _error("InputError", str(exc), EXIT_INPUT)
    except DomainViolation as exc:
        return _error("DomainViolation", str(exc), EXIT_DOMAIN)
    except NoConvergence as exc:
        return _error("NoConvergence", str(exc), EXIT_UNSETTLED)
    except (DimensionMismatch, IncompatibleGrid, ValueError) as exc:
        return _error(type(exc).__name__, str(exc), EXIT_INPUT)
    _emit(result, fmt, sys.stdout)
    return code


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()

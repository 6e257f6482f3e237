"""Command-line interface: ``lagsum eval | verify | kummer``.

Exit codes: 0 success, 1 evaluation failure (or failing grid points),
2 singular case, 64 usage error, 74 output file not writable.
"""

import argparse
import csv
import json
import math
import os
import sys

from .hyper import HyperParams, TruncationPolicy, eval_pfq
from .identities import (
    CASE_SIGNS,
    IdentityCase,
    SingularCaseError,
    kummer_minus,
    kummer_plus,
    s_closed_eval,
    s_direct,
    s_middle,
)
from .specfun import nearest_nonpositive_int
from .verify import FAIL, GridSpec, run_grid, summarize

EX_OK, EX_FAIL, EX_SINGULAR, EX_USAGE, EX_CANTCREAT = 0, 1, 2, 64, 74

CSV_FIELDS = ("case", "nu", "j", "x", "lhs", "rhs", "abs_err", "rel_err",
              "status", "skip_reason", "terms_lhs", "terms_rhs")

_METHODS = {"closed": s_closed_eval, "direct": s_direct, "middle": s_middle}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


def _float_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")


def _case_list(text):
    names = [v.strip() for v in text.split(",") if v.strip()]
    bad = [n for n in names if n not in CASE_SIGNS]
    if bad or not names:
        raise argparse.ArgumentTypeError(f"cases must be from pp,pm,mp,mm: {text!r}")
    return names


def _nonneg_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0: {text!r}")
    return v


def default_nmax():
    """Default N_max, overridable through the LK_NMAX environment variable."""
    raw = os.environ.get("LK_NMAX")
    if raw is None:
        return TruncationPolicy.n_max
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"LK_NMAX must be an integer, got {raw!r}")


def _policy(args):
    n_max = args.nmax if args.nmax is not None else default_nmax()
    try:
        return TruncationPolicy(tol=args.tol, n_max=n_max)
    except ValueError as exc:
        raise UsageError(str(exc))


def fmt_num(v):
    """17-significant-digit text for CSV; empty for non-finite values."""
    if v is None or (isinstance(v, float) and not math.isfinite(v)):
        return ""
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def json_num(v):
    if isinstance(v, float):
        return float(f"{v:.17g}") if math.isfinite(v) else None
    return v


def record_row(rec):
    """Flat OutputRow mapping for a grid VerifyRecord."""
    c = rec.case
    return {
        "case": c.name, "nu": c.nu, "j": c.j, "x": c.x,
        "lhs": rec.lhs, "rhs": rec.rhs,
        "abs_err": rec.abs_err, "rel_err": rec.rel_err,
        "status": rec.status, "skip_reason": rec.skip_reason,
        "terms_lhs": rec.terms_lhs, "terms_rhs": rec.terms_rhs,
    }


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_clean(v) for v in obj]
    return json_num(obj)


def _emit(obj, stream=None):
    print(json.dumps(_clean(obj)), file=stream or sys.stdout)


def cmd_eval(args):
    case = IdentityCase.from_name(args.case, args.nu, args.j, args.x)
    policy = _policy(args)
    try:
        res = _METHODS[args.method](case, policy)
    except SingularCaseError as exc:
        print(f"singular case: {exc}", file=sys.stderr)
        return EX_SINGULAR
    except (ArithmeticError, ValueError) as exc:
        print(f"evaluation failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EX_FAIL
    _emit({
        "case": case.name, "nu": case.nu, "j": case.j, "x": case.x,
        "method": args.method, "value": res.value,
        "abs_err_est": res.abs_err_est, "err_bound": res.err_bound,
        "terms": res.terms_used,
    })
    return EX_OK


def cmd_verify(args):
    spec = GridSpec(
        nu_values=args.nu_list,
        j_values=range(args.j_max + 1),
        x_values=args.x_list,
        signs=args.cases,
        rel_tol=args.rel_tol,
        policy=_policy(args),
    )
    out = sys.stdout
    if args.out:
        try:
            out = open(args.out, "w", newline="")
        except OSError as exc:
            print(f"cannot write {args.out}: {exc}", file=sys.stderr)
            return EX_CANTCREAT
    try:
        records = run_grid(spec, workers=args.workers)
        summary = summarize(records).to_dict()
        rows = [record_row(r) for r in records]
        if args.format == "json":
            json.dump(_clean({"records": rows, "summary": summary}), out, indent=1)
            out.write("\n")
        else:
            writer = csv.writer(out, lineterminator="\n")
            writer.writerow(CSV_FIELDS)
            for row in rows:
                writer.writerow([fmt_num(row[k]) for k in CSV_FIELDS])
            _emit(summary, sys.stderr)
    except OSError as exc:
        print(f"write failed: {exc}", file=sys.stderr)
        return EX_CANTCREAT
    finally:
        if out is not sys.stdout:
            out.close()
    return EX_FAIL if summary["counts"][FAIL] else EX_OK


def cmd_kummer(args):
    formula = kummer_plus if args.sign == "plus" else kummer_minus
    try:
        value = formula(args.a, args.b, args.j)
    except SingularCaseError as exc:
        print(f"singular result: {exc}", file=sys.stderr)
        return EX_SINGULAR
    except (ArithmeticError, ValueError) as exc:
        print(f"evaluation failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EX_FAIL
    result = {"a": args.a, "b": args.b, "j": args.j, "sign": args.sign,
              "value": value}
    if args.oracle:
        if nearest_nonpositive_int(args.a) is None:
            print("--oracle needs a nonpositive integer a (terminating series)",
                  file=sys.stderr)
        else:
            c = 1.0 + args.a - args.b + (args.j if args.sign == "plus" else -args.j)
            try:
                ref = eval_pfq(HyperParams([args.a, args.b], [c], -1.0)).value
            except (ArithmeticError, ValueError) as exc:
                print(f"oracle failed: {exc}", file=sys.stderr)
                return EX_FAIL
            result["oracle"] = ref
            result["diff"] = value - ref
    _emit(result)
    return EX_OK


def build_parser():
    parser = _Parser(prog="lagsum",
                     description="Closed-form Laguerre-series sums and checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    def policy_flags(p):
        p.add_argument("--tol", type=float, default=TruncationPolicy.tol,
                       help="relative stop tolerance for series")
        p.add_argument("--nmax", type=int, default=None,
                       help="max series terms (default: $LK_NMAX or 10000)")

    p = sub.add_parser("eval", help="evaluate S(+-nu, +-j) at one point")
    p.add_argument("--case", required=True, choices=sorted(CASE_SIGNS))
    p.add_argument("--nu", required=True, type=float)
    p.add_argument("--j", required=True, type=_nonneg_int)
    p.add_argument("--x", required=True, type=float)
    p.add_argument("--method", default="closed", choices=sorted(_METHODS))
    policy_flags(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("verify", help="closed form vs direct series on a grid")
    p.add_argument("--nu-list", required=True, type=_float_list)
    p.add_argument("--j-max", required=True, type=_nonneg_int)
    p.add_argument("--x-list", required=True, type=_float_list)
    p.add_argument("--cases", type=_case_list, default=list(CASE_SIGNS))
    p.add_argument("--rel-tol", type=float, default=1e-9)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None)
    p.add_argument("--workers", type=int, default=None)
    policy_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("kummer", help="Kummer-type 2F1(a, b; 1+a-b+-j; -1)")
    p.add_argument("--a", required=True, type=float)
    p.add_argument("--b", required=True, type=float)
    p.add_argument("--j", required=True, type=_nonneg_int)
    p.add_argument("--sign", required=True, choices=("plus", "minus"))
    p.add_argument("--oracle", action="store_true",
                   help="also sum the terminating series (a = 0, -1, -2, ...)")
    p.set_defaults(func=cmd_kummer)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"lagsum: error: {exc}", file=sys.stderr)
        return EX_USAGE
    except ValueError as exc:
        # bad grid/flag combinations rejected by GridSpec / TruncationPolicy
        print(f"lagsum: error: {exc}", file=sys.stderr)
        return EX_USAGE


if __name__ == "__main__":
    sys.exit(main())

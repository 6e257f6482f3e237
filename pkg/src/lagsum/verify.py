"""Grid verification of the Laguerre-series identities against oracles."""

import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

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
    transform_sides,
)

__all__ = [
    "PASS",
    "FAIL",
    "SKIP",
    "GridSpec",
    "VerifyRecord",
    "Summary",
    "KummerCase",
    "TransformCase",
    "run_grid",
    "run_middle_grid",
    "run_kummer",
    "run_transform",
    "summarize",
    "ACCEPTANCE_GRID",
]

PASS, FAIL, SKIP = "pass", "fail", "skip"

# x above this: the direct series loses too much to cancellation
ORACLE_X_MAX = 20.0
REASON_NO_ORACLE = f"closed-form only (x > {ORACLE_X_MAX:g}, no trusted oracle)"


@dataclass(frozen=True)
class GridSpec:
    nu_values: tuple
    j_values: tuple
    x_values: tuple
    signs: tuple = ("pp", "pm", "mp", "mm")
    rel_tol: float = 1e-9
    policy: TruncationPolicy = field(default_factory=TruncationPolicy)

    def __post_init__(self):
        for name in ("nu_values", "j_values", "x_values", "signs"):
            values = tuple(getattr(self, name))
            if not values:
                raise ValueError(f"{name} must be non-empty")
            object.__setattr__(self, name, values)
        unknown = set(self.signs) - set(CASE_SIGNS)
        if unknown:
            raise ValueError(f"unknown cases: {sorted(unknown)}")
        if any(int(j) != j or j < 0 for j in self.j_values):
            raise ValueError("j_values must be non-negative integers")
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")

    def cases(self):
        """All grid cases in deterministic lexicographic order."""
        out = [IdentityCase.from_name(name, nu, j, x)
               for name in self.signs
               for nu in self.nu_values
               for j in self.j_values
               for x in self.x_values]
        return sorted(out, key=case_key)


ACCEPTANCE_GRID = GridSpec(
    nu_values=(-0.7, -0.3, 0.25, 0.5, 1.0, 1.7, 3.2),
    j_values=tuple(range(7)),
    x_values=(0.0, 0.25, 1.0, 2.5, 5.0, 10.0, 20.0),
)


@dataclass(frozen=True)
class KummerCase:
    a: float
    b: float
    j: int
    sign: str  # "plus" or "minus"


@dataclass(frozen=True)
class TransformCase:
    a_list: tuple
    b_list: tuple
    y: float
    nu: float
    x: float


@dataclass(frozen=True)
class VerifyRecord:
    case: object
    lhs: float
    rhs: float
    abs_err: float
    rel_err: float
    status: str
    skip_reason: object = None
    terms_lhs: int = 0
    terms_rhs: int = 0
    error: object = None

    def __post_init__(self):
        if (self.status == SKIP) != (self.skip_reason is not None):
            raise ValueError("skip_reason must be set exactly for skip records")


@dataclass
class Summary:
    counts: dict
    max_rel_err: float
    fails: list
    skips: list

    @property
    def total(self):
        return sum(self.counts.values())

    def to_dict(self):
        return {"total": self.total, **asdict(self)}


def case_key(case):
    sym = lambda s: "+" if s > 0 else "-"  # noqa: E731
    return (sym(case.sign_nu), sym(case.sign_j), case.nu, case.j, case.x)


def rel_err(lhs, rhs):
    return abs(lhs - rhs) / (1.0 + max(abs(lhs), abs(rhs)))


def _compare(case, lhs, rhs, passed, terms_lhs, terms_rhs):
    diff = abs(lhs - rhs)
    rel = rel_err(lhs, rhs)
    status = PASS if passed(diff, rel) else FAIL
    return VerifyRecord(case, lhs, rhs, diff, rel, status, None, terms_lhs, terms_rhs)


def _failed(case, exc):
    nan = math.nan
    return VerifyRecord(case, nan, nan, nan, nan, FAIL,
                        error=f"{type(exc).__name__}: {exc}")


def _skipped(case, reason, lhs=math.nan, rhs=math.nan):
    nan = math.nan
    return VerifyRecord(case, lhs, rhs, nan, nan, SKIP, reason)


def _skip_reason(exc):
    return str(exc).split(":", 1)[0]


def check_closed(case, rel_tol=1e-9, policy=None):
    """One grid point: direct oracle (lhs) against closed form (rhs)."""
    reason = case.singularity()
    if reason is not None:
        return _skipped(case, reason)
    try:
        rhs = s_closed_eval(case, policy)
        if case.x > ORACLE_X_MAX:
            return _skipped(case, REASON_NO_ORACLE, rhs=rhs.value)
        lhs = s_direct(case, policy)
    except SingularCaseError as exc:
        return _skipped(case, _skip_reason(exc))
    except (ArithmeticError, ValueError) as exc:
        return _failed(case, exc)
    return _compare(case, lhs.value, rhs.value, lambda d, r: r <= rel_tol,
                    lhs.terms_used, rhs.terms_used)


def check_middle(case, rel_tol=1e-9, policy=None):
    """One grid point: direct oracle (lhs) against the 2F1(-1) series (rhs)."""
    reason = case.singularity()
    if reason is not None:
        return _skipped(case, reason)
    if case.x > ORACLE_X_MAX:
        return _skipped(case, REASON_NO_ORACLE)
    try:
        lhs = s_direct(case, policy)
        rhs = s_middle(case, policy)
    except (ArithmeticError, ValueError) as exc:
        return _failed(case, exc)
    tol = rel_tol * (1.0 + abs(lhs.value))
    return _compare(case, lhs.value, rhs.value, lambda d, r: d <= tol,
                    lhs.terms_used, rhs.terms_used)


def _run(check, spec, workers):
    cases = spec.cases()
    args = [(c, spec.rel_tol, spec.policy) for c in cases]
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_star, [check] * len(args), args, chunksize=16))
    return [check(*a) for a in args]


def _star(fn, args):
    return fn(*args)


def run_grid(spec, workers=None):
    """Closed form vs direct series at every grid point.

    Returns one record per (case, nu, j, x), ordered lexicographically.
    Evaluation failures become fail records; singular points skip records.
    """
    return _run(check_closed, spec, workers)


def run_middle_grid(spec, workers=None):
    """Middle 2F1(-1) series vs direct series at every grid point."""
    return _run(check_middle, spec, workers)


def run_kummer(n_max=12, b_values=(-1.7, -0.4, 0.3, 1.9), j_max=5,
               rel_tol=1e-10, abs_tol=1e-12, policy=None):
    """Kummer-type formulas vs terminating 2F1(-n, b; c; -1) sums."""
    records = []
    for n in range(n_max + 1):
        for b in b_values:
            for j in range(j_max + 1):
                for sign in ("plus", "minus"):
                    case = KummerCase(float(-n), b, j, sign)
                    c = 1.0 - n - b + (j if sign == "plus" else -j)
                    formula = kummer_plus if sign == "plus" else kummer_minus
                    try:
                        lhs = formula(-n, b, j)
                        ref = eval_pfq(HyperParams([-n, b], [c], -1.0), policy)
                    except SingularCaseError as exc:
                        records.append(_skipped(case, _skip_reason(exc)))
                        continue
                    except (ArithmeticError, ValueError) as exc:
                        records.append(_failed(case, exc))
                        continue
                    scale = abs(ref.value)

                    def ok(d, r, scale=scale):
                        if scale < abs_tol:
                            return d <= abs_tol
                        return d <= rel_tol * scale

                    records.append(_compare(case, lhs, ref.value, ok, j + 1,
                                            ref.terms_used))
    return records


def random_transform_cases(count=20, seed=0, x_max=5.0):
    """Reproducible (p=0, q=1) and (p=1, q=2) parameter draws."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        p = i % 2
        a_list = tuple(round(rng.uniform(-2.0, 3.0), 6) for _ in range(p))
        b_list = tuple(round(rng.uniform(0.2, 4.0), 6) for _ in range(p + 1))
        out.append(TransformCase(a_list, b_list,
                                 round(rng.uniform(-1.0, 1.0), 6),
                                 round(rng.uniform(-0.9, 3.5), 6),
                                 round(rng.uniform(0.0, x_max), 6)))
    return out


def run_transform(cases=None, policy=None):
    """Both sides of the Laguerre/pFq transformation; pass within error bounds."""
    if cases is None:
        cases = random_transform_cases()
    records = []
    for case in cases:
        try:
            lhs, rhs = transform_sides(case.a_list, case.b_list, case.y,
                                       case.nu, case.x, policy)
        except (ArithmeticError, ValueError) as exc:
            records.append(_failed(case, exc))
            continue
        bound = lhs.err_bound + rhs.err_bound
        records.append(_compare(case, lhs.value, rhs.value,
                                lambda d, r: d <= bound,
                                lhs.terms_used, rhs.terms_used))
    return records


def _describe(case):
    if isinstance(case, IdentityCase):
        return {"case": case.name, "nu": case.nu, "j": case.j, "x": case.x}
    return asdict(case)


def summarize(records):
    """Counts by status, worst passing rel_err, and the fail/skip lists."""
    counts = {PASS: 0, FAIL: 0, SKIP: 0}
    worst = 0.0
    fails, skips = [], []
    for rec in records:
        counts[rec.status] += 1
        if rec.status == PASS:
            worst = max(worst, rec.rel_err)
        elif rec.status == FAIL:
            fails.append({**_describe(rec.case), "rel_err": rec.rel_err,
                          "error": rec.error})
        else:
            skips.append({**_describe(rec.case), "reason": rec.skip_reason})
    return Summary(counts, worst, fails, skips)

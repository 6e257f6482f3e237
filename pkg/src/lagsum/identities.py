"""Laguerre-series summation identities.

The weighted series

    S(+-nu, +-j) = exp(-x) * sum_n x^n L_n^(nu)(x) / (1 +- nu +- j)_n

is evaluated three independent ways:

* ``s_direct``  -- the defining series, Laguerre values by recurrence;
* ``s_middle``  -- sum_n (-x)^n/n! 2F1(-n, -n-nu; c; -1), inner sums exact;
* ``s_closed``  -- finite binomial sums of 2F3/3F4/4F5(-x^2) closed forms.

Gamma ratios are formed in log space and exponentiated once per r-term.
A gamma in a denominator that sits on a pole makes its term exactly zero;
one in a numerator makes the case singular.
"""

import math
from dataclasses import dataclass

from .hyper import (
    EPS,
    HyperParams,
    ParameterError,
    SeriesEval,
    TruncationPolicy,
    eval_pfq,
    sum_series,
)
from .specfun import (
    binomial,
    gamma_sign,
    laguerre_sequence,
    log_gamma,
    nearest_nonpositive_int,
)

__all__ = [
    "CASE_SIGNS",
    "SingularCaseError",
    "IdentityCase",
    "ClosedTerm",
    "kummer_plus",
    "kummer_minus",
    "s_direct",
    "s_middle",
    "s_closed",
    "s_closed_eval",
    "s_closed_terms",
    "transform_sides",
]

CASE_SIGNS = {"pp": (1, 1), "pm": (1, -1), "mp": (-1, 1), "mm": (-1, -1)}
_CASE_NAMES = {v: k for k, v in CASE_SIGNS.items()}

BASE_TOL = 1e-10
PREFACTOR_TOL = 1e-8

_LN2 = math.log(2.0)

REASON_BASE = "Pochhammer base nonpositive integer"
REASON_PREFACTOR = "closed-form prefactor singular (nu + j = 1)"
REASON_DOUBLED = "closed-form gamma pole at 1 + 2nu +- j"


class SingularCaseError(ValueError):
    """The identity is not applicable at these parameters."""


@dataclass(frozen=True)
class IdentityCase:
    sign_nu: int
    sign_j: int
    nu: float
    j: int
    x: float

    def __post_init__(self):
        if self.sign_nu not in (1, -1) or self.sign_j not in (1, -1):
            raise ValueError("signs must be +1 or -1")
        if int(self.j) != self.j or self.j < 0:
            raise ValueError(f"j must be a non-negative integer, got {self.j!r}")
        object.__setattr__(self, "j", int(self.j))
        object.__setattr__(self, "nu", float(self.nu))
        object.__setattr__(self, "x", float(self.x))

    @classmethod
    def from_name(cls, name, nu, j, x):
        try:
            sign_nu, sign_j = CASE_SIGNS[name]
        except KeyError:
            raise ValueError(f"unknown case {name!r}; expected one of "
                             f"{', '.join(CASE_SIGNS)}") from None
        return cls(sign_nu, sign_j, nu, j, x)

    @property
    def name(self):
        return _CASE_NAMES[(self.sign_nu, self.sign_j)]

    @property
    def base(self):
        """Pochhammer base c = 1 +- nu +- j."""
        return 1.0 + self.sign_nu * self.nu + self.sign_j * self.j

    def singularity(self):
        """Reason the case is singular, or None."""
        if nearest_nonpositive_int(self.base, BASE_TOL) is not None:
            return REASON_BASE
        if (self.sign_nu, self.sign_j) == (-1, -1) and \
                abs(self.nu + self.j - 1.0) <= PREFACTOR_TOL:
            return REASON_PREFACTOR
        return None

    def check(self):
        reason = self.singularity()
        if reason is not None:
            raise SingularCaseError(f"{reason}: {self}")


def _gamma_factor(num_args, den_args, log_scale=0.0, sign=1):
    """sign * exp(log_scale) * prod Gamma(num) / prod Gamma(den).

    Poles are counted on both sides: more polar denominators than
    numerators gives exactly 0.0; otherwise a polar numerator (a divergence
    or an unresolved 0/0 limit) raises SingularCaseError.
    """
    num_poles = [a for a in num_args if nearest_nonpositive_int(a) is not None]
    den_poles = sum(nearest_nonpositive_int(d) is not None for d in den_args)
    if den_poles > len(num_poles):
        return 0.0
    if num_poles:
        raise SingularCaseError(f"polar gamma numerator Gamma({num_poles[0]!r})")
    acc = log_scale
    for a in num_args:
        acc += log_gamma(a)
        sign *= gamma_sign(a)
    for d in den_args:
        acc -= log_gamma(d)
        sign *= gamma_sign(d)
    return sign * math.exp(acc)


def _gamma_rel_err(*args):
    # rounding model for a log-space gamma product
    return 16.0 * EPS * (1.0 + sum(abs(a) for a in args))


def kummer_plus(a, b, j):
    """2F1(a, b; 1+a-b+j; -1) by the generalized Kummer theorem."""
    h = 0.5 * a
    pre_num = [0.5, b - j, 1.0 + a - b + j]
    pre_den = [b, h - b + 0.5 * (j + 1), h - b + 0.5 * j + 1.0]
    parts = []
    for r in range(j + 1):
        g = _gamma_factor(
            pre_num + [h - b + 0.5 * (j + r + 1)],
            pre_den + [h + 0.5 * (r - j + 1)],
            log_scale=-a * _LN2,
            sign=-1 if r % 2 else 1,
        )
        parts.append(binomial(j, r) * g)
    return math.fsum(parts)


def kummer_minus(a, b, j):
    """2F1(a, b; 1+a-b-j; -1) by the companion Kummer-type result."""
    h = 0.5 * a
    pre_num = [0.5, 1.0 + a - b - j]
    pre_den = [h - b - 0.5 * j + 0.5, h - b - 0.5 * j + 1.0]
    parts = []
    for r in range(j + 1):
        g = _gamma_factor(
            pre_num + [h - b + 0.5 * (r - j + 1)],
            pre_den + [h + 0.5 * (r - j + 1)],
            log_scale=-a * _LN2,
        )
        parts.append(binomial(j, r) * g)
    return math.fsum(parts)


def _policy(policy):
    return TruncationPolicy() if policy is None else policy


def s_direct(case, policy=None):
    """Brute-force S from its defining Laguerre series."""
    case.check()
    policy = _policy(policy)
    c, nu, x = case.base, case.nu, case.x

    def terms():
        ratio = 1.0  # x^n / (c)_n
        for n, lag in enumerate(laguerre_sequence(None, nu, x)):
            t = ratio * lag
            yield t, abs(t) * (n + 1) * 4.0 * EPS
            ratio *= x / (c + n)

    res = sum_series(terms(), policy)
    scale = math.exp(-x)
    return SeriesEval(res.value * scale, res.abs_err_est * scale, res.terms_used,
                      res.terminated, res.round_err_est * scale,
                      res.peak_term * scale)


def s_middle(case, policy=None):
    """S as sum_n (-x)^n/n! * 2F1(-n, -n-nu; c; -1), each 2F1 summed exactly."""
    case.check()
    policy = _policy(policy)
    c, nu, x = case.base, case.nu, case.x

    def terms():
        w = 1.0  # (-x)^n / n!
        n = 0
        while True:
            inner = eval_pfq(HyperParams([-n, -n - nu], [c], -1.0), policy)
            t = w * inner.value
            yield t, abs(w) * inner.err_bound + abs(t) * (n + 1) * EPS
            n += 1
            w *= -x / n

    return sum_series(terms(), policy)


@dataclass(frozen=True)
class ClosedTerm:
    """One r-term of a closed form: ``S = sum(first - second)``.

    ``first`` and ``second`` include the prefactor, binomial weight and
    sign.  ``second_eval`` is None when its gamma coefficient is exactly
    zero and the hypergeometric factor was not evaluated.
    """

    r: int
    first: float
    second: float
    first_eval: SeriesEval
    second_eval: object
    trunc_err: float
    round_err: float


def _pfq_part(coef, coef_args, num, den, z, policy):
    # coef * pFq -> (value, eval, truncation err, rounding err); skips the
    # series when coef is exactly zero
    if coef == 0.0:
        return 0.0, None, 0.0, 0.0
    ev = eval_pfq(HyperParams(num, den, z), policy)
    val = coef * ev.value
    return (val, ev, abs(coef) * ev.abs_err_est,
            abs(coef) * ev.round_err_est + abs(val) * _gamma_rel_err(*coef_args))


def _term(r, part1, part2):
    v1, ev1, t1, e1 = part1
    v2, ev2, t2, e2 = part2
    return ClosedTerm(r, v1, v2, ev1, ev2, t1 + t2, e1 + e2)


def _check_doubled(arg):
    # Gamma(1 + 2nu +- j) on a pole: the printed prefactor vanishes while a
    # pFq denominator and an r-term gamma numerator blow up
    if nearest_nonpositive_int(arg) is not None:
        raise SingularCaseError(f"{REASON_DOUBLED}: 1 + 2nu +- j = {arg!r}")


def _closed_pp(nu, j, x, policy):
    _check_doubled(1.0 + 2.0 * nu + j)
    z = -x * x
    hn = 0.5 * nu
    beta1 = hn + 0.5 * (j + 1)
    beta2 = hn + 0.5 * j + 1.0
    b1 = nu + 0.5 * (j + 1)
    b2 = nu + 0.5 * j + 1.0
    pre_num = [1.0 + nu]
    pre_den = [1.0 + 2.0 * nu + j]
    log_pre = (2.0 * nu + j) * _LN2
    sign_j = -1 if j % 2 else 1
    k2 = 4.0 * x * (1.0 + nu) / ((1.0 + nu + j) * (1.0 + 2.0 * nu + j))
    out = []
    for r in range(j + 1):
        w = binomial(j, r)
        sign = sign_j * (-1 if r % 2 else 1)
        g1_num = pre_num + [nu + 0.5 * (j + r + 1)]
        g1_den = pre_den + [0.5 * (r - j + 1)]
        part1 = _pfq_part(
            w * _gamma_factor(g1_num, g1_den, log_pre, sign), g1_num + g1_den,
            [hn + 0.5, hn + 1.0, nu + 0.5 * (j + r + 1), 0.5 * (j - r + 1)],
            [0.5, beta1, beta2, b1, b2], z, policy)
        g2_num = pre_num + [nu + 0.5 * (j + r) + 1.0]
        g2_den = pre_den + [0.5 * (r - j)]
        part2 = _pfq_part(
            w * k2 * _gamma_factor(g2_num, g2_den, log_pre, sign), g2_num + g2_den,
            [hn + 1.0, hn + 1.5, nu + 0.5 * (j + r) + 1.0, 0.5 * (j - r) + 1.0],
            [1.5, beta2, beta2 + 0.5, b2, b1 + 1.0], z, policy)
        out.append(_term(r, part1, part2))
    return out


def _closed_pm(nu, j, x, policy):
    _check_doubled(1.0 + 2.0 * nu - j)
    z = -x * x
    b1 = nu + 0.5 * (1 - j)
    b2 = nu + 1.0 - 0.5 * j
    pre_num = [1.0 + nu - j]
    pre_den = [1.0 + 2.0 * nu - j]
    log_pre = (2.0 * nu - j) * _LN2
    k2 = 4.0 * x / (1.0 + 2.0 * nu - j)
    out = []
    for r in range(j + 1):
        w = binomial(j, r)
        g1_num = pre_num + [nu + 0.5 * (r - j + 1)]
        g1_den = pre_den + [0.5 * (r - j + 1)]
        part1 = _pfq_part(
            w * _gamma_factor(g1_num, g1_den, log_pre), g1_num + g1_den,
            [nu + 0.5 * (r - j + 1), 0.5 * (j - r + 1)],
            [0.5, b1, b2], z, policy)
        g2_num = pre_num + [nu + 0.5 * (r - j) + 1.0]
        g2_den = pre_den + [0.5 * (r - j)]
        part2 = _pfq_part(
            w * k2 * _gamma_factor(g2_num, g2_den, log_pre), g2_num + g2_den,
            [nu + 0.5 * (r - j) + 1.0, 0.5 * (j - r) + 1.0],
            [1.5, b2, b1 + 1.0], z, policy)
        out.append(_term(r, part1, part2))
    return out


def _closed_mp(nu, j, x, policy):
    z = -x * x
    hn = 0.5 * nu
    log_lead = j * _LN2 - math.log(math.factorial(j))
    sign_j = -1 if j % 2 else 1
    k2 = 4.0 * x / ((j + 1) * (1.0 - nu + j))
    out = []
    for r in range(j + 1):
        w = binomial(j, r)
        sign = sign_j * (-1 if r % 2 else 1)
        g1_num = [-hn + 0.5 * (j + r + 1)]
        g1 = _gamma_factor(g1_num, [-hn + 0.5 * (r - j + 1)], log_lead, sign)
        part1 = _pfq_part(
            w * g1, g1_num,
            [1.0, hn + 0.5 * (j - r + 1), -hn + 0.5 * (j + r + 1)],
            [0.5 * (j + 1), 0.5 * j + 1.0, -hn + 0.5 * (j + 1), -hn + 0.5 * j + 1.0],
            z, policy)
        g2_num = [-hn + 0.5 * (j + r) + 1.0]
        g2 = _gamma_factor(g2_num, [-hn + 0.5 * (r - j)], log_lead, sign)
        part2 = _pfq_part(
            w * k2 * g2, g2_num,
            [1.0, hn + 0.5 * (j - r) + 1.0, -hn + 0.5 * (j + r) + 1.0],
            [0.5 * j + 1.0, 0.5 * (j + 3), -hn + 0.5 * j + 1.0, -hn + 0.5 * (j + 3)],
            z, policy)
        out.append(_term(r, part1, part2))
    return out


def _closed_mm(nu, j, x, policy):
    z = -x * x
    hn = 0.5 * nu
    scale = 2.0 ** -j
    out = []
    for r in range(j + 1):
        w = scale * binomial(j, r)
        part1 = _pfq_part(
            w, (),
            [-hn + 0.5 * (r - j + 1), hn + 0.5 * (j - r + 1)],
            [0.5, -hn + 0.5 * (1 - j), -hn + 1.0 - 0.5 * j], z, policy)
        k2 = 2.0 * x * (nu + j - r) / (nu + j - 1.0)
        part2 = _pfq_part(
            w * k2, (),
            [-hn + 0.5 * (r - j) + 1.0, hn + 0.5 * (j - r) + 1.0],
            [1.5, -hn + 1.0 - 0.5 * j, -hn + 0.5 * (3 - j)], z, policy)
        out.append(_term(r, part1, part2))
    return out


_CLOSED = {"pp": _closed_pp, "pm": _closed_pm, "mp": _closed_mp, "mm": _closed_mm}


def s_closed_terms(case, policy=None):
    """Per-r contributions of the closed form for ``case``."""
    case.check()
    try:
        return _CLOSED[case.name](case.nu, case.j, case.x, _policy(policy))
    except ParameterError as exc:
        raise SingularCaseError(str(exc)) from exc


def s_closed_eval(case, policy=None):
    """Closed-form S with aggregated error estimate and term count."""
    parts = s_closed_terms(case, policy)
    value = math.fsum([v for t in parts for v in (t.first, -t.second)])
    evals = [e for t in parts for e in (t.first_eval, t.second_eval) if e is not None]
    return SeriesEval(
        value,
        sum(t.trunc_err for t in parts),
        sum(e.terms_used for e in evals) or 1,
        all(e.terminated for e in evals),
        sum(t.round_err for t in parts) + EPS * abs(value),
        max((e.peak_term for e in evals), default=0.0),
    )


def s_closed(case, policy=None):
    """S(+-nu, +-j) from the closed-form finite sums of pFq(-x^2)."""
    return s_closed_eval(case, policy).value


def transform_sides(a_list, b_list, y, nu, x, policy=None):
    """Both sides of the Laguerre/pFq transformation.

    LHS = exp(-x) sum_n prod(a)_n / prod(b)_n (-x y)^n L_n^(nu)(x)
    RHS = sum_n (-x)^n / n! * (p+2)F(q)(-n, -n-nu, a...; b...; y)

    Returns ``(lhs, rhs)`` as SeriesEval.
    """
    policy = _policy(policy)
    a_list = [float(a) for a in a_list]
    b_list = [float(b) for b in b_list]
    if len(a_list) > len(b_list):
        raise ParameterError(f"need p <= q, got p={len(a_list)}, q={len(b_list)}")
    for b in b_list:
        if nearest_nonpositive_int(b) is not None:
            raise ParameterError(f"denominator parameter {b!r} is a nonpositive integer")

    def lhs_terms():
        coef = 1.0  # prod(a)_n / prod(b)_n (-xy)^n
        for n, lag in enumerate(laguerre_sequence(None, nu, x)):
            t = coef * lag
            yield t, abs(t) * (n + 1) * 4.0 * EPS
            for a in a_list:
                coef *= a + n
            for b in b_list:
                coef /= b + n
            coef *= -x * y

    def rhs_terms():
        w = 1.0
        n = 0
        while True:
            inner = eval_pfq(HyperParams([-n, -n - nu] + a_list, b_list, y), policy)
            t = w * inner.value
            yield t, abs(w) * inner.err_bound + abs(t) * (n + 1) * EPS
            n += 1
            w *= -x / n

    left = sum_series(lhs_terms(), policy)
    scale = math.exp(-x)
    left = SeriesEval(left.value * scale, left.abs_err_est * scale, left.terms_used,
                      left.terminated, left.round_err_est * scale,
                      left.peak_term * scale)
    return left, sum_series(rhs_terms(), policy)

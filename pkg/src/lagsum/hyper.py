"""Generalized hypergeometric series pFq(a; b; z).

Series are summed by the term recurrence

    t_{k+1} = t_k * prod(a_i + k) / prod(b_j + k) * z / (k + 1)

with a running compensated sum.  When the float pass shows heavy
cancellation (peak term much larger than the result, as for 4F5 at
z = -400) the same terms are re-summed in exact fixed-point integer
arithmetic, so the returned value is accurate relative to the result
rather than to the peak term.
"""

import math
from dataclasses import dataclass, field

from .specfun import nearest_nonpositive_int

__all__ = [
    "ConvergenceError",
    "ParameterError",
    "TruncationPolicy",
    "HyperParams",
    "SeriesEval",
    "termination_index",
    "sum_series",
    "pfq_terms",
    "eval_pfq",
    "hyp",
]

EPS = 2.0 ** -52

# re-sum exactly when the largest term exceeds |sum| by this factor
_CANCELLATION_RATIO = 16.0
_GUARD_BITS = 128


class ConvergenceError(ArithmeticError):
    """Series did not meet the stop rule within ``n_max`` terms."""


class ParameterError(ValueError):
    """Invalid series parameters (denominator pole, divergent series)."""


@dataclass(frozen=True)
class TruncationPolicy:
    """Stop rule for infinite series.

    A series stops once ``consecutive`` successive terms past the largest
    term are each below ``tol`` times the running sum.
    """

    tol: float = 1e-15
    n_max: int = 10000
    consecutive: int = 3

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.n_max < 16:
            raise ValueError(f"n_max must be >= 16, got {self.n_max}")
        if self.consecutive < 1:
            raise ValueError(f"consecutive must be >= 1, got {self.consecutive}")


@dataclass(frozen=True)
class HyperParams:
    num: tuple
    den: tuple
    arg: float

    def __post_init__(self):
        object.__setattr__(self, "num", tuple(float(a) for a in self.num))
        object.__setattr__(self, "den", tuple(float(b) for b in self.den))
        object.__setattr__(self, "arg", float(self.arg))

    @property
    def p(self):
        return len(self.num)

    @property
    def q(self):
        return len(self.den)


@dataclass(frozen=True)
class SeriesEval:
    """Result of a summation.

    ``abs_err_est`` is the truncation estimate (twice the first neglected
    term; zero for finite sums).  ``round_err_est`` bounds accumulated
    rounding, and ``peak_term`` is the largest term magnitude seen.
    """

    value: float
    abs_err_est: float
    terms_used: int
    terminated: bool
    round_err_est: float = 0.0
    peak_term: float = field(default=0.0, compare=False)

    @property
    def err_bound(self):
        return self.abs_err_est + self.round_err_est


class _Accumulator:
    """Neumaier compensated running sum."""

    __slots__ = ("s", "c")

    def __init__(self):
        self.s = 0.0
        self.c = 0.0

    def add(self, x):
        t = self.s + x
        if abs(self.s) >= abs(x):
            self.c += (self.s - t) + x
        else:
            self.c += (x - t) + self.s
        self.s = t

    @property
    def value(self):
        return self.s + self.c


def termination_index(params):
    """Smallest n with some numerator parameter equal to -n, else None."""
    found = [-m for a in params.num if (m := nearest_nonpositive_int(a)) is not None]
    return min(found) if found else None


def sum_series(terms, policy, finite=False):
    """Sum an iterable of ``(term, abs_rounding_error)`` pairs.

    With ``finite=True`` the iterable is summed to exhaustion (the stop
    rule is not applied); the result is marked terminated.
    """
    acc = _Accumulator()
    it = iter(terms)
    round_err = 0.0
    peak, peak_k, small = -1.0, 0, 0
    k = -1
    for k, (t, err) in enumerate(it):
        if k >= policy.n_max:
            raise ConvergenceError(
                f"series not converged after n_max={policy.n_max} terms"
            )
        acc.add(t)
        round_err += err
        at = abs(t)
        if at > peak:
            peak, peak_k, small = at, k, 0
            continue
        if finite:
            continue
        if at <= policy.tol * abs(acc.value):
            small += 1
            if small >= policy.consecutive:
                break
        else:
            small = 0
    else:
        if k < 0:
            raise ValueError("empty series")
        value = acc.value
        return SeriesEval(value, 0.0, k + 1, True,
                          round_err + EPS * abs(value), max(peak, 0.0))
    if finite:  # pragma: no cover - loop only breaks when not finite
        raise AssertionError
    nxt = next(it, (0.0, 0.0))[0]
    value = acc.value
    return SeriesEval(value, 2.0 * abs(nxt), k + 1, False,
                      round_err + EPS * abs(value), peak)


def _term_pairs(num, den, z, k_stop=None):
    # yields (t_k, rounding bound) for k = 0, 1, ... (through k_stop)
    width = (len(num) + len(den) + 2) * EPS
    t = 1.0
    k = 0
    while True:
        yield t, abs(t) * (k + 1) * width
        if k_stop is not None and k >= k_stop:
            return
        f = z / (k + 1)
        for a in num:
            f *= a + k
        for b in den:
            f /= b + k
        t *= f
        k += 1


def pfq_terms(params, count):
    """First ``count`` series terms t_0, t_1, ... from the term recurrence."""
    it = _term_pairs(list(params.num), params.den, params.arg)
    return [next(it)[0] for _ in range(count)]


def _exact_resum(num, den, z, n_terms, peak):
    """Sum t_0 .. t_{n_terms-1} in fixed-point integer arithmetic.

    Every parameter is a binary float, hence an exact rational; only the
    per-term rounding to ``bits`` fractional bits is inexact.
    """
    na = [a.as_integer_ratio() for a in num]
    nb = [b.as_integer_ratio() for b in den]
    zn, zd = z.as_integer_ratio()
    num_const = zn
    den_const = zd
    for _, d in nb:
        num_const *= d
    for _, d in na:
        den_const *= d
    bits = _GUARD_BITS + max(0, math.frexp(peak)[1]) + n_terms.bit_length()
    t = 1 << bits
    s = t
    for k in range(n_terms - 1):
        top = num_const
        for n, d in na:
            top *= n + k * d
        if top == 0:
            break
        bot = den_const * (k + 1)
        for n, d in nb:
            bot *= n + k * d
        if bot < 0:
            top, bot = -top, -bot
        t = (2 * t * top + bot) // (2 * bot)
        s += t
    return s / (1 << bits)


def eval_pfq(params, policy=None):
    """Evaluate pFq(num; den; arg) and return a :class:`SeriesEval`.

    Raises :class:`ParameterError` for a denominator pole reached before
    termination or a divergent non-terminating series, and
    :class:`ConvergenceError` when the stop rule does not fire within
    ``policy.n_max`` terms.
    """
    if policy is None:
        policy = TruncationPolicy()
    n_term = termination_index(params)
    z = params.arg
    num = [float(m) if (m := nearest_nonpositive_int(a)) is not None else a
           for a in params.num]
    den = params.den

    for b in den:
        m = nearest_nonpositive_int(b)
        if m is not None and (n_term is None or n_term > -m):
            raise ParameterError(
                f"denominator parameter {b!r} is a nonpositive integer "
                "reached before the series terminates"
            )
    if z == 0.0:
        return SeriesEval(1.0, 0.0, 1, True, 0.0, 1.0)
    if n_term is None:
        p, q = params.p, params.q
        if p > q + 1 or (p == q + 1 and abs(z) >= 1.0):
            raise ParameterError(f"{p}F{q} series does not converge at z={z!r}")

    res = sum_series(_term_pairs(num, den, z, n_term), policy,
                     finite=n_term is not None)
    if res.peak_term > _CANCELLATION_RATIO * abs(res.value):
        value = _exact_resum(num, den, z, res.terms_used, res.peak_term)
        res = SeriesEval(value, res.abs_err_est, res.terms_used, res.terminated,
                         4.0 * EPS * abs(value), res.peak_term)
    return res


def hyp(num, den, z, policy=None):
    """Value of pFq(num; den; z) with the default policy."""
    return eval_pfq(HyperParams(num, den, z), policy).value

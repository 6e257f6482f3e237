"""Scalar special-function primitives.

Gamma-family functions use a Lanczos approximation (g=7, 9 terms) for
x >= 0.5 and the reflection formula below that.  Arguments within
``POLE_TOL`` of a nonpositive integer are treated as poles.
"""

import math

__all__ = [
    "POLE_TOL",
    "PoleError",
    "nearest_nonpositive_int",
    "log_gamma",
    "gamma_sign",
    "gamma",
    "rgamma",
    "pochhammer",
    "binomial",
    "laguerre",
]

POLE_TOL = 1e-12

_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_SQRT_2PI = math.sqrt(2.0 * math.pi)
_LOG_PI = math.log(math.pi)
_LOG_MAX = math.log(float.fromhex("0x1.fffffffffffffp+1023"))

_EULER_GAMMA = 0.5772156649015329
# zeta(2), zeta(3), ... zeta(25)
_ZETA = (
    1.6449340668482264, 1.2020569031595942, 1.0823232337111381,
    1.03692775514337, 1.0173430619844492, 1.008349277381923,
    1.0040773561979444, 1.0020083928260821, 1.000994575127818,
    1.0004941886041194, 1.000246086553308, 1.0001227133475785,
    1.0000612481350588, 1.000030588236307, 1.0000152822594086,
    1.0000076371976379, 1.000003817293265, 1.0000019082127165,
    1.0000009539620338, 1.0000004769329869, 1.0000002384505027,
    1.000000119219926, 1.000000059608189, 1.0000000298035034,
)
# lnGamma(1+e) series is used for |e| below this; Lanczos loses relative
# accuracy there because lnGamma vanishes at 1 and 2.
_SERIES_RADIUS = 0.2


class PoleError(ValueError):
    """Raised when a gamma-type function is evaluated at a pole."""


def nearest_nonpositive_int(x, tol=POLE_TOL):
    """Return the nonpositive integer within ``tol`` of ``x``, else None."""
    n = round(x)
    if n <= 0 and abs(x - n) <= tol:
        return int(n)
    return None


def _sinpi(x):
    # sin(pi*x) with exact argument reduction; accurate near integers
    n = round(x)
    r = x - n
    s = math.sin(math.pi * r)
    return -s if n % 2 else s


def _lanczos_sum(z):
    acc = _LANCZOS_COEF[0]
    for i in range(1, len(_LANCZOS_COEF)):
        acc += _LANCZOS_COEF[i] / (z + i)
    return acc


def _log_gamma_1p(e):
    # lnGamma(1+e) = -gamma*e + sum_{k>=2} (-1)^k zeta(k) e^k / k
    total = 0.0
    power = e * e
    for k, zk in enumerate(_ZETA, start=2):
        term = zk * power / k
        total += term if k % 2 == 0 else -term
        power *= e
    return total - _EULER_GAMMA * e


def _log_gamma_pos(x):
    # x >= 0.5
    if abs(x - 1.0) < _SERIES_RADIUS:
        return _log_gamma_1p(x - 1.0)
    if abs(x - 2.0) < _SERIES_RADIUS:
        e = x - 2.0
        return math.log1p(e) + _log_gamma_1p(e)
    z = x - 1.0
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * math.log(t) - t + math.log(_lanczos_sum(z))


def gamma_sign(x):
    """Sign of Gamma(x) (+1 or -1).  Raises PoleError at a pole."""
    if nearest_nonpositive_int(x) is not None:
        raise PoleError(f"gamma pole at x={x!r}")
    if x > 0:
        return 1
    return -1 if math.floor(x) % 2 else 1


def log_gamma(x):
    """Return ln|Gamma(x)|; the sign is available from :func:`gamma_sign`.

    Raises PoleError when x is within ``POLE_TOL`` of 0, -1, -2, ...
    """
    if nearest_nonpositive_int(x) is not None:
        raise PoleError(f"gamma pole at x={x!r}")
    if x >= 0.5:
        return _log_gamma_pos(x)
    # reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
    return _LOG_PI - math.log(abs(_sinpi(x))) - _log_gamma_pos(1.0 - x)


def _gamma_pos(x):
    if x > 140.0 or abs(x - 1.0) < _SERIES_RADIUS or abs(x - 2.0) < _SERIES_RADIUS:
        return math.exp(_log_gamma_pos(x))
    z = x - 1.0
    t = z + _LANCZOS_G + 0.5
    return _SQRT_2PI * t ** (z + 0.5) * math.exp(-t) * _lanczos_sum(z)


def gamma(x):
    """Gamma(x) for real x.  Raises PoleError at poles; overflows to inf."""
    if nearest_nonpositive_int(x) is not None:
        raise PoleError(f"gamma pole at x={x!r}")
    if x >= 0.5:
        return _gamma_pos(x)
    if x < -140.0:
        return gamma_sign(x) * math.exp(log_gamma(x))
    return math.pi / (_sinpi(x) * _gamma_pos(1.0 - x))


def rgamma(x):
    """Reciprocal gamma 1/Gamma(x).

    Entire: returns exactly 0.0 at (within ``POLE_TOL`` of) a nonpositive
    integer and never raises.
    """
    if nearest_nonpositive_int(x) is not None:
        return 0.0
    if x >= 0.5:
        if x > 171.0:
            return 0.0 if x > 200.0 else math.exp(-_log_gamma_pos(x))
        return 1.0 / _gamma_pos(x)
    if x < -140.0:
        lg = -log_gamma(x)
        mag = math.inf if lg > _LOG_MAX else math.exp(lg)
        return gamma_sign(x) * mag
    # 1/Gamma(x) = sin(pi x) Gamma(1-x) / pi
    return _sinpi(x) * _gamma_pos(1.0 - x) / math.pi


def pochhammer(a, n):
    """Rising factorial (a)_n = a (a+1) ... (a+n-1) by direct product.

    A factor within ``POLE_TOL`` of zero is taken as exactly zero, so a
    nonpositive-integer ``a`` with ``-a < n`` gives 0.0.
    """
    if n < 0:
        raise ValueError(f"pochhammer index must be >= 0, got {n}")
    m = nearest_nonpositive_int(a)
    if m is not None and -m < n:
        return 0.0
    out = 1.0
    for k in range(n):
        out *= a + k
    return out


def binomial(j, r):
    """Binomial coefficient C(j, r) as a float."""
    if r < 0 or j < 0 or r > j:
        raise ValueError(f"binomial({j}, {r}) requires 0 <= r <= j")
    return float(math.comb(j, r))


def laguerre(n, nu, x):
    """Generalized Laguerre polynomial L_n^(nu)(x) by three-term recurrence."""
    if n < 0:
        raise ValueError(f"degree must be >= 0, got {n}")
    prev, cur = 1.0, 1.0 - x + nu
    if n == 0:
        return prev
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + nu - x) * cur - (k + nu) * prev) / (k + 1)
    return cur


def laguerre_sequence(n_max, nu, x):
    """Yield L_0^(nu)(x), L_1^(nu)(x), ... up to degree ``n_max`` (or forever)."""
    prev, cur = 1.0, 1.0 - x + nu
    yield prev
    k = 0
    while n_max is None or k < n_max:
        yield cur
        k += 1
        prev, cur = cur, ((2 * k + 1 + nu - x) * cur - (k + nu) * prev) / (k + 1)

import math

import mpmath
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from lagsum.hyper import HyperParams, ParameterError, eval_pfq
from lagsum.identities import (
    REASON_BASE,
    REASON_DOUBLED,
    REASON_PREFACTOR,
    IdentityCase,
    SingularCaseError,
    kummer_minus,
    kummer_plus,
    s_closed,
    s_closed_eval,
    s_closed_terms,
    s_direct,
    s_middle,
    transform_sides,
)

# 50-digit references from mpmath partial sums of the defining series
# (n <= 600); not produced by this package
FROZEN = [
    ("pp", 0.0, 0, 0.5, 0.76519768655796655145),
    ("pm", 2.5, 1, 1.0, 0.95076858605570729351),
    ("pp", 0.5, 2, 1.0, 0.41428700571190756694),
    ("mp", 0.3, 1, 2.0, -0.14020642781318479828),
    ("mp", 0.3, 2, 1.5, 0.13950333124083053773),
    ("mm", 0.3, 2, 1.5, -4.7591950900923863686),
    ("pp", 0.5, 0, 1.0, 0.4546487134128408477),
    ("pp", -0.7, 6, 20.0, -1.8995185392816773498e-7),
    ("mm", 3.2, 6, 20.0, -451550426.37816202339),
    ("mp", 1.7, 3, 10.0, -0.0043680512180399228269),
]


def case(name, nu, j, x):
    return IdentityCase.from_name(name, nu, j, x)


def kummer_oracle(a, b, j, sign):
    c = 1.0 + a - b + (j if sign > 0 else -j)
    return eval_pfq(HyperParams([a, b], [c], -1.0)).value


class TestIdentityCase:
    def test_names_and_base(self):
        c = case("mp", 0.3, 2, 1.0)
        assert (c.sign_nu, c.sign_j, c.name) == (-1, 1, "mp")
        assert c.base == pytest.approx(2.7)

    def test_validation(self):
        with pytest.raises(ValueError):
            IdentityCase(2, 1, 0.0, 0, 1.0)
        with pytest.raises(ValueError):
            case("pp", 0.0, -1, 1.0)
        with pytest.raises(ValueError):
            case("xx", 0.0, 0, 1.0)

    def test_singularity_reasons(self):
        assert case("pm", 2.0, 3, 1.0).singularity() == REASON_BASE
        assert case("mm", 1e-9, 1, 1.0).singularity() == REASON_PREFACTOR
        assert case("pp", 0.5, 3, 1.0).singularity() is None


class TestKummer:
    def test_zero_parameter(self):
        assert kummer_plus(0.0, 0.4, 2) == pytest.approx(1.0, rel=1e-13)
        assert kummer_minus(0.0, 0.4, 1) == pytest.approx(1.0, rel=1e-13)

    def test_worked_examples(self):
        direct = sum(mpmath.rf(-2, k) * mpmath.rf(0.3, k) / (mpmath.rf(-0.3, k)
                     * mpmath.factorial(k)) * (-1) ** k for k in range(3))
        assert kummer_plus(-2.0, 0.3, 1) == pytest.approx(float(direct), rel=1e-12)
        assert kummer_plus(-4.0, -1.2, 3) == pytest.approx(-2.3538961038961040192,
                                                            rel=1e-12)
        assert kummer_minus(-3.0, 0.7, 2) == pytest.approx(0.69005175388154114244,
                                                           rel=1e-12)
        assert kummer_plus(-2.0, 0.3, 0) == pytest.approx(kummer_minus(-2.0, 0.3, 0),
                                                          rel=1e-14)

    @pytest.mark.parametrize("n", range(13))
    @pytest.mark.parametrize("b", [-1.7, -0.4, 0.3, 1.9])
    def test_sign_coherence(self, n, b):
        assert kummer_plus(-n, b, 0) == pytest.approx(kummer_minus(-n, b, 0),
                                                      rel=1e-13, abs=1e-14)

    @pytest.mark.parametrize("sign", [1, -1])
    @pytest.mark.parametrize("j", range(6))
    @pytest.mark.parametrize("b", [-1.7, -0.4, 0.3, 1.9])
    def test_against_terminating_series(self, b, j, sign):
        f = kummer_plus if sign > 0 else kummer_minus
        for n in range(13):
            ref = kummer_oracle(-n, b, j, sign)
            got = f(-n, b, j)
            if abs(ref) < 1e-12:
                assert abs(got - ref) <= 1e-12
            else:
                assert got == pytest.approx(ref, rel=1e-10)

    def test_non_terminating_against_mpmath(self):
        # Kummer's theorem itself for a=0.5, b=0.2 (|z|=1, convergent)
        for j in range(3):
            ref = mpmath.hyp2f1(0.5, 0.2, 1 + 0.5 - 0.2 + j, -1)
            assert kummer_plus(0.5, 0.2, j) == pytest.approx(float(ref), rel=1e-12)


class TestDirect:
    @pytest.mark.parametrize("name, nu, j, x, ref", FROZEN)
    def test_frozen(self, name, nu, j, x, ref):
        res = s_direct(case(name, nu, j, x))
        assert abs(res.value - ref) <= 1e-10 * (1.0 + abs(ref))

    @pytest.mark.parametrize("nu", [0.0, 0.5, 1.7, 3.2])
    @pytest.mark.parametrize("x", [0.25, 1.0, 5.0, 10.0])
    def test_bessel(self, nu, x):
        # S(nu, 0) = Gamma(1+nu) x^-nu J_nu(2x)
        ref = mpmath.gamma(1 + nu) * mpmath.mpf(x) ** -nu * mpmath.besselj(nu, 2 * x)
        got = s_direct(case("pp", nu, 0, x)).value
        assert abs(got - float(ref)) <= 1e-11 * (1 + abs(float(ref)))

    @pytest.mark.parametrize("name", ["pp", "pm", "mp", "mm"])
    def test_x_zero(self, name):
        assert s_direct(case(name, 0.25, 2, 0.0)).value == 1.0

    @pytest.mark.parametrize("nu", [-0.7, 0.25, 1.7, 3.2])
    @pytest.mark.parametrize("x", [0.25, 2.5, 20.0])
    def test_pochhammer_offset_identity(self, nu, x):
        assert s_direct(case("pp", nu, 0, x)) == s_direct(case("pm", nu, 0, x))
        assert s_direct(case("mp", nu, 0, x)) == s_direct(case("mm", nu, 0, x))

    def test_singular(self):
        with pytest.raises(SingularCaseError):
            s_direct(case("pm", 2.0, 3, 1.0))


class TestMiddle:
    @pytest.mark.parametrize("name", ["pp", "pm", "mp", "mm"])
    def test_x_zero(self, name):
        assert s_middle(case(name, 0.25, 2, 0.0)).value == 1.0

    @pytest.mark.parametrize("name, nu, j, x, ref",
                             [f for f in FROZEN if f[3] <= 5.0])
    def test_frozen(self, name, nu, j, x, ref):
        res = s_middle(case(name, nu, j, x))
        assert abs(res.value - ref) <= 1e-10 * (1.0 + abs(ref))

    @pytest.mark.parametrize("c", [case("pp", 0.5, 2, 1.0), case("mp", 0.3, 1, 2.0)])
    def test_against_direct(self, c):
        d, m = s_direct(c), s_middle(c)
        assert abs(d.value - m.value) <= d.err_bound + m.err_bound + 1e-14


class TestClosed:
    @pytest.mark.parametrize("name, nu, j, x, ref", FROZEN)
    def test_frozen(self, name, nu, j, x, ref):
        assert abs(s_closed(case(name, nu, j, x)) - ref) <= 1e-10 * (1.0 + abs(ref))

    @pytest.mark.parametrize("name", ["pp", "pm", "mp", "mm"])
    @pytest.mark.parametrize("nu", [-0.7, 0.25, 1.7, 3.2])
    @pytest.mark.parametrize("j", range(5))
    def test_x_zero(self, name, nu, j):
        c = case(name, nu, j, 0.0)
        if c.singularity():
            return
        try:
            assert abs(s_closed(c) - 1.0) <= 1e-12
        except SingularCaseError as exc:
            assert REASON_DOUBLED in str(exc)

    def test_j0_second_term_is_structural_zero(self):
        # (+,+) at j=0: Gamma(r/2 - j/2) = Gamma(0) kills the second bracket
        for name in ("pp", "pm"):
            parts = s_closed_terms(case(name, 0.5, 0, 1.0))
            assert len(parts) == 1
            assert parts[0].second == 0.0 and parts[0].second_eval is None
            assert s_closed(case(name, 0.5, 0, 1.0)) == math.fsum([parts[0].first])

    def test_j0_first_term_matches_printed_reduction(self):
        # prefactor * Gamma(nu + 1/2)/Gamma(1/2) * 4F5(-x^2), nu=0.5, x=1,
        # hypergeometric factor from mpmath
        nu = 0.5
        pre = 2 ** (2 * nu) * math.gamma(1 + nu) / math.gamma(1 + 2 * nu)
        ratio = math.gamma(nu + 0.5) / math.gamma(0.5)
        f = mpmath.hyper([0.75, 1.25, 1.0, 0.5], [0.5, 0.75, 1.25, 1.0, 1.5], -1)
        value = s_closed(case("pp", nu, 0, 1.0))
        assert value == pytest.approx(pre * ratio * float(f), rel=1e-13)
        assert value == pytest.approx(0.4546487134128408477, rel=1e-13)

    def test_mp_second_term_nonzero_at_j0(self):
        # the (-,+) second bracket is not polar at j=0 for generic nu: its
        # denominator is Gamma(-nu/2), finite unless nu is an even integer
        parts = s_closed_terms(case("mp", 0.3, 0, 1.0))
        assert parts[0].second != 0.0
        assert s_closed(case("mp", 0.3, 0, 1.0)) == pytest.approx(
            s_direct(case("mp", 0.3, 0, 1.0)).value, rel=1e-12)

    def test_prefactor_singular(self):
        with pytest.raises(SingularCaseError, match="nu \\+ j = 1"):
            s_closed(case("mm", 1e-9, 1, 1.0))

    def test_doubled_pole_skip(self):
        # 1 + 2nu - j = 0 at nu=0.5, j=2: removable in the sum, polar per term
        with pytest.raises(SingularCaseError, match="1 \\+ 2nu"):
            s_closed(case("pm", 0.5, 2, 1.0))

    def test_error_fields(self):
        ev = s_closed_eval(case("mm", 3.2, 6, 20.0))
        assert ev.terms_used > 1 and ev.err_bound >= 0.0


class TestTransform:
    def test_y_zero(self):
        lhs, rhs = transform_sides([], [1.7], 0.0, 0.5, 1.0)
        assert lhs.value == pytest.approx(math.exp(-1.0), rel=1e-14)
        assert rhs.value == pytest.approx(0.3678794412, abs=1e-10)

    def test_x_zero(self):
        lhs, rhs = transform_sides([0.3], [1.2, 2.0], 0.7, 0.5, 0.0)
        assert lhs.value == 1.0 and rhs.value == 1.0

    def test_cross_module(self):
        nu, j, x = 0.5, 1, 1.0
        lhs, rhs = transform_sides([], [1 + nu + j], -1.0, nu, x)
        c = case("pp", nu, j, x)
        assert lhs.value == pytest.approx(s_direct(c).value, rel=1e-14)
        assert rhs.value == pytest.approx(s_middle(c).value, rel=1e-13)

    def test_parameter_errors(self):
        with pytest.raises(ParameterError):
            transform_sides([1.0, 2.0], [3.0], 0.5, 0.0, 1.0)
        with pytest.raises(ParameterError):
            transform_sides([], [-2.0], 0.5, 0.0, 1.0)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["pp", "pm", "mp", "mm"]), st.floats(-0.95, 3.5),
       st.integers(0, 6), st.floats(0.0, 5.0))
def test_four_way_agreement(name, nu, j, x):
    c = case(name, nu, j, x)
    assume(c.singularity() is None)
    # keep clear of near-poles where every form is ill-conditioned
    assume(abs(c.base - round(c.base)) > 1e-3 or c.base > 0.5)
    d = s_direct(c)
    m = s_middle(c)
    try:
        closed = s_closed(c)
    except SingularCaseError:
        closed = None
    tol = 1e-9 * (1.0 + abs(d.value))
    assert abs(m.value - d.value) <= tol
    if closed is not None and all(abs(a - round(a)) > 1e-6
                                  for a in (2 * nu, 1 + 2 * nu + j, 1 + 2 * nu - j)):
        assert abs(closed - d.value) <= tol

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import gr, lp
from modeq.exactalg import (
    GaussianRational,
    InexactDivisionError,
    LambdaPoly,
    OrderMismatchError,
    SeriesPreconditionError,
    ThetaSeries,
    i_power,
    series_exp,
    series_log,
    series_mul,
)

ZERO = LambdaPoly.zero()
ONE = LambdaPoly.one()
LAM = LambdaPoly.lam()


def series(coeffs, order):
    return ThetaSeries.from_coeffs(coeffs, order)


class TestGaussianRational:
    def test_normalization_invariants(self):
        z = gr("2/4", "-6/8")
        assert z.re == Fraction(1, 2) and z.re.denominator == 2
        assert z.im == Fraction(-3, 4) and z.im.denominator == 4

    def test_arithmetic_closure(self):
        a, b = gr(1, 2), gr("1/3", "-1/5")
        assert (a * b).re == Fraction(1, 3) + Fraction(2, 5)
        assert a * b.conjugate() == (a.conjugate() * b).conjugate()
        assert (a * a.conjugate()).im == 0
        assert a.norm2() == Fraction(5)

    def test_i_powers(self):
        assert i_power(0) == gr(1)
        assert i_power(1) == gr(0, 1)
        assert i_power(2) == gr(-1)
        assert i_power(-1) == gr(0, -1)
        assert i_power(5) * i_power(-5) == gr(1)


class TestLambdaPoly:
    def test_trimming_and_degree(self):
        p = LambdaPoly((gr(1), gr(0), gr(0)))
        assert p.degree == 0
        assert ZERO.degree == -1 and ZERO.is_zero

    def test_exact_evaluation(self):
        p = lp("1/12", "-1/2")
        assert p(Fraction(1, 6)) == gr(0)
        assert p(0) == gr("1/12")

    def test_divide_by_lambda(self):
        assert lp(0, 2, 3).divide_by_lambda() == lp(2, 3)
        with pytest.raises(InexactDivisionError):
            lp(1, 2).divide_by_lambda()

    @pytest.mark.parametrize(
        "poly, text",
        [
            (ZERO, "0"),
            (ONE, "1"),
            (lp(-1), "-1"),
            (lp("1/12", "-1/2"), "(1-6*lambda)/12"),
            (lp("1/2", "-1/2"), "(1-lambda)/2"),
            (lp(0, 1), "lambda"),
            (lp(0, 0, "-1/3"), "-lambda^2/3"),
            (LambdaPoly((gr(1, 2),)), "(1+2*i)"),
            (LambdaPoly((gr(0, 1), gr(0, -1))), "i-i*lambda"),
        ],
    )
    def test_rendering(self, poly, text):
        assert poly.to_string() == text


class TestSeriesMul:
    def test_difference_of_squares(self):
        a = series([ONE, ONE], 2)
        b = series([ONE, -ONE], 2)
        assert series_mul(a, b) == series([ONE, ZERO, -ONE], 2)

    def test_annihilator(self):
        a = series([ONE, LAM], 3)
        assert series_mul(a, ThetaSeries.zero(3)).is_zero

    def test_square_with_lambda_coeffs(self):
        # (1 - lam th^2)^2 = 1 - 2 lam th^2 + lam^2 th^4, worked by hand
        a = series([ONE, ZERO, -LAM], 4)
        expected = series([ONE, ZERO, lp(0, -2), ZERO, lp(0, 0, 1)], 4)
        assert series_mul(a, a) == expected

    def test_order_mismatch_rejected(self):
        with pytest.raises(OrderMismatchError):
            series_mul(ThetaSeries.one(2), ThetaSeries.one(3))

    def test_truncation_closes_over_order(self):
        a = series([ONE, ONE], 1)
        assert series_mul(a, a) == series([ONE, lp(2)], 1)


class TestSeriesLog:
    def test_log_of_one(self):
        assert series_log(ThetaSeries.one(5)).is_zero

    def test_heat_like_expansion(self):
        # log(1 - lam th^2 + lam th^4/12) = -lam th^2 + lam(1-6lam) th^4/12
        s = series([ONE, ZERO, -LAM, ZERO, LAM.scale(Fraction(1, 12))], 4)
        expected = series(
            [ZERO, ZERO, -LAM, ZERO, lp(0, "1/12", "-1/2")], 4
        )
        assert series_log(s) == expected

    def test_shifted_exponential_symbol(self):
        # theta-series of 1 - lam (1 - e^{-i theta}) at N=2, lam symbolic
        s = series(
            [ONE, LAM.scale(gr(0, -1)), LAM.scale(Fraction(-1, 2))], 2
        )
        expected = series(
            [
                ZERO,
                LAM.scale(gr(0, -1)),
                LambdaPoly((gr(0), gr("-1/2"), gr("1/2"))),
            ],
            2,
        )
        assert series_log(s) == expected

    def test_precondition(self):
        with pytest.raises(SeriesPreconditionError):
            series_log(ThetaSeries.zero(3))


class TestSeriesExp:
    def test_exp_of_zero(self):
        assert series_exp(ThetaSeries.zero(4)) == ThetaSeries.one(4)

    def test_gaussian_decay_expansion(self):
        s = series([ZERO, ZERO, -LAM], 4)
        expected = series(
            [ONE, ZERO, -LAM, ZERO, lp(0, 0, "1/2")], 4
        )
        assert series_exp(s) == expected

    def test_precondition(self):
        with pytest.raises(SeriesPreconditionError):
            series_exp(ThetaSeries.one(3))


# --- property tests -------------------------------------------------------

rationals = st.fractions(
    min_value=-4, max_value=4, max_denominator=12
)


@st.composite
def lambda_polys(draw, max_degree=2, real_only=False):
    degree = draw(st.integers(0, max_degree))
    coeffs = []
    for _ in range(degree + 1):
        re = draw(rationals)
        im = Fraction(0) if real_only else draw(rationals)
        coeffs.append(GaussianRational(re, im))
    return LambdaPoly(tuple(coeffs))


@st.composite
def unit_series(draw, max_order=16):
    order = draw(st.integers(1, max_order))
    coeffs = [LambdaPoly.one()] + [
        draw(lambda_polys()) for _ in range(order)
    ]
    return ThetaSeries(tuple(coeffs))


@settings(max_examples=60, deadline=None)
@given(unit_series())
def test_exp_log_round_trip(s):
    assert series_exp(series_log(s)) == s


@settings(max_examples=60, deadline=None)
@given(unit_series(max_order=10))
def test_log_exp_round_trip(s):
    u = series_log(s)
    assert series_log(series_exp(u)) == u


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_log_preserves_twisted_reality(data):
    # coefficients of the form i^p * (real polynomial), the pattern a real
    # stencil produces, survive the logarithm
    order = data.draw(st.integers(1, 8))
    coeffs = [LambdaPoly.one()]
    for p in range(1, order + 1):
        real_poly = data.draw(lambda_polys(real_only=True))
        coeffs.append(real_poly.scale(i_power(p)))
    log_s = series_log(ThetaSeries(tuple(coeffs)))
    for p in range(1, order + 1):
        assert log_s.coeffs[p].scale(i_power(-p)).is_real

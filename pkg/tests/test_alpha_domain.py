from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from bregman_tweedie.alpha_domain import (
    RealCategory,
    as_rational,
    classify_rational,
    format_rational,
    rational_of_string,
    reciprocal_category,
    signed_pow,
)
from bregman_tweedie.errors import DomainError, ParseError, UnsupportedAlpha

rationals = st.fractions(max_denominator=200).filter(lambda q: abs(q) < 1000)
nonzero = rationals.filter(lambda q: q != 0)


@pytest.mark.parametrize(
    "q, cat",
    [
        (Fraction(2, 3), RealCategory.RE),
        (Fraction(0), RealCategory.RE),
        (Fraction(1, 2), RealCategory.RXE),
        (Fraction(1, 3), RealCategory.RO),
        (Fraction(-4, 5), RealCategory.RE),
        (Fraction(-3, 8), RealCategory.RXE),
        (Fraction(1), RealCategory.RO),
        (Fraction(84, 85), RealCategory.RE),
    ],
)
def test_classify_examples(q, cat):
    assert classify_rational(q) is cat


@pytest.mark.parametrize(
    "cat, inv",
    [
        (RealCategory.RO, RealCategory.RO),
        (RealCategory.RE, RealCategory.RXE),
        (RealCategory.RXE, RealCategory.RE),
        (RealCategory.RXX, RealCategory.RXX),
    ],
)
def test_reciprocal_category(cat, inv):
    assert reciprocal_category(cat) is inv


@given(nonzero)
def test_reciprocal_commutes_with_classification(q):
    assert classify_rational(1 / q) is reciprocal_category(classify_rational(q))


@given(rationals)
def test_classification_is_a_partition(q):
    cat = classify_rational(q)
    assert cat is not RealCategory.RXX
    p, d = q.numerator, q.denominator
    hits = [p % 2 == 0 and d % 2 == 1, p % 2 == 1 and d % 2 == 1, d % 2 == 0]
    assert sum(hits) == 1
    assert [RealCategory.RE, RealCategory.RO, RealCategory.RXE][hits.index(True)] is cat


def test_rational_of_string():
    assert rational_of_string("84/85") == Fraction(84, 85)
    assert rational_of_string("-2/4") == Fraction(-1, 2)
    assert rational_of_string(" 7 ") == 7
    assert rational_of_string("3/-6") == Fraction(-1, 2)
    for bad in ["3/0", "", "1.5", "a/b", "1//2", "1/2/3"]:
        with pytest.raises(ParseError):
            rational_of_string(bad)


def test_as_rational_refuses_floats():
    assert as_rational(3) == 3
    assert as_rational("2/3") == Fraction(2, 3)
    for bad in [0.5, True, None]:
        with pytest.raises((UnsupportedAlpha, ParseError, TypeError)):
            as_rational(bad)


@given(rationals)
def test_format_round_trip(q):
    assert rational_of_string(format_rational(q)) == q


@pytest.mark.parametrize(
    "x, r, want",
    [
        (-8.0, Fraction(1, 3), -2.0),
        (-8.0, Fraction(2, 3), 4.0),
        (8.0, Fraction(2, 3), 4.0),
        (0.0, Fraction(1, 3), 0.0),
        (4.0, Fraction(1, 2), 2.0),
        (-2.0, Fraction(-1), -0.5),
        (-2.0, Fraction(3), -8.0),
    ],
)
def test_signed_pow_examples(x, r, want):
    assert signed_pow(x, r) == pytest.approx(want, rel=1e-15)


def test_signed_pow_zero_is_exact():
    assert signed_pow(0.0, Fraction(5, 7)) == 0.0
    assert signed_pow(-0.0, Fraction(2, 3)) == 0.0


@pytest.mark.parametrize("x, r", [(-4.0, Fraction(1, 2)), (0.0, Fraction(-1, 3)), (0.0, Fraction(-2)), (float("nan"), Fraction(1))])
def test_signed_pow_domain_errors(x, r):
    with pytest.raises(DomainError):
        signed_pow(x, r)


def test_signed_pow_vectorised():
    out = signed_pow(np.array([-27.0, -1.0, 0.0, 8.0]), Fraction(1, 3))
    np.testing.assert_allclose(out, [-3.0, -1.0, 0.0, 2.0], rtol=1e-15)


odd_den = st.builds(
    lambda p, k: Fraction(p, 2 * k + 1),
    st.integers(-12, 12).filter(lambda p: p != 0),
    st.integers(0, 12),
).filter(lambda r: r.denominator % 2 == 1)


@given(odd_den, st.floats(1e-3, 1e3))
def test_signed_pow_parity(r, x):
    plus, minus = signed_pow(x, r), signed_pow(-x, r)
    if r.numerator % 2:
        assert minus == -plus
    else:
        assert minus == plus


@given(odd_den, st.floats(-1e3, 1e3).filter(lambda v: abs(v) > 1e-3))
def test_signed_pow_inverse(r, x):
    y = signed_pow(x, r)
    assume(y != 0 and np.isfinite(y))
    if r.numerator % 2 == 0:
        # an even power forgets the sign
        assert signed_pow(y, 1 / r) == pytest.approx(abs(x), rel=1e-12)
    else:
        assert signed_pow(y, 1 / r) == pytest.approx(x, rel=1e-12)

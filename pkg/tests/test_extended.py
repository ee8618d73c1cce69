import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bregman_tweedie.alpha_domain import RealCategory, classify_rational
from bregman_tweedie.errors import BranchRequired, DomainError, InvalidScale
from bregman_tweedie.extended import (
    NEG,
    NONNEG,
    NONPOS,
    POS,
    REALS,
    BranchChoice,
    DomainSpec,
    c_alpha,
    domain_exp,
    domain_ln,
    exp_alpha,
    exp_alpha_c,
    ln_alpha,
    ln_alpha_c,
)

P, N = BranchChoice.POSITIVE, BranchChoice.NEGATIVE
NAMED = {"R": REALS, "R+": NONNEG, "R++": POS, "R-": NONPOS, "R--": NEG}


def sample(dom: DomainSpec, rng, n=200, lo=0.05, hi=6.0):
    mags = rng.uniform(lo, hi, n)
    if dom.lower >= 0:
        pts = mags
    elif dom.upper <= 0:
        pts = -mags
    else:
        pts = mags * rng.choice([-1.0, 1.0], n)
    extra = [b for b, closed in ((dom.lower, dom.lower_closed), (dom.upper, dom.upper_closed)) if closed]
    return np.concatenate([pts, extra])


# Raw domains and ranges of exp and ln, keyed by a representative alpha for each
# category; values are [(branch, dom, ran)].
RAW_EXP = {
    F(1): [(None, "R", "R++")],
    F(1, 2): [(None, "R", "R+")],  # 1-a in Rxe
    F(3, 4): [(None, "R", "R+")],
    F(2, 3): [(None, "R", "R")],  # 1-a in Ro
    F(0): [(None, "R", "R")],
    F(-2): [(None, "R", "R")],
    F(1, 3): [(None, "R+", "R+")],  # 1-a in Re
    F(-1): [(None, "R+", "R+")],
    F(3, 2): [(P, "R++", "R++"), (N, "R--", "R++")],  # a>1, 1-a in Rxe
    F(5, 4): [(P, "R++", "R++"), (N, "R--", "R++")],
    F(2): [(P, "R++", "R--"), (N, "R--", "R++")],  # a>1, 1-a in Ro
    F(4, 3): [(P, "R++", "R--"), (N, "R--", "R++")],
    F(5, 3): [(None, "R--", "R++")],  # a>1, 1-a in Re
    F(3): [(None, "R--", "R++")],
}
RAW_LN = {
    F(1): [(None, "R++", "R")],
    F(1, 3): [(None, "R", "R+")],  # 1-a in Re
    F(-1): [(None, "R", "R+")],
    F(2, 3): [(None, "R", "R")],  # 1-a in Ro
    F(0): [(None, "R", "R")],
    F(1, 2): [(None, "R+", "R+")],  # 1-a in Rxe
    F(3, 4): [(None, "R+", "R+")],
    F(5, 3): [(P, "R++", "R--"), (N, "R--", "R--")],  # a>1, 1-a in Re
    F(3): [(P, "R++", "R--"), (N, "R--", "R--")],
    F(2): [(P, "R++", "R--"), (N, "R--", "R++")],  # a>1, 1-a in Ro
    F(10, 7): [(P, "R++", "R--"), (N, "R--", "R++")],
    F(3, 2): [(None, "R++", "R--")],  # a>1, 1-a in Rxe
}
REDUCED = {  # alpha -> (dom exp, dom ln) per branch
    F(1): [(None, "R", "R++")],
    F(2, 3): [(None, "R", "R")],
    F(0): [(None, "R", "R")],
    F(-2, 5): [(None, "R", "R")],
    F(1, 3): [(None, "R+", "R+")],
    F(1, 2): [(None, "R+", "R+")],
    F(8, 7): [(N, "R--", "R++"), (P, "R++", "R--")],
    F(2): [(N, "R--", "R++"), (P, "R++", "R--")],
    F(3, 2): [(None, "R--", "R++")],
    F(9, 7): [(None, "R--", "R++")],
    F(5, 3): [(None, "R--", "R++")],
}


def _cases(table):
    return [(a, br, d, r) for a, rows in table.items() for br, d, r in rows]


@pytest.mark.parametrize("alpha, branch, dom, ran", _cases(RAW_EXP))
def test_table_exp(alpha, branch, dom, ran, rng):
    got = domain_exp(alpha, reduced=False, branch=branch)
    assert got.name == dom
    vals = exp_alpha(alpha, sample(got, rng))
    assert np.all(NAMED[ran].contains(vals))


@pytest.mark.parametrize("alpha, branch, dom, ran", _cases(RAW_LN))
def test_table_ln(alpha, branch, dom, ran, rng):
    got = domain_ln(alpha, reduced=False, branch=branch)
    assert got.name == dom
    pts = sample(got, rng)
    if alpha == 1:
        pts = pts[pts > 0]
    vals = ln_alpha(alpha, pts)
    assert np.all(NAMED[ran].contains(vals))


@pytest.mark.parametrize("alpha, branch, dom_e, dom_l", _cases(REDUCED))
def test_table_reduced(alpha, branch, dom_e, dom_l):
    assert domain_exp(alpha, reduced=True, branch=branch).name == dom_e
    # for alpha > 1 the ln branch is the image of the exp branch
    ln_branch = branch.flipped() if branch is not None else None
    assert domain_ln(alpha, reduced=True, branch=ln_branch).name == dom_l
    if branch is not None:
        xs = np.array([0.5, 2.0]) * (1 if branch is P else -1)
        assert np.all(NAMED[dom_l].contains(exp_alpha(alpha, xs)))


def test_split_rows_demand_a_branch():
    with pytest.raises(BranchRequired):
        domain_exp(F(2))
    with pytest.raises(BranchRequired):
        domain_ln(F(5, 3))
    with pytest.raises(BranchRequired):
        domain_exp(F(8, 7), reduced=True)


def test_spec_domain_examples():
    assert domain_exp(F(2, 3)) == REALS
    assert domain_exp(F(4, 7), reduced=True) == REALS
    assert domain_exp(F(3, 2), reduced=True) == NEG
    assert domain_ln(F(1)) == POS
    assert domain_ln(F(4, 7), reduced=True) == REALS
    assert domain_ln(F(3, 2), reduced=True) == POS


def test_domainspec_contract():
    with pytest.raises(ValueError):
        DomainSpec(1.0, 0.0)
    with pytest.raises(ValueError):
        DomainSpec(-math.inf, 0.0, lower_closed=True)
    assert NONNEG.contains(0.0) and not POS.contains(0.0)
    assert POS.contains(1e-9, tol=1e-6) is False
    assert NONNEG.contains(-1e-9, tol=1e-6)
    assert DomainSpec(0.0, 1.0, True, False).name == "[0, 1)"


@pytest.mark.parametrize(
    "fn, alpha, x, want",
    [
        (exp_alpha, F(1, 3), 6.0, 8.0),
        (exp_alpha, F(1), 0.0, 1.0),
        (exp_alpha, F(2, 3), -6.0, -8.0),
        (ln_alpha, F(1, 3), -8.0, 6.0),
        (ln_alpha, F(1), 1.0, 0.0),
        (ln_alpha, F(2, 3), -8.0, -6.0),
    ],
)
def test_class_form_examples(fn, alpha, x, want):
    assert fn(alpha, x) == pytest.approx(want, abs=1e-12)


def test_composition_cases():
    # the two worked cases in the introduction: -8 comes back as 8 at 1/3, as -8 at 2/3
    assert exp_alpha(F(1, 3), ln_alpha(F(1, 3), -8.0)) == pytest.approx(8.0, rel=1e-12)
    assert exp_alpha(F(2, 3), ln_alpha(F(2, 3), -8.0)) == pytest.approx(-8.0, rel=1e-12)


@pytest.mark.parametrize("alpha, x", [(F(1, 3), -1.0), (F(1, 2), -1.0), (F(3), 1.0), (F(1), 0.0), (F(1), -2.0)])
def test_raw_domain_errors(alpha, x):
    fn = exp_alpha if alpha in (F(1, 3), F(3)) else ln_alpha
    with pytest.raises(DomainError):
        fn(alpha, x)


def test_scaled_examples():
    xs = np.linspace(-5, 5, 11)
    np.testing.assert_allclose(exp_alpha_c(F(0), 1.0, xs), 1 + xs, rtol=0, atol=1e-15)
    assert exp_alpha_c(F(1), 2.0, 0.0) == 2.0
    assert exp_alpha_c(F(2, 3), 1.0, -6.0) == pytest.approx(-1.0, abs=1e-12)
    np.testing.assert_allclose(ln_alpha_c(F(0), 1.0, xs), xs - 1, atol=1e-15)
    assert ln_alpha_c(F(1), 3.7, 3.7) == 0.0
    assert ln_alpha_c(F(2, 3), 1.0, 8.0) == pytest.approx(3.0, rel=1e-12)


def test_scale_validation():
    for bad in (0.0, -1.0, math.inf, math.nan):
        with pytest.raises(InvalidScale):
            exp_alpha_c(F(2, 3), bad, 0.0)
    with pytest.raises(ValueError):
        c_alpha(F(1), 1.0)


GRID = [F(0), F(2, 3), F(2, 7), F(4, 7), F(6, 7), F(84, 85), F(1), F(1, 3), F(1, 2), F(3, 2), F(2), F(5, 3), F(10, 7)]


def _reduced_points(alpha, fn, rng):
    if alpha > 1 and classify_rational(alpha) is RealCategory.RE:
        doms = [fn(alpha, True, P), fn(alpha, True, N)]
    else:
        doms = [fn(alpha, True)]
    return [sample(d.interior(), rng, n=300, lo=0.05, hi=4.0) for d in doms]


@pytest.mark.parametrize("alpha", GRID)
def test_reduced_domain_bijection(alpha, rng):
    for xs in _reduced_points(alpha, domain_exp, rng):
        np.testing.assert_allclose(ln_alpha(alpha, exp_alpha(alpha, xs)), xs, rtol=1e-10)
    for ys in _reduced_points(alpha, domain_ln, rng):
        np.testing.assert_allclose(exp_alpha(alpha, ln_alpha(alpha, ys)), ys, rtol=1e-10)


@pytest.mark.parametrize("alpha", GRID)
def test_exp_increasing_on_reduced_domain(alpha, rng):
    for xs in _reduced_points(alpha, domain_exp, rng):
        xs = np.sort(np.unique(xs))
        assert np.all(np.diff(exp_alpha(alpha, xs)) > 0)


@pytest.mark.parametrize("alpha", [F(1, 3), F(3, 5), F(-1, 3), F(5, 3), F(7, 5)])
def test_exp_ln_fails_on_negative_axis_for_odd_alpha(alpha, rng):
    # exp(ln(x)) = x away from R-- ; on R-- the odd/odd alpha returns |x| or -|x| wrongly
    assert classify_rational(alpha) is RealCategory.RO
    xs = -rng.uniform(0.2, 5.0, 50)
    back = exp_alpha(alpha, ln_alpha(alpha, xs))
    assert np.all(np.abs(back - xs) > 1e-3)
    pos = rng.uniform(0.2, 5.0, 50)
    np.testing.assert_allclose(exp_alpha(alpha, ln_alpha(alpha, pos)), pos, rtol=1e-10)


@pytest.mark.parametrize("alpha", [F(1, 2), F(3, 4), F(-1, 2), F(3, 2), F(5, 4)])
def test_ln_exp_fails_where_scaled_argument_is_negative(alpha, rng):
    assert classify_rational(alpha) is RealCategory.RXE
    one_minus = float(1 - alpha)
    bad = -rng.uniform(0.2, 5.0, 50) / one_minus  # (1-a) y < 0
    back = ln_alpha(alpha, exp_alpha(alpha, bad))
    assert np.all(np.abs(back - bad) > 1e-3)
    good = rng.uniform(0.2, 5.0, 50) / one_minus
    np.testing.assert_allclose(ln_alpha(alpha, exp_alpha(alpha, good)), good, rtol=1e-10)


@given(
    st.sampled_from([F(0), F(2, 3), F(2, 7), F(4, 7), F(6, 7), F(58, 59), F(1, 3), F(4, 3)]),
    st.floats(0.1, 5.0),
    st.floats(-3.0, 3.0),
)
def test_scaled_matches_class_form(alpha, c, x):
    shifted = x - c_alpha(alpha, c)
    try:
        want = exp_alpha(alpha, shifted)
    except DomainError:
        with pytest.raises(DomainError):
            exp_alpha_c(alpha, c, x)
        return
    assert exp_alpha_c(alpha, c, x) == pytest.approx(want, rel=1e-12, abs=1e-300)


@given(st.sampled_from([F(0), F(2, 3), F(2, 7), F(6, 7), F(84, 85)]), st.floats(0.1, 5.0), st.floats(-50, 50))
def test_scaled_pair_inverts_on_the_line(alpha, c, x):
    # the loss family has dom exp_{a,c} = R and an exact inverse there
    y = exp_alpha_c(alpha, c, x)
    assert ln_alpha_c(alpha, c, y) == pytest.approx(x, rel=1e-9, abs=1e-9)

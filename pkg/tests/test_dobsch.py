import math
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from monotone_gap.dobsch import (
    _leading_minor_polys,
    alpha_dobsch,
    alpha_rat_is_certified,
    default_alpha_rat,
    dobsch_matrix,
    gap_certificate,
    hankel_at_zero,
    moment_b,
    trailing_block,
    trailing_block_det,
)
from monotone_gap.errors import InvalidArgument
from monotone_gap.exactpoly import Poly, gn_poly
from monotone_gap.psdcert import SymMatrix, is_pd, leading_minors

from conftest import rationals

T = Poly([0, 1])


def test_moments():
    assert (moment_b(0), moment_b(3), moment_b(4)) == (1, 0, F(1, 5))


def test_hankel_examples():
    assert hankel_at_zero(1) == SymMatrix([[1]])
    assert hankel_at_zero(2) == SymMatrix([[1, 0], [0, F(1, 3)]])
    assert hankel_at_zero(3) == SymMatrix([[1, 0, F(1, 3)], [0, F(1, 3), 0], [F(1, 3), 0, F(1, 5)]])


def test_dobsch_examples():
    m = dobsch_matrix(gn_poly(2), 2)
    assert m.entries == SymMatrix([[Poly([1, 0, 1]), T], [T, Poly([F(1, 3)])]])
    assert dobsch_matrix(gn_poly(1), 1).entries == SymMatrix([[Poly([1])]])
    assert m.at(0) == hankel_at_zero(2)


def test_trailing_block_examples():
    third = Poly([F(1, 3)])
    fifth = Poly([F(1, 5)])
    zero = Poly([])
    assert trailing_block(2) == SymMatrix([[Poly([1, 0, 1]), T, third], [T, third, zero], [third, zero, zero]])
    assert trailing_block(3) == SymMatrix(
        [[Poly([F(1, 3), 0, 2]), T, fifth], [T, fifth, zero], [fifth, zero, zero]]
    )
    for n in range(2, 9):
        assert trailing_block(n)[2, 2].is_zero()


@pytest.mark.parametrize("n, expected", [(2, F(-1, 27)), (3, F(-1, 125)), (5, F(-1, 729))])
def test_trailing_det_examples(n, expected):
    assert trailing_block_det(n) == Poly([expected])


def test_trailing_block_needs_n_2():
    with pytest.raises(InvalidArgument):
        trailing_block(1)


def test_alpha_examples():
    assert alpha_dobsch(1).value == math.inf
    a = alpha_dobsch(2, 1e-8)
    assert abs(a.value - math.sqrt(0.5)) < 1e-8
    assert a.minor == 2


def test_alpha_3_self_consistent():
    a = alpha_dobsch(3, 1e-6)
    below = a.bracket.lo - F(1, 10**6)
    above = a.bracket.hi + F(1, 10**6)
    minors = _leading_minor_polys(gn_poly(3), 3)
    assert all(m(below) > 0 for m in minors)
    assert any(m(above) < 0 for m in minors)


def test_default_alpha_rat():
    assert default_alpha_rat(alpha_dobsch(2)) == F(45, 64)
    assert default_alpha_rat(alpha_dobsch(1)) is None
    assert alpha_rat_is_certified(2, F(45, 64))
    assert alpha_rat_is_certified(2, F(7, 10))
    assert not alpha_rat_is_certified(2, F(3, 4))


def test_certificate_n2():
    c = gap_certificate(2)
    assert c.valid
    assert c.hankel_pd.leading_minors == (1, F(1, 3))
    assert abs(c.alpha.value - 0.70710678) < 1e-8
    assert c.trailing_det == Poly([F(-1, 27)])
    assert c.trailing_not_psd.not_psd
    assert c.hypothesis_check


@pytest.mark.parametrize("n", [3, 6])
def test_certificate_valid(n):
    c = gap_certificate(n)
    assert c.valid, c.failures
    assert c.trailing_det == Poly([F(-1, (2 * n - 1) ** 3)])


def test_certificate_n1_is_invalid():
    # g_1 = t is operator monotone, so no order-2 counterexample exists
    c = gap_certificate(1)
    assert c.hankel_pd.is_pd
    assert c.failures == ["order_n_plus_1"]


def test_integer_and_rational_elimination_agree():
    for n in range(1, 7):
        assert list(_leading_minor_polys(gn_poly(n), n)) == leading_minors(dobsch_matrix(gn_poly(n), n).entries)


@pytest.mark.parametrize("n", range(1, 9))
def test_hankel_matches_dobsch_at_zero(n):
    assert dobsch_matrix(gn_poly(n), n).at(0) == hankel_at_zero(n)
    assert is_pd(hankel_at_zero(n)).is_pd


@pytest.mark.parametrize("n", range(2, 7))
def test_pd_below_alpha_and_not_above(n):
    a = alpha_dobsch(n, 1e-8)
    lo = a.bracket.lo
    for k in range(100):
        t = lo * F(k, 100)
        assert is_pd(dobsch_matrix(gn_poly(n), n).at(t)).is_pd
    above = a.bracket.hi + F(1, 10**8)
    assert any(m(above) <= 0 for m in _leading_minor_polys(gn_poly(n), n))


def _integral_half(p: Poly) -> F:
    # (1/2) * integral over [-1, 1]
    return sum((c / (k + 1) for k, c in enumerate(p.coeffs) if k % 2 == 0), F(0))


@given(st.lists(rationals(), min_size=1, max_size=6))
def test_hankel_quadratic_form_is_integral(c):
    p = Poly(c)
    assert hankel_at_zero(len(c)).quadratic_form(c) == _integral_half(p * p)

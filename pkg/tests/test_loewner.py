import math
from fractions import Fraction as F
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from monotone_gap.dobsch import alpha_dobsch
from monotone_gap.exactpoly import gn_poly
from monotone_gap.expr import Affine, Compose, Mobius
from monotone_gap.interval import Interval
from monotone_gap.loewner import (
    CANONICAL_G2_NODES,
    Exhausted,
    LoewnerWitness,
    alpha_loewner,
    canonical_g2_witness,
    find_violation,
    hadamard_composition,
    loewner_matrix,
    order_test,
)
from monotone_gap.psdcert import SymMatrix, Verdict, is_psd

from conftest import rationals

H = Mobius(1, 0, 1, 1)
nonneg = rationals(max_num=40, max_den=10, min_value=0)


def test_matrix_examples():
    assert loewner_matrix(H, [0, 1]).entries == SymMatrix([[1, F(1, 2)], [F(1, 2), F(1, 4)]])
    ones = loewner_matrix(gn_poly(1), [0, 2, 7]).entries
    assert ones == SymMatrix([[1] * 3] * 3)
    m = loewner_matrix(gn_poly(2), CANONICAL_G2_NODES).entries
    assert m[0, 0] == F(569, 400) and m[1, 1] == F(689, 400)
    assert m[0, 0] * m[1, 1] - m[0, 1] ** 2 == F(-2272, 1440000) == F(-71, 45000)


def test_order_test_examples():
    assert order_test(H, [0, F(1, 3), 2, 9]).is_psd
    v = order_test(gn_poly(2), CANONICAL_G2_NODES)
    assert v.verdict is Verdict.NOT_PSD and v.minor_det == F(-71, 45000)
    assert order_test(gn_poly(2), [F(1, 10), F(2, 10)]).is_psd


def test_canonical_witness_verifies():
    w = canonical_g2_witness()
    assert w.verify() and w.minor_det == F(-71, 45000)


def test_tampered_witness_fails_verification():
    w = canonical_g2_witness()
    fake = LoewnerWitness(gn_poly(2), (F(1, 10), F(2, 10)), w.verdict)
    assert not fake.verify()


def test_find_violation_examples():
    w = find_violation(gn_poly(2), 2, Interval.closed_open(0, 1), 10**4, 42)
    assert isinstance(w, LoewnerWitness) and w.verify()
    w = find_violation(gn_poly(2), 2, Interval.closed_open(0, 1), 10, 0, proposals=[CANONICAL_G2_NODES])
    assert w.nodes == CANONICAL_G2_NODES
    assert isinstance(find_violation(gn_poly(1), 2, Interval.closed_open(0, 1), 10**3, 3), Exhausted)


@pytest.mark.parametrize("hi", [F(1, 10), F(1, 100)])
def test_g3_fails_order_4_on_small_intervals(hi):
    iv = Interval.closed_open(0, hi)
    w = find_violation(gn_poly(3), 4, iv, 10**5, 7)
    assert isinstance(w, LoewnerWitness) and w.verify()
    assert all(x in iv for x in w.nodes)


def test_find_violation_is_deterministic():
    iv = Interval.closed_open(F(1, 2), 1)
    runs = [find_violation(gn_poly(4), 5, iv, 2000, 11) for _ in range(2)]
    assert runs[0] == runs[1]


def test_alpha_loewner():
    assert alpha_loewner(1).value == math.inf
    b = alpha_loewner(2)
    assert b.value <= 0.85 and b.witness.verify()
    assert alpha_dobsch(2).value <= b.value + 2e-4


@given(st.lists(nonneg, min_size=1, max_size=5, unique=True))
def test_operator_monotone_atoms_pass(nodes):
    atoms = [H, Affine(F(3, 2), 1), Compose(H, Affine(2, 1))]
    if max(nodes) < 3:
        atoms.append(Mobius(-1, 0, 1, -3))  # t/(3 - t) on (-inf, 3)
    for f in atoms:
        assert order_test(f, nodes).is_psd


@given(st.lists(rationals(), min_size=1, max_size=5), rationals(min_value=F(1, 20)), rationals())
def test_affine_loewner_is_constant(nodes, c, d):
    m = loewner_matrix(Affine(c, d), nodes).entries
    assert m == SymMatrix([[c] * len(nodes)] * len(nodes))
    assert is_psd(m).is_psd


@given(st.integers(1, 4), st.lists(nonneg, min_size=1, max_size=4),
       st.sampled_from([H, Mobius(1, 1, 1, 2), Mobius(2, 1, 1, 3), Mobius(-1, 0, 1, -100)]))
def test_composition_law(n, nodes, h):
    lhs = loewner_matrix(Compose(gn_poly(n), h), nodes).entries
    assert lhs == hadamard_composition(gn_poly(n), h, nodes)


@given(st.integers(1, 4), st.lists(nonneg, min_size=2, max_size=5, unique=True))
def test_principal_submatrices_of_psd_loewner(n, nodes):
    m = loewner_matrix(gn_poly(n), nodes).entries
    if is_psd(m).is_psd:
        for k in range(1, len(nodes)):
            for idx in combinations(range(len(nodes)), k):
                assert is_psd(m.principal(idx)).is_psd

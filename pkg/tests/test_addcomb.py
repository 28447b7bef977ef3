import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sglab.addcomb import (
    ADDITIVE,
    MULTIPLICATIVE,
    MobiusMap,
    difference_set,
    expansion_report,
    grid_constant,
    grid_stats,
    mobius_incidences,
    mobius_incidences_naive,
    recover_subgroup,
    subset_grid_constant,
)
from sglab.cubicgroup import CubicKind, GroupElement
from sglab.cycfield import CycNum, zeta
from sglab.errors import DomainError, KindMismatchError


def subgroup(m):
    w = zeta(m)
    return [w**k for k in range(m)]


def test_difference_set_examples():
    d = difference_set([0, 1, 2], ADDITIVE)
    assert d == {CycNum.rational(k) for k in range(-2, 3)}
    assert difference_set(subgroup(6), MULTIPLICATIVE) == set(subgroup(6))
    w = zeta(5)
    assert difference_set([1, w], MULTIPLICATIVE) == {CycNum.one(5), w, w**4}


def test_difference_set_kind_mismatch():
    a = GroupElement(CubicKind.THREE_LINES, CycNum.rational(2), 0)
    b = GroupElement(CubicKind.CUSPIDAL, CycNum.rational(2), 0)
    with pytest.raises(KindMismatchError):
        difference_set([a, b])
    with pytest.raises(KindMismatchError):
        difference_set([a], ADDITIVE)
    assert difference_set([a]) == {1}


def test_grid_constant_examples():
    ok, stats = grid_constant(subgroup(12), 1, MULTIPLICATIVE)
    assert ok and stats.diff_or_ratio_size == 12
    assert grid_constant([CycNum.rational(7)], 1, MULTIPLICATIVE)[0]
    assert grid_constant([3], 1, ADDITIVE)[0]


def test_powers_of_two_ratio_set():
    powers = [1, 2, 4, 8, 16]
    oracle = {Fraction(a, b) for a in powers for b in powers}
    assert len(oracle) == 9
    ok, stats = grid_constant(powers, 2, MULTIPLICATIVE)
    assert stats.diff_or_ratio_size == len(oracle)
    assert ok == (len(oracle) <= 2 * len(powers))
    assert not grid_constant(powers, Fraction(3, 2), MULTIPLICATIVE)[0]


def test_zero_not_multiplicative():
    with pytest.raises(DomainError):
        difference_set([0, 1], MULTIPLICATIVE)


def test_recover_exact_subgroup():
    cert = recover_subgroup(subgroup(6), 12)
    assert (cert.m, cert.lam, cert.sym_diff) == (6, 1, 0)
    assert cert.coset() == set(subgroup(6))


def test_recover_coset_with_hole():
    w = zeta(5)
    a = [w * v for v in subgroup(5)][1:]
    cert = recover_subgroup(a, 12)
    # exhaustive oracle over every m <= 12 and every lambda in A:
    # |A n lambda H_m| counts the a with (a / lambda)^m = 1
    best = min(
        (len(a) + m - 2 * sum((x / lam) ** m == 1 for x in a), m)
        for m in range(1, 13)
        for lam in a
    )
    assert (cert.sym_diff, cert.m) == best == (1, 5)
    assert cert.lam in a


def test_recover_random_values():
    a = [CycNum.rational(v) for v in (3, 7, Fraction(5, 2))]
    cert = recover_subgroup(a, 12)
    # best possible is a single point as a coset of H_1
    assert cert is not None and cert.m == 1 and cert.sym_diff == 2
    with pytest.raises(DomainError):
        recover_subgroup([0, 1], 4)


def test_mobius_examples():
    pairs = [(x, x) for x in subgroup(4)]
    assert mobius_incidences(pairs, [MobiusMap.identity()]) == 4
    inv = MobiusMap(0, 1, 1, 0)
    pairs = [(x, x.inverse()) for x in subgroup(8)]
    assert mobius_incidences(pairs, [inv]) == mobius_incidences_naive(pairs, [inv]) == 8
    assert inv(0) is None
    with pytest.raises(DomainError):
        MobiusMap(1, 2, 2, 4)


def test_mobius_group_laws():
    f, g = MobiusMap(1, 2, 3, 4), MobiusMap(2, 0, 1, 1)
    for x in (5, Fraction(1, 3), -7):
        assert f.compose(g)(x) == f(g(x))
        assert f.inverse()(f(x)) == x


def test_mobius_random_agreement():
    rng = random.Random(3)
    vals = [CycNum.rational(rng.randint(-4, 4)) for _ in range(10)]
    pairs = [(rng.choice(vals), rng.choice(vals)) for _ in range(50)]
    maps = []
    while len(maps) < 20:
        a, b, c, d = (rng.randint(-2, 2) for _ in range(4))
        if a * d - b * c:
            maps.append(MobiusMap(a, b, c, d))
    assert mobius_incidences(pairs, maps) == mobius_incidences_naive(pairs, maps)


def test_expansion_identity():
    for m in (4, 7):
        r = expansion_report(subgroup(m), MobiusMap.identity(), "two-pt")
        assert r.first_size == r.second_size == r.maximum == m


def test_expansion_progression_mixed():
    n = 6
    a = list(range(1, n + 1))
    r = expansion_report(a, MobiusMap(0, 1, 1, 0), "mixed")
    assert r.first_size == 2 * n - 1
    oracle = {Fraction(1, x) / Fraction(1, y) for x in a for y in a}
    assert r.second_size == len(oracle)


@pytest.mark.parametrize("m", [3, 5, 6, 9])
def test_expansion_shift_exceeds_m(m):
    r = expansion_report(subgroup(m), MobiusMap(1, 1, 0, 1), "two-pt", restrict=True)
    assert r.excluded == (1 if m % 2 == 0 else 0)
    assert r.second_size > m
    if m % 2 == 0:
        # -1 is in H_m and is sent to 0
        with pytest.raises(DomainError):
            expansion_report(subgroup(m), MobiusMap(1, 1, 0, 1), "two-pt")


def test_expansion_reports_exponent_only():
    r = expansion_report(subgroup(8), MobiusMap(1, 1, 0, 1), "one-pt", restrict=True)
    assert r.exponent == Fraction(41, 40)
    assert r.normalized == r.maximum / r.set_size ** 1.025


values = st.lists(st.integers(-6, 6), min_size=1, max_size=10, unique=True)


@settings(max_examples=100, deadline=None)
@given(values, st.data())
def test_hereditary_grid_bound(q, data):
    sub = data.draw(st.lists(st.sampled_from(q), min_size=1, unique=True))
    full = grid_stats(q, ADDITIVE)
    part = grid_stats(sub, ADDITIVE)
    assert part.diff_or_ratio_size <= full.diff_or_ratio_size
    c = full.doubling_constant
    inherited, holds = subset_grid_constant(q, sub, c, ADDITIVE)
    assert inherited == c * len(q) / len(sub)
    assert holds


@settings(max_examples=60, deadline=None)
@given(values)
def test_difference_set_matches_fraction_oracle(q):
    oracle = {Fraction(a - b) for a in q for b in q}
    assert {v.to_fraction() for v in difference_set(q, ADDITIVE)} == oracle
    assert grid_stats(q, ADDITIVE).diff_or_ratio_size >= 1


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 12), st.integers(0, 11), st.integers(2, 24))
def test_recover_exact_cosets(m, shift, max_m):
    if m > max_m:
        return
    lam = zeta(m) ** shift * 3
    cert = recover_subgroup([lam * v for v in subgroup(m)], max_m)
    assert cert.m == m and cert.sym_diff == 0
    assert {cert.lam * v for v in subgroup(m)} == {lam * v for v in subgroup(m)}


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), max_size=25),
       st.lists(st.tuples(*[st.integers(-2, 2)] * 4), max_size=8))
def test_mobius_dual_implementations(pairs, coeffs):
    maps = [MobiusMap(*c) for c in coeffs if c[0] * c[3] - c[1] * c[2]]
    assert mobius_incidences(pairs, maps) == mobius_incidences_naive(pairs, maps)

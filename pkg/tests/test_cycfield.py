from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from sglab import cycfield
from sglab.cycfield import (
    CycNum,
    as_cycnum,
    cyclotomic_polynomial,
    embed,
    euler_phi,
    inv,
    lift_all,
    multiplicative_order,
    nth_root,
    parse_cycnum,
    roots_of_unity,
    zeta,
)
from sglab.errors import InvalidOrderError, OrderMismatchError, PromotionError

ORDERS = st.integers(min_value=1, max_value=24)
small_fractions = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@st.composite
def cycnums(draw, order=None):
    n = order if order is not None else draw(ORDERS)
    coeffs = draw(st.lists(small_fractions, min_size=1, max_size=n))
    return CycNum(n, coeffs)


@st.composite
def same_order(draw, count=3):
    n = draw(ORDERS)
    return [draw(cycnums(order=n)) for _ in range(count)]


def test_zeta_one_is_one():
    assert zeta(1) == 1


def test_cube_roots_sum_to_zero():
    w = zeta(3)
    assert w + w**2 + 1 == 0


def test_i_squared():
    assert zeta(4) ** 2 == -1


def test_zeta_zero_order_rejected():
    with pytest.raises(InvalidOrderError):
        zeta(0)


def test_ring_identity():
    w = zeta(7)
    assert (1 + w) * (1 - w) == 1 - w**2


def test_additive_identity():
    a = CycNum(5, [1, 2, Fraction(1, 3)])
    assert a + 0 == a


@pytest.mark.parametrize("n", [2, 5, 9, 12])
def test_root_times_complement(n):
    assert zeta(n) * zeta(n) ** (n - 1) == 1


def test_inverses():
    assert inv(CycNum.one(3)) == 1
    assert inv(zeta(9)) == zeta(9) ** 8
    assert inv(CycNum.rational(2)) == Fraction(1, 2)
    with pytest.raises(ZeroDivisionError):
        inv(CycNum.zero(4))


def test_embed_examples():
    assert embed(zeta(2), 4) == zeta(4) ** 2
    assert embed(CycNum.one(1), 15) == 1
    assert embed(zeta(3), 6) == zeta(6) ** 2
    with pytest.raises(PromotionError):
        embed(zeta(4), 6)


def test_cross_order_promotes_to_lcm():
    s = zeta(3) + zeta(4)
    assert s.order == 12
    assert s == zeta(12) ** 4 + zeta(12) ** 3


def test_promotion_refused_beyond_max_order():
    with cycfield.max_order(12):
        with pytest.raises(OrderMismatchError):
            zeta(5) + zeta(3)
    assert (zeta(5) + zeta(3)).order == 15


def test_mixed_orders_outside_2520_refused():
    with pytest.raises(OrderMismatchError):
        zeta(11) * zeta(13)


@pytest.mark.parametrize("n", range(1, 25))
def test_cyclotomic_polynomial_matches_sympy(n):
    x = sympy.symbols("x")
    ref = sympy.Poly(sympy.cyclotomic_poly(n, x), x).all_coeffs()[::-1]
    assert list(cyclotomic_polynomial(n)) == [int(c) for c in ref]
    assert len(cyclotomic_polynomial(n)) - 1 == euler_phi(n) == sympy.totient(n)


@pytest.mark.parametrize("n", range(1, 25))
def test_phi_vanishes_at_zeta(n):
    w = zeta(n)
    total = CycNum.zero(n)
    for k, c in enumerate(cyclotomic_polynomial(n)):
        total = total + c * w**k
    assert total == 0
    assert w**n == 1
    assert multiplicative_order(w) == n


@pytest.mark.parametrize("n", [5, 8, 12])
def test_numeric_rendering_matches_sympy(n):
    a = 3 * zeta(n) ** 2 - Fraction(1, 2) * zeta(n) + 4
    z = sympy.exp(2 * sympy.pi * sympy.I / n)
    ref = complex(sympy.N(3 * z**2 - sympy.Rational(1, 2) * z + 4))
    assert abs(a.to_complex() - ref) < 1e-12


def test_encode_round_trip_and_reduction():
    a = CycNum(6, [1, Fraction(-2, 3)])
    assert parse_cycnum(a.encode()) == a
    # 1 + z + z^2 = 0 in order 3, so the vector [1,1,1] reduces to zero
    assert parse_cycnum("3:[1,1,1]") == 0
    with pytest.raises(ValueError):
        parse_cycnum("3:1,2")


def test_roots_of_unity_count():
    assert len(roots_of_unity(6)) == 6
    assert len(roots_of_unity(5)) == 10  # Q(zeta_5) contains -zeta_5


def test_nth_root():
    assert nth_root(CycNum.rational(8), 3) == 2
    r = nth_root(zeta(5) * 27, 3)
    assert r is not None and r**3 == zeta(5) * 27
    assert nth_root(CycNum.rational(2), 2) is None


def test_galois_and_norm():
    w = zeta(5)
    assert w.galois(2) == w**2
    assert (1 + w).norm() == 1
    assert CycNum.rational(3, 4).norm() == 9


def test_hash_agrees_with_eq_across_orders():
    assert hash(embed(CycNum.rational(3), 12)) == hash(CycNum.rational(3))
    assert embed(zeta(3), 6) == zeta(3)
    assert len({embed(zeta(3), 6), zeta(3)}) == 1


@settings(max_examples=150, deadline=None)
@given(same_order())
def test_field_axioms(vals):
    a, b, c = vals
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a - a == 0
    if a:
        assert a * a.inverse() == 1


@settings(max_examples=100, deadline=None)
@given(ORDERS, st.lists(st.tuples(st.integers(0, 60), small_fractions), max_size=8))
def test_canonical_form_unique(n, monos):
    w = zeta(n)
    direct = CycNum.zero(n)
    for k, c in monos:
        direct = direct + c * w**k
    # the same sum with exponents reduced mod n and in reverse order
    other = CycNum.zero(n)
    for k, c in reversed(monos):
        other = other + c * w ** (k % n)
    assert direct == other
    assert direct.coefficients() == other.coefficients()
    assert CycNum(n, direct.coefficients()) == direct
    assert len(direct.coefficients()) <= euler_phi(n)


@settings(max_examples=100, deadline=None)
@given(same_order(2), st.integers(1, 4))
def test_embed_is_homomorphism(vals, mult):
    a, b = vals
    m = a.order * mult
    assert embed(a * b, m) == embed(a, m) * embed(b, m)
    assert embed(a + b, m) == embed(a, m) + embed(b, m)
    assert (embed(a, m) == embed(b, m)) == (a == b)
    assert hash(embed(a, m)) == hash(a)


@settings(max_examples=60, deadline=None)
@given(cycnums())
def test_complex_rendering_is_a_homomorphism(a):
    b = a * a + 1
    assert abs(b.to_complex() - (a.to_complex() ** 2 + 1)) < 1e-6 * (1 + abs(a.to_complex()) ** 2)


def test_lift_all_common_order():
    vals = lift_all([CycNum.rational(1), zeta(4), zeta(6)])
    assert {v.order for v in vals} == {12}
    assert as_cycnum(Fraction(1, 3)) == Fraction(1, 3)

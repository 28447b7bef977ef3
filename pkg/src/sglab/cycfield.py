"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Elements are stored as integer numerators over a common positive denominator,
reduced modulo the N-th cyclotomic polynomial, so equality within one field is
a tuple comparison. Elements of different orders are promoted to the lcm of the
orders when that lcm divides the configured maximum order (see
:func:`set_max_order`), or when one order divides the other.
"""
from __future__ import annotations

import cmath
import contextlib
import math
import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Union

from .errors import InvalidOrderError, OrderMismatchError, PromotionError

Scalar = Union["CycNum", int, Fraction]

_max_order = 2520


def get_max_order() -> int:
    return _max_order


def set_max_order(n: int) -> None:
    """Set the largest field order that cross-order arithmetic may promote into."""
    global _max_order
    if n < 1:
        raise InvalidOrderError(f"maximum order must be positive, got {n}")
    _max_order = n


@contextlib.contextmanager
def max_order(n: int) -> Iterator[None]:
    old = _max_order
    set_max_order(n)
    try:
        yield
    finally:
        set_max_order(old)


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first."""
    if n < 1:
        raise InvalidOrderError(f"cyclotomic order must be positive, got {n}")
    # x^n - 1 divided by Phi_d for every proper divisor d
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _exact_divide(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


def _exact_divide(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for i in range(len(out) - 1, -1, -1):
        q, r = divmod(num[i + len(den) - 1], lead)
        assert r == 0
        out[i] = q
        if q:
            for j, c in enumerate(den):
                num[i + j] -= q * c
    assert not any(num[: len(den) - 1])
    return out


def euler_phi(n: int) -> int:
    return len(cyclotomic_polynomial(n)) - 1


@lru_cache(maxsize=None)
def _power_table(n: int) -> tuple[tuple[int, ...], ...]:
    # x^e mod Phi_n for 0 <= e <= max(n - 1, 2*phi - 2)
    phi_poly = cyclotomic_polynomial(n)
    deg = len(phi_poly) - 1
    top = max(n - 1, 2 * deg - 2)
    rows = []
    cur = [0] * deg
    cur[0] = 1
    for _ in range(top + 1):
        rows.append(tuple(cur))
        carry = cur[-1]
        cur = [0] + cur[:-1]
        if carry:
            for j in range(deg):
                cur[j] -= carry * phi_poly[j]
    return tuple(rows)


@lru_cache(maxsize=None)
def _units(n: int) -> tuple[int, ...]:
    return tuple(k for k in range(1, max(n, 2)) if math.gcd(k, n) == 1)


def _reduce(poly: list[int], n: int, deg: int) -> tuple[int, ...]:
    if len(poly) <= deg:
        return tuple(poly) + (0,) * (deg - len(poly))
    table = _power_table(n)
    out = list(poly[:deg])
    for e in range(deg, len(poly)):
        c = poly[e]
        if c:
            row = table[e]
            for j in range(deg):
                out[j] += c * row[j]
    return tuple(out)


class CycNum:
    """An element of Q(zeta_N) in canonical form."""

    __slots__ = ("order", "num", "den", "_minimal")

    order: int
    num: tuple[int, ...]
    den: int

    def __init__(self, order: int, coeffs: Iterable[int | Fraction | str] = (0,)):
        if order < 1:
            raise InvalidOrderError(f"cyclotomic order must be positive, got {order}")
        fr = [Fraction(c) for c in coeffs]
        den = 1
        for c in fr:
            den = den * c.denominator // math.gcd(den, c.denominator)
        ints = [int(c * den) for c in fr]
        deg = euler_phi(order)
        num = _reduce(ints, order, deg)
        self._set(order, num, den)

    def _set(self, order: int, num: tuple[int, ...], den: int) -> None:
        if den < 0:
            den = -den
            num = tuple(-c for c in num)
        g = math.gcd(den, *num)
        if g != 1:
            num = tuple(c // g for c in num)
            den //= g
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "_minimal", None)

    @classmethod
    def _raw(cls, order: int, num: tuple[int, ...], den: int) -> CycNum:
        obj = cls.__new__(cls)
        obj._set(order, num, den)
        return obj

    def __setattr__(self, key, value):
        raise AttributeError("CycNum is immutable")

    # construction helpers

    @classmethod
    def rational(cls, value: int | Fraction, order: int = 1) -> CycNum:
        value = Fraction(value)
        deg = euler_phi(order)
        return cls._raw(order, (value.numerator,) + (0,) * (deg - 1), value.denominator)

    @classmethod
    def zero(cls, order: int = 1) -> CycNum:
        return cls._raw(order, (0,) * euler_phi(order), 1)

    @classmethod
    def one(cls, order: int = 1) -> CycNum:
        return cls.rational(1, order)

    @classmethod
    def root(cls, order: int, k: int = 1) -> CycNum:
        """zeta_order ** k."""
        table = _power_table(order)
        return cls._raw(order, table[k % order], 1)

    # predicates and views

    @property
    def degree(self) -> int:
        return len(self.num)

    def is_zero(self) -> bool:
        return not any(self.num)

    def __bool__(self) -> bool:
        return any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self.num[0], self.den)

    def coefficients(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.den) for c in self.num)

    def sort_key(self) -> tuple:
        return (self.order, self.coefficients())

    # promotion

    def embed(self, m: int) -> CycNum:
        """Image under zeta_N -> zeta_M^(M/N)."""
        if m < 1 or m % self.order:
            raise PromotionError(f"cannot embed Q(zeta_{self.order}) into Q(zeta_{m})")
        if m == self.order:
            return self
        step = m // self.order
        table = _power_table(m)
        deg = euler_phi(m)
        out = [0] * deg
        for i, c in enumerate(self.num):
            if c:
                row = table[(i * step) % m]
                for j in range(deg):
                    out[j] += c * row[j]
        return CycNum._raw(m, tuple(out), self.den)

    def _coerce(self, other) -> CycNum | None:
        if isinstance(other, CycNum):
            return other
        if isinstance(other, (int, Fraction)):
            return CycNum.rational(other, self.order)
        return None

    @staticmethod
    def unify(a: CycNum, b: CycNum) -> tuple[CycNum, CycNum]:
        if a.order == b.order:
            return a, b
        if a.order % b.order == 0:
            return a, b.embed(a.order)
        if b.order % a.order == 0:
            return a.embed(b.order), b
        m = a.order * b.order // math.gcd(a.order, b.order)
        if _max_order % m:
            raise OrderMismatchError(
                f"orders {a.order} and {b.order} have no common field within max order {_max_order}"
            )
        return a.embed(m), b.embed(m)

    # arithmetic

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = CycNum.unify(self, other)
        if a.den == b.den:
            return CycNum._raw(a.order, tuple(x + y for x, y in zip(a.num, b.num)), a.den)
        return CycNum._raw(
            a.order, tuple(x * b.den + y * a.den for x, y in zip(a.num, b.num)), a.den * b.den
        )

    __radd__ = __add__

    def __neg__(self) -> CycNum:
        return CycNum._raw(self.order, tuple(-c for c in self.num), self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = CycNum.unify(self, other)
        deg = len(a.num)
        if deg == 1:
            return CycNum._raw(a.order, (a.num[0] * b.num[0],), a.den * b.den)
        if b.is_rational():
            c = b.num[0]
            return CycNum._raw(a.order, tuple(x * c for x in a.num), a.den * b.den)
        if a.is_rational():
            c = a.num[0]
            return CycNum._raw(a.order, tuple(x * c for x in b.num), a.den * b.den)
        prod = [0] * (2 * deg - 1)
        for i, x in enumerate(a.num):
            if x:
                for j, y in enumerate(b.num):
                    if y:
                        prod[i + j] += x * y
        return CycNum._raw(a.order, _reduce(prod, a.order, deg), a.den * b.den)

    __rmul__ = __mul__

    def galois(self, k: int) -> CycNum:
        """Image under the automorphism zeta -> zeta^k (k coprime to the order)."""
        n = self.order
        table = _power_table(n)
        deg = len(self.num)
        out = [0] * deg
        for i, c in enumerate(self.num):
            if c:
                row = table[(i * k) % n]
                for j in range(deg):
                    out[j] += c * row[j]
        return CycNum._raw(n, tuple(out), self.den)

    def norm(self) -> Fraction:
        """Field norm down to Q."""
        prod = self
        for k in _units(self.order)[1:]:
            prod = prod * self.galois(k)
        return prod.to_fraction()

    def inverse(self) -> CycNum:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        if self.is_rational():
            return CycNum._raw(self.order, (self.den,) + (0,) * (len(self.num) - 1), self.num[0])
        # product of the non-trivial conjugates divided by the norm
        conj = None
        for k in _units(self.order)[1:]:
            s = self.galois(k)
            conj = s if conj is None else conj * s
        nrm = (self * conj).to_fraction()
        return conj * (1 / nrm)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.is_rational():
            if other.is_zero():
                raise ZeroDivisionError("division by zero in a cyclotomic field")
            return self * Fraction(other.den, other.num[0])
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, e: int) -> CycNum:
        if not isinstance(e, int):
            return NotImplemented
        base = self
        if e < 0:
            base = self.inverse()
            e = -e
        result = CycNum.one(self.order)
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # comparison

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.order == self.order:
            return self.den == other.den and self.num == other.num
        try:
            a, b = CycNum.unify(self, other)
        except PromotionError:
            return self.minimal_field_form() == other.minimal_field_form()
        return a.den == b.den and a.num == b.num

    def __hash__(self) -> int:
        # equal values of different orders share their smallest field
        order, num, den = self.minimal_field_form()
        if order == 1:
            return hash(Fraction(num[0], den))
        return hash((order, num, den))

    def minimal_field_form(self) -> tuple[int, tuple[int, ...], int]:
        """(order, numerators, denominator) in the smallest Q(zeta_d) holding this value."""
        if self._minimal is None:
            x = self
            if x.is_rational():
                x = CycNum._raw(1, (x.num[0],), x.den)
            descended = True
            while descended and x.order > 1:
                descended = False
                for p in _prime_factors(x.order):
                    d = x.order // p
                    if all(x.galois(k) == x for k in _kernel_generators(x.order, p)):
                        x = _descend(x, d)
                        descended = True
                        break
            object.__setattr__(self, "_minimal", (x.order, x.num, x.den))
        return self._minimal

    # rendering

    def encode(self) -> str:
        return f"{self.order}:[" + ",".join(_fmt_fraction(c) for c in self.coefficients()) + "]"

    def __repr__(self) -> str:
        return f"CycNum({self.encode()})"

    def __str__(self) -> str:
        terms = []
        for k, c in enumerate(self.coefficients()):
            if not c:
                continue
            mono = "" if k == 0 else ("w" if k == 1 else f"w^{k}")
            if not mono:
                terms.append(_fmt_fraction(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{_fmt_fraction(c)}*{mono}")
        if not terms:
            return "0"
        return " + ".join(terms).replace("+ -", "- ")

    def to_complex(self) -> complex:
        """Floating-point rendering for reports; never used in predicates."""
        w = cmath.exp(2j * cmath.pi / self.order)
        return sum(float(c) * w**k for k, c in enumerate(self.coefficients()))

    def render(self, digits: int = 6) -> str:
        z = self.to_complex()
        return f"{z.real:.{digits}g}{z.imag:+.{digits}g}i"


@lru_cache(maxsize=None)
def _prime_factors(n: int) -> tuple[int, ...]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return tuple(out)


@lru_cache(maxsize=None)
def _kernel_generators(n: int, p: int) -> tuple[int, ...]:
    """Generators of the kernel of (Z/n)* -> (Z/(n/p))*."""
    d = n // p
    if d % p == 0:
        return (1 + d,)
    if p == 2:
        return ()
    # k = 1 mod d and k a primitive root mod p
    g = next(g for g in range(2, p) if all(pow(g, (p - 1) // q, p) != 1 for q in _prime_factors(p - 1)))
    k = next(k for k in range(1, n, d) if k % p == g)
    return (k,)


@lru_cache(maxsize=4096)
def _descent_matrix(n: int, d: int) -> tuple[tuple[Fraction, ...], ...]:
    # row i: coordinates of zeta_d^i inside Q(zeta_n)
    return tuple(tuple(Fraction(c) for c in CycNum.root(d, i).embed(n).num) for i in range(euler_phi(d)))


def _descend(x: CycNum, d: int) -> CycNum:
    """The element of Q(zeta_d) whose image in Q(zeta_n) is x (assumed to exist)."""
    from .linalg import solve, transpose

    cols = transpose([list(r) for r in _descent_matrix(x.order, d)])
    y = solve(cols, [Fraction(c) for c in x.num])
    if y is None:
        raise AssertionError("descent requested for a value outside the subfield")
    return CycNum(d, [c / x.den for c in y])


def _fmt_fraction(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


_ENC = re.compile(r"^\s*(\d+)\s*:\s*\[([^\]]*)\]\s*$")


def parse_cycnum(text: str) -> CycNum:
    """Inverse of :meth:`CycNum.encode`. Coefficients beyond phi(N) are reduced."""
    m = _ENC.match(text)
    if not m:
        raise ValueError(f"malformed scalar {text!r}; expected N:[c0,c1,...]")
    order = int(m.group(1))
    body = m.group(2).strip()
    coeffs = [Fraction(tok.strip()) for tok in body.split(",")] if body else [Fraction(0)]
    return CycNum(order, coeffs)


def as_cycnum(x: Scalar, order: int = 1) -> CycNum:
    if isinstance(x, CycNum):
        return x
    return CycNum.rational(x, order)


def zeta(n: int) -> CycNum:
    """The canonical primitive n-th root of unity."""
    if n < 1:
        raise InvalidOrderError(f"zeta needs a positive order, got {n}")
    return CycNum.root(n, 1)


def inv(a: CycNum) -> CycNum:
    return a.inverse()


def embed(a: CycNum, m: int) -> CycNum:
    return a.embed(m)


def common_order(values: Iterable[CycNum]) -> int:
    """Smallest order every value can be promoted into (subject to the max-order rule)."""
    m = 1
    for v in values:
        if m % v.order == 0:
            continue
        if v.order % m == 0:
            m = v.order
            continue
        lcm = m * v.order // math.gcd(m, v.order)
        if _max_order % lcm:
            raise OrderMismatchError(f"orders {m} and {v.order} have no common field")
        m = lcm
    return m


def lift_all(values: Iterable[CycNum]) -> list[CycNum]:
    vals = list(values)
    m = common_order(vals)
    return [v.embed(m) for v in vals]


def roots_of_unity_count(order: int) -> int:
    """Number of roots of unity in Q(zeta_order)."""
    return order if order % 2 == 0 else 2 * order


def roots_of_unity(order: int) -> list[CycNum]:
    w = roots_of_unity_count(order)
    if w == order:
        return [CycNum.root(order, k) for k in range(order)]
    # odd order: -zeta generates
    g = -CycNum.root(order, 1)
    out, cur = [], CycNum.one(order)
    for _ in range(w):
        out.append(cur)
        cur = cur * g
    return out


def multiplicative_order(a: CycNum) -> int | None:
    """Order of ``a`` as a root of unity, or None if it is not one."""
    if a.is_zero():
        return None
    w = roots_of_unity_count(a.order)
    one = CycNum.one(a.order)
    if a**w != one:
        return None
    for d in sorted(_divisors(w)):
        if a**d == one:
            return d
    return w  # unreachable


def _divisors(n: int) -> list[int]:
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i != n // i:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def _int_root(n: int, k: int) -> int | None:
    if n < 0:
        if k % 2 == 0:
            return None
        r = _int_root(-n, k)
        return None if r is None else -r
    if n < 2:
        return n
    if k == 2:
        r = math.isqrt(n)
    else:
        r = int(round(n ** (1.0 / k))) if n.bit_length() < 1000 else 1 << (n.bit_length() // k)
        # Newton refinement
        while True:
            nr = ((k - 1) * r + n // r ** (k - 1)) // k
            if nr >= r:
                break
            r = nr
        for cand in (r - 1, r, r + 1):
            if cand >= 0 and cand**k == n:
                return cand
        return None
    return r if r * r == n else None


def _rational_root(q: Fraction, k: int) -> Fraction | None:
    a, b = _int_root(q.numerator, k), _int_root(q.denominator, k)
    if a is None or b is None:
        return None
    return Fraction(a, b)


def nth_root(a: CycNum, k: int) -> CycNum | None:
    """A k-th root of ``a`` inside its own field, if one of the form r*u exists.

    Only roots that are a rational times a root of unity are searched for; that
    covers every radical the group charts need on the curves this package builds.
    """
    if a.is_zero():
        return a
    for u in roots_of_unity(a.order):
        rest = a / u**k
        if rest.is_rational():
            r = _rational_root(rest.to_fraction(), k)
            if r is not None:
                return u * r
    return None

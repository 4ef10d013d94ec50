"""Exact arithmetic in real quadratic fields Q(sqrt(d)).

Elements are stored as ``(a + b*sqrt(d)) / q`` with integers ``a, b`` and a
positive integer ``q`` in lowest terms, so equality is structural equality.
Rational numbers are plain :class:`fractions.Fraction` values; they coerce
into a field element whenever they meet one.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from numbers import Rational as _Rational
from typing import Iterable, Union

__all__ = [
    "Quad",
    "QuadField",
    "FieldMismatch",
    "rational_projection",
    "irrational_projection",
    "sign",
    "is_rational",
    "lcm_rationals",
    "squarefree_part",
]

RationalLike = Union[int, Fraction]


class FieldMismatch(ValueError):
    """Raised when two elements of different quadratic fields are combined."""


def squarefree_part(n: int) -> tuple[int, int]:
    """Return ``(k, d)`` with ``n == k*k*d`` and ``d`` squarefree."""
    if n <= 0:
        raise ValueError(f"expected a positive integer, got {n}")
    k, d, p = 1, 1, 2
    m = n
    while p * p <= m:
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        k *= p ** (e // 2)
        if e % 2:
            d *= p
        p += 1
    return k, d * m


class Quad:
    """Element ``(a + b*sqrt(d)) / q`` of the real quadratic field Q(sqrt(d))."""

    __slots__ = ("_a", "_b", "_q", "d")

    def __init__(self, a: RationalLike = 0, b: RationalLike = 0, d: int = 2):
        a = Fraction(a)
        b = Fraction(b)
        q = a.denominator * b.denominator // math.gcd(a.denominator, b.denominator)
        self._set(a.numerator * (q // a.denominator), b.numerator * (q // b.denominator), q, d)

    def _set(self, a: int, b: int, q: int, d: int) -> None:
        g = math.gcd(a, b, q)
        if g != 1:
            a //= g
            b //= g
            q //= g
        self._a = a
        self._b = b
        self._q = q
        self.d = d

    @classmethod
    def _raw(cls, a: int, b: int, q: int, d: int) -> "Quad":
        obj = object.__new__(cls)
        if q < 0:
            a, b, q = -a, -b, -q
        obj._set(a, b, q, d)
        return obj

    # -- accessors -----------------------------------------------------------

    @property
    def a(self) -> Fraction:
        """Rational coefficient of 1."""
        return Fraction(self._a, self._q)

    @property
    def b(self) -> Fraction:
        """Rational coefficient of sqrt(d)."""
        return Fraction(self._b, self._q)

    def to_ints(self) -> list[int]:
        """Serialize as ``[a_num, a_den, b_num, b_den]``."""
        a, b = self.a, self.b
        return [a.numerator, a.denominator, b.numerator, b.denominator]

    @classmethod
    def from_ints(cls, values: Iterable[int], d: int) -> "Quad":
        an, ad, bn, bd = values
        return cls(Fraction(an, ad), Fraction(bn, bd), d)

    def is_rational(self) -> bool:
        return self._b == 0

    def conjugate(self) -> "Quad":
        return Quad._raw(self._a, -self._b, self._q, self.d)

    def norm(self) -> Fraction:
        return Fraction(self._a * self._a - self.d * self._b * self._b, self._q * self._q)

    def sign(self) -> int:
        a, b = self._a, self._b
        sa = (a > 0) - (a < 0)
        sb = (b > 0) - (b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs; a*a == b*b*d is impossible for squarefree d > 1
        return sa if a * a > b * b * self.d else sb

    # -- coercion ------------------------------------------------------------

    def _coerce(self, other) -> "Quad":
        if isinstance(other, Quad):
            if other.d != self.d:
                raise FieldMismatch(f"cannot combine Q(sqrt({self.d})) with Q(sqrt({other.d}))")
            return other
        if isinstance(other, int):
            return Quad._raw(other, 0, 1, self.d)
        if isinstance(other, _Rational):
            return Quad._raw(other.numerator, 0, other.denominator, self.d)
        return NotImplemented

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self._q == o._q:
            return Quad._raw(self._a + o._a, self._b + o._b, self._q, self.d)
        return Quad._raw(self._a * o._q + o._a * self._q, self._b * o._q + o._b * self._q,
                         self._q * o._q, self.d)

    __radd__ = __add__

    def __neg__(self):
        return Quad._raw(-self._a, -self._b, self._q, self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self._q == o._q:
            return Quad._raw(self._a - o._a, self._b - o._b, self._q, self.d)
        return Quad._raw(self._a * o._q - o._a * self._q, self._b * o._q - o._b * self._q,
                         self._q * o._q, self.d)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a1, b1, a2, b2 = self._a, self._b, o._a, o._b
        return Quad._raw(a1 * a2 + self.d * b1 * b2, a1 * b2 + a2 * b1, self._q * o._q, self.d)

    __rmul__ = __mul__

    def inverse(self) -> "Quad":
        a, b, q = self._a, self._b, self._q
        n = a * a - self.d * b * b
        if n == 0:
            raise ZeroDivisionError("division by zero in quadratic field")
        # q / (a + b r) = q (a - b r) / n
        return Quad._raw(q * a, -q * b, n, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = Quad._raw(1, 0, 1, self.d)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- comparison ----------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Quad):
            return (self._a == other._a and self._b == other._b and self._q == other._q
                    and (self.d == other.d or self._b == 0))
        if isinstance(other, (int, _Rational)):
            return self._b == 0 and Fraction(self._a, self._q) == other
        return NotImplemented

    def __hash__(self):
        if self._b == 0:
            return hash(Fraction(self._a, self._q))
        return hash((self._a, self._b, self._q, self.d))

    def _cmp(self, other) -> int:
        o = self._coerce(other)
        if o is NotImplemented:
            raise TypeError(f"cannot compare Quad with {type(other).__name__}")
        return (self - o).sign()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __bool__(self):
        return self._a != 0 or self._b != 0

    def __float__(self):
        return (self._a + self._b * math.sqrt(self.d)) / self._q

    def __floor__(self) -> int:
        a, b, q = self._a, self._b, self._q
        if b == 0:
            return a // q
        r = math.isqrt(b * b * self.d)
        fl = r if b > 0 else -r - 1
        return (a + fl) // q

    def __repr__(self):
        return f"Quad({self.a}, {self.b}, d={self.d})"

    def __str__(self):
        a, b = self.a, self.b
        if b == 0:
            return str(a)
        root = f"sqrt({self.d})"
        bpart = root if b == 1 else f"-{root}" if b == -1 else f"{b}*{root}"
        if a == 0:
            return bpart
        return f"{a} + {bpart}" if b > 0 else f"{a} - {bpart[1:]}"


class QuadField:
    """Factory for elements of Q(sqrt(d)); ``d`` must be squarefree and > 1."""

    def __init__(self, d: int):
        if d <= 1 or squarefree_part(d)[1] != d:
            raise ValueError(f"disc must be a squarefree integer > 1, got {d}")
        self.d = d

    def __call__(self, a: RationalLike = 0, b: RationalLike = 0) -> Quad:
        if isinstance(a, Quad):
            if b:
                raise TypeError("b must be zero when a is already a field element")
            return a._coerce(a) if a.d == self.d else _rational_into(a, self.d)
        return Quad(a, b, self.d)

    @property
    def zero(self) -> Quad:
        return Quad._raw(0, 0, 1, self.d)

    @property
    def one(self) -> Quad:
        return Quad._raw(1, 0, 1, self.d)

    @property
    def gen(self) -> Quad:
        """sqrt(d)."""
        return Quad._raw(0, 1, 1, self.d)

    def sqrt_of(self, n: int) -> Quad:
        """Exact square root of a positive integer whose squarefree part is ``d`` (or 1)."""
        k, dd = squarefree_part(n)
        if dd == 1:
            return Quad(k, 0, self.d)
        if dd != self.d:
            raise FieldMismatch(f"sqrt({n}) is not in Q(sqrt({self.d}))")
        return Quad(0, k, self.d)

    def __eq__(self, other):
        return isinstance(other, QuadField) and other.d == self.d

    def __hash__(self):
        return hash(("QuadField", self.d))

    def __repr__(self):
        return f"QuadField({self.d})"


def _rational_into(x: Quad, d: int) -> Quad:
    if not x.is_rational():
        raise FieldMismatch(f"{x} is not rational; cannot move it into Q(sqrt({d}))")
    return Quad._raw(x._a, 0, x._q, d)


def rational_projection(x: Quad) -> Fraction:
    """Coefficient of 1 in the basis {1, sqrt(d)}."""
    return x.a


def irrational_projection(x: Quad) -> Fraction:
    """Coefficient of sqrt(d) in the basis {1, sqrt(d)}."""
    return x.b


def sign(x: Union[Quad, RationalLike]) -> int:
    if isinstance(x, Quad):
        return x.sign()
    return (x > 0) - (x < 0)


def is_rational(x: Union[Quad, RationalLike]) -> bool:
    return x.is_rational() if isinstance(x, Quad) else True


def lcm_rationals(values: Iterable[RationalLike]) -> Fraction:
    """Smallest positive rational that is an integer multiple of every value."""
    vals = [Fraction(v) for v in values]
    if not vals:
        raise ValueError("lcm of an empty list")
    if any(v <= 0 for v in vals):
        raise ValueError("lcm_rationals expects positive rationals")
    num = reduce(lambda x, y: x * y // math.gcd(x, y), (v.numerator for v in vals))
    den = reduce(math.gcd, (v.denominator for v in vals))
    return Fraction(num, den)

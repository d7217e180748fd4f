"""Exact arithmetic in real quadratic extensions Q(sqrt(d)).

Closed-form Einstein metrics come out of quadratic equations, so their
coordinates are numbers a + b*sqrt(d) with rational a, b.  Keeping them in
that form lets the Lagrange residual of a closed-form solution be checked
exactly (it is literally zero), instead of up to floating error.
"""

from __future__ import annotations

import math
from fractions import Fraction


class SurdError(ValueError):
    pass


def _square_free_split(d: int) -> tuple[int, int]:
    """d = m**2 * d0 with d0 squarefree; returns (m, d0). Trial division."""
    m, d0, f = 1, 1, 2
    while f * f <= d:
        while d % (f * f) == 0:
            d //= f * f
            m *= f
        if d % f == 0:
            d //= f
            d0 *= f
        f += 1
    return m, d0 * d


class QuadraticSurd:
    """a + b*sqrt(d) with Fraction a, b and squarefree integer d >= 0.

    Supports field arithmetic with Fractions/ints and with surds over the
    same radicand, exact sign tests, and float conversion.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b=0, d=0):
        a = Fraction(a)
        b = Fraction(b)
        d = int(d)
        if d < 0:
            raise SurdError("negative radicand")
        if b != 0 and d > 0:
            m, d0 = _square_free_split(d)
            b *= m
            d = d0
        if d <= 1:
            a, b, d = a + b * d, Fraction(0), 0
        if b == 0:
            d = 0
        self.a, self.b, self.d = a, b, d

    # -- coercion ----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, QuadraticSurd):
            if self.b and other.b and self.d != other.d:
                raise SurdError(f"incompatible radicands {self.d} and {other.d}")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadraticSurd(other)
        return NotImplemented

    def _radicand(self, other):
        return self.d or other.d

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise SurdError("not a rational number")
        return self.a

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadraticSurd(self.a + o.a, self.b + o.b, self._radicand(o))

    __radd__ = __add__

    def __neg__(self):
        return QuadraticSurd(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        d = self._radicand(o)
        return QuadraticSurd(
            self.a * o.a + self.b * o.b * d, self.a * o.b + self.b * o.a, d
        )

    __rmul__ = __mul__

    def _inverse(self):
        n = self.a * self.a - self.b * self.b * self.d
        if n == 0:
            raise ZeroDivisionError("division by zero surd")
        return QuadraticSurd(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o._inverse()

    def __rtruediv__(self, other):
        return self._inverse() * other

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self._inverse() ** (-n)
        out = QuadraticSurd(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- order -------------------------------------------------------------

    def sign(self) -> int:
        a, b, d = self.a, self.b, self.d
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return 1 if b > 0 else -1
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        t = a * a - b * b * d
        if a > 0:  # b < 0
            return (t > 0) - (t < 0)
        return (t < 0) - (t > 0)  # a < 0, b > 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def _cmp(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return (self - o).sign()

    def __eq__(self, other):
        if isinstance(other, QuadraticSurd) and self.b and other.b and self.d != other.d:
            return False
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c == 0

    def __lt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c >= 0

    def __hash__(self):
        if self.is_rational:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __repr__(self):
        if self.is_rational:
            return f"QuadraticSurd({self.a})"
        return f"QuadraticSurd({self.a} + {self.b}*sqrt({self.d}))"


def sqrt_rational(x) -> "QuadraticSurd | Fraction":
    """Exact square root of a nonnegative rational, as Fraction when perfect."""
    x = Fraction(x)
    if x < 0:
        raise SurdError("negative radicand")
    # sqrt(p/q) = sqrt(p*q)/q
    s = QuadraticSurd(0, Fraction(1, x.denominator), x.numerator * x.denominator)
    return s.as_fraction() if s.is_rational else s


def quadratic_roots(a, b, c) -> list:
    """Real roots of a*t**2 + b*t + c with rational coefficients, exact.

    Returns [] when the discriminant is negative, one Fraction for a linear
    or double-root equation, else two values in increasing order (Fraction
    when the discriminant is a perfect square, QuadraticSurd otherwise).
    """
    a, b, c = Fraction(a), Fraction(b), Fraction(c)
    if a == 0:
        if b == 0:
            raise SurdError("degenerate quadratic")
        return [-c / b]
    disc = b * b - 4 * a * c
    if disc < 0:
        return []
    if disc == 0:
        return [-b / (2 * a)]
    root = sqrt_rational(disc)
    lo = (-b - root) / (2 * a)
    hi = (-b + root) / (2 * a)
    if a < 0:
        lo, hi = hi, lo
    return [lo, hi]


def _floor_scaled(x, places: int) -> int:
    """floor(x * 10**places) computed exactly for Fraction or QuadraticSurd."""
    if isinstance(x, int):
        x = Fraction(x)
    if isinstance(x, Fraction):
        n = x * 10**places
        return n.numerator // n.denominator
    if not isinstance(x, QuadraticSurd):
        raise TypeError(f"cannot take exact floor of {type(x).__name__}")
    if x.is_rational:
        return _floor_scaled(x.a, places)
    guard = places + 6
    while True:
        scale = 10**guard
        s_lo = Fraction(math.isqrt(x.d * scale * scale), scale)
        s_hi = s_lo + Fraction(1, scale)
        if x.b > 0:
            lo, hi = x.a + x.b * s_lo, x.a + x.b * s_hi
        else:
            lo, hi = x.a + x.b * s_hi, x.a + x.b * s_lo
        f_lo = _floor_scaled(lo, places)
        f_hi = _floor_scaled(hi, places)
        if f_lo == f_hi:
            return f_lo
        guard += 10


def decimal_str(x, places: int = 40) -> str:
    """Exact decimal rendering of a Fraction or surd, truncated toward -inf.

    Used for the JSON wire format: decimal strings survive any parser and
    round-trip through Fraction() without binary-float loss.
    """
    scaled = _floor_scaled(x, places)
    sign = "-" if scaled < 0 else ""
    scaled = abs(scaled)
    digits = str(scaled).rjust(places + 1, "0")
    whole, frac = digits[:-places], digits[-places:]
    frac = frac.rstrip("0")
    return f"{sign}{whole}.{frac}" if frac else f"{sign}{whole}"

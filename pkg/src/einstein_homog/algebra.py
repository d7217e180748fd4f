"""Exact polynomial arithmetic over the rationals, with certified root isolation.

Coefficients are `fractions.Fraction` throughout.  Sturm chains, squarefree
decomposition and isolating intervals are computed with exact arithmetic, so
root counts carry no tolerance at all.  Floating point never enters before
`refine_root`, and even there the result is a rational with a proven distance
bound to the true root (bisection on the squarefree part).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

Rational = Fraction

#: default refinement half-width; leaves two orders of headroom under the
#: 1e-8 residual acceptance bound used by the certificates
DEFAULT_EPS = Fraction(1, 10**12)


class AlgebraError(ValueError):
    """Domain error: zero polynomial, bad interval, inconsistent data."""


def _coeff(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError("polynomial coefficients must be int or Fraction, got %r" % (x,))


class RationalPoly:
    """Dense univariate polynomial over Q; coefficients in ascending degree.

    The zero polynomial has an empty coefficient tuple and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable):
        cs = [_coeff(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def from_descending(cls, coeffs: Iterable) -> "RationalPoly":
        return cls(list(coeffs)[::-1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        if not self.coeffs:
            raise AlgebraError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __call__(self, x):
        """Horner evaluation; exact for Fraction/int input, duck-typed otherwise."""
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * x + c
        if acc is None:
            return Fraction(0) if isinstance(x, (int, Fraction)) else 0 * x
        return acc

    def __eq__(self, other):
        return isinstance(other, RationalPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return RationalPoly(out)

    def __neg__(self):
        return RationalPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RationalPoly([c * other for c in self.coeffs])
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1 or 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RationalPoly(out)

    __rmul__ = __mul__

    def __divmod__(self, other: "RationalPoly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        d = other.degree
        lead = other.leading
        quo = [Fraction(0)] * max(len(rem) - d, 0)
        for i in range(len(rem) - 1, d - 1, -1):
            c = rem[i] / lead
            if c:
                quo[i - d] = c
                for j, b in enumerate(other.coeffs):
                    rem[i - d + j] -= c * b
            rem[i] = Fraction(0)
        return RationalPoly(quo), RationalPoly(rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def derivative(self) -> "RationalPoly":
        return RationalPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def monic(self) -> "RationalPoly":
        if self.is_zero():
            return self
        return self * (1 / self.leading)

    def __repr__(self):
        return f"RationalPoly({list(self.coeffs)!r})"


@dataclass(frozen=True)
class RootInterval:
    """Half-open interval (lo, hi] isolating exactly one distinct real root."""

    lo: Fraction
    hi: Fraction
    multiplicity_hint: int = 1

    def __post_init__(self):
        if not self.lo < self.hi:
            raise AlgebraError(f"empty interval ({self.lo}, {self.hi}]")
        if self.multiplicity_hint < 1:
            raise AlgebraError("multiplicity hint must be positive")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x) -> bool:
        return self.lo < x <= self.hi


def eval_poly(p: RationalPoly, x):
    """Exact Horner evaluation of p at x."""
    return p(x)


def poly_gcd(a: RationalPoly, b: RationalPoly) -> RationalPoly:
    """Monic gcd over Q by the euclidean algorithm."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


def squarefree_part(p: RationalPoly) -> RationalPoly:
    """p divided by gcd(p, p'); same distinct roots, all simple."""
    if p.is_zero():
        raise AlgebraError("zero polynomial")
    if p.degree == 0:
        return p.monic()
    g = poly_gcd(p, p.derivative())
    return (p // g).monic()


def squarefree_decomposition(p: RationalPoly) -> list[tuple[RationalPoly, int]]:
    """Yun's algorithm: monic factors (f_i, i) with p = c * prod f_i**i."""
    if p.is_zero():
        raise AlgebraError("zero polynomial")
    p = p.monic()
    if p.degree == 0:
        return []
    dp = p.derivative()
    g = poly_gcd(p, dp)
    if g.degree == 0:
        return [(p, 1)]
    out = []
    b = p // g
    c = dp // g
    i = 1
    while b.degree > 0:
        d = c - b.derivative()
        f = poly_gcd(b, d)
        if f.degree > 0:
            out.append((f.monic(), i))
        b = b // f
        c = d // f
        i += 1
    return out


def _sturm_chain(p: RationalPoly) -> list[RationalPoly]:
    chain = [p, p.derivative()]
    while chain[-1].degree > 0:
        rem = chain[-2] % chain[-1]
        if rem.is_zero():
            break
        chain.append(-rem)
    return [q for q in chain if not q.is_zero()]


def _variations(chain, x) -> int:
    signs = []
    for q in chain:
        v = q(x)
        if v > 0:
            signs.append(1)
        elif v < 0:
            signs.append(-1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _count_half_open(chain, lo, hi) -> int:
    """Distinct real roots in (lo, hi]; valid when chain[0](lo) != 0."""
    return _variations(chain, lo) - _variations(chain, hi)


def _strip_zero_root(p: RationalPoly) -> RationalPoly:
    cs = list(p.coeffs)
    k = 0
    while k < len(cs) and cs[k] == 0:
        k += 1
    return RationalPoly(cs[k:])


def root_bound(p: RationalPoly) -> Fraction:
    """Cauchy bound: every real root has absolute value strictly below this."""
    if p.is_zero() or p.degree == 0:
        return Fraction(1)
    lead = abs(p.leading)
    return 1 + max(abs(c) for c in p.coeffs[:-1]) / lead


def sturm_count_positive(p: RationalPoly) -> int:
    """Exact number of distinct real roots of p in (0, +inf)."""
    if p.is_zero():
        raise AlgebraError("zero polynomial")
    q = squarefree_part(_strip_zero_root(p))
    if q.degree <= 0:
        return 0
    chain = _sturm_chain(q)
    return _count_half_open(chain, Fraction(0), root_bound(q))


def count_roots_in(p: RationalPoly, lo: Fraction, hi: Fraction) -> int:
    """Distinct real roots of p in (lo, hi]; requires p(lo) != 0."""
    if p.is_zero():
        raise AlgebraError("zero polynomial")
    q = squarefree_part(p)
    if q(lo) == 0:
        raise AlgebraError(f"left endpoint {lo} is a root")
    if q.degree <= 0:
        return 0
    return _count_half_open(_sturm_chain(q), lo, hi)


def _bracket(q, chain, lo, hi):
    """Shrink (lo, hi] with one simple root of squarefree q to a sign-change
    bracket: q(lo) and q(hi) nonzero of opposite sign, or an exact root hit.

    Returns (lo, hi, exact_root_or_None).
    """
    vhi = q(hi)
    if vhi == 0:
        return lo, hi, hi
    while q(lo) == 0:
        mid = (lo + hi) / 2
        vm = q(mid)
        if vm == 0:
            return lo, hi, mid
        if _count_half_open(chain, mid, hi) == 1:
            lo = mid
        else:
            hi = mid
            vhi = vm
    if (q(lo) > 0) == (vhi > 0):
        raise AlgebraError("interval does not bracket a sign change")
    return lo, hi, None


def isolate_positive_roots(p: RationalPoly) -> list[RootInterval]:
    """Disjoint half-open intervals, one per distinct positive real root of p.

    Multiplicity hints come from the Yun squarefree decomposition.  The count
    of returned intervals always equals `sturm_count_positive(p)`.
    """
    if p.is_zero():
        raise AlgebraError("zero polynomial")
    stripped = _strip_zero_root(p)
    q = squarefree_part(stripped)
    if q.degree <= 0:
        return []
    chain = _sturm_chain(q)
    bound = root_bound(q)
    total = _count_half_open(chain, Fraction(0), bound)
    raw: list[tuple[Fraction, Fraction]] = []
    stack = [(Fraction(0), bound, total)]
    while stack:
        lo, hi, cnt = stack.pop()
        if cnt == 0:
            continue
        if cnt == 1:
            raw.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        left = _count_half_open(chain, lo, mid)
        stack.append((lo, mid, left))
        stack.append((mid, hi, cnt - left))
    raw.sort()

    factors = squarefree_decomposition(stripped)
    out = []
    for lo, hi in raw:
        lo, hi, exact = _bracket(q, chain, lo, hi)
        mult = 1
        for f, m in factors:
            if f.degree > 0 and f(lo) != 0 and _count_half_open(_sturm_chain(f), lo, hi) == 1:
                mult = m
                break
        out.append(RootInterval(lo, hi, mult))
    return out


def _floor_fraction(x: Fraction) -> int:
    return x.numerator // x.denominator


def simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """Rational with the smallest denominator in the open interval (lo, hi)."""
    if not lo < hi:
        raise AlgebraError("empty interval")
    flo = _floor_fraction(lo)
    if Fraction(flo + 1) < hi:
        return Fraction(flo + 1)
    frac_lo = lo - flo
    if frac_lo == 0:
        # lo integral, hi <= lo+1: smallest m with 1/m inside (0, hi-lo)
        m = _floor_fraction(1 / (hi - flo)) + 1
        return flo + Fraction(1, m)
    return flo + 1 / simplest_between(1 / (hi - flo), 1 / frac_lo)


def refine_root(p: RationalPoly, iv: RootInterval, eps: Fraction = DEFAULT_EPS) -> Fraction:
    """Rational r with |r - root| < eps, for the root of p isolated by iv.

    Bisection on the squarefree part (guaranteed), with an exact-root snap: if
    the simplest rational inside the final bracket is itself a root, it is
    returned verbatim, so rational roots come out exact.
    """
    if p.is_zero():
        raise AlgebraError("zero polynomial")
    if eps <= 0:
        raise AlgebraError("eps must be positive")
    q = squarefree_part(p)
    chain = _sturm_chain(q)
    lo, hi = iv.lo, iv.hi
    if q(lo) != 0 and _count_half_open(chain, lo, hi) != 1:
        raise AlgebraError("interval does not isolate a single root")
    try:
        lo, hi, exact = _bracket(q, chain, lo, hi)
    except AlgebraError:
        if iv.multiplicity_hint % 2 == 1:
            raise AlgebraError(
                "interval does not bracket a sign change for an odd-multiplicity root"
            )
        raise
    if exact is not None:
        return exact
    slo = q(lo) > 0
    while hi - lo >= eps:
        mid = (lo + hi) / 2
        vm = q(mid)
        if vm == 0:
            return mid
        if (vm > 0) == slo:
            lo = mid
        else:
            hi = mid
    snap = simplest_between(lo, hi)
    if q(snap) == 0:
        return snap
    return (lo + hi) / 2

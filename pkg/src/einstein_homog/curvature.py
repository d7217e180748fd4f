"""Scalar curvature of invariant metrics and the Einstein criticality check.

For a metric with one positive scale x_a per summand, the scalar curvature is

    S = 1/2 * sum_a d_a/x_a - 1/4 * sum_{a,b,c} [abc] * x_c/(x_a x_b),

a Laurent polynomial in the scales with rational coefficients.  A metric of
fixed volume (prod x_a**d_a = const) is Einstein exactly when it is a critical
point of S on that level set, so the certificate here is the Lagrange
residual grad(S) - lambda * grad(log V), computed symbolically and evaluated
in whatever arithmetic the input uses (exact for Fraction/surd input).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations

from .spaces import (
    GroupFamily,
    ModuleId,
    NonGenericError,
    SpaceSpec,
    check_generic,
    module_dimension,
    module_ids,
    triple_symbols,
)
from .surd import QuadraticSurd

DEFAULT_TOLERANCE = 1e-8


class CurvatureError(ValueError):
    pass


def _coerce_value(v):
    """Normalize metric entries: ints become Fractions so that negative powers
    stay exact; Fractions, surds and floats pass through."""
    if isinstance(v, bool):
        raise CurvatureError("boolean is not a metric value")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, (Fraction, QuadraticSurd, float)):
        return v
    raise CurvatureError(f"unsupported metric value type {type(v).__name__}")


def _is_positive(v) -> bool:
    if isinstance(v, QuadraticSurd):
        return v.sign() > 0
    return v > 0


class MetricParams:
    """Positive scales per tangent summand; immutable mapping ModuleId -> value."""

    __slots__ = ("_values",)

    def __init__(self, values: dict):
        vals = {}
        for mid, v in values.items():
            if not isinstance(mid, ModuleId):
                mid = ModuleId.parse(str(mid))
            v = _coerce_value(v)
            if not _is_positive(v):
                raise CurvatureError(f"metric value for {mid} must be positive")
            vals[mid] = v
        self._values = vals

    @classmethod
    def uniform(cls, spec: SpaceSpec, value=1) -> "MetricParams":
        return cls({m: value for m in module_ids(spec)})

    @classmethod
    def two_block(cls, spec: SpaceSpec, x1, x12) -> "MetricParams":
        if spec.s != 1 or spec.t != 1:
            raise CurvatureError("two_block needs s = t = 1")
        return cls({ModuleId.diagonal(1): x1, ModuleId.off_diagonal(1, 2): x12})

    @classmethod
    def three_block(cls, spec: SpaceSpec, x, y, z) -> "MetricParams":
        """Symmetric assignment x on diagonals, y inside the first s blocks,
        z towards the H block; needs t = 1."""
        if spec.t != 1:
            raise CurvatureError("three_block needs t = 1")
        vals = {}
        for m in module_ids(spec):
            if m.is_diagonal:
                vals[m] = x
            elif m.j <= spec.s:
                vals[m] = y
            else:
                vals[m] = z
        return cls(vals)

    def __getitem__(self, mid: ModuleId):
        return self._values[mid]

    def __iter__(self):
        return iter(sorted(self._values, key=ModuleId.sort_key))

    def __len__(self):
        return len(self._values)

    def keys(self):
        return sorted(self._values, key=ModuleId.sort_key)

    def items(self):
        return [(m, self._values[m]) for m in self.keys()]

    def scaled(self, factor) -> "MetricParams":
        return MetricParams({m: v * factor for m, v in self._values.items()})

    def matches(self, spec: SpaceSpec) -> bool:
        return set(self._values) == set(module_ids(spec))

    def require(self, spec: SpaceSpec):
        if not self.matches(spec):
            raise CurvatureError("metric keys do not match the space's summands")

    def __repr__(self):
        inner = ", ".join(f"{m}: {v}" for m, v in self.items())
        return f"MetricParams({{{inner}}})"


class ScalarField:
    """Laurent polynomial in named variables with rational coefficients.

    Supports exact evaluation and exact partial derivatives, which is all a
    Lagrange-residual check needs.  `variables` fixes the gradient order.
    """

    __slots__ = ("variables", "terms")

    def __init__(self, variables: tuple, terms: dict):
        self.variables = tuple(variables)
        self.terms = {e: Fraction(c) for e, c in terms.items() if c != 0}

    @classmethod
    def zero(cls, variables) -> "ScalarField":
        return cls(variables, {})

    def add_term(self, coeff, exponents: dict):
        """In-place accumulation during construction."""
        e = tuple(exponents.get(v, 0) for v in self.variables)
        c = self.terms.get(e, Fraction(0)) + coeff
        if c == 0:
            self.terms.pop(e, None)
        else:
            self.terms[e] = c

    def evaluate(self, values):
        """Evaluate at a mapping variable -> value (MetricParams or dict)."""
        point = [_coerce_value(values[v]) for v in self.variables]
        total = Fraction(0)
        for exps, coeff in self.terms.items():
            term = coeff
            for v, e in zip(point, exps):
                if e:
                    term = term * v**e
            total = total + term
        return total

    def partial(self, variable) -> "ScalarField":
        idx = self.variables.index(variable)
        out = {}
        for exps, coeff in self.terms.items():
            e = exps[idx]
            if e == 0:
                continue
            ne = list(exps)
            ne[idx] = e - 1
            ne = tuple(ne)
            out[ne] = out.get(ne, Fraction(0)) + coeff * e
        return ScalarField(self.variables, out)

    def gradient_at(self, values) -> list:
        """All partials at once: each monomial is evaluated a single time and
        redistributed, so the cost is O(terms) rather than O(terms * vars)."""
        point = [_coerce_value(values[v]) for v in self.variables]
        grads = [Fraction(0)] * len(point)
        for exps, coeff in self.terms.items():
            mono = coeff
            for v, e in zip(point, exps):
                if e:
                    mono = mono * v**e
            for idx, e in enumerate(exps):
                if e:
                    grads[idx] = grads[idx] + e * mono / point[idx]
        return grads

    def __repr__(self):
        return f"ScalarField({len(self.terms)} terms in {len(self.variables)} variables)"


@lru_cache(maxsize=None)
def scalar_curvature_field(spec: SpaceSpec) -> ScalarField:
    """The curvature sum as a symbolic Laurent polynomial in the scales.

    The triple sum runs over ordered triples of tangent summands; here each
    stored unordered entry is expanded over its distinct arrangements, which
    keeps construction linear in the number of nonzero patterns.
    """
    mods = module_ids(spec)
    modset = set(mods)
    table = triple_symbols(spec)
    field = ScalarField.zero(tuple(mods))
    for m in mods:
        field.add_term(Fraction(module_dimension(spec, m), 2), {m: -1})
    for key, sym in table.items():
        if any(m not in modset for m in key):
            continue  # pattern touching a subalgebra block inside H
        for a, b, c in set(permutations(key)):
            exps = {}
            for m, delta in ((c, 1), (a, -1), (b, -1)):
                exps[m] = exps.get(m, 0) + delta
            field.add_term(Fraction(-1, 4) * sym, exps)
    return field


def scalar_curvature_generic(spec: SpaceSpec, params: MetricParams):
    """Scalar curvature via the summand-triple sum; exact for exact input.

    Refuses non-generic spaces, where a diagonal metric does not exhaust the
    invariant metrics and the formula would be silently incomplete.
    """
    gen = check_generic(spec)
    if not gen:
        raise NonGenericError(gen.reason)
    params.require(spec)
    return scalar_curvature_field(spec).evaluate(params)


def scalar_curvature_closed(spec: SpaceSpec, params: MetricParams):
    """Scalar curvature via the closed per-family formula (term-by-term)."""
    params.require(spec)
    orth = spec.family is GroupFamily.ORTHOGONAL
    n = spec.n
    s, m = spec.s, len(spec.blocks)
    k = [0] + list(spec.blocks)

    def x(i, j=None):
        mid = ModuleId.diagonal(i) if j is None else ModuleId.off_diagonal(i, j)
        return params[mid]

    total = Fraction(0)
    if orth:
        for a in range(1, s + 1):
            total += Fraction(k[a] * (k[a] - 1) * (k[a] - 2), 8 * (n - 2)) / x(a)
        for a, b in combinations(range(1, m + 1), 2):
            total += Fraction(k[a] * k[b], 2) / x(a, b)
        for a in range(1, s + 1):
            for b in range(a + 1, m + 1):
                total -= (
                    Fraction(k[a] * k[b] * (k[a] - 1), 8 * (n - 2))
                    * x(a)
                    / x(a, b) ** 2
                )
        for a, b in combinations(range(1, s + 1), 2):
            total -= (
                Fraction(k[a] * k[b] * (k[b] - 1), 8 * (n - 2)) * x(b) / x(a, b) ** 2
            )
        tri = Fraction(1, 4 * (n - 2))
    else:
        for a in range(1, s + 1):
            total += Fraction(k[a] * (k[a] + 1) * (2 * k[a] + 1), 4 * (n + 1)) / x(a)
        for a, b in combinations(range(1, m + 1), 2):
            total += Fraction(2 * k[a] * k[b]) / x(a, b)
        for a in range(1, s + 1):
            for b in range(a + 1, m + 1):
                total -= (
                    Fraction(k[a] * k[b] * (2 * k[a] + 1), 4 * (n + 1))
                    * x(a)
                    / x(a, b) ** 2
                )
        for a, b in combinations(range(1, s + 1), 2):
            total -= (
                Fraction(k[a] * k[b] * (2 * k[b] + 1), 4 * (n + 1))
                * x(b)
                / x(a, b) ** 2
            )
        tri = Fraction(1, n + 1)
    for a, b, c in combinations(range(1, m + 1), 3):
        xab, xac, xbc = x(a, b), x(a, c), x(b, c)
        total -= (
            tri
            * k[a]
            * k[b]
            * k[c]
            * (xab / (xac * xbc) + xac / (xab * xbc) + xbc / (xab * xac))
        )
    return total


@dataclass(frozen=True)
class GeneralFamilyCoeffs:
    """Coefficients of the reduced three-variable problem

        F(x,y,z) = a/x + b/y + c/z - d*x/y**2 - e*x/z**2 - f*y/z**2

    under the constraint x**p * y**q * z**r = const, for s equal blocks of
    size k against one block of size l.  The identities d = (pb-qa)/(q+2p)
    and f = qe/p hold by construction and are asserted on demand.
    """

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction
    e: Fraction
    f: Fraction
    p: Fraction
    q: Fraction
    r: Fraction

    def as_tuple(self):
        return (self.a, self.b, self.c, self.d, self.e, self.f, self.p, self.q, self.r)

    def relations_hold(self) -> bool:
        lhs_d = (self.p * self.b - self.q * self.a) / (self.q + 2 * self.p)
        return self.d == lhs_d and self.f == self.q * self.e / self.p

    def functional(self) -> ScalarField:
        field = ScalarField.zero(("x", "y", "z"))
        field.add_term(self.a, {"x": -1})
        field.add_term(self.b, {"y": -1})
        field.add_term(self.c, {"z": -1})
        field.add_term(-self.d, {"x": 1, "y": -2})
        field.add_term(-self.e, {"x": 1, "z": -2})
        field.add_term(-self.f, {"y": 1, "z": -2})
        return field

    def evaluate(self, x, y, z):
        return self.functional().evaluate({"x": x, "y": y, "z": z})


def three_block_form(
    family: GroupFamily, s: int, k: int, l: int
) -> GeneralFamilyCoeffs:
    """Coefficients (a..f, p, q, r) of the symmetric three-variable reduction."""
    if s < 2 or l < 1:
        raise CurvatureError("need s >= 2 and l >= 1")
    if family is GroupFamily.ORTHOGONAL:
        if k < 3:
            raise CurvatureError("orthogonal reduction needs k >= 3")
        co = GeneralFamilyCoeffs(
            a=Fraction((k - 1) * (k - 2)),
            b=Fraction((s - 1) * k * ((s + 2) * k - 4)),
            c=Fraction(4 * (k * s + l - 2) * l),
            d=Fraction((s - 1) * k * (k - 1)),
            e=Fraction((k - 1) * l),
            f=Fraction((s - 1) * k * l),
            p=Fraction(s * k * (k - 1), 2),
            q=Fraction(s * (s - 1) * k * k, 2),
            r=Fraction(s * k * l),
        )
    else:
        if k < 1:
            raise CurvatureError("symplectic reduction needs k >= 1")
        co = GeneralFamilyCoeffs(
            a=Fraction((k + 1) * (2 * k + 1)),
            b=Fraction(2 * (s - 1) * k * ((s + 2) * k + 2)),
            c=Fraction(8 * (k * s + l + 1) * l),
            d=Fraction((s - 1) * k * (2 * k + 1)),
            e=Fraction((2 * k + 1) * l),
            f=Fraction(2 * (s - 1) * k * l),
            p=Fraction(s * (2 * k + 1) * k),
            q=Fraction(2 * s * (s - 1) * k * k),
            r=Fraction(4 * s * k * l),
        )
    return co


def three_block_scale(family: GroupFamily, s: int, k: int, l: int) -> Fraction:
    """S = scale * F(x,y,z) under the symmetric substitution."""
    n = s * k + l
    if family is GroupFamily.ORTHOGONAL:
        return Fraction(s * k, 8 * (n - 2))
    return Fraction(s * k, 4 * (n + 1))


def gradient(field: ScalarField, params) -> list:
    """Exact partial derivatives of a field at a point, in variable order."""
    return field.gradient_at(params)


@dataclass(frozen=True)
class EinsteinCertificate:
    """Lagrange-residual record for a candidate metric.

    `residual_inf` is max|grad S - lambda grad log V| over the summands,
    scaled by max(|grad S|_inf, 1); a metric passes when it is below the
    tolerance.  For exact (rational/surd) input the arithmetic is exact, so
    closed-form Einstein metrics report a residual of literally 0.0.
    """

    lambda_: float
    residual_inf: float
    volume: float
    scalar_curvature: float
    tolerance: float = DEFAULT_TOLERANCE

    @property
    def accepted(self) -> bool:
        return self.residual_inf < self.tolerance


def _abs(v):
    return abs(v)


def verify_einstein(
    spec: SpaceSpec, params: MetricParams, tolerance: float = DEFAULT_TOLERANCE
) -> EinsteinCertificate:
    """Evaluate the constrained-criticality residual of a metric.

    grad S is computed symbolically; grad log V is (d_a / x_a); lambda is the
    least-squares multiplier <g, v>/<v, v>.  No genericity gate: the residual
    certifies criticality within the diagonal family as parametrized.
    """
    params.require(spec)
    field = scalar_curvature_field(spec)
    g = field.gradient_at(params)
    dims = [module_dimension(spec, m) for m in field.variables]
    v = [Fraction(d) / _coerce_value(params[m]) for d, m in zip(dims, field.variables)]
    num = sum((gi * vi for gi, vi in zip(g, v)), Fraction(0))
    den = sum((vi * vi for vi in v), Fraction(0))
    lam = num / den
    residuals = [_abs(gi - lam * vi) for gi, vi in zip(g, v)]
    scale = max(max(_abs(gi) for gi in g), Fraction(1))
    worst = max(residuals)
    residual_inf = float(worst / scale)
    log_volume = sum(d * math.log(float(params[m])) for d, m in zip(dims, field.variables))
    return EinsteinCertificate(
        lambda_=float(lam),
        residual_inf=residual_inf,
        volume=math.exp(log_volume),
        scalar_curvature=float(field.evaluate(params)),
        tolerance=tolerance,
    )


def _sum_tracked(terms):
    """Sum a list of already-expanded monomial values, tracking the largest
    magnitude for normalization."""
    total = None
    peak = None
    for t in terms:
        total = t if total is None else total + t
        at = _abs(t)
        peak = at if peak is None or at > peak else peak
    return total, peak


def full_system_residual(family: GroupFamily, ks, xs):
    """Max normalized defect of the five-parameter criticality system for a
    (k1, k2, k3) block space at scales (x1, x2, x12, x13, x23).

    Each equation is evaluated as left minus right; the defect is divided by
    the largest monomial magnitude appearing in that equation.  Exact input
    gives an exact result.
    """
    k1, k2, k3 = (int(v) for v in ks)
    x1, x2, x12, x13, x23 = (_coerce_value(v) for v in xs)
    orth = family is GroupFamily.ORTHOGONAL

    if orth:
        c1, c2 = k1 - 2, k2 - 2
        w1, w2 = k1 - 1, k2 - 1
        big = 2 * (k1 + k2 + k3 - 2)
        m1, m2, m3 = k1, k2, k3
        lead2 = 1
    else:
        c1, c2 = k1 + 1, k2 + 1
        w1, w2 = 2 * k1 + 1, 2 * k2 + 1
        big = 4 * (k1 + k2 + k3 + 1)
        m1, m2, m3 = 2 * k1, 2 * k2, 2 * k3
        lead2 = 2

    # inner brackets shared between equations, as explicit monomial lists
    inner_a = [
        c2 * x12**2 * x23**2,
        k3 * x2**2 * x12**2,
        k1 * x2**2 * x23**2,
    ]
    inner_b = [
        big * x12 * x13 * x23,
        -w1 * x1 * x13 * x23,
        -w2 * x2 * x13 * x23,
        m3 * x12**3,
        -m3 * x12 * x13**2,
        -m3 * x12 * x23**2,
    ]
    inner_c = [
        big * x12 * x13 * x23,
        -w1 * x1 * x12 * x23,
        m2 * x13**3,
        -m2 * x12**2 * x13,
        -m2 * x13 * x23**2,
    ]
    inner_d = [
        big * x12 * x13 * x23,
        -w2 * x2 * x12 * x13,
        m1 * x23**3,
        -m1 * x12**2 * x23,
        -m1 * x13**2 * x23,
    ]

    eqs = []
    lhs1 = [
        x2 * x23**2 * (c1 * x12**2 * x13**2),
        x2 * x23**2 * (k2 * x1**2 * x13**2),
        x2 * x23**2 * (k3 * x1**2 * x12**2),
    ]
    rhs1 = [x1 * x13**2 * t for t in inner_a]
    eqs.append((lhs1, rhs1))

    lhs2 = [lead2 * x13 * t for t in inner_a]
    rhs2 = [x2 * x23 * t for t in inner_b]
    eqs.append((lhs2, rhs2))

    lhs3 = [x13 * t for t in inner_b]
    rhs3 = [x12 * t for t in inner_c]
    eqs.append((lhs3, rhs3))

    lhs4 = [x23 * t for t in inner_c]
    rhs4 = [x13 * t for t in inner_d]
    eqs.append((lhs4, rhs4))

    worst = None
    for lhs, rhs in eqs:
        lsum, lpeak = _sum_tracked(lhs)
        rsum, rpeak = _sum_tracked(rhs)
        peak = lpeak if lpeak > rpeak else rpeak
        defect = _abs(lsum - rsum) / peak
        worst = defect if worst is None or defect > worst else worst
    return worst

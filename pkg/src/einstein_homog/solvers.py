"""Einstein metric solvers for the block-symmetric families.

Three constructions produce all solutions handled here:

  * the classical two-parameter metrics on SO(k1+k2)/SO(k2) and
    Sp(k1+k2)/Sp(k2), from a quadratic solved in closed form (surds kept
    exact so the residual check is exact);

  * the three-block family on blocks (k, k, l): after fixing the middle
    scale to 1 the criticality system collapses to one quartic in z, whose
    positive roots are isolated and refined with certified intervals;

  * the general s-block reduction on blocks (k, ..., k, l): the symmetric
    three-variable functional F(x,y,z) = a/x + b/y + c/z - dx/y^2 - ex/z^2
    - fy/z^2 splits into an x = y branch (a quadratic, recovering the
    two-parameter metrics) and an x != y branch governed by a quartic P in
    u = z/y.

Every returned solution carries a Lagrange-residual certificate computed on
the full space, and three-block (s = 2) solutions are additionally pushed
through the five-parameter criticality system.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import (
    DEFAULT_EPS,
    RationalPoly,
    RootInterval,
    eval_poly,
    isolate_positive_roots,
    refine_root,
    sturm_count_positive,
)
from .curvature import (
    DEFAULT_TOLERANCE,
    EinsteinCertificate,
    GeneralFamilyCoeffs,
    MetricParams,
    full_system_residual,
    three_block_form,
    verify_einstein,
)
from .spaces import GroupFamily, ModuleId, SpaceSpec, module_dimension
from .surd import quadratic_roots

DEDUP_TOL = 1e-9

JENSEN = "jensen"
QUARTIC_SO = "quartic_so"
QUARTIC_SP = "quartic_sp"
GENERAL_X_EQ_Y = "general_x_eq_y"
GENERAL_X_NE_Y = "general_x_ne_y"


class SolverError(ValueError):
    pass


@dataclass(frozen=True)
class EinsteinSolution:
    """A certified invariant Einstein metric, normalized to one scale = 1."""

    spec: SpaceSpec
    metric: MetricParams
    family_label: str
    certificate: EinsteinCertificate
    exact: bool
    root_interval: RootInterval | None = None
    system_residual: float | None = None
    flags: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.flags

    def normalized_vector(self) -> tuple:
        """Scales in canonical summand order, largest scaled to 1."""
        vals = [float(v) for _, v in self.metric.items()]
        top = max(vals)
        return tuple(v / top for v in vals)

    def eigenvalue_vector(self) -> tuple:
        """Sorted metric eigenvalues with multiplicity, largest scaled to 1.

        This is the scale-invariant fingerprint of the inner product itself,
        so metrics built from different block patterns on the same underlying
        space stay comparable.
        """
        vals = []
        for m, v in self.metric.items():
            vals.extend([float(v)] * module_dimension(self.spec, m))
        top = max(vals)
        return tuple(sorted(v / top for v in vals))

    def sort_key(self):
        vec = self.normalized_vector()
        return (vec[-1], vec, self.family_label)


def projective_distance(a: EinsteinSolution, b: EinsteinSolution) -> float:
    """Max difference of normalized eigenvalue vectors; requires the same
    underlying tangent dimension."""
    va, vb = a.eigenvalue_vector(), b.eigenvalue_vector()
    if len(va) != len(vb):
        raise SolverError("solutions live on spaces of different dimension")
    return max(abs(x - y) for x, y in zip(va, vb))


def dedupe_solutions(solutions: list) -> list:
    """Drop later duplicates (normalized vectors within the dedup tolerance)."""
    out = []
    for sol in sorted(solutions, key=EinsteinSolution.sort_key):
        vec = sol.normalized_vector()
        dup = any(
            len(vec) == len(o.normalized_vector())
            and max(abs(x - y) for x, y in zip(vec, o.normalized_vector())) < DEDUP_TOL
            for o in out
        )
        if not dup:
            out.append(sol)
    return out


def _certify(
    spec, metric, label, tolerance, exact, root_interval=None, extra_flags=()
) -> EinsteinSolution:
    cert = verify_einstein(spec, metric, tolerance)
    flags = tuple(extra_flags)
    if not cert.accepted:
        flags += ("residual_above_tolerance",)
    system_res = None
    if spec.s == 2 and spec.t == 1 and spec.blocks[0] == spec.blocks[1]:
        k, l = spec.blocks[0], spec.blocks[2]
        x1 = metric[ModuleId.diagonal(1)]
        x2 = metric[ModuleId.diagonal(2)]
        x12 = metric[ModuleId.off_diagonal(1, 2)]
        x13 = metric[ModuleId.off_diagonal(1, 3)]
        x23 = metric[ModuleId.off_diagonal(2, 3)]
        res = full_system_residual(spec.family, (k, k, l), (x1, x2, x12, x13, x23))
        system_res = float(res)
        if system_res >= tolerance:
            flags += ("system_residual_above_tolerance",)
    return EinsteinSolution(
        spec=spec,
        metric=metric,
        family_label=label,
        certificate=cert,
        exact=exact,
        root_interval=root_interval,
        system_residual=system_res,
        flags=flags,
    )


# -- two-parameter family ---------------------------------------------------


def jensen_quadratic(family: GroupFamily, k1: int, k2: int) -> RationalPoly:
    """Criticality quadratic in t = x12/x1 for blocks (k1, k2), s = t = 1."""
    if family is GroupFamily.ORTHOGONAL:
        if k1 < 2:
            raise SolverError("orthogonal two-parameter family needs k1 >= 2")
        return RationalPoly([k1 + k2 - 1, -2 * (k1 + k2 - 2), k1 - 2])
    if k1 < 1:
        raise SolverError("symplectic two-parameter family needs k1 >= 1")
    return RationalPoly([2 * k1 + 2 * k2 + 1, -4 * (k1 + k2 + 1), 2 * (k1 + 1)])


def jensen_solve(
    family: GroupFamily, k1: int, k2: int, tolerance: float = DEFAULT_TOLERANCE
) -> list:
    """Closed-form two-parameter Einstein metrics, x1 = 1, exact surds."""
    if k2 < 1:
        raise SolverError("need k2 >= 1")
    quad = jensen_quadratic(family, k1, k2)
    cs = list(quad.coeffs) + [Fraction(0)] * (3 - len(quad.coeffs))
    roots = quadratic_roots(cs[2], cs[1], cs[0])
    spec = SpaceSpec(family=family, blocks=(k1, k2), s=1)
    out = []
    for root in roots:
        if not root > 0:
            continue
        metric = MetricParams.two_block(spec, Fraction(1), root)
        out.append(_certify(spec, metric, JENSEN, tolerance, exact=True))
    return dedupe_solutions(out)


# -- three-block quartic family ---------------------------------------------


def quartic_build(family: GroupFamily, k: int, l: int) -> RationalPoly:
    """Quartic in z whose positive roots give the non-classical metrics on
    blocks (k, k, l) with the middle scale fixed to 1."""
    if l < 1:
        raise SolverError("need l >= 1")
    if family is GroupFamily.ORTHOGONAL:
        if k < 3:
            raise SolverError("orthogonal three-block family needs k >= 3")
        return RationalPoly.from_descending(
            [
                2 * (5 * k * k - 7 * k + 2),
                -2 * (6 * k * k + 3 * k * l - 10 * k - 2 * l + 4),
                4 * k * k + 7 * k * l - 5 * k - 6 * l + 2,
                -2 * l * (2 * k + l - 2),
                l * (k + l),
            ]
        )
    if k < 1:
        raise SolverError("symplectic three-block family needs k >= 1")
    return RationalPoly.from_descending(
        [
            2 * (10 * k * k + 7 * k + 1),
            -4 * (6 * k * k + 3 * k * l + 5 * k + l + 1),
            8 * k * k + 14 * k * l + 5 * k + 6 * l + 1,
            -4 * l * (2 * k + l + 1),
            2 * l * (k + l),
        ]
    )


def quartic_diag_scale(family: GroupFamily, k: int, l: int, z):
    """Recover the diagonal scale x from a root z; always lands in (0, 1)."""
    if family is GroupFamily.ORTHOGONAL:
        return (k - 2) * z**2 / ((3 * k - 2) * z**2 + l)
    return (k + 1) * z**2 / ((3 * k + 1) * z**2 + l)


def quartic_solve(
    family: GroupFamily,
    k: int,
    l: int,
    tolerance: float = DEFAULT_TOLERANCE,
    eps: Fraction = DEFAULT_EPS,
) -> list:
    """All non-classical metrics of the (k, k, l) family, certified."""
    poly = quartic_build(family, k, l)
    intervals = isolate_positive_roots(poly)
    if len(intervals) != sturm_count_positive(poly):
        raise SolverError("root isolation lost a root")  # pragma: no cover
    spec = SpaceSpec(family=family, blocks=(k, k, l), s=2)
    label = QUARTIC_SO if family is GroupFamily.ORTHOGONAL else QUARTIC_SP
    out = []
    for iv in intervals:
        z = refine_root(poly, iv, eps)
        x = quartic_diag_scale(family, k, l, z)
        flags = () if 0 < x < 1 else ("diagonal_scale_out_of_range",)
        metric = MetricParams.three_block(spec, x, Fraction(1), z)
        out.append(
            _certify(
                spec, metric, label, tolerance, exact=False, root_interval=iv,
                extra_flags=flags,
            )
        )
    return dedupe_solutions(out)


def table_sweep(family: GroupFamily, k_values, l_values) -> dict:
    """Exact positive-root counts of the three-block quartic per (k, l)."""
    ks, ls = list(k_values), list(l_values)
    if not ks or not ls:
        raise SolverError("empty sweep range")
    return {
        (k, l): sturm_count_positive(quartic_build(family, k, l))
        for l in ls
        for k in ks
    }


# -- general s-block reduction ------------------------------------------------


@dataclass(frozen=True)
class GeneralReduction:
    """Both criticality branches of the three-variable functional."""

    coeffs: GeneralFamilyCoeffs
    equal_branch_quadratic: RationalPoly  # in w = z/x, on the branch x = y
    unequal_branch_quartic: RationalPoly  # P, in u = z/y, on the branch x != y
    y_dominates: bool  # d(q+2p) > aq, which forces y > x on branch two

    def x_from_yz(self, y, z):
        c = self.coeffs
        return c.a * c.q * y * z**2 / (c.p * c.f * y**2 + c.d * (c.q + 2 * c.p) * z**2)


def general_reduce(coeffs: GeneralFamilyCoeffs) -> GeneralReduction:
    """Reduce the constrained problem for F under G = x^p y^q z^r to the two
    one-variable equations; refuses coefficient sets that break the structural
    identities d = (pb - qa)/(q + 2p), f = qe/p."""
    if not all(v > 0 for v in coeffs.as_tuple()):
        raise SolverError("coefficients must be positive")
    if not coeffs.relations_hold():
        raise SolverError("coefficient identities violated; derivation bug upstream")
    a, b, c, d, e, f, p, q, r = coeffs.as_tuple()
    quad = RationalPoly([e * (2 * p + 2 * q + r), -p * c, r * (a + d)])
    quartic = RationalPoly(
        [
            (r + 2 * q) * f * f * p,
            -c * f * p * q,
            (2 * d * (r + q) * (q + 2 * p) + (r + 2 * p) * a * q) * f,
            -(q + 2 * p) * c * d * q,
            (2 * d * (q + 2 * p) + b * q) * d * r,
        ]
    )
    return GeneralReduction(
        coeffs=coeffs,
        equal_branch_quadratic=quad,
        unequal_branch_quartic=quartic,
        y_dominates=d * (q + 2 * p) > a * q,
    )


def general_solve(
    family: GroupFamily,
    s: int,
    k: int,
    l: int,
    tolerance: float = DEFAULT_TOLERANCE,
    eps: Fraction = DEFAULT_EPS,
) -> list:
    """Einstein metrics on s equal blocks of size k against one block of l.

    Branch one (x = y) is solved in closed form and reproduces the classical
    two-parameter metrics; branch two roots the quartic P(u), u = z/y, with
    z normalized to 1.  All solutions are certified on the full space.
    """
    coeffs = three_block_form(family, s, k, l)
    red = general_reduce(coeffs)
    spec = SpaceSpec(family=family, blocks=(k,) * s + (l,), s=s)
    out = []

    qd = red.equal_branch_quadratic
    for w in quadratic_roots(qd.coeffs[2], qd.coeffs[1], qd.coeffs[0]):
        if not w > 0:
            continue
        metric = MetricParams.three_block(spec, Fraction(1), Fraction(1), w)
        out.append(_certify(spec, metric, GENERAL_X_EQ_Y, tolerance, exact=True))

    poly = red.unequal_branch_quartic
    for iv in isolate_positive_roots(poly):
        u = refine_root(poly, iv, eps)
        y = 1 / u
        x = red.x_from_yz(y, Fraction(1))
        flags = []
        if red.y_dominates and not y > x:
            flags.append("branch_order_violation")
        metric = MetricParams.three_block(spec, x, y, Fraction(1))
        out.append(
            _certify(
                spec, metric, GENERAL_X_NE_Y, tolerance, exact=False,
                root_interval=iv, extra_flags=tuple(flags),
            )
        )
    return dedupe_solutions(out)


# -- sign checks behind the existence theorems --------------------------------


@dataclass(frozen=True)
class SignCheckEntry:
    kind: str  # "quartic_at_one" or "reduction_at_one"
    family: GroupFamily
    s: int  # 0 for the plain quartic
    k: int
    l: int
    value: Fraction
    within_hypothesis: bool
    negative: bool
    crosscheck_ok: bool


@dataclass(frozen=True)
class SignCheckReport:
    entries: list

    @property
    def violations(self) -> list:
        return [
            e
            for e in self.entries
            if (e.within_hypothesis and not e.negative) or not e.crosscheck_ok
        ]


def _quartic_at_one_formula(family: GroupFamily, k: int, l: int) -> Fraction:
    if family is GroupFamily.ORTHOGONAL:
        return Fraction(2 * k * k - 2 * k * l + k - 2 - l * l + 2 * l)
    return Fraction(4 * k * k - 4 * k * l - k - 2 * l - 1 - 2 * l * l)


def _reduction_at_one_formula(family: GroupFamily, s: int, k: int, l: int) -> Fraction:
    if family is GroupFamily.ORTHOGONAL:
        bracket = s * k * k - s * k * l + k - 2 - l * l + 2 * l
        return Fraction(s * s * k**4 * l * (k - 1) * (s - 1) ** 2, 2) * bracket
    bracket = 2 * s * k * k - 2 * s * k * l - k - 2 * l - 1 - 2 * l * l
    return Fraction(8 * s * s * k**4 * l * (2 * k + 1) * (s - 1) ** 2) * bracket


def _hypothesis(family: GroupFamily, k: int, l: int) -> bool:
    if family is GroupFamily.ORTHOGONAL:
        return l > k >= 3
    return l >= k >= 1


def theorem_sign_checks(
    family: GroupFamily,
    k_values=None,
    l_values=None,
    s_values=range(2, 7),
) -> SignCheckReport:
    """Exhaustively verify the negativity of the quartics at 1 that drives the
    existence results, cross-checking each closed expression against direct
    evaluation of the full polynomial."""
    if k_values is None:
        k_values = range(3, 41) if family is GroupFamily.ORTHOGONAL else range(1, 41)
    if l_values is None:
        l_values = range(1, 41)
    entries = []
    k_min = 3 if family is GroupFamily.ORTHOGONAL else 1
    for k in k_values:
        if k < k_min:
            continue
        for l in l_values:
            formula = _quartic_at_one_formula(family, k, l)
            direct = eval_poly(quartic_build(family, k, l), Fraction(1))
            entries.append(
                SignCheckEntry(
                    kind="quartic_at_one",
                    family=family,
                    s=0,
                    k=k,
                    l=l,
                    value=formula,
                    within_hypothesis=_hypothesis(family, k, l),
                    negative=formula < 0,
                    crosscheck_ok=formula == direct,
                )
            )
            for s in s_values:
                formula_p = _reduction_at_one_formula(family, s, k, l)
                red = general_reduce(three_block_form(family, s, k, l))
                direct_p = eval_poly(red.unequal_branch_quartic, Fraction(1))
                entries.append(
                    SignCheckEntry(
                        kind="reduction_at_one",
                        family=family,
                        s=s,
                        k=k,
                        l=l,
                        value=formula_p,
                        within_hypothesis=_hypothesis(family, k, l),
                        negative=formula_p < 0,
                        crosscheck_ok=formula_p == direct_p,
                    )
                )
    return SignCheckReport(entries=entries)


# -- many metrics on one space -------------------------------------------------


def _primes(start: int):
    n = max(start, 2)
    while True:
        if all(n % d for d in range(2, int(n**0.5) + 1)):
            yield n
        n += 1


@dataclass(frozen=True)
class PlanRun:
    k: int
    s: int
    solutions: list


@dataclass(frozen=True)
class PlanResult:
    family: GroupFamily
    p: int
    prime_factors: tuple
    n: int
    l: int
    runs: list
    min_margin: float

    @property
    def solutions(self) -> list:
        return [sol for run in self.runs for sol in run.solutions]

    @property
    def spec_label(self) -> str:
        g = self.family.value
        return f"{g}({self.n})/{g}({self.l})"


def plan_many_metrics(
    family: GroupFamily, p: int, tolerance: float = DEFAULT_TOLERANCE
) -> PlanResult:
    """Pick one space carrying at least 2p pairwise-distinct Einstein metrics.

    Strategy: take the p smallest admissible primes, let n - l be their
    product (doubled when p = 1 so each run still has s >= 2), and choose the
    smallest l compatible with every factor.  Each prime k gives one run of
    the s-block construction whose non-classical branch contributes two
    metrics; distinctness is certified on normalized eigenvalue spectra.
    """
    if p < 1:
        raise SolverError("need p >= 1")
    smallest = 3 if family is GroupFamily.ORTHOGONAL else 2
    gen = _primes(smallest)
    primes = tuple(next(gen) for _ in range(p))
    span = 1
    for v in primes:
        span *= v
    if p == 1:
        span *= 2
    l = max(primes) + (1 if family is GroupFamily.ORTHOGONAL else 0)
    n = l + span
    runs = []
    for k in primes:
        s = span // k
        sols = [
            sol
            for sol in general_solve(family, s, k, l, tolerance)
            if sol.family_label == GENERAL_X_NE_Y
        ]
        runs.append(PlanRun(k=k, s=s, solutions=sols))
    flat = [sol for run in runs for sol in run.solutions]
    margin = float("inf")
    for i in range(len(flat)):
        for j in range(i + 1, len(flat)):
            margin = min(margin, projective_distance(flat[i], flat[j]))
    return PlanResult(
        family=family,
        p=p,
        prime_factors=primes,
        n=n,
        l=l,
        runs=runs,
        min_margin=margin,
    )

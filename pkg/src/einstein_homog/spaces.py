"""Homogeneous spaces G/H for G = SO(n) or Sp(n) with block subgroup chains.

A space is described by block sizes k_1..k_{s+t}: the first s blocks generate
the enlarged symmetry factor, the last t blocks generate H.  The tangent
space splits into irreducible summands p_i (1 <= i <= s, the so(k_i)/sp(k_i)
diagonal blocks) and p_(i,j) (1 <= i < j <= s+t, the off-diagonal blocks).

This module carries the combinatorial data in exact rational arithmetic:
module dimensions, Killing restriction ratios for nested block subalgebras,
and the closed-form structure sums [abc] over triples of summands.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations


class SpaceError(ValueError):
    pass


class NonGenericError(SpaceError):
    """The isotropy summands are not pairwise inequivalent."""


class GroupFamily(enum.Enum):
    ORTHOGONAL = "so"
    SYMPLECTIC = "sp"

    @classmethod
    def parse(cls, text: str) -> "GroupFamily":
        t = text.strip().lower()
        for fam in cls:
            if t in (fam.value, fam.name.lower()):
                return fam
        raise SpaceError(f"unknown group family {text!r} (expected 'so' or 'sp')")

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class ModuleId:
    """Label of an irreducible summand: diagonal block i, or off-block (i, j).

    Diagonal ids with index beyond s label subalgebra blocks inside H; they
    are not summands of the tangent space but the structure-sum table keeps
    entries for them so the brute-force oracle can cross-check every pattern.
    """

    i: int
    j: int | None = None

    def __post_init__(self):
        if self.i < 1 or (self.j is not None and self.j <= self.i):
            raise SpaceError(f"bad module id ({self.i}, {self.j})")

    @classmethod
    def diagonal(cls, i: int) -> "ModuleId":
        return cls(i)

    @classmethod
    def off_diagonal(cls, i: int, j: int) -> "ModuleId":
        if i > j:
            i, j = j, i
        if i == j:
            raise SpaceError("off-diagonal id needs distinct indices")
        return cls(i, j)

    @property
    def is_diagonal(self) -> bool:
        return self.j is None

    def sort_key(self):
        return (0, self.i, 0) if self.j is None else (1, self.i, self.j)

    def __str__(self):
        return str(self.i) if self.j is None else f"({self.i},{self.j})"

    @classmethod
    def parse(cls, text: str) -> "ModuleId":
        t = text.strip()
        if t.startswith("(") and t.endswith(")"):
            a, b = t[1:-1].split(",")
            return cls.off_diagonal(int(a), int(b))
        return cls.diagonal(int(t))


@dataclass(frozen=True)
class SpaceSpec:
    """Block data (family, k_1..k_{s+t}, split s); t = len(blocks) - s."""

    family: GroupFamily
    blocks: tuple[int, ...]
    s: int

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(int(k) for k in self.blocks))
        if len(self.blocks) < 1:
            raise SpaceError("need at least one block")
        if any(k < 1 for k in self.blocks):
            raise SpaceError("block sizes must be positive")
        if not 0 <= self.s <= len(self.blocks):
            raise SpaceError(f"split s={self.s} out of range")
        if self.n < 2:
            raise SpaceError("total rank n must be at least 2")

    @property
    def t(self) -> int:
        return len(self.blocks) - self.s

    @property
    def n(self) -> int:
        return sum(self.blocks)

    @property
    def subgroup_rank(self) -> int:
        """Total size of the H blocks (the l of SO(n)/SO(l) when t = 1)."""
        return sum(self.blocks[self.s:])

    def block(self, i: int) -> int:
        """1-based block size."""
        if not 1 <= i <= len(self.blocks):
            raise SpaceError(f"block index {i} out of range")
        return self.blocks[i - 1]

    def describe(self) -> str:
        g = self.family.value
        return f"{g}({self.n})/{g}({self.subgroup_rank}) blocks={list(self.blocks)} s={self.s}"


def module_ids(spec: SpaceSpec) -> list[ModuleId]:
    """Summands of the tangent space, in canonical order."""
    out = [ModuleId.diagonal(i) for i in range(1, spec.s + 1)]
    m = len(spec.blocks)
    out.extend(ModuleId.off_diagonal(i, j) for i, j in combinations(range(1, m + 1), 2))
    return out


def module_dimension(spec: SpaceSpec, mid: ModuleId) -> int:
    """dim p_i = k(k-1)/2 resp. 2k^2+k; dim p_(i,j) = k_i*k_j resp. 4*k_i*k_j."""
    m = len(spec.blocks)
    if mid.is_diagonal:
        if not 1 <= mid.i <= m:
            raise SpaceError(f"module {mid} invalid for {m} blocks")
        k = spec.block(mid.i)
        if spec.family is GroupFamily.ORTHOGONAL:
            return k * (k - 1) // 2
        return 2 * k * k + k
    if not 1 <= mid.i < mid.j <= m:
        raise SpaceError(f"module {mid} invalid for {m} blocks")
    ki, kj = spec.block(mid.i), spec.block(mid.j)
    if spec.family is GroupFamily.ORTHOGONAL:
        return ki * kj
    return 4 * ki * kj


def tangent_dimension(spec: SpaceSpec) -> int:
    return sum(module_dimension(spec, m) for m in module_ids(spec))


def killing_ratio(spec: SpaceSpec, sub_block_size: int) -> Fraction:
    """Ratio between the Killing form of a nested block subalgebra and the
    restriction of the ambient one: (k-2)/(n-2) orthogonal, (k+1)/(n+1)
    symplectic."""
    n, k = spec.n, sub_block_size
    if spec.family is GroupFamily.ORTHOGONAL:
        if not 2 <= k <= n or n < 3:
            raise SpaceError(f"orthogonal sub-block {k} out of range for n={n}")
        return Fraction(k - 2, n - 2)
    if not 1 <= k <= n:
        raise SpaceError(f"symplectic sub-block {k} out of range for n={n}")
    return Fraction(k + 1, n + 1)


@dataclass(frozen=True)
class TripleSymbolTable:
    """Structure sums [abc] keyed by unordered triples of module ids.

    Lookup is symmetric in the three slots; absent triples are zero.
    """

    entries: dict

    def get(self, a: ModuleId, b: ModuleId, c: ModuleId) -> Fraction:
        return self.entries.get(triple_key(a, b, c), Fraction(0))

    def items(self):
        return self.entries.items()


def triple_key(a: ModuleId, b: ModuleId, c: ModuleId):
    return tuple(sorted((a, b, c), key=ModuleId.sort_key))


def triple_symbols(spec: SpaceSpec) -> TripleSymbolTable:
    """Closed-form [abc] for all nonzero patterns.

    Orthogonal (denominator 2(n-2)) and symplectic (denominator n+1):

        [aaa]           k(k-1)(k-2)/(2(n-2))      k(k+1)(2k+1)/(n+1)
        [a,(a,b),(a,b)] ka*kb*(ka-1)/(2(n-2))     ka*kb*(2ka+1)/(n+1)
        [b,(a,b),(a,b)] ka*kb*(kb-1)/(2(n-2))     ka*kb*(2kb+1)/(n+1)
        [(a,b),(b,c),(a,c)]  ka*kb*kc/(2(n-2))    2*ka*kb*kc/(n+1)

    Diagonal entries are kept for every block index (including the H range)
    so the oracle can cross-check them; curvature sums never touch those.
    """
    n = spec.n
    orth = spec.family is GroupFamily.ORTHOGONAL
    if orth and n < 3:
        raise SpaceError("orthogonal triple symbols need n >= 3")
    den = Fraction(1, 2 * (n - 2)) if orth else Fraction(1, n + 1)
    m = len(spec.blocks)
    k = [0] + list(spec.blocks)  # 1-based
    entries = {}

    def put(ids, value):
        if value != 0:
            entries[triple_key(*ids)] = value

    for a in range(1, m + 1):
        ka = k[a]
        da = ModuleId.diagonal(a)
        if orth:
            put((da, da, da), ka * (ka - 1) * (ka - 2) * den)
        else:
            put((da, da, da), ka * (ka + 1) * (2 * ka + 1) * den)
    for a, b in combinations(range(1, m + 1), 2):
        ka, kb = k[a], k[b]
        off = ModuleId.off_diagonal(a, b)
        for c, kc in ((a, ka), (b, kb)):
            dc = ModuleId.diagonal(c)
            if orth:
                put((dc, off, off), ka * kb * (kc - 1) * den)
            else:
                put((dc, off, off), ka * kb * (2 * kc + 1) * den)
    for a, b, c in combinations(range(1, m + 1), 3):
        v = k[a] * k[b] * k[c] * den * (1 if orth else 2)
        put(
            (
                ModuleId.off_diagonal(a, b),
                ModuleId.off_diagonal(b, c),
                ModuleId.off_diagonal(a, c),
            ),
            v,
        )
    return TripleSymbolTable(entries)


@dataclass(frozen=True)
class GenericityResult:
    ok: bool
    reason: str = ""

    def __bool__(self):
        return self.ok


def check_generic(spec: SpaceSpec) -> GenericityResult:
    """Whether the summands are pairwise inequivalent, so that a diagonal
    metric (one positive scale per summand) is the general invariant metric.

    Symplectic spaces always qualify.  Orthogonal ones need every block of
    size at least 2 and at most one diagonal-range block of size exactly 2;
    blocks of size 1 are rejected outright (the curvature formulas are not
    stated for them).
    """
    if spec.family is GroupFamily.SYMPLECTIC:
        return GenericityResult(True)
    ones = [i + 1 for i, kk in enumerate(spec.blocks) if kk == 1]
    if ones:
        return GenericityResult(False, f"orthogonal block(s) of size 1 at {ones}")
    twos = [i + 1 for i, kk in enumerate(spec.blocks[: spec.s]) if kk == 2]
    if len(twos) > 1:
        return GenericityResult(False, f"{len(twos)} diagonal blocks of size 2")
    return GenericityResult(True)

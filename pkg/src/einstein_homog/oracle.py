"""Brute-force ground truth from explicit matrix Lie algebras.

Everything downstream trusts closed-form dimension, ratio and structure-sum
formulas.  This module recomputes those quantities from scratch: it builds an
explicit basis of so(n) (skew-symmetric real matrices) or sp(n) (anti-Hermitian
complex 2n x 2n matrices fixing the standard symplectic form), computes the
Killing form as trace(ad X ad Y) in the adjoint representation (never via a
trace-form shortcut, so the check is not circular), orthonormalizes each
labeled summand and sums squared bracket projections directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement

import numpy as np

from .spaces import (
    GroupFamily,
    ModuleId,
    SpaceSpec,
    killing_ratio,
    module_ids,
    triple_key,
    triple_symbols,
)

SIZE_CAP = {GroupFamily.ORTHOGONAL: 10, GroupFamily.SYMPLECTIC: 5}

_CLOSURE_TOL = 1e-9


class OracleError(RuntimeError):
    pass


@dataclass
class MatrixBasis:
    """Explicit basis of the compact algebra, one label per element.

    Labels are ModuleId values; diagonal ids with index beyond spec.s mark
    subalgebra blocks inside H rather than tangent summands.
    """

    spec: SpaceSpec
    elements: list
    labels: list

    def indices_for(self, label: ModuleId) -> list[int]:
        return [i for i, lab in enumerate(self.labels) if lab == label]

    @property
    def dimension(self) -> int:
        return len(self.elements)


def _block_of(offsets, idx):
    for b, (lo, hi) in enumerate(offsets, start=1):
        if lo <= idx < hi:
            return b
    raise OracleError("index outside all blocks")


def _label(a: int, b: int) -> ModuleId:
    return ModuleId.diagonal(a) if a == b else ModuleId.off_diagonal(a, b)


def _so_basis(spec: SpaceSpec):
    n = spec.n
    offs, pos = [], 0
    for k in spec.blocks:
        offs.append((pos, pos + k))
        pos += k
    elements, labels = [], []
    for i in range(n):
        for j in range(i + 1, n):
            m = np.zeros((n, n))
            m[i, j], m[j, i] = 1.0, -1.0
            elements.append(m)
            labels.append(_label(_block_of(offs, i), _block_of(offs, j)))
    return elements, labels


def _sp_basis(spec: SpaceSpec):
    """Compact sp(n) as 2n x 2n complex matrices [[A, B], [-conj(B), conj(A)]]
    with A anti-Hermitian and B symmetric; quaternionic position (i, j) fixes
    the block label."""
    n = spec.n
    offs, pos = [], 0
    for k in spec.blocks:
        offs.append((pos, pos + k))
        pos += k

    def embed(A, B):
        m = np.zeros((2 * n, 2 * n), dtype=complex)
        m[:n, :n] = A
        m[:n, n:] = B
        m[n:, :n] = -B.conj()
        m[n:, n:] = A.conj()
        return m

    elements, labels = [], []
    for i in range(n):
        bi = _block_of(offs, i)
        A = np.zeros((n, n), dtype=complex)
        A[i, i] = 1j
        Z = np.zeros((n, n), dtype=complex)
        elements.append(embed(A, Z))
        labels.append(_label(bi, bi))
        B1 = np.zeros((n, n), dtype=complex)
        B1[i, i] = 1.0
        elements.append(embed(Z, B1))
        labels.append(_label(bi, bi))
        B2 = np.zeros((n, n), dtype=complex)
        B2[i, i] = 1j
        elements.append(embed(Z, B2))
        labels.append(_label(bi, bi))
    for i in range(n):
        for j in range(i + 1, n):
            lab = _label(_block_of(offs, i), _block_of(offs, j))
            A = np.zeros((n, n), dtype=complex)
            A[i, j], A[j, i] = 1.0, -1.0
            elements.append(embed(A, np.zeros((n, n), dtype=complex)))
            labels.append(lab)
            A = np.zeros((n, n), dtype=complex)
            A[i, j], A[j, i] = 1j, 1j
            elements.append(embed(A, np.zeros((n, n), dtype=complex)))
            labels.append(lab)
            B = np.zeros((n, n), dtype=complex)
            B[i, j], B[j, i] = 1.0, 1.0
            elements.append(embed(np.zeros((n, n), dtype=complex), B))
            labels.append(lab)
            B = np.zeros((n, n), dtype=complex)
            B[i, j], B[j, i] = 1j, 1j
            elements.append(embed(np.zeros((n, n), dtype=complex), B))
            labels.append(lab)
    return elements, labels


def build_algebra(spec: SpaceSpec) -> MatrixBasis:
    """Labeled matrix basis of so(n) or sp(n); refuses oversized inputs."""
    cap = SIZE_CAP[spec.family]
    if spec.n > cap:
        raise OracleError(
            f"oracle size cap exceeded: n={spec.n} > {cap} for {spec.family}"
        )
    if spec.family is GroupFamily.ORTHOGONAL:
        elements, labels = _so_basis(spec)
    else:
        elements, labels = _sp_basis(spec)
    for m in elements:
        if spec.family is GroupFamily.ORTHOGONAL:
            if np.abs(m + m.T).max() > 0:
                raise OracleError("basis element is not skew-symmetric")
        else:
            n = spec.n
            J = np.zeros((2 * n, 2 * n))
            J[:n, n:] = np.eye(n)
            J[n:, :n] = -np.eye(n)
            if np.abs(m + m.conj().T).max() > 0 or np.abs(m.T @ J + J @ m).max() > 1e-12:
                raise OracleError("basis element violates the symplectic conditions")
    return MatrixBasis(spec=spec, elements=elements, labels=labels)


def _flatten(mats) -> np.ndarray:
    cols = [np.concatenate([np.asarray(m).real.ravel(), np.asarray(m).imag.ravel()]) for m in mats]
    return np.array(cols).T


class _Context:
    """Structure constants and Killing gram for one matrix basis."""

    def __init__(self, elements):
        self.elements = [np.asarray(m, dtype=complex) for m in elements]
        self.N = len(elements)
        M = _flatten(self.elements)
        self.pinv = np.linalg.pinv(M)
        comms = []
        for x in self.elements:
            for y in self.elements:
                comms.append(x @ y - y @ x)
        flat = _flatten(comms)
        coords = self.pinv @ flat
        recon = M @ coords
        scale = max(np.abs(flat).max(), 1.0)
        self.closure_residual = float(np.abs(recon - flat).max() / scale)
        if self.closure_residual > _CLOSURE_TOL:
            raise OracleError(
                f"basis is not closed under the bracket (residual {self.closure_residual:.2e})"
            )
        # C[i, j, :] = coordinates of [b_i, b_j]
        self.C = coords.T.reshape(self.N, self.N, self.N)
        # B(b_i, b_j) = tr(ad b_i ad b_j)
        self.K = np.einsum("ilm,jml->ij", self.C, self.C)


_context_cache: dict = {}


def _context_for(basis: MatrixBasis) -> _Context:
    key = (basis.spec.family, basis.spec.blocks, basis.spec.s)
    ctx = _context_cache.get(key)
    if ctx is None:
        ctx = _Context(basis.elements)
        _context_cache[key] = ctx
    return ctx


def killing_form(elements: list) -> np.ndarray:
    """Gram matrix of the Killing form over the given basis, via the adjoint
    representation.  Raises when the span is not bracket-closed."""
    return _Context(elements).K


def _orthonormal_coords(ctx: _Context, idx: list[int]):
    """Coordinates (N x d) of an orthonormal basis of the span of the given
    elements with respect to -B; also returns the Gram condition number."""
    G = -ctx.K[np.ix_(idx, idx)]
    w, V = np.linalg.eigh(G)
    if w.min() <= 0:
        raise OracleError("restricted form is not positive definite")
    W = V @ np.diag(1.0 / np.sqrt(w)) @ V.T
    U = np.zeros((ctx.N, len(idx)))
    for col, i in enumerate(idx):
        U[i, col] = 1.0
    return U @ W, float(w.max() / w.min())


@dataclass
class BruteSymbolTable:
    """Numerically computed structure sums with a crude error bound."""

    entries: dict
    closure_residual: float
    gram_condition: float

    def get(self, a: ModuleId, b: ModuleId, c: ModuleId) -> float:
        return self.entries.get(triple_key(a, b, c), 0.0)


def brute_triple_symbols(spec: SpaceSpec) -> BruteSymbolTable:
    """Sum squared bracket projections over orthonormalized summands.

    Includes diagonal labels inside H so every closed-form entry (and every
    zero pattern) can be cross-checked.
    """
    basis = build_algebra(spec)
    ctx = _context_for(basis)
    mods = [ModuleId.diagonal(i) for i in range(1, len(spec.blocks) + 1)]
    mods += [m for m in module_ids(spec) if not m.is_diagonal]
    coords = {}
    worst_cond = 1.0
    for m in mods:
        idx = basis.indices_for(m)
        if not idx:
            continue
        coords[m], cond = _orthonormal_coords(ctx, idx)
        worst_cond = max(worst_cond, cond)
    entries = {}
    minusK = -ctx.K
    for a, b, c in combinations_with_replacement(sorted(coords, key=ModuleId.sort_key), 3):
        Ua, Ub, Uc = coords[a], coords[b], coords[c]
        brk = np.einsum("pi,qj,pqm->ijm", Ua, Ub, ctx.C)
        T = np.einsum("ijm,mn,nk->ijk", brk, minusK, Uc)
        entries[triple_key(a, b, c)] = float((T**2).sum())
    return BruteSymbolTable(
        entries=entries,
        closure_residual=ctx.closure_residual,
        gram_condition=worst_cond,
    )


@dataclass
class SymbolComparison:
    triple: tuple
    closed: float
    brute: float

    @property
    def deviation(self) -> float:
        return abs(self.closed - self.brute)


def compare_triple_symbols(spec: SpaceSpec) -> list[SymbolComparison]:
    """Closed-form vs brute-force values over all triples seen by either."""
    closed = triple_symbols(spec)
    brute = brute_triple_symbols(spec)
    keys = sorted(
        set(closed.entries) | set(brute.entries),
        key=lambda trip: tuple(m.sort_key() for m in trip),
    )
    out = []
    for key in keys:
        cv = float(closed.entries.get(key, 0))
        bv = brute.entries.get(key, 0.0)
        out.append(SymbolComparison(triple=key, closed=cv, brute=bv))
    return out


@dataclass
class Lemma3Report:
    """Per-index sums of squared structure constants for q inside r.

    Each sum should equal the Killing restriction ratio alpha with
    B_q = alpha * B_r restricted to q; the total should be alpha * dim q.
    """

    family: GroupFamily
    n: int
    k: int
    expected_alpha: Fraction
    per_index: list
    total: float
    max_deviation: float


def verify_lemma3(family: GroupFamily, n: int, k: int) -> Lemma3Report:
    """Check the ratio identity for the top-left block subalgebra q in r."""
    if not 1 <= k <= n:
        raise OracleError("need 1 <= k <= n")
    spec = SpaceSpec(family=family, blocks=(k, n - k) if k < n else (k,), s=1)
    basis = build_algebra(spec)
    ctx = _context_for(basis)
    idx = basis.indices_for(ModuleId.diagonal(1))
    U, _ = _orthonormal_coords(ctx, idx)
    brk = np.einsum("pi,qj,pqm->ijm", U, U, ctx.C)
    T = np.einsum("ijm,mn,nk->ijk", brk, -ctx.K, U)
    per_index = (T**2).sum(axis=(1, 2))
    alpha = killing_ratio(spec, k)
    dev = float(np.abs(per_index - float(alpha)).max())
    return Lemma3Report(
        family=family,
        n=n,
        k=k,
        expected_alpha=alpha,
        per_index=[float(v) for v in per_index],
        total=float(per_index.sum()),
        max_deviation=dev,
    )

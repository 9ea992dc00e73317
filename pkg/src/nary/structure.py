"""
Structure theory of Filippov algebras: derived series, the Kasymov trace
form and its non-degeneracy, ideals, the Lie algebra of inner
derivations and invariant metrics.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Sequence

from .kernel import (DomainError, Matrix, echelon_vectors, in_span, rank_and_kernel,
                     sort_sign)
from .nalg import NAryAlgebra, Symmetry, ad_matrix, bracket, fundamental


@dataclass
class Subspace:
    """Span of ``basis`` (dense vectors, kept in reduced echelon form)."""
    basis: list
    dim_ambient: int

    @classmethod
    def span(cls, vectors, dim: int) -> "Subspace":
        return cls(echelon_vectors(list(vectors), dim), dim)

    @classmethod
    def coordinate(cls, indices: Sequence[int], dim: int) -> "Subspace":
        vecs = []
        for a in indices:
            v = [Fraction(0)] * dim
            v[a - 1] = Fraction(1)
            vecs.append(v)
        return cls.span(vecs, dim)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __contains__(self, v) -> bool:
        return in_span(self.basis, v)


@dataclass
class DerivedSeries:
    dims: list
    solvable: bool


def derived_series(A: NAryAlgebra) -> DerivedSeries:
    """
    Dimensions of I0 = A, I(s) = [I(s-1), .., I(s-1)] until the series
    stabilizes or reaches zero.
    """
    N = A.dim
    current = Subspace.coordinate(range(1, N + 1), N)
    dims = [current.dim]
    while current.dim:
        vecs = []
        basis = current.basis
        k = len(basis)
        if A.symmetry is Symmetry.FULL:
            tuples = combinations(range(k), A.arity)
        elif A.symmetry is Symmetry.FIRST:
            tuples = (c + (z,) for c in combinations(range(k), A.arity - 1) for z in range(k))
        else:
            tuples = product(range(k), repeat=A.arity)
        for t in tuples:
            v = bracket(A, *[basis[i] for i in t])
            if any(v):
                vecs.append(v)
        nxt = Subspace.span(vecs, N)
        dims.append(nxt.dim)
        if nxt.dim == current.dim:
            break
        current = nxt
    return DerivedSeries(dims, dims[-1] == 0)


def _ad_basis(A: NAryAlgebra) -> list[Matrix]:
    return [ad_matrix(A, fundamental(A, *s)) for s in A.fundamental_basis]


def kasymov_form(A: NAryAlgebra) -> Matrix:
    """k(X, Y) = Tr(ad_X ad_Y) on the canonical fundamental-object basis."""
    ads = _ad_basis(A)
    m = len(ads)
    data = [{} for _ in range(m)]
    for i in range(m):
        for j in range(i, m):
            t = (ads[i] @ ads[j]).trace()
            if t:
                data[i][j] = t
                data[j][i] = t
    return Matrix(m, m, data)


@dataclass
class SemisimplicityCertificate:
    semisimple: bool
    kernel: list = field(default_factory=list)

    def __bool__(self):
        return self.semisimple


def is_semisimple(A: NAryAlgebra) -> SemisimplicityCertificate:
    """
    Non-degeneracy of the Kasymov form in its first slot: the map
    Z -> k((Z, X_2, .., X_{n-1}), Y) over basis completions X and Y must
    be injective. The kernel is returned when it is not.
    """
    k = kasymov_form(A)
    N, n = A.dim, A.arity
    index = A.fundamental_index
    rows = []
    for rest in combinations(range(1, N + 1), n - 2):
        for y in range(k.cols):
            row = {}
            for z in range(1, N + 1):
                key, sign = sort_sign((z,) + rest)
                if sign:
                    v = k[index[key], y]
                    if v:
                        row[z - 1] = sign * v
            rows.append(row)
    m = Matrix(len(rows), N, rows)
    _, ker = rank_and_kernel(m)
    return SemisimplicityCertificate(not ker, ker)


def is_ideal(A: NAryAlgebra, s: Subspace) -> bool:
    """[X_1, .., X_{n-1}, Z] in s for all basis X and all Z in s."""
    for mat in _ad_basis(A):
        for v in s.basis:
            w = mat @ v
            if any(w) and w not in s:
                return False
    return True


@dataclass
class LieAlgebraOf:
    dim: int
    basis: list          # N x N matrices
    closure_ok: bool


def _flat(m: Matrix) -> list:
    return list(m.entries)


def lie_algebra_of(A: NAryAlgebra) -> LieAlgebraOf:
    """Span of the inner derivations ad_X, with a commutator-closure check."""
    N = A.dim
    flats = [_flat(m) for m in _ad_basis(A)]
    basis = echelon_vectors(flats, N * N)
    mats = [Matrix.from_dense([b[i * N:(i + 1) * N] for i in range(N)]) for b in basis]
    closure = True
    for i, j in combinations(range(len(mats)), 2):
        c = mats[i] @ mats[j] - mats[j] @ mats[i]
        if not c.is_zero() and not in_span(basis, _flat(c)):
            closure = False
            break
    return LieAlgebraOf(len(mats), mats, closure)


@dataclass
class MetricReport:
    invariant: bool
    lowered_antisymmetric: bool
    invariant_tensor: bool
    witnesses: dict

    @property
    def ok(self) -> bool:
        return self.invariant and self.lowered_antisymmetric and self.invariant_tensor


def metric_checks(A: NAryAlgebra, g=None) -> MetricReport:
    """
    Three exact checks for a metric g (default: the one attached to A):

    * invariance  f_{S b}^l g_{lc} + f_{S c}^l g_{bl} = 0,
    * the lowered constants f_{a_1..a_{n+1}} are totally antisymmetric,
    * the lowered tensor is ad-invariant:
      sum_i f_{S b_i}^l f_{b_1..l..b_{n+1}} = 0 (b increasing).
    """
    g = A.metric if g is None else g
    if g is None:
        raise DomainError("no metric given")
    N, n = A.dim, A.arity
    g = [[Fraction(x) for x in r] for r in g]
    if len(g) != N or any(len(r) != N for r in g):
        raise DomainError("metric must be %dx%d" % (N, N))
    if any(g[i][j] != g[j][i] for i in range(N) for j in range(N)):
        raise DomainError("metric is not symmetric")
    basis = range(1, N + 1)
    skew = A.skew
    fund = list(combinations(basis, n - 1)) if skew >= n - 1 else list(product(basis, repeat=n - 1))

    def lowered(idx):
        vec = A.structure(idx[:-1])
        c = idx[-1]
        return sum((v * g[l - 1][c - 1] for l, v in vec.items()), Fraction(0))

    inv_w = []
    for s in fund:
        for b in basis:
            for c in basis:
                if c < b:
                    continue
                if lowered(s + (b, c)) + lowered(s + (c, b)):
                    inv_w.append((s, b, c))

    anti_w = []
    cache = {}
    for idx in product(basis, repeat=n + 1):
        cache[idx] = lowered(idx)
    for idx, v in cache.items():
        for i in range(n):
            sw = idx[:i] + (idx[i + 1], idx[i]) + idx[i + 2:]
            if idx[i] == idx[i + 1]:
                if v:
                    anti_w.append((idx, i + 1))
            elif idx[i] < idx[i + 1] and v + cache[sw]:
                anti_w.append((idx, i + 1))

    tens_w = []
    for s in fund:
        ad = {z: A.structure(s + (z,)) for z in basis}
        for b in combinations(basis, n + 1):
            r = Fraction(0)
            for i, bi in enumerate(b):
                for l, v in ad[bi].items():
                    r += v * cache[b[:i] + (l,) + b[i + 1:]]
            if r:
                tens_w.append((s, b, r))

    return MetricReport(not inv_w, not anti_w, not tens_w,
                        {"invariance": inv_w, "antisymmetry": anti_w, "tensor": tens_w})

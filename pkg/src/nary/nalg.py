"""
n-ary algebras given by structure constants.

An algebra of arity n on the basis e_1..e_N is stored as a sparse map
``(a_1..a_n, d) -> f`` meaning [e_a1, .., e_an] has e_d-coefficient f.
Keys are canonical for the declared symmetry class: the whole n-block is
sorted for ``FULL``, only the first n-1 slots for ``FIRST``, nothing for
``NONE``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations, permutations, product
from math import comb
from typing import Iterable, Mapping, Optional, Sequence

from .kernel import DomainError, Matrix, canonical, rank, solve_in_image, sort_sign, to_rational


class UnsupportedSymmetry(DomainError):
    pass


class Symmetry(enum.Enum):
    FULL = "full"
    FIRST = "first_n_minus_1"
    NONE = "none"

    def skew(self, arity: int) -> int:
        """Number of leading antisymmetric slots."""
        if self is Symmetry.FULL:
            return arity
        if self is Symmetry.FIRST:
            return arity - 1
        return 0

    @classmethod
    def parse(cls, s) -> "Symmetry":
        if isinstance(s, Symmetry):
            return s
        aliases = {"full": cls.FULL, "fullskew": cls.FULL,
                   "first_n_minus_1": cls.FIRST, "restricted": cls.FIRST,
                   "skewfirstnminus1": cls.FIRST, "none": cls.NONE}
        key = str(s).strip().lower()
        if key not in aliases:
            raise DomainError("unknown symmetry %r" % s)
        return aliases[key]


def _weaker_or_equal(a: Symmetry, b: Symmetry) -> bool:
    order = {Symmetry.FULL: 2, Symmetry.FIRST: 1, Symmetry.NONE: 0}
    return order[a] <= order[b]


@dataclass(frozen=True, eq=False)
class NAryAlgebra:
    arity: int
    dim: int
    symmetry: Symmetry
    constants: Mapping = field(repr=False)
    metric: Optional[tuple] = field(default=None, repr=False)
    name: str = ""

    def __post_init__(self):
        if self.arity < 2:
            raise DomainError("arity must be >= 2")
        if self.dim < 1:
            raise DomainError("dimension must be >= 1")
        skew = self.symmetry.skew(self.arity)
        for (idx, d), v in self.constants.items():
            if len(idx) != self.arity or not all(1 <= i <= self.dim for i in idx) \
                    or not 1 <= d <= self.dim:
                raise DomainError("bad structure constant key %r -> %r" % (idx, d))
            if canonical(idx, skew) != (idx, 1):
                raise DomainError("non-canonical key %r for %s" % (idx, self.symmetry.value))
            if not v:
                raise DomainError("zero constant stored at %r" % ((idx, d),))

    # -- construction -----------------------------------------------------

    @classmethod
    def from_entries(cls, arity: int, dim: int, symmetry, entries: Iterable,
                     metric=None, name: str = "") -> "NAryAlgebra":
        """
        Build from ``(indices, target, value)`` records.

        Non-canonical index tuples are folded onto their canonical key with
        the permutation sign. Two records reaching the same key with
        different values, or a nonzero value on a degenerate key, raise.
        """
        symmetry = Symmetry.parse(symmetry)
        skew = symmetry.skew(arity)
        folded: dict = {}
        for idx, d, v in entries:
            idx = tuple(int(i) for i in idx)
            d = int(d)
            v = to_rational(v)
            if len(idx) != arity:
                raise DomainError("index %r has length %d, arity is %d" % (idx, len(idx), arity))
            for i in idx + (d,):
                if not 1 <= i <= dim:
                    raise DomainError("index %d outside 1..%d" % (i, dim))
            key, sign = canonical(idx, skew)
            if sign == 0:
                if v:
                    raise DomainError("nonzero value on degenerate index %r" % (idx,))
                continue
            val = sign * v
            prev = folded.get((key, d))
            if prev is not None and prev != val:
                raise DomainError("conflicting values for %r -> e%d: %s vs %s"
                                  % (key, d, prev, val))
            folded[(key, d)] = val
        constants = {k: v for k, v in folded.items() if v}
        return cls(arity, dim, symmetry, constants, _metric(metric, dim), name)

    @classmethod
    def from_table(cls, arity: int, dim: int, symmetry, table: Mapping,
                   metric=None, name: str = "") -> "NAryAlgebra":
        """Build from ``{indices: {target: value}}``; values accumulate."""
        acc: dict = {}
        skew = Symmetry.parse(symmetry).skew(arity)
        for idx, vec in table.items():
            key, sign = canonical(tuple(idx), skew)
            if sign == 0:
                continue
            for d, v in vec.items():
                acc[(key, d)] = acc.get((key, d), 0) + sign * to_rational(v)
        entries = [(k, d, v) for (k, d), v in acc.items() if v]
        return cls.from_entries(arity, dim, symmetry, entries, metric, name)

    def with_metric(self, g) -> "NAryAlgebra":
        return NAryAlgebra(self.arity, self.dim, self.symmetry, dict(self.constants),
                           _metric(g, self.dim), self.name)

    def renamed(self, name: str) -> "NAryAlgebra":
        return NAryAlgebra(self.arity, self.dim, self.symmetry, dict(self.constants),
                           self.metric, name)

    def recast(self, symmetry) -> "NAryAlgebra":
        """The same bracket stored under a weaker symmetry class."""
        symmetry = Symmetry.parse(symmetry)
        if symmetry is self.symmetry:
            return self
        if not _weaker_or_equal(symmetry, self.symmetry):
            raise UnsupportedSymmetry("cannot recast %s as %s"
                                      % (self.symmetry.value, symmetry.value))
        entries = []
        for idx in self.all_keys(symmetry):
            for d, v in self.structure(idx).items():
                entries.append((idx, d, v))
        return NAryAlgebra.from_entries(self.arity, self.dim, symmetry, entries,
                                        self.metric, self.name)

    # -- lookup -----------------------------------------------------------

    @property
    def skew(self) -> int:
        return self.symmetry.skew(self.arity)

    @cached_property
    def table(self) -> dict[tuple, dict[int, Fraction]]:
        out: dict[tuple, dict[int, Fraction]] = {}
        for (idx, d), v in self.constants.items():
            out.setdefault(idx, {})[d] = v
        return out

    def structure(self, idx: Sequence[int]) -> dict[int, Fraction]:
        """[e_idx1, .., e_idxn] as ``{target: coefficient}`` for any index tuple."""
        key, sign = canonical(tuple(idx), self.skew)
        if sign == 0:
            return {}
        vec = self.table.get(key)
        if not vec:
            return {}
        if sign == 1:
            return vec
        return {d: -v for d, v in vec.items()}

    def all_keys(self, symmetry: Optional[Symmetry] = None) -> list[tuple]:
        """All canonical n-index tuples of a symmetry class (default: own)."""
        symmetry = self.symmetry if symmetry is None else symmetry
        n, N = self.arity, self.dim
        basis = range(1, N + 1)
        if symmetry is Symmetry.FULL:
            return list(combinations(basis, n))
        if symmetry is Symmetry.FIRST:
            return [s + (z,) for s in combinations(basis, n - 1) for z in basis]
        return list(product(basis, repeat=n))

    @cached_property
    def fundamental_basis(self) -> list[tuple]:
        """Canonical basis of the space of fundamental objects."""
        self._require_skew_fundamentals()
        return list(combinations(range(1, self.dim + 1), self.arity - 1))

    @cached_property
    def fundamental_index(self) -> dict[tuple, int]:
        return {s: i for i, s in enumerate(self.fundamental_basis)}

    def _require_skew_fundamentals(self):
        if self.symmetry is Symmetry.NONE:
            raise UnsupportedSymmetry("fundamental objects need skew first n-1 slots")

    @property
    def n_fundamental(self) -> int:
        return comb(self.dim, self.arity - 1)

    def digest_items(self) -> list:
        return sorted((k, d, v) for (k, d), v in self.constants.items())

    def same_constants(self, other: "NAryAlgebra") -> bool:
        return (self.arity, self.dim, self.symmetry, dict(self.constants)) == \
            (other.arity, other.dim, other.symmetry, dict(other.constants))

    def __repr__(self):
        return "NAryAlgebra(%s, n=%d, N=%d, %s, %d constants)" % (
            self.name or "?", self.arity, self.dim, self.symmetry.value, len(self.constants))

    # cached per-algebra tables used by the cochain assemblers

    @cached_property
    def ad_table(self) -> dict[tuple, dict[int, dict[int, Fraction]]]:
        """``ad_table[S][z] = [e_S, e_z]`` for canonical fundamental S."""
        out = {}
        for s in self.fundamental_basis:
            row = {}
            for z in range(1, self.dim + 1):
                vec = self.structure(s + (z,))
                if vec:
                    row[z] = vec
            out[s] = row
        return out

    @cached_property
    def compose_table(self) -> dict[tuple, dict[tuple, Fraction]]:
        """``compose_table[S, T]`` = basis composition e_S . e_T (zero entries omitted)."""
        out = {}
        for s in self.fundamental_basis:
            ad = self.ad_table[s]
            for t in self.fundamental_basis:
                acc: dict[tuple, Fraction] = {}
                for a, ta in enumerate(t):
                    for l, v in ad.get(ta, {}).items():
                        key, sign = sort_sign(t[:a] + (l,) + t[a + 1:])
                        if sign:
                            acc[key] = acc.get(key, 0) + sign * v
                acc = {k: v for k, v in acc.items() if v}
                if acc:
                    out[s, t] = acc
        return out


def _metric(g, dim: int):
    if g is None:
        return None
    rows = [[to_rational(x) for x in r] for r in g]
    if len(rows) != dim or any(len(r) != dim for r in rows):
        raise DomainError("metric must be %dx%d" % (dim, dim))
    return tuple(tuple(r) for r in rows)


# ---------------------------------------------------------------------------
# vectors and brackets

def basis_vector(dim: int, a: int) -> list[Fraction]:
    if not 1 <= a <= dim:
        raise DomainError("basis index %d outside 1..%d" % (a, dim))
    v = [Fraction(0)] * dim
    v[a - 1] = Fraction(1)
    return v


def bracket(A: NAryAlgebra, *args) -> list[Fraction]:
    """Multilinear n-bracket of coordinate vectors."""
    if len(args) != A.arity:
        raise DomainError("bracket needs %d arguments, got %d" % (A.arity, len(args)))
    supports = []
    for x in args:
        if len(x) != A.dim:
            raise DomainError("vector of length %d in dimension %d" % (len(x), A.dim))
        supports.append([(i + 1, to_rational(c)) for i, c in enumerate(x) if c])
    out = [Fraction(0)] * A.dim
    for combo in product(*supports):
        coef = Fraction(1)
        for _, c in combo:
            coef *= c
        for d, v in A.structure(tuple(i for i, _ in combo)).items():
            out[d - 1] += coef * v
    return out


# ---------------------------------------------------------------------------
# fundamental objects

def fundamental(A: NAryAlgebra, *indices: int) -> list[Fraction]:
    """Coefficient vector of the basis fundamental object (e_i1, .., e_i{n-1})."""
    A._require_skew_fundamentals()
    if len(indices) != A.arity - 1:
        raise DomainError("fundamental object needs %d entries" % (A.arity - 1))
    key, sign = sort_sign(indices)
    v = [Fraction(0)] * A.n_fundamental
    if sign:
        v[A.fundamental_index[key]] = Fraction(sign)
    return v


def _fund_support(A: NAryAlgebra, x: Sequence) -> list[tuple[tuple, Fraction]]:
    A._require_skew_fundamentals()
    if len(x) != A.n_fundamental:
        raise DomainError("fundamental object needs %d coefficients" % A.n_fundamental)
    return [(A.fundamental_basis[i], to_rational(c)) for i, c in enumerate(x) if c]


def ad_matrix(A: NAryAlgebra, x: Sequence) -> Matrix:
    """Matrix of Z -> [X_1, .., X_{n-1}, Z] (columns indexed by Z)."""
    data = [{} for _ in range(A.dim)]
    for s, c in _fund_support(A, x):
        for z, vec in A.ad_table[s].items():
            for d, v in vec.items():
                row = data[d - 1]
                row[z - 1] = row.get(z - 1, 0) + c * v
    return Matrix(A.dim, A.dim, data)


def compose(A: NAryAlgebra, x: Sequence, y: Sequence) -> list[Fraction]:
    """Composition X . Y = sum_a (Y_1, .., X . Y_a, .., Y_{n-1})."""
    out = [Fraction(0)] * A.n_fundamental
    ys = _fund_support(A, y)
    for s, c in _fund_support(A, x):
        for t, e in ys:
            for key, v in A.compose_table.get((s, t), {}).items():
                out[A.fundamental_index[key]] += c * e * v
    return out


# ---------------------------------------------------------------------------
# identity checks

@dataclass
class Residual:
    """Outcome of an identity check: zero iff ``max_violation == 0``."""
    max_violation: Fraction
    witnesses: list

    @property
    def ok(self) -> bool:
        return self.max_violation == 0

    def __bool__(self):
        return self.ok


def _fi_tuples(A: NAryAlgebra):
    n, N = A.arity, A.dim
    basis = range(1, N + 1)
    if A.symmetry is Symmetry.NONE:
        xs = list(product(basis, repeat=n - 1))
    else:
        xs = list(combinations(basis, n - 1))
    return xs, A.all_keys()


def fi_residual(A: NAryAlgebra) -> Residual:
    """
    Filippov identity in structure constants,

        f_{b}^l f_{a l}^s = sum_k f_{a b_k}^l f_{b_1..l..b_n}^s,

    over canonical a (n-1 slots), canonical b (n slots) and all s.
    Witnesses are ``(a, b, s, lhs - rhs)``.
    """
    xs, ys = _fi_tuples(A)
    N = A.dim
    worst = Fraction(0)
    witnesses = []
    for a in xs:
        ad_a = [A.structure(a + (z,)) for z in range(1, N + 1)]
        for b in ys:
            res: dict[int, Fraction] = {}
            for l, v in A.structure(b).items():
                for s, w in ad_a[l - 1].items():
                    res[s] = res.get(s, 0) + v * w
            for k, bk in enumerate(b):
                for l, v in ad_a[bk - 1].items():
                    for s, w in A.structure(b[:k] + (l,) + b[k + 1:]).items():
                        res[s] = res.get(s, 0) - v * w
            for s in sorted(res):
                r = res[s]
                if r:
                    witnesses.append((a, b, s, r))
                    worst = max(worst, abs(r))
    return Residual(worst, witnesses)


def derivation_residual(A: NAryAlgebra, x: Sequence) -> Fraction:
    """Max violation of ad_X being a derivation of the bracket on basis tuples."""
    m = ad_matrix(A, x)
    worst = Fraction(0)
    for b in A.all_keys():
        vec = A.structure(b)
        lhs = [Fraction(0)] * A.dim
        for l, v in vec.items():
            for d in range(A.dim):
                lhs[d] += m[d, l - 1] * v
        rhs = [Fraction(0)] * A.dim
        for k, bk in enumerate(b):
            for l in range(1, A.dim + 1):
                c = m[l - 1, bk - 1]
                if c:
                    for d, w in A.structure(b[:k] + (l,) + b[k + 1:]).items():
                        rhs[d - 1] += c * w
        worst = max([worst] + [abs(p - q) for p, q in zip(lhs, rhs)])
    return worst


@dataclass
class SymmetryReport:
    declared: Symmetry
    checked: Symmetry
    ok: bool
    violations: list

    def __bool__(self):
        return self.ok


def symmetry_audit(A: NAryAlgebra, as_class=None) -> SymmetryReport:
    """
    Check the constants against a symmetry class (default: the declared one).

    Stored keys must be canonical with nonzero values, and every transposition
    of two skew slots of the checked class must flip the sign of the bracket,
    with repeated skew entries giving zero.
    """
    target = A.symmetry if as_class is None else Symmetry.parse(as_class)
    violations = []
    skew_own = A.skew
    for (idx, d), v in A.constants.items():
        if canonical(idx, skew_own) != (idx, 1) or not v:
            violations.append(("storage", idx, d))
    skew = target.skew(A.arity)
    pairs = list(combinations(range(skew), 2))
    seen = set()
    for idx in A.table:
        for perm_idx in _orbit(idx, skew_own):
            for i, j in pairs:
                sw = list(perm_idx)
                sw[i], sw[j] = sw[j], sw[i]
                sw = tuple(sw)
                if (perm_idx, sw) in seen:
                    continue
                seen.add((perm_idx, sw))
                u = A.structure(perm_idx)
                w = A.structure(sw)
                if perm_idx[i] == perm_idx[j]:
                    if u:
                        violations.append(("repeat", perm_idx, (i + 1, j + 1)))
                    continue
                keys = set(u) | set(w)
                if any(u.get(k, 0) + w.get(k, 0) for k in keys):
                    violations.append(("swap", perm_idx, (i + 1, j + 1)))
    return SymmetryReport(A.symmetry, target, not violations, violations)


def _orbit(idx: tuple, skew: int):
    """All index tuples sharing a stored key under the own skew block."""
    head, tail = idx[:skew], idx[skew:]
    for p in set(permutations(head)):
        yield tuple(p) + tail


# ---------------------------------------------------------------------------
# change of basis

def change_basis(A: NAryAlgebra, P) -> NAryAlgebra:
    """
    Re-express ``A`` in the basis e'_i = sum_j P[j][i] e_j.

    ``P`` must be invertible; the metric, if any, transforms as P^T g P.
    """
    N = A.dim
    Pm = Matrix.from_dense(P)
    if Pm.rows != N or Pm.cols != N:
        raise DomainError("change of basis must be %dx%d" % (N, N))
    if rank(Pm) != N:
        raise DomainError("change of basis is singular")
    cols = [Pm.column(i) for i in range(N)]
    entries = []
    for key in A.all_keys():
        v = bracket(A, *[cols[i - 1] for i in key])
        if any(v):
            c = solve_in_image(Pm, v)
            entries.extend((key, d + 1, x) for d, x in enumerate(c) if x)
    metric = None
    if A.metric is not None:
        g = Matrix.from_dense(A.metric)
        metric = (Pm.transpose() @ g @ Pm).to_dense()
    return NAryAlgebra.from_entries(A.arity, N, A.symmetry, entries, metric, A.name)

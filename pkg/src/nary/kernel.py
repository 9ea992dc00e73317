"""
Exact scalar arithmetic, skew multi-index canonicalization and exact
linear algebra over the rationals.

Rows are stored sparsely as ``{column: Fraction}`` dicts. Elimination is
fraction-free: every row is scaled to a primitive integer row first and
pivots are cleared by integer cross-multiplication, so no ``Fraction`` is
created until the final back substitution.
"""

from __future__ import annotations

import os
from fractions import Fraction
from math import gcd
from typing import Iterable, NamedTuple, Optional, Sequence

Rational = Fraction

DEFAULT_SEED = 20101


class DomainError(ValueError):
    """Input outside the domain of an operation (bad index, shape, ...)."""


def to_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def rstr(x) -> str:
    """Render a rational as ``p/q`` (or ``p`` when integral)."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return "%d/%d" % (x.numerator, x.denominator)


def default_seed() -> int:
    """Seed for randomized suites, overridable through ``NARY_SEED``."""
    raw = os.environ.get("NARY_SEED")
    if raw is None or not raw.strip():
        return DEFAULT_SEED
    try:
        return int(raw.strip(), 10)
    except ValueError:
        raise DomainError("NARY_SEED must be a decimal integer, got %r" % raw)


# ---------------------------------------------------------------------------
# multi-indices

class MultiIndex(NamedTuple):
    indices: tuple
    skew_arity: int


def sort_sign(block: Sequence[int]) -> tuple[tuple[int, ...], int]:
    """Sort ``block`` ascending; return it with the permutation sign (0 on repeats)."""
    items = list(block)
    sign = 1
    # insertion sort, counting transpositions; blocks are short
    for i in range(1, len(items)):
        j = i
        while j > 0 and items[j - 1] > items[j]:
            items[j - 1], items[j] = items[j], items[j - 1]
            sign = -sign
            j -= 1
    for i in range(1, len(items)):
        if items[i] == items[i - 1]:
            return tuple(items), 0
    return tuple(items), sign


def canonical(indices: Sequence[int], skew: int) -> tuple[tuple[int, ...], int]:
    """Fast path of :func:`canonicalize` on plain tuples, no range checks."""
    if skew <= 1:
        return tuple(indices), 1
    head, sign = sort_sign(indices[:skew])
    return head + tuple(indices[skew:]), sign


def canonicalize(idx: MultiIndex, dim: Optional[int] = None) -> tuple[MultiIndex, int]:
    """
    Sort the leading skew block of ``idx``.

    Returns the canonical index and the sign of the sorting permutation.
    The sign is 0 when the skew block has a repeated entry; the returned
    index is then still sorted but represents zero.
    """
    indices = tuple(idx.indices)
    if idx.skew_arity < 0 or idx.skew_arity > len(indices):
        raise DomainError("skew arity %d out of range for %r" % (idx.skew_arity, indices))
    if dim is not None:
        for i in indices:
            if not 1 <= i <= dim:
                raise DomainError("index %d outside 1..%d" % (i, dim))
    out, sign = canonical(indices, idx.skew_arity)
    return MultiIndex(out, idx.skew_arity), sign


# ---------------------------------------------------------------------------
# matrices

class Matrix:
    """
    Exact rational matrix with sparse row storage.

    ``data[i]`` maps column index to a nonzero ``Fraction``. ``row_labels``
    optionally names each row (e.g. the argument triple a cocycle
    condition came from).
    """

    __slots__ = ("rows", "cols", "data", "row_labels")

    def __init__(self, rows: int, cols: int, data=None, row_labels=None):
        self.rows = rows
        self.cols = cols
        if data is None:
            data = [{} for _ in range(rows)]
        if len(data) != rows:
            raise DomainError("expected %d rows, got %d" % (rows, len(data)))
        self.data = [{c: Fraction(v) for c, v in r.items() if v} for r in data]
        for r in self.data:
            for c in r:
                if not 0 <= c < cols:
                    raise DomainError("column %d outside 0..%d" % (c, cols - 1))
        self.row_labels = None if row_labels is None else tuple(row_labels)

    @classmethod
    def from_dense(cls, rows) -> "Matrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != ncols:
                raise DomainError("ragged matrix")
        data = [{j: to_rational(v) for j, v in enumerate(r) if v} for r in rows]
        return cls(len(rows), ncols, data)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, [{i: Fraction(1)} for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols)

    @property
    def entries(self) -> tuple:
        """Row-major dense entries."""
        out = []
        for r in self.data:
            out.extend(r.get(j, Fraction(0)) for j in range(self.cols))
        return tuple(out)

    def to_dense(self) -> list[list[Fraction]]:
        return [[r.get(j, Fraction(0)) for j in range(self.cols)] for r in self.data]

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i].get(j, Fraction(0))

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.rows, self.cols, self.data) == (other.rows, other.cols, other.data)

    def __repr__(self):
        return "Matrix(%d, %d, nnz=%d)" % (self.rows, self.cols, self.nnz())

    def nnz(self) -> int:
        return sum(len(r) for r in self.data)

    def is_zero(self) -> bool:
        return all(not r for r in self.data)

    def max_abs(self) -> Fraction:
        return max((abs(v) for r in self.data for v in r.values()), default=Fraction(0))

    def transpose(self) -> "Matrix":
        data = [{} for _ in range(self.cols)]
        for i, r in enumerate(self.data):
            for j, v in r.items():
                data[j][i] = v
        return Matrix(self.cols, self.rows, data)

    def column(self, j: int) -> list[Fraction]:
        return [r.get(j, Fraction(0)) for r in self.data]

    def columns(self) -> list[dict[int, Fraction]]:
        """Sparse columns, as ``{row: value}`` dicts."""
        cols = [{} for _ in range(self.cols)]
        for i, r in enumerate(self.data):
            for j, v in r.items():
                cols[j][i] = v
        return cols

    def __add__(self, other: "Matrix") -> "Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DomainError("shape mismatch")
        data = [add_rows(a, b) for a, b in zip(self.data, other.data)]
        return Matrix(self.rows, self.cols, data)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + other.scale(-1)

    def scale(self, s) -> "Matrix":
        s = to_rational(s)
        return Matrix(self.rows, self.cols, [{j: s * v for j, v in r.items()} for r in self.data])

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise DomainError("shape mismatch %dx%d @ %dx%d"
                                  % (self.rows, self.cols, other.rows, other.cols))
            data = []
            for r in self.data:
                out: dict[int, Fraction] = {}
                for k, v in r.items():
                    for j, w in other.data[k].items():
                        out[j] = out.get(j, 0) + v * w
                data.append({j: x for j, x in out.items() if x})
            return Matrix(self.rows, other.cols, data)
        vec = list(other)
        if len(vec) != self.cols:
            raise DomainError("vector length %d != %d columns" % (len(vec), self.cols))
        return [sum((v * vec[j] for j, v in r.items()), Fraction(0)) for r in self.data]

    def trace(self) -> Fraction:
        return sum((self.data[i].get(i, Fraction(0)) for i in range(min(self.rows, self.cols))),
                   Fraction(0))


def add_rows(a: dict, b: dict, s=1) -> dict:
    out = dict(a)
    for j, v in b.items():
        x = out.get(j, 0) + s * v
        if x:
            out[j] = x
        else:
            out.pop(j, None)
    return out


# ---------------------------------------------------------------------------
# elimination

def _primitive(row: dict) -> Optional[dict[int, int]]:
    """Scale a rational row to a primitive integer row with positive lead."""
    row = {j: v for j, v in row.items() if v}
    if not row:
        return None
    den = 1
    for v in row.values():
        d = Fraction(v).denominator
        den = den * d // gcd(den, d)
    out = {j: int(Fraction(v) * den) for j, v in row.items()}
    return _normalize(out)


def _normalize(row: dict[int, int]) -> dict[int, int]:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    lead = row[min(row)]
    if lead < 0:
        g = -g
    if g != 1:
        row = {j: v // g for j, v in row.items()}
    return row


def _forward(rows: Iterable[dict]) -> dict[int, dict[int, int]]:
    """Integer row echelon form keyed by pivot column."""
    pivots: dict[int, dict[int, int]] = {}
    seen = set()
    for raw in rows:
        r = _primitive(raw)
        if r is None:
            continue
        key = tuple(sorted(r.items()))
        if key in seen:
            continue
        seen.add(key)
        while r:
            c = min(r)
            p = pivots.get(c)
            if p is None:
                pivots[c] = r
                break
            a, b = p[c], r[c]
            out = {j: a * v for j, v in r.items()}
            for j, v in p.items():
                x = out.get(j, 0) - b * v
                if x:
                    out[j] = x
                else:
                    out.pop(j, None)
            r = _normalize(out) if out else out
    return pivots


def rref(rows: Iterable[dict]) -> dict[int, dict[int, Fraction]]:
    """
    Reduced row echelon form of the span of ``rows``.

    Returns ``{pivot column: row}`` with each row having 1 at its pivot and
    0 at every other pivot column. The result depends only on the row
    space, never on the input order.
    """
    pivots = _forward(rows)
    order = sorted(pivots)
    red: dict[int, dict[int, Fraction]] = {}
    for c in reversed(order):
        r = pivots[c]
        lead = r[c]
        row = {j: Fraction(v, lead) for j, v in r.items()}
        # clear later pivots (already reduced)
        for j in [j for j in row if j != c and j in red]:
            row = add_rows(row, red[j], -row[j])
        red[c] = row
    return {c: red[c] for c in order}


def rank(m: Matrix) -> int:
    return len(_forward(m.data))


def kernel_from_rref(red: dict[int, dict[int, Fraction]], ncols: int) -> list[list[Fraction]]:
    free = [j for j in range(ncols) if j not in red]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for c, row in red.items():
            x = row.get(f)
            if x:
                v[c] = -x
        basis.append(v)
    return echelon_vectors(basis, ncols)


def echelon_vectors(vectors, ncols: int) -> list[list[Fraction]]:
    """RREF basis of the span of dense ``vectors``."""
    red = rref({j: v for j, v in enumerate(vec) if v} for vec in vectors)
    return [[row.get(j, Fraction(0)) for j in range(ncols)] for row in red.values()]


def rank_and_kernel(m: Matrix) -> tuple[int, list[list[Fraction]]]:
    """Rank of ``m`` and a kernel basis in reduced echelon form."""
    red = rref(m.data)
    return len(red), kernel_from_rref(red, m.cols)


def solve_in_image(m: Matrix, rhs: Sequence) -> Optional[list[Fraction]]:
    """
    Some ``x`` with ``m @ x == rhs``, or ``None`` when ``rhs`` is not in
    the column space. Free variables are set to zero.
    """
    rhs = [to_rational(v) for v in rhs]
    if len(rhs) != m.rows:
        raise DomainError("rhs length %d != %d rows" % (len(rhs), m.rows))
    n = m.cols
    aug = []
    for r, b in zip(m.data, rhs):
        row = dict(r)
        if b:
            row[n] = b
        aug.append(row)
    red = rref(aug)
    if n in red:
        return None
    x = [Fraction(0)] * n
    for c, row in red.items():
        x[c] = row.get(n, Fraction(0))
    return x


def in_span(basis: Sequence[Sequence], v: Sequence) -> bool:
    """Whether dense vector ``v`` lies in the span of dense ``basis``."""
    if not basis:
        return not any(v)
    m = Matrix.from_dense(list(zip(*basis)))
    return solve_in_image(m, v) is not None


def reduce_modulo(v: Sequence, red: dict[int, dict[int, Fraction]]) -> list[Fraction]:
    """Normal form of ``v`` modulo the row space in RREF ``red``."""
    out = {j: Fraction(x) for j, x in enumerate(v) if x}
    for c, row in red.items():
        x = out.get(c)
        if x:
            out = add_rows(out, row, -x)
    return [out.get(j, Fraction(0)) for j in range(len(v))]

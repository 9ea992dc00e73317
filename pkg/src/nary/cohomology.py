"""
First cohomology of Filippov algebras for central extensions (trivial
action) and infinitesimal deformations (adjoint action).

A one-cochain alpha(X, Z) takes a fundamental object X = (X_1..X_{n-1})
and a vector Z. In the ``FULL`` class it is antisymmetric in all n
arguments; in the restricted ``FIRST`` class only in the first n-1, which
is the class of n-Leibniz deformations keeping fundamental objects
skew. Zero-cochains are linear forms (trivial) or endomorphisms
(adjoint).

Coordinates. Degree-1 columns follow ``A.all_keys(symmetry)``; adjoint
cochains add a target index d, column ``key_index * N + d - 1``.
Degree-0 adjoint beta(e_a) = sum_m beta_a^m e_m sits at ``(a-1)*N + m-1``.
Degree-2 rows (the cocycle conditions) are labelled ``(X, Y, Z)`` or
``(X, Y, Z, d)`` with X, Y canonical fundamental objects.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

from .kernel import (DomainError, Matrix, echelon_vectors, rank_and_kernel, reduce_modulo,
                     rref, sort_sign, to_rational)
from .nalg import NAryAlgebra, Symmetry, fi_residual


class Action(enum.Enum):
    TRIVIAL = "trivial"
    ADJOINT = "adjoint"

    @classmethod
    def parse(cls, s) -> "Action":
        if isinstance(s, Action):
            return s
        try:
            return cls(str(s).strip().lower())
        except ValueError:
            raise DomainError("unknown action %r" % s)


class CohomologyError(RuntimeError):
    """Assembly produced B^1 not inside Z^1: a bug, never an input problem."""


class NotACocycle(DomainError):
    def __init__(self, label, value):
        super().__init__("cochain violates the cocycle condition at %r (residual %s)"
                         % (label, value))
        self.label = label
        self.value = value


@dataclass(frozen=True, eq=False)
class ComplexSpec:
    action: Action
    symmetry: Symmetry
    algebra: NAryAlgebra
    check: bool = True

    def __post_init__(self):
        object.__setattr__(self, "action", Action.parse(self.action))
        object.__setattr__(self, "symmetry", Symmetry.parse(self.symmetry))
        if self.symmetry is Symmetry.NONE:
            raise DomainError("cochains over unrestricted tensors are not supported")
        if self.algebra.symmetry is not Symmetry.FULL:
            raise DomainError("complexes are built over Filippov (fully skew) algebras")
        if self.check and not fi_residual(self.algebra).ok:
            raise DomainError("algebra %s violates the Filippov identity"
                              % (self.algebra.name or "?"))

    @property
    def label(self) -> str:
        return "%s/%s" % (self.action.value,
                          "full" if self.symmetry is Symmetry.FULL else "restricted")

    # -- coordinates ------------------------------------------------------

    @cached_property
    def keys(self) -> list[tuple]:
        return self.algebra.all_keys(self.symmetry)

    @cached_property
    def key_index(self) -> dict[tuple, int]:
        return {k: i for i, k in enumerate(self.keys)}

    @property
    def width(self) -> int:
        """Coordinates per argument key (1 for trivial, N for adjoint)."""
        return 1 if self.action is Action.TRIVIAL else self.algebra.dim

    @property
    def c0_dim(self) -> int:
        N = self.algebra.dim
        return N if self.action is Action.TRIVIAL else N * N

    @property
    def c1_dim(self) -> int:
        return len(self.keys) * self.width

    def locate(self, s: tuple, z: int) -> tuple[int, int]:
        """Key index and sign of alpha(e_S, e_z); sign 0 when it vanishes."""
        if self.symmetry is Symmetry.FULL:
            key, sign = sort_sign(s + (z,))
        else:
            key, sign = sort_sign(s)
            key = key + (z,)
        if not sign:
            return -1, 0
        return self.key_index[key], sign

    def c1_label(self, col: int) -> tuple:
        if self.action is Action.TRIVIAL:
            return self.keys[col]
        N = self.algebra.dim
        return self.keys[col // N] + (col % N + 1,)

    def row_labels(self) -> list[tuple]:
        A = self.algebra
        fund = A.fundamental_basis
        out = []
        for x in fund:
            for y in fund:
                for z in range(1, A.dim + 1):
                    if self.action is Action.TRIVIAL:
                        out.append((x, y, z))
                    else:
                        out.extend((x, y, z, d) for d in range(1, A.dim + 1))
        return out


# ---------------------------------------------------------------------------
# matrices

def _acc(row: dict, col: int, v):
    x = row.get(col, 0) + v
    if x:
        row[col] = x
    else:
        row.pop(col, None)


def coboundary_matrix_trivial(spec: ComplexSpec) -> Matrix:
    """delta beta (X, Z) = -beta(X . Z), as a C1 x C0 matrix."""
    _expect(spec, Action.TRIVIAL)
    A = spec.algebra
    data = []
    for key in spec.keys:
        x, z = key[:-1], key[-1]
        row = {}
        for l, v in _ad(A, x, z).items():
            _acc(row, l - 1, -v)
        data.append(row)
    return Matrix(len(data), spec.c0_dim, data)


def cocycle_matrix_trivial(spec: ComplexSpec) -> Matrix:
    """delta alpha (X, Y, Z) = alpha(X, Y.Z) - alpha(X.Y, Z) - alpha(Y, X.Z)."""
    _expect(spec, Action.TRIVIAL)
    A = spec.algebra
    fund = A.fundamental_basis
    comp = A.compose_table
    data = []
    for x in fund:
        for y in fund:
            xy = comp.get((x, y), {})
            for z in range(1, A.dim + 1):
                row: dict = {}
                for l, v in _ad(A, y, z).items():
                    k, s = spec.locate(x, l)
                    if s:
                        _acc(row, k, s * v)
                for t, c in xy.items():
                    k, s = spec.locate(t, z)
                    if s:
                        _acc(row, k, -s * c)
                for l, v in _ad(A, x, z).items():
                    k, s = spec.locate(y, l)
                    if s:
                        _acc(row, k, -s * v)
                data.append(row)
    return Matrix(len(data), spec.c1_dim, data, spec.row_labels())


def coboundary_matrix_adjoint(spec: ComplexSpec) -> Matrix:
    """
    delta beta (X, Z) = -beta(X.Z) + (beta(.) . X) . Z + X . beta(Z)

    where (beta(.) . X) = sum_a (X_1, .., beta(X_a), .., X_{n-1}).
    """
    _expect(spec, Action.ADJOINT)
    A = spec.algebra
    N = A.dim
    data = []
    for key in spec.keys:
        x, z = key[:-1], key[-1]
        rows = {d: {} for d in range(1, N + 1)}
        # -beta(X.Z)
        for l, v in _ad(A, x, z).items():
            for d in range(1, N + 1):
                _acc(rows[d], (l - 1) * N + d - 1, -v)
        # (beta(.) . X) . Z
        for a, xa in enumerate(x):
            for m in range(1, N + 1):
                t, sign = sort_sign(x[:a] + (m,) + x[a + 1:])
                if not sign:
                    continue
                for d, w in _ad(A, t, z).items():
                    _acc(rows[d], (xa - 1) * N + m - 1, sign * w)
        # X . beta(Z)
        for m in range(1, N + 1):
            for d, w in _ad(A, x, m).items():
                _acc(rows[d], (z - 1) * N + m - 1, w)
        data.extend(rows[d] for d in range(1, N + 1))
    return Matrix(len(data), spec.c0_dim, data)


def cocycle_matrix_adjoint(spec: ComplexSpec) -> Matrix:
    """
    delta alpha (X, Y, Z) = ad_X alpha(Y, Z) - ad_Y alpha(X, Z)
        - (alpha(X, .) . Y) . Z - alpha(X.Y, Z) - alpha(Y, X.Z) + alpha(X, Y.Z)

    with (alpha(X, .) . Y) = sum_a (Y_1, .., alpha(X, Y_a), .., Y_{n-1}).
    """
    _expect(spec, Action.ADJOINT)
    A = spec.algebra
    N = A.dim
    fund = A.fundamental_basis
    comp = A.compose_table
    data = []

    def put(rows, s_, z_, m, d, v):
        # add v * alpha(e_s_, e_z_)^m to component d
        k, sign = spec.locate(s_, z_)
        if sign:
            _acc(rows[d], k * N + m - 1, sign * v)

    for x in fund:
        for y in fund:
            xy = comp.get((x, y), {})
            for z in range(1, N + 1):
                rows = {d: {} for d in range(1, N + 1)}
                for m in range(1, N + 1):
                    # ad_X alpha(Y,Z) - ad_Y alpha(X,Z)
                    for d, w in _ad(A, x, m).items():
                        put(rows, y, z, m, d, w)
                    for d, w in _ad(A, y, m).items():
                        put(rows, x, z, m, d, -w)
                    # -(alpha(X, .) . Y) . Z
                    for a, ya in enumerate(y):
                        t, sign = sort_sign(y[:a] + (m,) + y[a + 1:])
                        if not sign:
                            continue
                        for d, w in _ad(A, t, z).items():
                            put(rows, x, ya, m, d, -sign * w)
                for d in range(1, N + 1):
                    for t, c in xy.items():
                        put(rows, t, z, d, d, -c)
                    for l, v in _ad(A, x, z).items():
                        put(rows, y, l, d, d, -v)
                    for l, v in _ad(A, y, z).items():
                        put(rows, x, l, d, d, v)
                data.extend(rows[d] for d in range(1, N + 1))
    return Matrix(len(data), spec.c1_dim, data, spec.row_labels())


def _ad(A: NAryAlgebra, s: tuple, z: int) -> dict:
    return A.ad_table[s].get(z, {})


def _expect(spec: ComplexSpec, action: Action):
    if spec.action is not action:
        raise DomainError("expected a %s complex, got %s" % (action.value, spec.action.value))


def coboundary_matrix(spec: ComplexSpec) -> Matrix:
    if spec.action is Action.TRIVIAL:
        return coboundary_matrix_trivial(spec)
    return coboundary_matrix_adjoint(spec)


def cocycle_matrix(spec: ComplexSpec) -> Matrix:
    if spec.action is Action.TRIVIAL:
        return cocycle_matrix_trivial(spec)
    return cocycle_matrix_adjoint(spec)


def delta_square_residual(spec: ComplexSpec) -> Fraction:
    """Largest entry of delta o delta on degree-0 cochains (must be 0)."""
    return (cocycle_matrix(spec) @ coboundary_matrix(spec)).max_abs()


# ---------------------------------------------------------------------------
# cochains

@dataclass(frozen=True, eq=False)
class Cochain:
    spec: ComplexSpec
    degree: int
    coefficients: tuple

    def __post_init__(self):
        want = {0: self.spec.c0_dim, 1: self.spec.c1_dim}.get(self.degree)
        if want is None:
            raise DomainError("only degree 0 and 1 cochains are stored")
        if len(self.coefficients) != want:
            raise DomainError("degree-%d cochain needs %d coefficients, got %d"
                              % (self.degree, want, len(self.coefficients)))
        object.__setattr__(self, "coefficients",
                           tuple(to_rational(c) for c in self.coefficients))

    @classmethod
    def from_function(cls, spec: ComplexSpec, fn) -> "Cochain":
        """
        Degree-1 cochain from ``fn(indices)``, called on canonical argument
        tuples; returns a scalar (trivial) or a ``{d: value}`` map (adjoint).
        """
        coeffs = []
        N = spec.algebra.dim
        for key in spec.keys:
            v = fn(key)
            if spec.action is Action.TRIVIAL:
                coeffs.append(to_rational(v))
            else:
                v = v or {}
                coeffs.extend(to_rational(v.get(d, 0)) for d in range(1, N + 1))
        return cls(spec, 1, tuple(coeffs))

    def value(self, *indices: int):
        """alpha(e_i1, .., e_in): a scalar or a coordinate vector."""
        spec = self.spec
        N = spec.algebra.dim
        if self.degree == 0:
            (a,) = indices
            if spec.action is Action.TRIVIAL:
                return self.coefficients[a - 1]
            return list(self.coefficients[(a - 1) * N:a * N])
        if len(indices) != spec.algebra.arity:
            raise DomainError("expected %d arguments" % spec.algebra.arity)
        k, sign = spec.locate(tuple(indices[:-1]), indices[-1])
        w = spec.width
        if not sign:
            return Fraction(0) if w == 1 else [Fraction(0)] * N
        if w == 1:
            return sign * self.coefficients[k]
        return [sign * c for c in self.coefficients[k * N:(k + 1) * N]]

    def items(self):
        """Nonzero coordinates as ``(label, value)``."""
        for i, c in enumerate(self.coefficients):
            if c:
                yield (self.spec.c1_label(i) if self.degree == 1 else i), c

    def is_zero(self) -> bool:
        return not any(self.coefficients)


def coboundary(beta: Cochain) -> Cochain:
    if beta.degree != 0:
        raise DomainError("coboundary expects a zero-cochain")
    m = coboundary_matrix(beta.spec)
    return Cochain(beta.spec, 1, tuple(m @ beta.coefficients))


def cocycle_violation(alpha: Cochain) -> Optional[tuple]:
    """First violated cocycle row as ``(label, value)``, or None."""
    m = cocycle_matrix(alpha.spec)
    for label, v in zip(m.row_labels, m @ alpha.coefficients):
        if v:
            return label, v
    return None


def is_cocycle(alpha: Cochain) -> bool:
    return cocycle_violation(alpha) is None


# ---------------------------------------------------------------------------
# H^1

@dataclass
class CohomologyReport:
    spec: ComplexSpec
    c0: int
    c1: int
    z1: int
    b1: int
    h1: int
    representatives: list = field(default_factory=list)
    fi_flags: list = field(default_factory=list)

    def dims(self) -> tuple:
        return self.c1, self.z1, self.b1, self.h1


class H1:
    """H^1 of a complex, keeping the echelon data needed for class tests."""

    def __init__(self, spec: ComplexSpec):
        self.spec = spec
        self.cocycle = cocycle_matrix(spec)
        self.cobound = coboundary_matrix(spec)
        if not (self.cocycle @ self.cobound).is_zero():
            raise CohomologyError("image of delta^0 is not annihilated by delta^1 (%s)"
                                  % spec.label)
        self.rank_cocycle, self.z_basis = rank_and_kernel(self.cocycle)
        self.b_rref = rref(self.cobound.columns())

    @property
    def b1(self) -> int:
        return len(self.b_rref)

    def normal_form(self, alpha: Sequence) -> list[Fraction]:
        """Canonical representative of alpha + B^1 (zero on the B^1 pivots)."""
        return reduce_modulo(alpha, self.b_rref)

    def is_coboundary(self, alpha: Sequence) -> bool:
        return not any(self.normal_form(alpha))

    def representatives(self) -> list[list[Fraction]]:
        residues = [self.normal_form(z) for z in self.z_basis]
        return echelon_vectors(residues, self.spec.c1_dim)

    def report(self, flags: bool = True) -> CohomologyReport:
        spec = self.spec
        reps = self.representatives()
        z1 = len(self.z_basis)
        if len(reps) != z1 - self.b1:
            raise CohomologyError("H^1 representatives inconsistent with dimensions")
        cochains = [Cochain(spec, 1, tuple(r)) for r in reps]
        fi = []
        if flags:
            for c in cochains:
                if spec.action is Action.ADJOINT:
                    fi.append(deform(spec.algebra, c, 1, check_first_order=False).exact_fi_ok)
                else:
                    fi.append(fi_residual(central_extend(spec.algebra, c, verify=False)).ok)
        return CohomologyReport(spec, spec.c0_dim, spec.c1_dim, z1, self.b1,
                                z1 - self.b1, cochains, fi)


def h1(algebra: NAryAlgebra, action="trivial", symmetry="full", flags: bool = True) -> CohomologyReport:
    return H1(ComplexSpec(Action.parse(action), Symmetry.parse(symmetry), algebra)).report(flags)


# ---------------------------------------------------------------------------
# extensions and deformations

def leibniz_cocycle(A: NAryAlgebra, symmetry="restricted") -> Cochain:
    """
    The restricted 3-Leibniz deformation cocycle of a simple 3-Lie algebra,

        alpha(e_a1, e_a2, e_c)^d = 2 eps_c (delta_{a1 c} delta_{a2 d} - delta_{a1 d} delta_{a2 c}),

    i.e. alpha(X_1, X_2, Z) = 2 (<X_1, Z> X_2 - <X_2, Z> X_1) for the metric diag(eps).
    """
    from .catalog import simple_signature
    if A.arity != 3:
        raise DomainError("the cocycle exists for arity 3 only")
    sig = simple_signature(A)
    if sig is None:
        raise DomainError("algebra is not a simple 3-Lie algebra in standard form")
    spec = ComplexSpec(Action.ADJOINT, Symmetry.parse(symmetry), A, check=False)

    def coords(key):
        a1, a2, c = key
        out = {}
        if a1 == c:
            out[a2] = out.get(a2, 0) + 2 * sig[c - 1]
        if a2 == c:
            out[a1] = out.get(a1, 0) - 2 * sig[c - 1]
        return out

    return Cochain.from_function(spec, coords)


def central_extend(A: NAryAlgebra, alpha: Cochain, verify: bool = True) -> NAryAlgebra:
    """
    Algebra on e_1..e_N plus a central e_{N+1}, bracket shifted by alpha e_{N+1}.

    With ``verify`` the cochain must be a cocycle (otherwise ``NotACocycle``
    names the violated triple) and the result is re-checked for the FI.
    """
    spec = alpha.spec
    if spec.action is not Action.TRIVIAL or alpha.degree != 1:
        raise DomainError("central extensions take scalar one-cochains")
    if verify:
        bad = cocycle_violation(alpha)
        if bad is not None:
            raise NotACocycle(*bad)
    base = A.recast(spec.symmetry)
    N = A.dim
    entries = [(idx, d, v) for (idx, d), v in base.constants.items()]
    for key, v in zip(spec.keys, alpha.coefficients):
        if v:
            entries.append((key, N + 1, v))
    out = NAryAlgebra.from_entries(A.arity, N + 1, spec.symmetry, entries,
                                   name="%s~" % (A.name or "ext"))
    if verify and not fi_residual(out).ok:
        raise CohomologyError("extension by a cocycle violates the FI")
    return out


@dataclass
class Deformation:
    algebra: NAryAlgebra
    first_order_ok: Optional[bool]
    exact_fi_ok: bool

    def __iter__(self):
        return iter((self.algebra, self.first_order_ok, self.exact_fi_ok))


def deform(A: NAryAlgebra, alpha: Cochain, t=1, check_first_order: bool = True) -> Deformation:
    """Constants f + t alpha, with the first-order and exact FI status."""
    spec = alpha.spec
    if spec.action is not Action.ADJOINT or alpha.degree != 1:
        raise DomainError("deformations take algebra-valued one-cochains")
    t = to_rational(t)
    N = A.dim
    base = A.recast(spec.symmetry)
    acc = dict(base.constants)
    for i, v in enumerate(alpha.coefficients):
        if v and t:
            k = (spec.keys[i // N], i % N + 1)
            acc[k] = acc.get(k, 0) + t * v
    constants = {k: v for k, v in acc.items() if v}
    out = NAryAlgebra(A.arity, N, spec.symmetry, constants, None,
                      "%s+t*alpha" % (A.name or "?"))
    first = is_cocycle(alpha) if check_first_order else None
    return Deformation(out, first, fi_residual(out).ok)

"""
Generalized Jacobi identity for even-arity, fully antisymmetric structure
constants. The same residual decides whether the linear multivector built
from the constants is a generalized Poisson tensor.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Mapping

from .kernel import DomainError, sort_sign
from .nalg import NAryAlgebra, Residual, Symmetry


class UnsupportedArity(DomainError):
    pass


@dataclass(frozen=True, eq=False)
class GLATensor:
    arity: int
    dim: int
    constants: Mapping        # canonical (i_1 < .. < i_n, j) -> Omega

    def __post_init__(self):
        if self.arity < 2 or self.arity % 2:
            raise UnsupportedArity("GJI checks need even arity, got %d" % self.arity)
        for (idx, j), v in self.constants.items():
            if sort_sign(idx) != (idx, 1) or len(idx) != self.arity:
                raise DomainError("non-canonical GLA key %r" % (idx,))

    @classmethod
    def from_algebra(cls, A: NAryAlgebra) -> "GLATensor":
        if A.symmetry is not Symmetry.FULL:
            raise DomainError("GLA constants must be fully antisymmetric")
        return cls(A.arity, A.dim, dict(A.constants))

    def omega(self, idx) -> dict[int, Fraction]:
        key, sign = sort_sign(idx)
        if not sign:
            return {}
        out = {}
        for j in range(1, self.dim + 1):
            v = self.constants.get((key, j))
            if v:
                out[j] = sign * v
        return out

    def scaled(self, lam) -> "GLATensor":
        lam = Fraction(lam)
        return GLATensor(self.arity, self.dim,
                         {k: lam * v for k, v in self.constants.items() if lam * v})


def gji_residual(omega) -> Residual:
    """
    Antisymmetrized contraction Omega_[J_A]^l Omega_{J_B] l}^s over every
    increasing block J of 2n-1 indices, summed over the splits of J into
    an n-subset A and the remaining (n-1)-subset B with the shuffle sign.
    The common factor n!(n-1)! of the full permutation sum is dropped.
    Witnesses are ``(J, s, value)``.
    """
    if isinstance(omega, NAryAlgebra):
        omega = GLATensor.from_algebra(omega)
    n, M = omega.arity, omega.dim
    if n % 2:
        raise UnsupportedArity("mixed GJI for odd arity is not supported")
    worst = Fraction(0)
    witnesses = []
    cache: dict = {}

    def om(idx):
        if idx not in cache:
            cache[idx] = omega.omega(idx)
        return cache[idx]

    for J in combinations(range(1, M + 1), 2 * n - 1):
        res: dict[int, Fraction] = {}
        for pos in combinations(range(2 * n - 1), n):
            rest = [i for i in range(2 * n - 1) if i not in pos]
            _, sign = sort_sign(pos + tuple(rest))  # shuffle sign of (A, B) in J
            a = tuple(J[i] for i in pos)
            b = tuple(J[i] for i in rest)
            for l, v in om(a).items():
                for s, w in om(b + (l,)).items():
                    res[s] = res.get(s, 0) + sign * v * w
        for s in sorted(res):
            if res[s]:
                witnesses.append((J, s, res[s]))
                worst = max(worst, abs(res[s]))
    return Residual(worst, witnesses)


def is_linear_gps(omega) -> bool:
    """Whether the linear multivector with coefficients Omega is a GPS tensor."""
    return gji_residual(omega).ok

"""
Concrete algebras: the simple Filippov algebras A_{n+1} and their
Lorentzian forms A_{s,t}, abelian algebras and direct sums, plus the
name grammar used by the command line (``A4``, ``A_1_3``, ``so3``,
``abelian:3:4``, ``sum:A4:abelian:3:1``).
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Optional, Sequence

from .kernel import DomainError
from .nalg import NAryAlgebra, Symmetry, fi_residual


def simple_fa(n: int, signature: Sequence[int], name: str = "") -> NAryAlgebra:
    """
    The (n+1)-dimensional simple FA with sign factors ``signature``:

        [e_1 .. ^e_a .. e_{n+1}] = (-1)^(a+1) eps_a e_a

    The invariant metric diag(eps) is attached.
    """
    if n < 2:
        raise DomainError("arity must be >= 2")
    sig = [int(s) for s in signature]
    if len(sig) != n + 1 or any(s not in (1, -1) for s in sig):
        raise DomainError("signature must be %d entries of +1/-1" % (n + 1))
    entries = []
    for a in range(1, n + 2):
        key = tuple(i for i in range(1, n + 2) if i != a)
        entries.append((key, a, (-1) ** (a + 1) * sig[a - 1]))
    metric = [[Fraction(sig[i]) if i == j else Fraction(0) for j in range(n + 1)]
              for i in range(n + 1)]
    if not name:
        s = sig.count(-1)
        name = "A%d" % (n + 1) if s == 0 else "A_%d_%d" % (s, n + 1 - s)
    A = NAryAlgebra.from_entries(n, n + 1, Symmetry.FULL, entries, metric, name)
    assert fi_residual(A).ok, "simple FA %s fails the FI" % name
    return A


def lorentzian(s: int, t: int) -> NAryAlgebra:
    """A_{s,t}: s negative then t positive sign factors, arity s+t-1."""
    if s < 0 or t < 0 or s + t < 3:
        raise DomainError("A_{s,t} needs s+t >= 3")
    return simple_fa(s + t - 1, [-1] * s + [1] * t, name="A_%d_%d" % (s, t))


def so3() -> NAryAlgebra:
    return simple_fa(2, [1, 1, 1], name="so3")


def so12() -> NAryAlgebra:
    return simple_fa(2, [-1, 1, 1], name="so12")


def abelian(n: int, dim: int) -> NAryAlgebra:
    if n < 2 or dim < 1:
        raise DomainError("abelian algebra needs n >= 2, N >= 1")
    return NAryAlgebra(n, dim, Symmetry.FULL, {}, None, "abelian:%d:%d" % (n, dim))


def direct_sum(A: NAryAlgebra, B: NAryAlgebra) -> NAryAlgebra:
    """Block algebra on dim(A)+dim(B); B's basis is shifted past A's."""
    if A.arity != B.arity:
        raise DomainError("arity mismatch: %d vs %d" % (A.arity, B.arity))
    if A.symmetry is not B.symmetry:
        raise DomainError("symmetry mismatch: %s vs %s" % (A.symmetry.value, B.symmetry.value))
    off = A.dim
    constants = dict(A.constants)
    for (idx, d), v in B.constants.items():
        constants[(tuple(i + off for i in idx), d + off)] = v
    metric = None
    if A.metric is not None and B.metric is not None:
        N = A.dim + B.dim
        g = [[Fraction(0)] * N for _ in range(N)]
        for i in range(A.dim):
            for j in range(A.dim):
                g[i][j] = A.metric[i][j]
        for i in range(B.dim):
            for j in range(B.dim):
                g[off + i][off + j] = B.metric[i][j]
        metric = tuple(tuple(r) for r in g)
    name = "sum:%s:%s" % (A.name or "?", B.name or "?")
    return NAryAlgebra(A.arity, A.dim + B.dim, A.symmetry, constants, metric, name)


def simple_signature(A: NAryAlgebra) -> Optional[list[int]]:
    """The sign factors if ``A`` is literally ``simple_fa(n, sig)``, else None."""
    n = A.arity
    if A.dim != n + 1 or A.symmetry is not Symmetry.FULL:
        return None
    sig = []
    for a in range(1, n + 2):
        key = tuple(i for i in range(1, n + 2) if i != a)
        v = A.table.get(key, {})
        if set(v) != {a} or abs(v[a]) != 1:
            return None
        sig.append(int(v[a] * (-1) ** (a + 1)))
    if len(A.constants) != n + 1:
        return None
    return sig


# ---------------------------------------------------------------------------
# names

_SIMPLE = re.compile(r"^A(\d+)$")
_LORENTZ = re.compile(r"^A_(\d+)_(\d+)$")


def _parse(tokens: list[str], pos: int) -> tuple[NAryAlgebra, int]:
    if pos >= len(tokens):
        raise DomainError("unexpected end of algebra name")
    tok = tokens[pos]
    if tok == "sum":
        a, pos = _parse(tokens, pos + 1)
        b, pos = _parse(tokens, pos)
        return direct_sum(a, b), pos
    if tok == "abelian":
        try:
            n, N = int(tokens[pos + 1]), int(tokens[pos + 2])
        except (IndexError, ValueError):
            raise DomainError("expected abelian:n:N")
        return abelian(n, N), pos + 3
    if tok == "so3":
        return so3(), pos + 1
    if tok == "so12":
        return so12(), pos + 1
    m = _SIMPLE.match(tok)
    if m:
        N = int(m.group(1))
        if N < 3:
            raise DomainError("A%d does not exist; need N >= 3" % N)
        return simple_fa(N - 1, [1] * N), pos + 1
    m = _LORENTZ.match(tok)
    if m:
        return lorentzian(int(m.group(1)), int(m.group(2))), pos + 1
    raise DomainError("unknown catalog name %r" % tok)


def from_name(name: str) -> NAryAlgebra:
    """Resolve a catalog name such as ``sum:A4:abelian:3:1``."""
    tokens = name.strip().split(":")
    A, pos = _parse(tokens, 0)
    if pos != len(tokens):
        raise DomainError("trailing tokens in %r" % name)
    return A.renamed(name.strip())


def is_catalog_name(name: str) -> bool:
    try:
        from_name(name)
    except DomainError:
        return False
    return True

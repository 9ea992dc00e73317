"""
Exact multivariate polynomials over Q and the Jacobian n-bracket on them.

The bracket of n polynomials in n variables is the determinant of their
Jacobian matrix, expanded by cofactors so that no division ever occurs.
The residual functions return polynomials that must vanish identically.
"""

from __future__ import annotations

import random
import re
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

from .kernel import DomainError, rstr, to_rational


class ParseError(DomainError):
    def __init__(self, msg: str, text: str, pos: int):
        super().__init__("%s at position %d in %r" % (msg, pos, text))
        self.pos = pos


class Polynomial:
    """Sparse polynomial: exponent tuple -> nonzero Fraction."""

    __slots__ = ("vars", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping = None):
        self.vars = tuple(variables)
        self.terms = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != len(self.vars) or any(k < 0 for k in e):
                raise DomainError("bad exponent %r for variables %r" % (e, self.vars))
            c = to_rational(c)
            if c:
                self.terms[e] = self.terms.get(e, 0) + c
        self.terms = {e: c for e, c in self.terms.items() if c}

    # -- constructors ----------------------------------------------------

    @classmethod
    def constant(cls, variables, c) -> "Polynomial":
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, variables, name: str) -> "Polynomial":
        variables = tuple(variables)
        if name not in variables:
            raise DomainError("unknown variable %r" % name)
        e = tuple(1 if v == name else 0 for v in variables)
        return cls(variables, {e: 1})

    @classmethod
    def parse(cls, text: str, variables: Sequence[str]) -> "Polynomial":
        return _Parser(text, tuple(variables)).parse()

    # -- arithmetic ------------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.vars != self.vars:
                raise DomainError("variable mismatch %r vs %r" % (self.vars, other.vars))
            return other
        return Polynomial.constant(self.vars, other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Polynomial(self.vars, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = to_rational(other)
            return Polynomial(self.vars, {e: c * v for e, v in self.terms.items()})
        other = self._coerce(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Polynomial(self.vars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise DomainError("negative power")
        out = Polynomial.constant(self.vars, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.vars == other.vars and self.terms == other.terms
        return self == self._coerce(other)

    def __hash__(self):
        return hash((self.vars, tuple(sorted(self.terms.items()))))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def diff(self, name: str) -> "Polynomial":
        try:
            i = self.vars.index(name)
        except ValueError:
            raise DomainError("unknown variable %r" % name)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                out[e[:i] + (e[i] - 1,) + e[i + 1:]] = c * e[i]
        return Polynomial(self.vars, out)

    def evaluate(self, point: Mapping) -> Fraction:
        total = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for v, k in zip(self.vars, e):
                t *= to_rational(point[v]) ** k
            total += t
        return total

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=lambda e: (-sum(e), tuple(-k for k in e))):
            c = self.terms[e]
            mono = "*".join(v if k == 1 else "%s^%d" % (v, k)
                            for v, k in zip(self.vars, e) if k)
            mag = abs(c)
            if not mono:
                body = rstr(mag)
            elif mag == 1:
                body = mono
            else:
                body = "%s*%s" % (rstr(mag), mono)
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += " %s %s" % (sign, body)
        return s

    def __repr__(self):
        return "Polynomial(%r)" % str(self)


# ---------------------------------------------------------------------------
# parser: expr := term (('+'|'-') term)*, term := factor ('*' factor)*,
# factor := ('-'|'+') factor | atom ('^' int)?, atom := number | name | '(' expr ')'

_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


class _Parser:
    def __init__(self, text: str, variables: tuple):
        self.text = text
        self.vars = variables
        self.toks = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None or m.end() == pos:
                break
            if m.group(1) is not None:
                self.toks.append(("num", m.group(1), m.start(1)))
            elif m.group(2) is not None:
                self.toks.append(("name", m.group(2), m.start(2)))
            elif m.group(3) is not None:
                self.toks.append(("op", m.group(3), m.start(3)))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("end", "", len(self.text))

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def fail(self, msg):
        raise ParseError(msg, self.text, self.peek()[2])

    def parse(self) -> Polynomial:
        if not self.toks:
            self.fail("empty polynomial")
        p = self.expr()
        if self.peek()[0] != "end":
            self.fail("unexpected %r" % self.peek()[1])
        return p

    def expr(self):
        p = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self):
        p = self.factor()
        while self.peek()[:2] == ("op", "*"):
            self.take()
            p = p * self.factor()
        return p

    def factor(self):
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return -self.factor()
        if self.peek()[:2] == ("op", "+"):
            self.take()
            return self.factor()
        p = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            kind, val, _ = self.peek()
            if kind != "num" or "/" in val:
                self.fail("expected integer exponent")
            self.take()
            p = p ** int(val)
        return p

    def atom(self):
        kind, val, pos = self.peek()
        if kind == "num":
            self.take()
            return Polynomial.constant(self.vars, Fraction(val))
        if kind == "name":
            if val not in self.vars:
                self.fail("unknown variable %r" % val)
            self.take()
            return Polynomial.var(self.vars, val)
        if (kind, val) == ("op", "("):
            self.take()
            p = self.expr()
            if self.peek()[:2] != ("op", ")"):
                self.fail("expected ')'")
            self.take()
            return p
        self.fail("unexpected %s" % (repr(val) if val else "end of input"))


# ---------------------------------------------------------------------------
# brackets

def _det(rows: list[list[Polynomial]], zero: Polynomial) -> Polynomial:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = zero
    for j in range(n):
        a = rows[0][j]
        if not a:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = a * _det(minor, zero)
        total = total + term if j % 2 == 0 else total - term
    return total


def jacobian_bracket(fs: Sequence[Polynomial], variables: Sequence[str] = None) -> Polynomial:
    """det(d f_i / d x_j): the Nambu n-bracket of n polynomials in n variables."""
    fs = list(fs)
    if not fs:
        raise DomainError("bracket of no functions")
    variables = tuple(fs[0].vars if variables is None else variables)
    if len(variables) != len(fs):
        raise DomainError("%d functions need %d variables, got %d"
                          % (len(fs), len(fs), len(variables)))
    for f in fs:
        if f.vars != variables:
            raise DomainError("polynomial over %r, expected %r" % (f.vars, variables))
    rows = [[f.diff(v) for v in variables] for f in fs]
    return _det(rows, Polynomial(variables))


def np_fi_residual(fs: Sequence[Polynomial], gs: Sequence[Polynomial]) -> Polynomial:
    """{f, {g_1..g_n}} - sum_a {g_1, .., {f, g_a}, .., g_n} for n-1 functions f."""
    fs, gs = list(fs), list(gs)
    n = len(gs)
    if len(fs) != n - 1:
        raise DomainError("need n-1 = %d functions f, got %d" % (n - 1, len(fs)))
    lhs = jacobian_bracket(fs + [jacobian_bracket(gs)])
    rhs = Polynomial(gs[0].vars)
    for a in range(n):
        inner = jacobian_bracket(fs + [gs[a]])
        rhs = rhs + jacobian_bracket(gs[:a] + [inner] + gs[a + 1:])
    return lhs - rhs


def leibniz_rule_residual(fs: Sequence[Polynomial], g: Polynomial, h: Polynomial) -> Polynomial:
    """{f, gh} - g {f, h} - {f, g} h."""
    fs = list(fs)
    return (jacobian_bracket(fs + [g * h]) - g * jacobian_bracket(fs + [h])
            - jacobian_bracket(fs + [g]) * h)


def bracket_skew_check(fs: Sequence[Polynomial]) -> bool:
    """Each adjacent transposition of the arguments flips the bracket's sign."""
    fs = list(fs)
    base = jacobian_bracket(fs)
    for i in range(len(fs) - 1):
        sw = fs[:i] + [fs[i + 1], fs[i]] + fs[i + 2:]
        if jacobian_bracket(sw) != -base:
            return False
    return True


def gji_poisson_residual(fs: Sequence[Polynomial]) -> Polynomial:
    """Jacobi sum {f1,{f2,f3}} + cyclic for the n = 2 Jacobian (Poisson) bracket."""
    f1, f2, f3 = fs
    b = lambda p, q: jacobian_bracket([p, q])
    return b(f1, b(f2, f3)) + b(f2, b(f3, f1)) + b(f3, b(f1, f2))


# ---------------------------------------------------------------------------
# random inputs

def random_polynomial(rng: random.Random, variables: Sequence[str], max_degree: int,
                      n_terms: int = 4, coeff: int = 3) -> Polynomial:
    variables = tuple(variables)
    monos = [e for e in product(range(max_degree + 1), repeat=len(variables))
             if sum(e) <= max_degree]
    terms = {}
    for _ in range(n_terms):
        e = rng.choice(monos)
        terms[e] = terms.get(e, 0) + rng.randint(-coeff, coeff)
    return Polynomial(variables, terms)


def variables_for(n: int) -> tuple:
    return ("x", "y", "z", "u", "v", "w")[:n] if n <= 6 else tuple("x%d" % i for i in range(1, n + 1))

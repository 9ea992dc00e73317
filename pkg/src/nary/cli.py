"""
Command line front end.

    nary verify A4 --checks fi,symmetry
    nary h1 A4 --action adjoint --symmetry restricted
    nary structure sum:A4:abelian:3:1
    nary nambu --vars x,y,z --fs x,y --gs x,y,z --check fi
    nary export A4 -o a4.json

Exit codes: 0 all checks pass / computation done, 1 a mathematical check
failed, 2 input error. Reports are ``key: value`` lines, or JSON with
``--json``.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import io
from .catalog import simple_signature
from .cohomology import H1, Action, ComplexSpec, is_cocycle, leibniz_cocycle
from .glagps import UnsupportedArity, gji_residual
from .kernel import DomainError, in_span, rstr
from .nalg import Symmetry, fi_residual, symmetry_audit
from .nambu import (Polynomial, bracket_skew_check, jacobian_bracket, leibniz_rule_residual,
                    np_fi_residual)
from .structure import derived_series, is_semisimple, lie_algebra_of, metric_checks

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _fmt(x, text=True):
    if isinstance(x, Fraction):
        return rstr(x)
    if isinstance(x, bool):
        if not text:
            return x
        return "true" if x else "false"
    if isinstance(x, tuple):
        return "(" + ",".join(str(_fmt(i)) for i in x) + ")"
    if isinstance(x, list):
        return [_fmt(i, text) for i in x]
    if isinstance(x, dict):
        return {k: _fmt(v, text) for k, v in x.items()}
    return x


def _flatten(prefix: str, value, out: list):
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten("%s.%s" % (prefix, k) if prefix else k, v, out)
    elif isinstance(value, list) and any(isinstance(v, (dict, list)) for v in value):
        for i, v in enumerate(value):
            _flatten("%s[%d]" % (prefix, i), v, out)
    elif isinstance(value, list):
        out.append("%s: %s" % (prefix, "[" + ", ".join(str(v) for v in value) + "]"))
    else:
        out.append("%s: %s" % (prefix, value))


def render(report: dict, as_json: bool) -> str:
    report = _fmt(report, text=not as_json)
    if as_json:
        return json.dumps(report, indent=1)
    lines: list = []
    _flatten("", report, lines)
    return "\n".join(lines)


def _head(args, A=None) -> dict:
    rep = {"command": " ".join(args.argv)}
    if A is not None:
        rep["input"] = A.name or args.input
        rep["digest"] = io.digest(A)
    return rep


def _witnesses(ws, limit=10):
    return [_fmt(w) for w in ws[:limit]]


# ---------------------------------------------------------------------------
# commands

def cmd_verify(args) -> tuple[dict, int]:
    A = io.load(args.input)
    rep = _head(args, A)
    checks = {}
    status = EXIT_OK
    for name in [c.strip() for c in args.checks.split(",") if c.strip()]:
        if name == "fi":
            r = fi_residual(A)
            checks["fi"] = {"pass": r.ok, "max_violation": r.max_violation,
                            "witnesses": _witnesses(r.witnesses)}
        elif name == "gji":
            try:
                r = gji_residual(A)
            except (UnsupportedArity, DomainError) as e:
                raise InputError(str(e))
            checks["gji"] = {"pass": r.ok, "max_violation": r.max_violation,
                             "witnesses": _witnesses(r.witnesses)}
        elif name == "symmetry":
            r = symmetry_audit(A, args.as_class)
            checks["symmetry"] = {"pass": r.ok, "class": r.checked.value,
                                  "violations": _witnesses(r.violations)}
        elif name == "metric":
            if A.metric is None:
                raise InputError("algebra %s has no metric" % (A.name or "?"))
            r = metric_checks(A)
            checks["metric"] = {"pass": r.ok, "invariant": r.invariant,
                                "lowered_antisymmetric": r.lowered_antisymmetric,
                                "invariant_tensor": r.invariant_tensor}
        else:
            raise InputError("unknown check %r (fi, gji, symmetry, metric)" % name)
        if not checks[name]["pass"]:
            status = EXIT_FAIL
    rep["checks"] = checks
    rep["status"] = status
    return rep, status


def _cochain_lines(c):
    out = []
    for label, v in c.items():
        if c.spec.action is Action.ADJOINT:
            out.append("alpha(%s)^%d=%s" % (",".join(map(str, label[:-1])), label[-1], rstr(v)))
        else:
            out.append("alpha(%s)=%s" % (",".join(map(str, label)), rstr(v)))
    return out


def cmd_h1(args) -> tuple[dict, int]:
    A = io.load(args.input)
    rep = _head(args, A)
    fi = fi_residual(A)
    if not fi.ok:
        rep["error"] = "Filippov identity fails; the complex is undefined"
        rep["fi.max_violation"] = fi.max_violation
        rep["status"] = EXIT_FAIL
        return rep, EXIT_FAIL
    try:
        spec = ComplexSpec(Action.parse(args.action), Symmetry.parse(args.symmetry), A,
                           check=False)
    except DomainError as e:
        raise InputError(str(e))
    H = H1(spec)
    r = H.report()
    rep["complex"] = spec.label
    rep["dims"] = {"C0": r.c0, "C1": r.c1, "Z1": r.z1, "B1": r.b1, "H1": r.h1}
    rep["representatives"] = [{"coordinates": _cochain_lines(c), "fi_exact": f}
                              for c, f in zip(r.representatives, r.fi_flags)]
    if (spec.action is Action.ADJOINT and spec.symmetry is Symmetry.FIRST
            and A.arity == 3 and simple_signature(A) is not None):
        alpha = leibniz_cocycle(A)
        nf = H.normal_form(alpha.coefficients)
        in_span = any(nf) and _in_rep_span(nf, r.representatives)
        rep["leibniz_cocycle"] = {"cocycle": is_cocycle(alpha),
                                  "nontrivial": bool(any(nf)),
                                  "in_representative_span": in_span}
    rep["status"] = EXIT_OK
    return rep, EXIT_OK


def _in_rep_span(v, reps) -> bool:
    return in_span([list(c.coefficients) for c in reps], v)


def cmd_structure(args) -> tuple[dict, int]:
    A = io.load(args.input)
    rep = _head(args, A)
    fi = fi_residual(A)
    if not fi.ok:
        rep["error"] = "Filippov identity fails"
        rep["fi.max_violation"] = fi.max_violation
        rep["status"] = EXIT_FAIL
        return rep, EXIT_FAIL
    if A.symmetry is Symmetry.NONE:
        raise InputError("structure theory needs skew fundamental objects")
    ds = derived_series(A)
    ss = is_semisimple(A)
    lie = lie_algebra_of(A)
    rep["derived_series"] = ds.dims
    rep["solvable"] = ds.solvable
    rep["semisimple"] = ss.semisimple
    if not ss.semisimple:
        rep["kasymov_kernel"] = [[rstr(x) for x in v] for v in ss.kernel]
    rep["lie_algebra"] = {"dim": lie.dim, "closure": lie.closure_ok}
    if A.metric is not None:
        m = metric_checks(A)
        rep["metric"] = {"invariant": m.invariant,
                         "lowered_antisymmetric": m.lowered_antisymmetric,
                         "invariant_tensor": m.invariant_tensor}
    rep["status"] = EXIT_OK
    return rep, EXIT_OK


def _split(s):
    return [p.strip() for p in s.split(",") if p.strip()] if s else []


def cmd_nambu(args) -> tuple[dict, int]:
    variables = _split(args.vars)
    if not variables:
        raise InputError("--vars is required")
    fs = [Polynomial.parse(p, variables) for p in _split(args.fs)]
    gs = [Polynomial.parse(p, variables) for p in _split(args.gs)]
    n = len(variables)
    rep = {"command": " ".join(args.argv), "vars": variables, "check": args.check}
    if args.check == "fi":
        if len(fs) != n - 1 or len(gs) != n:
            raise InputError("fi needs %d --fs and %d --gs" % (n - 1, n))
        res = np_fi_residual(fs, gs)
        ok = res.is_zero()
        rep["residual"] = str(res)
    elif args.check == "leibniz":
        if len(fs) != n - 1 or len(gs) != 2:
            raise InputError("leibniz needs %d --fs and two --gs (g,h)" % (n - 1))
        res = leibniz_rule_residual(fs, gs[0], gs[1])
        ok = res.is_zero()
        rep["residual"] = str(res)
    elif args.check == "skew":
        args_ = fs or gs
        if len(args_) != n:
            raise InputError("skew needs %d functions" % n)
        ok = bracket_skew_check(args_)
        rep["bracket"] = str(jacobian_bracket(args_))
        rep["antisymmetric"] = ok
    else:
        raise InputError("unknown check %r" % args.check)
    status = EXIT_OK if ok else EXIT_FAIL
    rep["pass"] = ok
    rep["status"] = status
    return rep, status


def cmd_export(args) -> tuple[dict, int]:
    A = io.load(args.input)
    text = io.dumps(A)
    if args.output:
        io.save(A, args.output)
        return {"command": " ".join(args.argv), "written": args.output,
                "digest": io.digest(A), "status": EXIT_OK}, EXIT_OK
    sys.stdout.write(text + "\n")
    return None, EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nary", description="exact n-ary algebra toolkit")
    sub = p.add_subparsers(dest="cmd", required=True)

    v = sub.add_parser("verify", help="identity checks")
    v.add_argument("input", help="algebra file or catalog name")
    v.add_argument("--checks", default="fi", help="comma list of fi,gji,symmetry,metric")
    v.add_argument("--as-class", default=None, dest="as_class",
                   help="symmetry class for the symmetry audit (default: declared)")
    v.set_defaults(func=cmd_verify)

    h = sub.add_parser("h1", help="first cohomology")
    h.add_argument("input")
    h.add_argument("--action", choices=["trivial", "adjoint"], default="trivial")
    h.add_argument("--symmetry", choices=["full", "restricted"], default="full")
    h.set_defaults(func=cmd_h1)

    s = sub.add_parser("structure", help="structure theory")
    s.add_argument("input")
    s.set_defaults(func=cmd_structure)

    nb = sub.add_parser("nambu", help="Jacobian bracket checks")
    nb.add_argument("--vars", required=True)
    nb.add_argument("--fs", default="")
    nb.add_argument("--gs", default="")
    nb.add_argument("--check", choices=["fi", "leibniz", "skew"], required=True)
    nb.set_defaults(func=cmd_nambu)

    e = sub.add_parser("export", help="write an algebra file")
    e.add_argument("input")
    e.add_argument("-o", "--output")
    e.set_defaults(func=cmd_export)

    for sp in (v, h, s, nb, e):
        sp.add_argument("--json", action="store_true", help="JSON output")
    return p


def run(argv=None, out=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    args.argv = argv
    try:
        rep, status = args.func(args)
    except (InputError, DomainError) as e:
        rep = {"command": " ".join(argv), "error": str(e), "status": EXIT_INPUT}
        out.write(render(rep, args.json) + "\n")
        return EXIT_INPUT
    if rep is not None:
        out.write(render(rep, args.json) + "\n")
    return status


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()

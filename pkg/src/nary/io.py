"""
Algebra interchange format (JSON):

    {"name": "A4", "arity": 3, "dim": 4, "symmetry": "full",
     "constants": [{"idx": [2, 3, 4], "target": 1, "value": "1"}, ...],
     "metric": [["1", "0", ...], ...]}            # optional

Values are rational strings "p/q". Index tuples need not be canonical;
they are folded with the permutation sign on load.
"""

from __future__ import annotations

import hashlib
import json
import os
from fractions import Fraction

from .catalog import from_name
from .kernel import DomainError, rstr
from .nalg import NAryAlgebra, Symmetry


class FormatError(DomainError):
    pass


def _rational(x, where: str) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (str, int)):
        raise FormatError("%s: expected a rational string, got %r" % (where, x))
    try:
        return Fraction(str(x).strip())
    except (ValueError, ZeroDivisionError):
        raise FormatError("%s: bad rational %r" % (where, x))


def _int(x, where: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise FormatError("%s: expected an integer, got %r" % (where, x))
    return x


def algebra_from_dict(doc: dict) -> NAryAlgebra:
    if not isinstance(doc, dict):
        raise FormatError("top level must be an object")
    for k in ("arity", "dim", "symmetry", "constants"):
        if k not in doc:
            raise FormatError("missing field %r" % k)
    arity = _int(doc["arity"], "arity")
    dim = _int(doc["dim"], "dim")
    symmetry = Symmetry.parse(doc["symmetry"])
    if not isinstance(doc["constants"], list):
        raise FormatError("constants must be a list")
    entries = []
    for i, rec in enumerate(doc["constants"]):
        where = "constants[%d]" % i
        if not isinstance(rec, dict) or not {"idx", "target", "value"} <= set(rec):
            raise FormatError("%s: need idx, target and value" % where)
        idx = rec["idx"]
        if not isinstance(idx, list):
            raise FormatError("%s.idx must be a list" % where)
        idx = [_int(j, where + ".idx") for j in idx]
        entries.append((idx, _int(rec["target"], where + ".target"),
                        _rational(rec["value"], where + ".value")))
    metric = doc.get("metric")
    if metric is not None:
        if not isinstance(metric, list) or not all(isinstance(r, list) for r in metric):
            raise FormatError("metric must be a list of rows")
        metric = [[_rational(x, "metric") for x in r] for r in metric]
    return NAryAlgebra.from_entries(arity, dim, symmetry, entries, metric,
                                    str(doc.get("name", "")))


def algebra_to_dict(A: NAryAlgebra) -> dict:
    doc = {"name": A.name, "arity": A.arity, "dim": A.dim, "symmetry": A.symmetry.value,
           "constants": [{"idx": list(idx), "target": d, "value": rstr(v)}
                         for idx, d, v in A.digest_items()]}
    if A.metric is not None:
        doc["metric"] = [[rstr(x) for x in r] for r in A.metric]
    return doc


def dumps(A: NAryAlgebra) -> str:
    return json.dumps(algebra_to_dict(A), indent=1)


def loads(text: str) -> NAryAlgebra:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError("JSON parse error at line %d column %d: %s"
                          % (e.lineno, e.colno, e.msg))
    return algebra_from_dict(doc)


def save(A: NAryAlgebra, path: str) -> None:
    with open(path, "w") as f:
        f.write(dumps(A) + "\n")


def load(source: str) -> NAryAlgebra:
    """Load a file, falling back to a catalog name."""
    if os.path.isfile(source):
        with open(source) as f:
            return loads(f.read())
    if source.endswith(".json"):
        raise FormatError("no such file: %s" % source)
    return from_name(source)


def digest(A: NAryAlgebra) -> str:
    doc = algebra_to_dict(A)
    doc.pop("name")
    raw = json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()
    return "sha256:" + hashlib.sha256(raw).hexdigest()[:16]

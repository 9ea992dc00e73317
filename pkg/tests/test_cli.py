import io as stdio
import json
import subprocess
import sys

import pytest

from nary import io
from nary.catalog import from_name
from nary.cli import run

from oracles import with_constant


def call(*argv):
    buf = stdio.StringIO()
    code = run(list(argv), out=buf)
    return code, buf.getvalue()


def fields(text):
    out = {}
    for line in text.splitlines():
        k, _, v = line.partition(": ")
        out[k] = v
    return out


@pytest.fixture
def broken(tmp_path):
    p = tmp_path / "broken_A4.json"
    io.save(with_constant(from_name("A4"), (1, 2, 3), 1, 1), str(p))
    return str(p)


def test_verify_examples(broken):
    code, out = call("verify", "A4", "--checks", "fi")
    assert code == 0 and fields(out)["checks.fi.pass"] == "true"
    code, out = call("verify", "so3", "--checks", "gji")
    assert code == 0 and fields(out)["checks.gji.pass"] == "true"
    code, out = call("verify", broken, "--checks", "fi")
    f = fields(out)
    assert code == 1 and f["checks.fi.pass"] == "false"
    assert f["checks.fi.witnesses"].startswith("[((")


def test_verify_all_checks():
    code, out = call("verify", "so12", "--checks", "fi,gji,symmetry,metric")
    assert code == 0 and out.count("pass: true") == 4


def test_verify_symmetry_as_class():
    code, _ = call("verify", "A4", "--checks", "symmetry", "--as-class", "restricted")
    assert code == 0


def test_h1_examples():
    code, out = call("h1", "A4", "--action", "adjoint", "--symmetry", "restricted")
    f = fields(out)
    assert code == 0 and f["dims.H1"] == "1"
    assert f["leibniz_cocycle.cocycle"] == "true"
    assert f["leibniz_cocycle.nontrivial"] == "true"
    assert f["leibniz_cocycle.in_representative_span"] == "true"
    code, out = call("h1", "A5", "--action", "adjoint", "--symmetry", "restricted")
    assert code == 0 and fields(out)["dims.H1"] == "0"
    code, out = call("h1", "A4", "--action", "trivial", "--symmetry", "full")
    assert code == 0 and fields(out)["dims.H1"] == "0"


def test_h1_on_non_filippov_input(broken):
    code, out = call("h1", broken)
    assert code == 1 and "error" in fields(out)


def test_structure_examples():
    code, out = call("structure", "A4")
    f = fields(out)
    assert code == 0 and f["semisimple"] == "true" and f["lie_algebra.dim"] == "6"
    code, out = call("structure", "abelian:3:4")
    f = fields(out)
    assert code == 0 and f["solvable"] == "true" and f["semisimple"] == "false"
    code, out = call("structure", "sum:A4:abelian:3:1")
    f = fields(out)
    assert code == 0 and f["semisimple"] == "false"
    assert f["kasymov_kernel[0]"] == "[0, 0, 0, 0, 1]"


def test_nambu_examples():
    code, out = call("nambu", "--vars", "x,y,z", "--fs", "x,y", "--gs", "x,y,z", "--check", "fi")
    assert code == 0 and fields(out)["residual"] == "0"
    code, out = call("nambu", "--vars", "x,y", "--fs", "x", "--gs", "x*y,x^2", "--check",
                     "leibniz")
    assert code == 0 and fields(out)["residual"] == "0"
    code, out = call("nambu", "--vars", "x,y,z", "--fs", "x*y,y*z,z*x", "--check", "skew")
    f = fields(out)
    assert code == 0 and f["pass"] == "true" and f["bracket"] == "2*x*y*z"


def test_input_errors(tmp_path):
    assert call("verify", "nosuch.json")[0] == 2
    assert call("verify", "B7")[0] == 2
    assert call("verify", "A4", "--checks", "bogus")[0] == 2
    assert call("verify", "A4", "--checks", "gji")[0] == 2
    assert call("h1", "A4", "--action", "weird")[0] == 2
    assert call("frobnicate")[0] == 2
    code, out = call("nambu", "--vars", "x,y,z", "--fs", "x + * y,y", "--gs", "x,y,z",
                     "--check", "fi")
    assert code == 2 and "position 4" in out
    assert call("nambu", "--vars", "x,y,z", "--fs", "x", "--gs", "x,y,z", "--check", "fi")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"arity": 3, "dim": 4,, }')
    code, out = call("verify", str(bad))
    assert code == 2 and "line 1" in out
    dup = tmp_path / "dup.json"
    dup.write_text(json.dumps({"arity": 3, "dim": 4, "symmetry": "full", "constants": [
        {"idx": [1, 2, 3], "target": 4, "value": "1"},
        {"idx": [3, 2, 1], "target": 4, "value": "1"}]}))
    assert call("verify", str(dup))[0] == 2
    oob = tmp_path / "oob.json"
    oob.write_text(json.dumps({"arity": 3, "dim": 4, "symmetry": "full", "constants": [
        {"idx": [1, 2, 7], "target": 4, "value": "1"}]}))
    assert call("verify", str(oob))[0] == 2


def test_json_output():
    code, out = call("h1", "A4", "--action", "adjoint", "--symmetry", "restricted", "--json")
    rep = json.loads(out)
    assert code == 0 and rep["dims"]["H1"] == 1 and rep["status"] == 0
    assert rep["leibniz_cocycle"]["cocycle"] is True
    assert rep["digest"].startswith("sha256:")
    code, out = call("verify", "A4", "--checks", "fi", "--json")
    assert json.loads(out)["checks"]["fi"]["pass"] is True


def test_reports_are_deterministic():
    for argv in (["h1", "sum:A4:A_1_3", "--action", "adjoint", "--symmetry", "restricted"],
                 ["structure", "sum:A4:abelian:3:1", "--json"],
                 ["verify", "A5", "--checks", "fi,symmetry,metric"]):
        assert call(*argv) == call(*argv)


def test_export_round_trip(tmp_path):
    p = tmp_path / "a.json"
    code, _ = call("export", "A_1_3", "-o", str(p))
    assert code == 0 and io.load(str(p)).same_constants(from_name("A_1_3"))
    code, out = call("verify", str(p), "--checks", "fi,metric")
    assert code == 0


def test_non_canonical_file_is_folded(tmp_path):
    p = tmp_path / "perm.json"
    p.write_text(json.dumps({"name": "perm", "arity": 2, "dim": 3, "symmetry": "full",
                             "constants": [{"idx": [2, 1], "target": 3, "value": "-1"},
                                           {"idx": [3, 2], "target": 1, "value": "-1"},
                                           {"idx": [1, 3], "target": 2, "value": "-1"}]}))
    code, out = call("verify", str(p), "--checks", "fi,gji")
    assert code == 0


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "nary", "verify", "A4", "--checks", "fi"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "checks.fi.pass: true" in r.stdout
    r = subprocess.run([sys.executable, "-m", "nary", "verify", "A4", "--nope"],
                       capture_output=True, text=True)
    assert r.returncode == 2

from itertools import product

import pytest

from nary import io
from nary.catalog import (abelian, direct_sum, from_name, is_catalog_name, lorentzian,
                          simple_fa, simple_signature, so3, so12)
from nary.kernel import DomainError
from nary.nalg import fi_residual

from oracles import simple_fa_levi_civita, so3_levi_civita

SIGNATURES = [(n, sig) for n in range(2, 6) for sig in product((1, -1), repeat=n + 1)]


def test_signature_count():
    # 2^(n+1) sign choices for each n = 2..5
    assert len(SIGNATURES) == 8 + 16 + 32 + 64


@pytest.mark.parametrize("n,sig", SIGNATURES)
def test_simple_fa_matches_levi_civita_form(n, sig):
    A = simple_fa(n, sig)
    assert A.table == simple_fa_levi_civita(n, sig)
    assert fi_residual(A).ok
    assert simple_signature(A) == list(sig)


@pytest.mark.parametrize("sig", [(1, 1, 1), (-1, 1, 1)])
def test_n2_is_so3_or_so12(sig):
    assert simple_fa(2, sig).table == so3_levi_civita(sig)


def test_named_algebras():
    assert so3().same_constants(simple_fa(2, [1, 1, 1]))
    assert so12().same_constants(simple_fa(2, [-1, 1, 1]))
    L = lorentzian(1, 3)
    assert L.arity == 3 and L.dim == 4 and simple_signature(L) == [-1, 1, 1, 1]
    assert L.name == "A_1_3"
    assert simple_fa(3, [1, 1, 1, 1]).name == "A4"


def test_from_name_grammar():
    assert from_name("A5").arity == 4
    assert from_name("A_2_2").arity == 3
    assert from_name("abelian:3:4").dim == 4
    S = from_name("sum:A4:sum:A4:abelian:3:2")
    assert S.dim == 10 and S.name == "sum:A4:sum:A4:abelian:3:2"
    for bad in ["A2", "B4", "sum:A4", "abelian:3", "A4:A4", "sum:A4:A5", ""]:
        assert not is_catalog_name(bad), bad
        with pytest.raises(DomainError):
            from_name(bad)


def test_direct_sum_blocks():
    A = direct_sum(from_name("A4"), from_name("A_1_3"))
    assert A.dim == 8 and fi_residual(A).ok
    shifted = {d + 4: v for d, v in from_name("A_1_3").structure((2, 3, 4)).items()}
    assert A.structure((6, 7, 8)) == shifted
    assert A.structure((1, 2, 5)) == {}
    assert A.metric[4][4] == -1
    assert direct_sum(from_name("A4"), abelian(3, 1)).metric is None
    with pytest.raises(DomainError):
        direct_sum(from_name("A4"), so3())


def test_abelian_validation():
    with pytest.raises(DomainError):
        abelian(1, 3)
    with pytest.raises(DomainError):
        simple_fa(3, [1, 1, 1])
    with pytest.raises(DomainError):
        simple_fa(3, [1, 2, 1, 1])


@pytest.mark.parametrize("name", ["A4", "A_1_3", "so12", "abelian:3:2", "sum:A4:A_2_2", "A6"])
def test_io_round_trip(name, tmp_path):
    A = from_name(name)
    p = tmp_path / "alg.json"
    io.save(A, str(p))
    B = io.load(str(p))
    assert B.same_constants(A) and B.metric == A.metric and B.name == A.name
    io.save(B, str(tmp_path / "again.json"))
    assert (tmp_path / "again.json").read_text() == p.read_text()
    assert io.digest(A) == io.digest(B)


def test_digest_ignores_name_only():
    A = from_name("A4")
    assert io.digest(A) == io.digest(A.renamed("other"))
    assert io.digest(A) != io.digest(from_name("A_1_3"))


def test_io_errors():
    with pytest.raises(io.FormatError) as e:
        io.loads('{"arity": 3,\n "dim": }')
    assert "line 2" in str(e.value)
    with pytest.raises(io.FormatError):
        io.loads('{"arity": 3, "dim": 4, "symmetry": "full"}')
    with pytest.raises(io.FormatError):
        io.loads('{"arity": 3, "dim": 4, "symmetry": "full", '
                 '"constants": [{"idx": [1, 2, 3], "target": 4, "value": 1.5}]}')
    with pytest.raises(DomainError):
        io.loads('{"arity": 3, "dim": 4, "symmetry": "full", "constants": ['
                 '{"idx": [1, 2, 3], "target": 4, "value": "1"},'
                 '{"idx": [2, 1, 3], "target": 4, "value": "1"}]}')
    with pytest.raises(io.FormatError):
        io.load("missing_file.json")


def test_io_folds_non_canonical_keys():
    B = io.loads('{"arity": 3, "dim": 4, "symmetry": "full", "constants": ['
                 '{"idx": [3, 2, 1], "target": 4, "value": "1/2"}]}')
    assert B.constants == {((1, 2, 3), 4): -io.Fraction(1, 2)}

from fractions import Fraction as F
from math import comb

import pytest
import sympy

from nary.catalog import abelian, direct_sum, from_name, simple_fa
from nary.kernel import DomainError
from nary.nalg import NAryAlgebra, basis_vector, bracket, fi_residual
from nary.structure import (Subspace, derived_series, is_ideal, is_semisimple, kasymov_form,
                            lie_algebra_of, metric_checks)


def ad_by_brackets(A, s):
    """sympy matrix of Z -> [e_s, Z], built column by column from brackets."""
    N = A.dim
    cols = [bracket(A, *[basis_vector(N, i) for i in s], basis_vector(N, z))
            for z in range(1, N + 1)]
    return sympy.Matrix(N, N, lambda i, j: cols[j][i])


def heisenberg3():
    # [e1 e2 e3] = e4, everything else zero
    return NAryAlgebra.from_entries(3, 4, "full", [((1, 2, 3), 4, 1)], name="heis")


def test_kasymov_a4_hand_value():
    assert kasymov_form(from_name("A4")).to_dense() == [
        [-2 if i == j else 0 for j in range(6)] for i in range(6)]


@pytest.mark.parametrize("name", ["A4", "A_1_3", "so12", "sum:A4:abelian:3:1", "A5"])
def test_kasymov_matches_trace_oracle(name):
    A = from_name(name)
    fund = A.fundamental_basis
    ads = [ad_by_brackets(A, s) for s in fund]
    k = kasymov_form(A)
    for i in range(len(fund)):
        for j in range(len(fund)):
            assert k[i, j] == F(str((ads[i] * ads[j]).trace()))


@pytest.mark.parametrize("name", ["A4", "A5", "A6", "A_1_3", "A_2_2", "so3", "so12", "sum:A4:A4"])
def test_semisimple(name):
    cert = is_semisimple(from_name(name))
    assert cert.semisimple and cert.kernel == []


def test_not_semisimple_abelian():
    cert = is_semisimple(abelian(3, 4))
    assert not cert.semisimple
    assert len(cert.kernel) == 4


def test_not_semisimple_with_abelian_summand():
    cert = is_semisimple(from_name("sum:A4:abelian:3:1"))
    assert not cert.semisimple
    assert cert.kernel == [[0, 0, 0, 0, 1]]


def test_heisenberg_is_solvable_and_not_semisimple():
    A = heisenberg3()
    assert fi_residual(A).ok
    ds = derived_series(A)
    assert ds.dims == [4, 1, 0] and ds.solvable
    assert not is_semisimple(A).semisimple


def test_derived_series():
    assert derived_series(from_name("A4")).dims == [4, 4]
    assert not derived_series(from_name("A4")).solvable
    assert derived_series(abelian(3, 4)).dims == [4, 0]
    assert derived_series(from_name("sum:A4:abelian:3:1")).dims == [5, 4, 4]


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_lie_algebra_dimension(n):
    A = simple_fa(n, [1] * (n + 1))
    lie = lie_algebra_of(A)
    assert lie.dim == comb(n + 1, 2) and lie.closure_ok
    flats = [list(ad_by_brackets(A, s)) for s in A.fundamental_basis]
    assert sympy.Matrix(flats).rank() == lie.dim


def test_lie_algebra_of_sum_and_abelian():
    assert lie_algebra_of(from_name("sum:A4:A4")).dim == 12
    assert lie_algebra_of(abelian(3, 4)).dim == 0


def test_ideals_of_direct_sums():
    A = direct_sum(from_name("A4"), from_name("A_1_3"))
    assert is_ideal(A, Subspace.coordinate(range(1, 5), 8))
    assert is_ideal(A, Subspace.coordinate(range(5, 9), 8))
    assert not is_ideal(A, Subspace.coordinate([1], 8))
    assert not is_ideal(A, Subspace.coordinate([1, 5], 8))
    assert is_ideal(from_name("A4"), Subspace.span([], 4))


def test_metric_checks_catalog():
    for name in ["A4", "A5", "A_1_3", "A_2_2", "so3", "so12", "sum:A4:A_1_3"]:
        assert metric_checks(from_name(name)).ok, name


def test_metric_checks_failures():
    A = from_name("A4")
    bad = metric_checks(A, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 2]])
    assert not bad.invariant and not bad.ok
    with pytest.raises(DomainError):
        metric_checks(A, [[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    with pytest.raises(DomainError):
        metric_checks(abelian(3, 2))


def test_subspace_membership():
    s = Subspace.span([[1, 1, 0], [0, 1, 1]], 3)
    assert s.dim == 2
    assert [1, 2, 1] in s
    assert [1, 0, 0] not in s
    # reduced echelon basis
    assert s.basis == [[1, 0, -1], [0, 1, 1]]

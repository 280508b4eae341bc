import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from rungepairs import snf
from rungepairs.abelian import AbelianMap, PresentedGroup

small_mats = st.integers(1, 5).flatmap(lambda m: st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=m, max_size=m)))


def _sympy_diag(A):
    S = sympy_snf(sympy.Matrix(A), domain=sympy.ZZ)
    d = [abs(int(S[i, i])) for i in range(min(S.shape))]
    return tuple(v for v in d if v)


@settings(max_examples=200, deadline=None)
@given(small_mats)
def test_diagonal_matches_sympy(A):
    A = np.array(A, dtype=np.int64)
    f = snf.smith_normal_form(A)
    assert f.diagonal == _sympy_diag(A.tolist())


@settings(max_examples=200, deadline=None)
@given(small_mats)
def test_transforms_are_unimodular(A):
    A = np.array(A, dtype=np.int64)
    f = snf.smith_normal_form(A)
    assert np.array_equal(f.P @ A @ f.Q, f.S)
    assert abs(round(np.linalg.det(f.P))) == 1
    assert abs(round(np.linalg.det(f.Q))) == 1
    for i in range(1, len(f.diagonal)):
        assert f.diagonal[i] % f.diagonal[i - 1] == 0


@settings(max_examples=100, deadline=None)
@given(small_mats)
def test_kernel_basis(A):
    A = np.array(A, dtype=np.int64)
    ker = snf.kernel_basis(A)
    assert len(ker) == A.shape[1] - snf.rank(A)
    for v in ker:
        assert not np.any(A @ v)


def test_solve_integer_and_torsion():
    A = np.array([[2, 0], [0, 3]])
    assert snf.solve_integer(A, [4, 9]).tolist() == [2, 3]
    assert snf.solve_integer(A, [1, 0]) is None
    g = PresentedGroup.from_relations(["a", "b"], [[2], [0]])
    assert g.torsion == (2,)
    assert g.free_rank == 1
    assert not g.is_torsion_free


def test_injectivity_edge_cases():
    assert snf.is_injective(np.zeros((0, 0), dtype=np.int64))
    assert not snf.is_injective(np.zeros((0, 2), dtype=np.int64))
    assert snf.is_injective(np.array([[1], [1]]))
    assert not snf.is_injective(np.array([[2, 4]]))
    m = AbelianMap(np.array([[1, 0], [0, 0]]), ["x", "y"], ["u", "v"])
    assert not m.is_injective()
    assert [v.tolist() for v in m.kernel_basis()] in ([[0, 1]], [[0, -1]])


def test_empty_relations():
    g = PresentedGroup.from_relations(["a"], [])
    assert g.free_rank == 1
    assert g.snf_diagonal() == (0,)


def test_large_entries_are_exact():
    A = np.array([[2 ** 40, 3], [5, 2 ** 41]], dtype=np.int64)
    assert snf.smith_normal_form(A).diagonal == _sympy_diag(A.tolist())

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from oracles import modp_rank, sympy_rank

from qci.errors import DimensionMismatch
from qci.linalg import ExactMatrix, in_column_space, kernel_basis, matmul, rank, solve
from qci.scalars import Cyclotomic, PrimeField

F5 = PrimeField(5)


def M(rows, F=F5):
    return ExactMatrix.from_rows(F, rows)


def test_rank_examples():
    assert ExactMatrix.identity(F5, 3).rank() == 3
    assert ExactMatrix.zero(F5, 4, 2).rank() == 0
    assert M([[1, 2], [2, 4]]).rank() == 1


def test_solve_examples():
    assert M([[1, 0], [0, 1]]).solve([3, 4]) == [F5(3), F5(4)]
    assert ExactMatrix.zero(F5, 2, 2).solve([1, 0]) is None
    x = M([[1, 2], [2, 4]]).solve([1, 2])
    assert x[0] + 2 * x[1] == F5(1)


def test_kernel_examples():
    assert ExactMatrix.identity(F5, 3).kernel_basis() == []
    assert len(ExactMatrix.zero(F5, 3, 3).kernel_basis()) == 3
    (v,) = M([[1, 1]]).kernel_basis()
    assert v[0] + v[1] == F5(0) and v[0]


def test_column_space_examples():
    assert M([[1, 2], [3, 4]]).in_column_space([0, 0])
    assert not ExactMatrix.zero(F5, 2, 1).in_column_space([1, 0])
    assert M([[1], [2]]).in_column_space([2, 4])


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        M([[1, 2]]).solve([1, 2])


small_mats = st.integers(1, 6).flatmap(
    lambda r: st.integers(1, 6).flatmap(
        lambda c: st.lists(st.lists(st.integers(-20, 20), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


@given(st.sampled_from([2, 3, 5, 7, 101]), small_mats)
def test_rank_matches_modp_oracle(p, rows):
    F = PrimeField(p)
    assert rank(F, F.array(rows)) == modp_rank(rows, p)


@given(st.sampled_from([2, 5, 7]), small_mats)
def test_kernel_is_kernel_and_full(p, rows):
    F = PrimeField(p)
    A = F.array(rows)
    K = kernel_basis(F, A)
    assert len(K) == A.shape[1] - rank(F, A)
    for v in K:
        assert not matmul(F, A, v.reshape(-1, 1)).any()


@given(st.sampled_from([5, 7]), small_mats, st.data())
def test_solve_consistent_systems(p, rows, data):
    F = PrimeField(p)
    A = F.array(rows)
    x = F.array([[data.draw(st.integers(0, p - 1))] for _ in range(A.shape[1])])
    b = matmul(F, A, x)[:, 0]
    sol = solve(F, A, b)
    assert sol is not None
    assert np.array_equal(matmul(F, A, sol.reshape(-1, 1))[:, 0], b)
    assert in_column_space(F, A, b)


@given(small_mats)
def test_rational_rank_over_cyclotomic(rows):
    # rational matrices embedded in Q(zeta_3): rank is unchanged by field extension
    F = Cyclotomic(3)
    A = F.array([[F(Fraction(x, 3)) for x in r] for r in rows])
    assert rank(F, A) == sympy_rank(rows)


@given(st.lists(st.lists(st.integers(-3, 3), min_size=2, max_size=2), min_size=9, max_size=9))
def test_cyclotomic_rank_matches_sympy(coeffs):
    import sympy

    F = Cyclotomic(3)
    z = sympy.exp(2 * sympy.pi * sympy.I / 3)
    A = F.array([[F(c) for c in coeffs[3 * i : 3 * i + 3]] for i in range(3)])
    S = sympy.Matrix(3, 3, [c[0] + c[1] * z for c in coeffs])
    assert rank(F, A) == S.rank(simplify=True)

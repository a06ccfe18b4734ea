import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qci.algebra import QciPresentation, homogeneous
from qci.errors import InvalidChainStep
from qci.fdalgebra import global_dimension, simples_one_dimensional
from qci.modules import regular_module, zero_module
from qci.scalars import Cyclotomic, PrimeField
from qci.towers import (
    SubalgebraInclusion,
    auslander_generator_n1,
    chain_steps,
    endomorphism_algebra,
    endomorphism_tensor_check,
    restrict,
    summand_witness,
    tensor_module,
    tensor_pd_check,
    upper_bound_report,
    upper_generator,
    verify_freeness,
)

F5 = PrimeField(5)
F7 = PrimeField(7)


def mixed(exps, F, seed):
    rng = random.Random(seed)
    n = len(exps)
    return QciPresentation(tuple(exps), tuple(F(rng.randrange(1, F.characteristic)) for _ in range(n * (n - 1) // 2)), F)


def test_restrict_regular_is_free():
    p = homogeneous(2, 2, F5, q=-1)
    inc = SubalgebraInclusion(p, [1])
    R = restrict(regular_module(p), inc)
    assert R.dim == 4 and R.presentation.n == 1
    assert restrict(zero_module(p), inc).dim == 0


def test_freeness_examples():
    p = homogeneous(3, 2, F5, q=-1)
    assert verify_freeness(p, (1,), (1, 2)).ok
    step = verify_freeness(p, (1, 2), (1, 2, 3))
    assert step.ok and step.rank == 2
    with pytest.raises(InvalidChainStep):
        verify_freeness(p, (1, 2), (1, 2))


@given(st.lists(st.integers(2, 3), min_size=1, max_size=4), st.integers(0, 10**6))
def test_retraction_after_inclusion(exps, seed):
    p = mixed(exps, F7, seed)
    rng = random.Random(seed)
    idx = rng.sample(range(1, p.n + 1), rng.randint(1, p.n))
    assert SubalgebraInclusion(p, idx).composition_is_identity()


def test_chain_mixed_exponents():
    p = mixed((2, 3, 2, 3), F7, 0)
    steps = chain_steps(p)
    assert all(s.ok for s in steps)
    assert all(s.rank == p.exponents[(set(s.big) - set(s.small)).pop() - 1] for s in steps)


def test_auslander_generator_shapes():
    M2 = auslander_generator_n1(2, Cyclotomic(2))
    M3 = auslander_generator_n1(3, Cyclotomic(3))
    assert M2.dim == 3 and M3.dim == 6
    assert M2.is_graded() and M3.is_graded()
    assert all(summand_witness(M).values() for M in (M2, M3))


def test_tensor_module_graded_and_summand():
    F = Cyclotomic(2)
    M = upper_generator(homogeneous(2, 2, F))
    assert M.dim == 9 and M.is_graded()
    assert all(summand_witness(M).values())
    assert M.module.relations_hold()


def test_upper_generator_n3():
    M = upper_generator(homogeneous(3, 2, Cyclotomic(2)))
    assert M.dim == 27 and M.is_graded()


def test_graded_end_n2_a2():
    F = Cyclotomic(2)
    M = upper_generator(homogeneous(2, 2, F))
    G = endomorphism_algebra(M, graded=True)
    assert G.dim == 9
    assert simples_one_dimensional(G)
    gd = global_dimension(G, 8)
    assert isinstance(gd, int) and gd <= 4


@pytest.mark.parametrize("graded", [True, False])
def test_end_of_tensor_is_twisted_tensor(graded):
    F = Cyclotomic(2)
    M1 = auslander_generator_n1(2, F)
    res = endomorphism_tensor_check(M1, M1, [-1], graded=graded)
    assert res["ok"], res


def test_end_of_tensor_a3():
    F = Cyclotomic(3)
    M1 = auslander_generator_n1(3, F)
    q = F.primitive_root_of_unity(3)
    assert endomorphism_tensor_check(M1, M1, [q], graded=True)["ok"]


def test_pd_of_tensor_simples():
    F = Cyclotomic(2)
    M1 = auslander_generator_n1(2, F)
    res = tensor_pd_check(M1, M1, [-1])
    assert res["dims_match"] and res["ok"]


def test_twisted_tensor_structure_constants():
    F = F5
    big = homogeneous(2, 2, F, q=-1)
    M = tensor_module(auslander_generator_n1(2, F), auslander_generator_n1(2, F), [-1])
    assert M.presentation == big


def test_upper_bound_report_n1():
    rep = upper_bound_report(1, 2, Cyclotomic(2))
    assert rep["satisfied"] and rep["dim_M"] == 3
    assert rep["gldim"] == 1
    assert rep["full_end"]["gldim"] == 2


def test_end_of_regular_module_selfinjective():
    F = Cyclotomic(2)
    p = homogeneous(2, 2, F, q=-1)
    E = endomorphism_algebra(regular_module(p))
    # End(Lambda) ~ Lambda^op: local, selfinjective, infinite global dimension
    assert E.dim == p.dim
    assert simples_one_dimensional(E)
    assert str(global_dimension(E, 4)) == ">=4"


def test_end_dimensions_n1_a2():
    M = auslander_generator_n1(2, Cyclotomic(2))
    assert endomorphism_algebra(M.module).dim == 5
    # degree 0: End(k), End(Lambda) and one map between k and Lambda
    assert endomorphism_algebra(M, graded=True).dim == 3


def test_end_of_regular_is_opposite():
    F = PrimeField(5)
    p = homogeneous(2, 2, F, q=2)
    E = endomorphism_algebra(regular_module(p))
    # each endomorphism is right multiplication by its value on 1
    one = p.index[(0, 0)]
    vals = [p.from_vector(E_mat[:, one]) for E_mat in _end_matrices(p)]
    for i, u in enumerate(vals):
        for j, v in enumerate(vals):
            prod = E.mul(E.basis_vector(i), E.basis_vector(j))
            lhs = sum((vals[k].scale(F.wrap(c)) for k, c in enumerate(prod) if c), p.zero())
            assert lhs == v * u


def _end_matrices(p):
    from qci.modules import hom_space

    L = regular_module(p)
    return [h.matrix for h in hom_space(L, L)]

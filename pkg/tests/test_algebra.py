import numpy as np
import pytest

from rickard.algebra import (
    Algebra,
    Module,
    PiPoint,
    Splitting,
    direct_sum,
    dual,
    kh_regular,
    quotient,
    regular_module,
    same_module,
    submodule,
    tensor_module,
    trivial_module,
    u_module,
)
from rickard.stable import is_projective


def test_regular_module_dimensions():
    for p, r in [(2, 2), (3, 2), (2, 3)]:
        M = regular_module(p, r)
        assert M.dim == p**r
        assert M.top_dim() == 1
        assert M.socle_dim() == 1


def test_noncommuting_actions_rejected():
    a = np.array([[0, 1, 0], [0, 0, 0], [0, 0, 0]])
    b = np.array([[0, 0, 0], [0, 0, 1], [0, 0, 0]])
    M = Module(2, (a, b))
    assert not M.is_valid()
    with pytest.raises(ValueError, match="commute"):
        M.validate()


def test_action_must_be_nilpotent_of_order_p():
    M = Module(2, (np.eye(1, dtype=np.int64), np.zeros((1, 1), dtype=np.int64)))
    with pytest.raises(ValueError, match="t\\^p"):
        M.validate()


@pytest.mark.parametrize("hopf", ["grouplike", "primitive"])
def test_tensor_with_trivial_is_identity(hopf):
    alg = Algebra(3, 2, hopf)
    M = kh_regular(Splitting(alg, PiPoint((1, 1))))
    T = tensor_module(M, trivial_module(3, 2), alg)
    assert same_module(Module(3, T.action), Module(3, M.action))


@pytest.mark.parametrize("hopf", ["grouplike", "primitive"])
def test_tensor_with_free_is_free(hopf):
    alg = Algebra(2, 2, hopf)
    M = direct_sum(trivial_module(2, 2), kh_regular(Splitting(alg, PiPoint((0, 1)))))
    T = tensor_module(regular_module(2, 2), M, alg)
    assert T.dim == 4 * M.dim
    assert is_projective(T)


def test_diagonal_splitting_coordinates():
    alg = Algebra(2, 2)
    sp = Splitting(alg, PiPoint((1, 1)))
    assert sp.pivot == 0
    # Z = t1 + t2 and the remaining generator is t2
    assert sp.Z.tolist() == [0, 1, 1, 0]
    assert sp.X[0].tolist() == [0, 1, 0, 0]


def test_split_roundtrip():
    sp = Splitting(Algebra(3, 2), PiPoint((1, 2)))
    M = regular_module(3, 2)
    back = sp.from_split(sp.to_split(M))
    assert same_module(Module(3, back.action), Module(3, M.action))


def test_u_module_is_cyclic_of_length_p_minus_one():
    for p in (2, 3, 5):
        sp = Splitting(Algebra(p, 2), PiPoint((0, 1)))
        U = u_module(sp)
        assert U.dim == p - 1
        assert U.top_dim() == 1


def test_dual_is_involution():
    M = kh_regular(Splitting(Algebra(3, 2), PiPoint((1, 1))))
    assert same_module(dual(dual(M)), M)


def test_submodule_and_quotient_of_radical():
    M = regular_module(2, 2)
    rad = M.radical_basis()
    S = submodule(M, rad)
    Q, proj = quotient(M, rad)
    assert S.dim == 3
    assert Q.dim == 1
    assert proj.shape == (1, 4)


def test_noninvariant_subspace_rejected():
    M = regular_module(2, 2)
    with pytest.raises(ValueError):
        submodule(M, np.array([[1], [0], [0], [0]]))


def test_bad_hopf_name_rejected():
    with pytest.raises(ValueError):
        Algebra(2, 2, "cocommutative")

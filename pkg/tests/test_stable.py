import numpy as np

from rickard.algebra import (
    Algebra,
    PiPoint,
    Splitting,
    direct_sum,
    kh_regular,
    regular_module,
    trivial_module,
)
from rickard.stable import (
    gamma_space,
    hom_space,
    is_projective,
    jordan_type,
    nonprojective_part,
    omega,
    omega_inverse,
    omega_power,
    restrict,
    stable_hom_dim,
)


def test_syzygies_of_trivial_module_klein_four():
    k = trivial_module(2, 2)
    assert [omega_power(k, n).dim for n in range(7)] == [2 * n + 1 for n in range(7)]


def test_cosyzygy_of_trivial_module():
    assert omega_inverse(trivial_module(2, 2)).dim == 3


def test_omega_of_free_module_is_zero():
    assert omega(regular_module(3, 2))[0].dim == 0


def test_omega_of_trivial_is_radical():
    for p, r in [(2, 2), (3, 2), (2, 3)]:
        Om, cover = omega(trivial_module(p, r))
        assert Om.dim == p**r - 1
        assert cover.is_homomorphism()


def test_omega_then_inverse_recovers_dimension():
    M = kh_regular(Splitting(Algebra(3, 2), PiPoint((1, 1))))
    assert omega_inverse(omega(M)[0]).dim == M.dim


def test_stable_endomorphisms_of_trivial():
    assert stable_hom_dim(trivial_module(2, 2), trivial_module(2, 2)) == 1
    assert stable_hom_dim(trivial_module(3, 2), trivial_module(3, 2)) == 1


def test_stable_maps_into_kh():
    kh = kh_regular(Splitting(Algebra(2, 2), PiPoint((0, 1))))
    assert stable_hom_dim(trivial_module(2, 2), kh) == 1


def test_stable_homs_out_of_free_vanish():
    kG = regular_module(2, 2)
    k = trivial_module(2, 2)
    assert hom_space(kG, k).shape[0] == 1
    assert stable_hom_dim(kG, k) == 0


def test_restriction_of_kh_at_diagonal():
    sp = Splitting(Algebra(2, 2), PiPoint((0, 1)))
    res = restrict(kh_regular(sp), PiPoint((1, 1)))
    assert res.jordan == (2,)
    assert res.is_projective()


def test_restriction_of_kh_along_its_own_point():
    sp = Splitting(Algebra(2, 2), PiPoint((0, 1)))
    res = restrict(kh_regular(sp), PiPoint((0, 1)))
    assert res.jordan == (1, 1)


def test_jordan_type_of_shift():
    z = np.eye(5, k=-1, dtype=np.int64)
    assert jordan_type(z, 5) == (5,)
    assert jordan_type(np.zeros((3, 3), dtype=np.int64), 3) == (1, 1, 1)


def test_gamma_space_dimensions():
    sp = Splitting(Algebra(2, 2), PiPoint((0, 1)))
    assert gamma_space(kh_regular(sp), sp).dim == 2
    assert gamma_space(trivial_module(2, 2), sp).dim == 1
    assert gamma_space(regular_module(2, 2), sp).dim == 0


def test_odd_gamma_space_at_p3():
    sp = Splitting(Algebra(3, 2), PiPoint((0, 1)))
    # Z acts as zero on k and kH, so the whole module survives
    assert gamma_space(trivial_module(3, 2), sp, odd=True).dim == 1
    assert gamma_space(kh_regular(sp), sp, odd=True).dim == 3
    assert gamma_space(regular_module(3, 2), sp, odd=True).dim == 0


def test_free_summand_detected_and_stripped():
    k = trivial_module(2, 2)
    M = direct_sum(omega_power(k, 2), regular_module(2, 2))
    assert not is_projective(M)
    assert nonprojective_part(M).dim == omega_power(k, 2).dim

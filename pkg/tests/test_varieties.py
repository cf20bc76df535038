import pytest

from rickard.algebra import (
    Algebra,
    PiPoint,
    Splitting,
    direct_sum,
    kh_regular,
    regular_module,
    standard_splitting,
    trivial_module,
)
from rickard.idempotent import build_E
from rickard.stable import omega_power
from rickard.varieties import locus_check, projective_points, rank_variety, tensor_idempotent_match


def test_projective_point_counts():
    assert len(projective_points(2, 2)) == 3
    assert len(projective_points(3, 2)) == 4
    assert len(projective_points(2, 3)) == 7


def test_free_module_has_empty_variety():
    assert rank_variety(regular_module(2, 2)) == []


def test_trivial_module_has_full_variety():
    assert rank_variety(trivial_module(3, 2)) == projective_points(3, 2)


def test_kh_variety_is_its_defining_point():
    assert rank_variety(kh_regular(standard_splitting(Algebra(2, 2)))) == [(0, 1)]
    assert rank_variety(kh_regular(Splitting(Algebra(2, 2), PiPoint((1, 1))))) == [(1, 1)]


def test_truncations_are_bounded_at_their_point():
    sp = standard_splitting(Algebra(2, 2))
    rep = locus_check([build_E(n, sp).module for n in range(1, 9)], sp.point)
    assert rep.bounded


def test_single_syzygies_restrict_to_one_trivial_block():
    k = trivial_module(2, 2)
    rep = locus_check([omega_power(k, n) for n in range(1, 9)], PiPoint((0, 1)))
    assert rep.bounded
    assert rep.dims == [1] * 8


def test_sums_of_syzygies_are_unbounded():
    k = trivial_module(2, 2)
    family = [direct_sum(*[omega_power(k, j) for j in range(n + 1)]) for n in range(1, 9)]
    rep = locus_check(family, PiPoint((0, 1)))
    assert not rep.bounded
    assert rep.dims == list(range(2, 10))


@pytest.mark.parametrize("hopf", ["grouplike", "primitive"])
def test_tensor_with_truncation_restricts_as_predicted(hopf):
    alg = Algebra(3, 2, hopf)
    sp = standard_splitting(alg)
    for M in (trivial_module(3, 2), omega_power(trivial_module(3, 2), 1)):
        for n in (1, 2, 3):
            m = tensor_idempotent_match(M, n, sp, alg)
            assert m.ok, (n, m.observed, m.predicted)

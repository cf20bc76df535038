import numpy as np
import pytest

from rickard.algebra import Algebra, PiPoint, Splitting, regular_module, standard_splitting, trivial_module
from rickard.gamma import EndElement, gamma_ring
from rickard.idempotent import (
    DegreeCalculus,
    RangeError,
    build_E,
    layer_hom_dimension_formula,
    restrict_E,
    sigma_witness,
)
from rickard.resolution import betti


def expected_dim(n, p, s):
    # layer i contributes b_i copies of kH, doubled by U for odd i
    return sum(betti(i, s) * p**s * (1 if i % 2 == 0 else p - 1) for i in range(n + 1))


@pytest.mark.parametrize("p,r", [(2, 2), (3, 2), (2, 3), (3, 3)])
def test_truncation_dimensions(p, r):
    sp = standard_splitting(Algebra(p, r))
    for n in range(5):
        assert build_E(n, sp).dim == expected_dim(n, p, r - 1)


def test_klein_four_dimensions_grow_linearly(split22):
    assert [build_E(n, split22).dim for n in range(6)] == [2, 4, 6, 8, 10, 12]


def test_first_truncation_at_p3(split32):
    assert build_E(1, split32).dim == 9


def test_bottom_truncation_is_kh(split22):
    E = build_E(0, split22)
    assert not np.any(E.z_split)
    assert E.module.dim == 2


@pytest.mark.parametrize("p,r", [(2, 2), (3, 2), (2, 3)])
def test_truncation_is_a_module(p, r):
    sp = Splitting(Algebra(p, r), PiPoint(tuple([1] * r)))
    build_E(4, sp).module.validate()


def test_restriction_of_first_truncation(split22):
    assert restrict_E(1, split22).jordan == (2, 1, 1)


def test_sigma_splits_off_trivial_summand(split32):
    E = build_E(4, split32)
    assert sigma_witness(E, split32.point)


def test_unit_lifts_to_identity(split32):
    E = build_E(4, split32)
    one = EndElement.unit(E.ring(), 4)
    assert np.array_equal(E.lift_element(one), np.eye(E.dim, dtype=np.int64))


@pytest.mark.parametrize("p,r", [(2, 2), (3, 2), (2, 3)])
def test_lifts_commute_with_action(p, r):
    sp = standard_splitting(Algebra(p, r))
    E = build_E(5, sp)
    R = E.ring()
    for d in range(1, 4):
        for label in R.labels(d):
            f = E.lift_monomial(label)
            for a in E.module.action:
                assert not np.any((f @ a - a @ f) % p)


def test_lift_is_zero_beyond_truncation(split22):
    E = build_E(2, split22)
    assert not np.any(E.lift_monomial((3,)))


def test_augmentation_has_degree_zero(split32):
    E = build_E(5, split32)
    dc = DegreeCalculus(E, trivial_module(3, 2))
    assert dc.degree(E.sigma()) == 0
    assert dc.degree_by_factoring(E.sigma()) == 0


@pytest.mark.parametrize("p,r", [(2, 3), (3, 3)])
def test_augmentation_times_monomial_has_its_degree(p, r):
    sp = standard_splitting(Algebra(p, r))
    E = build_E(5, sp)
    dc = DegreeCalculus(E, trivial_module(p, r))
    R = E.ring()
    for d in range(1, 4):
        for i, label in enumerate(R.labels(d)):
            f = (E.sigma() @ E.lift_monomial(label)) % p
            lt = dc.leading_term(f)
            assert lt.degree == d
            assert dc.degree_by_factoring(f) == d
            expected = np.zeros((R.dim(d), 1), dtype=np.int64)
            expected[i, 0] = 1
            assert np.array_equal(lt.coords, expected)


def test_composing_two_odd_classes_cancels_at_p3(split32):
    E = build_E(6, split32)
    dc = DegreeCalculus(E, trivial_module(3, 2))
    lt = dc.leading_term((E.sigma() @ E.lift_monomial((1,))) % 3)
    assert lt.degree == 1
    assert dc.compose_leading(lt, [1], 1) is None


def test_composing_with_even_class_shifts_degree(split32):
    E = build_E(6, split32)
    dc = DegreeCalculus(E, trivial_module(3, 2))
    lt = dc.compose_leading(dc.leading_term(E.sigma()), [1], 2)
    assert lt.degree == 2
    assert lt.coords.tolist() == [[1]]


def test_zero_map_has_no_degree(split22):
    E = build_E(4, split22)
    dc = DegreeCalculus(E, trivial_module(2, 2))
    with pytest.raises(RangeError):
        dc.degree(np.zeros((1, E.dim), dtype=np.int64))


def test_degree_outside_stable_range_rejected(split22):
    E = build_E(4, split22)
    dc = DegreeCalculus(E, trivial_module(2, 2))
    f = (E.sigma() @ E.lift_monomial((3,))) % 2
    with pytest.raises(RangeError):
        dc.degree(f)
    assert dc.degree(f, stable_range=False) == 3


def test_layer_hom_dimensions(split32):
    k = trivial_module(3, 2)
    kG = regular_module(3, 2)
    for i in range(5):
        assert layer_hom_dimension_formula(i, k, split32) == 1
        assert layer_hom_dimension_formula(i, kG, split32) == 0


def test_sub_truncation_is_prefix(split32):
    E = build_E(4, split32)
    E2 = E.sub(2)
    assert E2.dim == E.dim_upto(2)
    top = E.module.action[0][: E2.dim, : E2.dim]
    assert np.array_equal(top, E2.module.action[0])
    with pytest.raises(RangeError):
        E.sub(5)

import numpy as np
import pytest

from rickard.algebra import Algebra, kh_regular, regular_module, standard_splitting, trivial_module
from rickard.fingen import (
    annihilator,
    cohomology_action_annihilator,
    cone_of,
    extract_generators,
    hom_truncation,
    is_truncated_ideal,
    same_annihilator,
    stabilization_guard,
    verify_realize,
)
from rickard.gamma import EndElement, gamma_ring
from rickard.gamma import monomials_upto
from rickard.idempotent import RangeError, build_E
from rickard.stable import omega


def test_trivial_module_has_one_generator_in_degree_zero(split22, split32):
    for sp in (split22, split32):
        gs = extract_generators(trivial_module(sp.p, sp.r), 8, sp)
        assert gs.degrees == [0]
        assert gs.ok()


def test_free_module_has_no_generators(split22):
    gs = extract_generators(regular_module(2, 2), 8, split22)
    assert gs.degrees == []
    assert hom_truncation(regular_module(2, 2), 8, split22).dim == 0


def test_kh_generated_in_degree_zero(split32):
    gs = extract_generators(kh_regular(split32), 8, split32)
    assert gs.degrees == [0]
    assert gs.ok()


def test_syzygy_of_trivial_needs_two_generators(split32):
    gs = extract_generators(omega(trivial_module(3, 2))[0], 9, split32)
    assert gs.degrees == [0, 1]
    assert gs.ok()


def test_layer_dimensions_for_trivial_module(split22):
    ht = hom_truncation(trivial_module(2, 2), 8, split22)
    assert ht.layer_dims()[:7] == [1] * 7
    assert stabilization_guard(trivial_module(2, 2), 8, split22)


def test_annihilator_of_trivial_module_is_zero(split22):
    A = annihilator(trivial_module(2, 2), 3, 8, split22)
    assert A.dim == 0


def test_annihilator_of_free_module_is_everything(split22):
    A = annihilator(regular_module(2, 2), 3, 8, split22)
    assert A.dim == len(monomials_upto(gamma_ring(2, 1), 3))


def test_annihilator_of_kh_is_augmentation_ideal(split32):
    kh = kh_regular(split32)
    A = annihilator(kh, 3, 8, split32)
    ring = gamma_ring(3, 1)
    assert A.dim == len(monomials_upto(ring, 3)) - 1
    assert not A.contains(EndElement.unit(ring, 3))
    assert A.contains(EndElement.from_terms(ring, 3, {(2,): 1}))
    assert is_truncated_ideal(A)


def test_annihilator_matches_cohomology_action(split32):
    kh = kh_regular(split32)
    A = annihilator(kh, 3, 8, split32)
    assert same_annihilator(A, cohomology_action_annihilator(kh, 3, split32))
    assert same_annihilator(A, cohomology_action_annihilator(kh, 3, split32, over_g=True))


def test_annihilator_routes_agree(split22):
    M = omega(trivial_module(2, 2))[0]
    a = annihilator(M, 3, 8, split22)
    b = annihilator(M, 3, 8, split22, use_generators=False)
    assert same_annihilator(a, b)


def test_annihilator_beyond_stable_range_rejected(split22):
    with pytest.raises(RangeError):
        annihilator(trivial_module(2, 2), 7, 8, split22)


def test_cone_of_degree_two_class_has_constant_dimension(split22):
    ring = gamma_ring(2, 1)
    for n in range(2, 9):
        zeta = EndElement.from_terms(ring, n, {(2,): 1})
        assert cone_of(zeta, n, split22).module.dim == 4


def test_cone_of_zero_class(split22):
    ring = gamma_ring(2, 1)
    n, d = 5, 2
    c = cone_of(EndElement.zero(ring, n), n, split22, degree=d)
    expected = build_E(n, split22).dim + omega(build_E(n - d, split22).module)[0].dim
    assert c.module.dim == expected
    with pytest.raises(ValueError):
        cone_of(EndElement.zero(ring, n), n, split22)


def test_cone_of_unit_is_zero(split22):
    ring = gamma_ring(2, 1)
    assert cone_of(EndElement.unit(ring, 4), 4, split22).module.dim == 0


def test_cone_is_a_module(split32):
    ring = gamma_ring(3, 1)
    c = cone_of(EndElement.from_terms(ring, 5, {(2,): 1}), 5, split32)
    c.module.validate()
    assert c.exact


def test_realization_of_degree_two_class(split22):
    ring = gamma_ring(2, 1)
    zeta = EndElement.from_terms(ring, 12, {(2,): 1})
    rep = verify_realize(zeta, split22, 8, 12, 4, power=3)
    assert rep.annihilates
    assert rep.ok
    assert rep.cone_dim == 4


def test_realization_rejects_units(split22):
    ring = gamma_ring(2, 1)
    with pytest.raises(ValueError):
        verify_realize(EndElement.unit(ring, 8), split22, 6, 8, 2)

import numpy as np
import pytest

from rickard.gamma import EndElement, GammaElement, gamma_ring


def test_p2_product_is_polynomial():
    R = gamma_ring(2, 2)
    eta1 = R.monomial((1, 0))
    eta2 = R.monomial((0, 1))
    assert (eta1 * eta1).terms() == {(2, 0): 1}
    assert (eta1 * eta2).terms() == {(1, 1): 1}


def test_odd_times_odd_vanishes():
    R = gamma_ring(3, 2)
    eta = R.monomial((1, 0))
    other = R.monomial((0, 1))
    assert (eta * eta).is_zero()
    assert (eta * other).is_zero()


def test_cup_ring_keeps_mixed_odd_product():
    R = gamma_ring(3, 2, cup=True)
    x = R.monomial((1, 0)) * R.monomial((0, 1))
    assert x.terms() == {(1, 1): 1}
    y = R.monomial((0, 1)) * R.monomial((1, 0))
    assert y.terms() == {(1, 1): 2}


def test_even_classes_form_polynomial_ring_at_p3():
    R = gamma_ring(3, 1)
    zeta = R.monomial((2,))
    eta = R.monomial((1,))
    assert (zeta * zeta).terms() == {(4,): 1}
    assert (zeta * eta).terms() == {(3,): 1}


def test_p2_convolution_of_truncated_series():
    R = gamma_ring(2, 1)
    x = EndElement.from_terms(R, 4, {(0,): 1, (1,): 1})
    assert (x * x).terms() == {(0,): 1, (2,): 1}


def test_inverse_of_geometric_series():
    R = gamma_ring(2, 1)
    x = EndElement.from_terms(R, 5, {(0,): 1, (1,): 1})
    inv = x.inverse()
    assert inv.terms() == {(d,): 1 for d in range(6)}
    assert x * inv == EndElement.unit(R, 5)


def test_unit_is_neutral():
    R = gamma_ring(3, 2)
    x = EndElement.from_terms(R, 4, {(2, 0): 1, (1, 1): 2, (0, 3): 1})
    assert EndElement.unit(R, 4) * x == x


def test_degree_and_invertibility():
    R = gamma_ring(3, 2)
    x = EndElement.from_terms(R, 4, {(0, 2): 1})
    assert x.degree() == 2
    assert not x.is_invertible()
    with pytest.raises(ValueError):
        x.inverse()
    assert EndElement.zero(R, 3).degree() is None


def test_dimensions_match_compositions():
    R = gamma_ring(2, 3)
    assert [R.dim(d) for d in range(4)] == [1, 3, 6, 10]


def test_mismatched_degrees_cannot_be_added():
    R = gamma_ring(2, 2)
    with pytest.raises(ValueError):
        R.monomial((1, 0)) + R.monomial((2, 0))

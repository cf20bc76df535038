import numpy as np
import pytest

from rickard.resolution import (
    betti,
    cocycle_to_monomial,
    compositions,
    generator_cocycle,
    monomial_to_cocycle,
    resolution,
)


def test_betti_numbers():
    assert [betti(n, 1) for n in range(4)] == [1, 1, 1, 1]
    assert [betti(n, 2) for n in range(4)] == [1, 2, 3, 4]
    assert [betti(n, 3) for n in range(4)] == [1, 3, 6, 10]
    assert betti(-1, 2) == 0


def test_compositions_descending():
    assert compositions(2, 2) == ((2, 0), (1, 1), (0, 2))


@pytest.mark.parametrize("p", [2, 3, 5])
def test_one_variable_boundaries_alternate(p):
    res = resolution(p, 1)
    x = np.eye(p, k=-1, dtype=np.int64)
    assert np.array_equal(res.boundary(1), x)
    assert np.array_equal(res.boundary(2), np.linalg.matrix_power(x, p - 1) % p)
    assert np.array_equal(res.boundary(3), x)


@pytest.mark.parametrize("p,s", [(2, 1), (2, 2), (3, 2), (2, 3)])
def test_resolution_exact_and_minimal(p, s):
    res = resolution(p, s)
    for n in range(5):
        assert res.check_exact(n)
        assert res.is_minimal(n)
        if n >= 1:
            d = res.boundary(n)
            prev = res.boundary(n - 1) if n >= 2 else None
            if prev is not None:
                assert not np.any((prev @ d) % p)


def test_cup_square_of_degree_one_class():
    # nonzero at p = 2, zero for odd p (graded commutativity)
    r2 = resolution(2, 1)
    eta = generator_cocycle(r2, 1, 0)
    assert r2.cup(eta, 1, eta, 1).tolist() == [1]
    r3 = resolution(3, 1)
    eta = generator_cocycle(r3, 1, 0)
    assert r3.cup(eta, 1, eta, 1).tolist() == [0]


def test_monomial_basis_is_a_basis():
    for p, s, n in [(2, 2, 3), (3, 2, 3), (3, 3, 2)]:
        m = monomial_to_cocycle(p, s, n)
        assert np.array_equal((m @ cocycle_to_monomial(p, s, n)) % p, np.eye(len(m), dtype=np.int64))


def test_lift_is_chain_map():
    p, s = 3, 2
    res = resolution(p, s)
    c = np.array([1, 2])
    maps = res.lift(c, 1, 3)
    for i in range(1, 4):
        lhs = (res.boundary(i) @ maps[i]) % p
        rhs = (maps[i - 1] @ res.boundary(i + 1)) % p
        assert np.array_equal(lhs, rhs)


def test_wrong_cocycle_length_rejected():
    with pytest.raises(ValueError):
        resolution(2, 2).lift([1, 0, 0], 1, 1)

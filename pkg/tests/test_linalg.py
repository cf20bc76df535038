import numpy as np
import pytest

from rickard import linalg as la
from rickard.linalg import FpMatrix, kernel_image, kronecker, rref_solve


def test_identity_system_has_unique_solution():
    A = FpMatrix.identity(5, 3)
    B = FpMatrix(5, [[1], [2], [3]])
    sol = rref_solve(A, B)
    assert sol.particular == B
    assert sol.kernel.cols == 0


def test_zero_matrix_kernel_is_everything():
    ki = kernel_image(FpMatrix.zeros(3, 2, 4))
    assert ki.kernel.rows == 4
    assert ki.rank == 0


def test_inconsistent_system_returns_none():
    A = FpMatrix(2, [[1, 1], [1, 1]])
    B = FpMatrix(2, [[0], [1]])
    assert rref_solve(A, B) is None


def test_jordan_block_rank():
    J = FpMatrix(2, [[0, 1], [0, 0]])
    assert J.rank() == 1
    ki = kernel_image(J)
    assert ki.kernel == FpMatrix(2, [[1, 0]])
    assert ki.image == FpMatrix(2, [[1, 0]])


def test_kronecker_of_identities():
    assert kronecker(FpMatrix.identity(3, 2), FpMatrix.identity(3, 3)) == FpMatrix.identity(3, 6)


def test_kronecker_rank_multiplies():
    rng = np.random.default_rng(1)
    for _ in range(10):
        A = FpMatrix(3, rng.integers(0, 3, (3, 4)))
        B = FpMatrix(3, rng.integers(0, 3, (2, 3)))
        assert kronecker(A, B).rank() == A.rank() * B.rank()


def test_modulus_mismatch_rejected():
    with pytest.raises(ValueError):
        FpMatrix.identity(2, 2) @ FpMatrix.identity(3, 2)


def test_nonprime_modulus_rejected():
    with pytest.raises(ValueError):
        FpMatrix(4, [[1]])


def test_inverse_roundtrip():
    rng = np.random.default_rng(2)
    for p in (2, 3, 5):
        a = rng.integers(0, p, (5, 5))
        if la.rank(a, p) < 5:
            continue
        assert np.array_equal(la.mulmod(a, la.inverse(a, p), p), np.eye(5, dtype=np.int64))


def test_singular_inverse_raises():
    with pytest.raises(ValueError):
        la.inverse(np.array([[1, 2], [2, 4]]), 5)


def test_mulmod_exact_for_large_entries():
    a = np.full((3, 4), 4)
    b = np.full((4, 2), 4)
    assert np.array_equal(la.mulmod(a, b, 5), (a @ b) % 5)


def test_complement_indices_complete_a_basis():
    sub = np.array([[1], [1], [0]])
    idx = la.complement_indices(sub, 3, 2)
    full = np.hstack([sub, np.eye(3, dtype=np.int64)[:, idx]])
    assert la.rank(full, 2) == 3


def test_complement_of_empty_is_everything():
    assert la.complement_indices(np.zeros((0,)), 3, 2) == [0, 1, 2]

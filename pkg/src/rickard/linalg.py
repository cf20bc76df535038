"""Dense exact linear algebra over prime fields F_p.

Matrices are numpy int64 arrays with entries reduced into [0, p).  The
low-level routines take ``(array, p)``; :class:`FpMatrix` is the validated
value type used at the public surface.

Elimination is deterministic: pivots are taken in the leftmost available
column, using the smallest row index holding a nonzero entry.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Optional

import numpy as np


@lru_cache(maxsize=None)
def inverse_table(p: int) -> np.ndarray:
    table = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        table[a] = pow(a, -1, p)
    return table


def reduce(a, p: int) -> np.ndarray:
    return np.asarray(a, dtype=np.int64) % p


def mulmod(a, b, p: int) -> np.ndarray:
    """``a @ b mod p``, through floating point BLAS whenever that is exact."""
    a = np.asarray(a)
    b = np.asarray(b)
    inner = a.shape[-1] if a.ndim else 1
    if inner * (p - 1) ** 2 < 2**52:
        out = np.asarray(a, dtype=np.float64) @ np.asarray(b, dtype=np.float64)
        return np.fmod(out, p).astype(np.int64)
    return (np.asarray(a, dtype=np.int64) @ np.asarray(b, dtype=np.int64)) % p


def rref(a, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``a`` and the list of pivot columns."""
    m = np.array(a, dtype=np.int64) % p
    if m.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    rows, cols = m.shape
    inv = inverse_table(p)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            m[[r, i]] = m[[i, r]]
        lead = m[r, c]
        if lead != 1:
            m[r, c:] = (m[r, c:] * inv[lead]) % p
        col = m[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            m[hit, c:] = (m[hit, c:] - np.outer(col[hit], m[r, c:])) % p
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a, p: int) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    # eliminate along the shorter side
    if a.shape[0] > a.shape[1]:
        a = a.T
    return len(rref(a, p)[1])


def nullspace(a, p: int) -> np.ndarray:
    """Basis of ``{x : a x = 0}`` as the columns of the returned array.

    Each basis vector has a single free variable set to one, so the basis
    (read as rows) is in reduced echelon form up to column order.
    """
    a = np.asarray(a, dtype=np.int64)
    rows, cols = a.shape
    if rows == 0:
        return np.eye(cols, dtype=np.int64)
    m, piv = rref(a, p)
    free = [c for c in range(cols) if c not in set(piv)]
    basis = np.zeros((cols, len(free)), dtype=np.int64)
    for k, f in enumerate(free):
        basis[f, k] = 1
        for i, c in enumerate(piv):
            basis[c, k] = (-m[i, f]) % p
    return basis


def solve(a, b, p: int) -> Optional[np.ndarray]:
    """A particular solution of ``a x = b`` with all free variables zero.

    ``b`` may be a vector or a matrix of right-hand sides.  Returns ``None``
    when the system is inconsistent.
    """
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    vector = b.ndim == 1
    if vector:
        b = b[:, None]
    rows, cols = a.shape
    if b.shape[0] != rows:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    if rows == 0:
        x = np.zeros((cols, b.shape[1]), dtype=np.int64)
        return x[:, 0] if vector else x
    m, piv = rref(np.hstack([a, b]), p)
    lhs_piv = [c for c in piv if c < cols]
    if len(lhs_piv) != len(piv):
        return None
    x = np.zeros((cols, b.shape[1]), dtype=np.int64)
    for i, c in enumerate(lhs_piv):
        x[c] = m[i, cols:]
    return x[:, 0] if vector else x


def column_basis(a, p: int) -> np.ndarray:
    """Columns of ``a`` forming a basis of its column space (first-come)."""
    a = np.asarray(a, dtype=np.int64)
    if a.size == 0:
        return np.zeros((a.shape[0], 0), dtype=np.int64)
    _, piv = rref(a, p)
    return a[:, piv] % p


def image_basis(a, p: int) -> np.ndarray:
    """Basis of the column space of ``a``, returned as rows in RREF."""
    a = np.asarray(a, dtype=np.int64)
    if a.size == 0:
        return np.zeros((0, a.shape[0]), dtype=np.int64)
    m, piv = rref(a.T, p)
    return m[: len(piv)]


def as_columns(x, n: int) -> np.ndarray:
    """Reshape to n rows; empty input gives an n x 0 matrix."""
    x = np.asarray(x, dtype=np.int64)
    if x.size == 0:
        return np.zeros((n, 0), dtype=np.int64)
    return x.reshape(n, -1)


def complement_indices(sub, dim: int, p: int) -> list[int]:
    """Standard basis indices completing the columns of ``sub`` to a basis."""
    sub = as_columns(sub, dim)
    k = sub.shape[1]
    _, piv = rref(np.hstack([sub, np.eye(dim, dtype=np.int64)]), p)
    return [c - k for c in piv if c >= k]


def inverse(a, p: int) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    x = solve(a, np.eye(n, dtype=np.int64), p)
    if x is None or rank(a, p) != n:
        raise ValueError("matrix is singular")
    return x


def matpow(a, k: int, p: int) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    out = np.eye(a.shape[0], dtype=np.int64)
    for _ in range(k):
        out = mulmod(out, a, p)
    return out


def in_span(vectors, v, p: int) -> bool:
    vectors = np.asarray(vectors, dtype=np.int64)
    if vectors.size == 0:
        return not np.any(np.asarray(v) % p)
    return solve(vectors, v, p) is not None


# ---------------------------------------------------------------------------
# validated public value type


@dataclass(frozen=True, eq=False)
class FpMatrix:
    """An immutable matrix over F_p."""

    p: int
    data: np.ndarray

    def __post_init__(self):
        if self.p < 2 or any(self.p % q == 0 for q in range(2, int(self.p**0.5) + 1)):
            raise ValueError(f"modulus {self.p} is not prime")
        arr = np.array(self.data, dtype=np.int64)
        if arr.ndim != 2:
            arr = arr.reshape(arr.shape[0] if arr.ndim else 0, -1)
        arr %= self.p
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @classmethod
    def identity(cls, p: int, n: int) -> "FpMatrix":
        return cls(p, np.eye(n, dtype=np.int64))

    @classmethod
    def zeros(cls, p: int, rows: int, cols: int) -> "FpMatrix":
        return cls(p, np.zeros((rows, cols), dtype=np.int64))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def _check(self, other: "FpMatrix") -> None:
        if not isinstance(other, FpMatrix):
            raise TypeError("expected an FpMatrix")
        if other.p != self.p:
            raise ValueError(f"modulus mismatch: {self.p} vs {other.p}")

    def __matmul__(self, other: "FpMatrix") -> "FpMatrix":
        self._check(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch: {self.shape} @ {other.shape}")
        return FpMatrix(self.p, self.data @ other.data)

    def __add__(self, other: "FpMatrix") -> "FpMatrix":
        self._check(other)
        return FpMatrix(self.p, self.data + other.data)

    def __sub__(self, other: "FpMatrix") -> "FpMatrix":
        self._check(other)
        return FpMatrix(self.p, self.data - other.data)

    def __neg__(self) -> "FpMatrix":
        return FpMatrix(self.p, -self.data)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FpMatrix)
            and other.p == self.p
            and other.shape == self.shape
            and bool(np.array_equal(other.data, self.data))
        )

    def __hash__(self):
        return hash((self.p, self.shape, self.data.tobytes()))

    @property
    def T(self) -> "FpMatrix":
        return FpMatrix(self.p, self.data.T)

    def rank(self) -> int:
        return rank(self.data, self.p)

    def tolist(self) -> list[list[int]]:
        return self.data.tolist()

    def __repr__(self):
        return f"FpMatrix(p={self.p}, {self.data.tolist()})"


class Solution(NamedTuple):
    """All solutions of ``A X = B``: ``particular + kernel @ C`` for any C."""

    particular: FpMatrix
    kernel: FpMatrix


def rref_solve(A: FpMatrix, B: FpMatrix) -> Optional[Solution]:
    """Solve ``A X = B``; ``None`` means the system is inconsistent."""
    A._check(B)
    if A.rows != B.rows:
        raise ValueError(f"shape mismatch: {A.shape} vs {B.shape}")
    x = solve(A.data, B.data, A.p)
    if x is None:
        return None
    return Solution(FpMatrix(A.p, x), FpMatrix(A.p, nullspace(A.data, A.p)))


class KernelImage(NamedTuple):
    kernel: FpMatrix  # basis vectors as rows, RREF
    image: FpMatrix  # basis vectors as rows, RREF
    rank: int


def kernel_image(A: FpMatrix) -> KernelImage:
    p = A.p
    ker = nullspace(A.data, p)
    ker_rows = rref(ker.T, p)[0] if ker.shape[1] else np.zeros((0, A.cols), dtype=np.int64)
    img = image_basis(A.data, p)
    return KernelImage(FpMatrix(p, ker_rows.reshape(-1, A.cols)), FpMatrix(p, img.reshape(-1, A.rows)), img.shape[0])


def kronecker(A: FpMatrix, B: FpMatrix) -> FpMatrix:
    """Kronecker product; basis ``u_i (x) v_j`` sits at index ``i * dim(v) + j``."""
    A._check(B)
    return FpMatrix(A.p, np.kron(A.data, B.data))

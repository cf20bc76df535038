"""Minimal resolution of k over kH = k[x_1..x_s]/(x_i^p), cocycles and chain lifts.

The resolution is the tensor product of the periodic resolutions
``... -> k[x]/(x^p) --x^{p-1}--> k[x]/(x^p) --x--> k[x]/(x^p) -> k``.
Free generators of ``P_n`` are labelled by compositions ``a`` of ``n`` into
``s`` parts (descending lexicographic order) and

    d(e_a) = sum_j (-1)^{a_1 + .. + a_{j-1}} x_j^{c(a_j)} e_{a - delta_j},

with ``c(a) = 1`` for odd ``a`` and ``p - 1`` for even ``a``.

A free module ``P_n`` has basis ``(generator, kH-monomial)`` at index
``g * p^s + k``.
"""

from __future__ import annotations

from functools import lru_cache
from math import comb

import numpy as np

from . import linalg as la
from .algebra import exponents, monomial_index, regular_module, trivial_module


@lru_cache(maxsize=None)
def compositions(n: int, s: int) -> tuple[tuple[int, ...], ...]:
    """Weak compositions of n into s parts in descending lexicographic order."""
    if s == 0:
        return ((),) if n == 0 else ()
    if s == 1:
        return ((n,),)
    out = []
    for first in range(n, -1, -1):
        for rest in compositions(n - first, s - 1):
            out.append((first,) + rest)
    return tuple(out)


def betti(n: int, s: int) -> int:
    if n < 0:
        return 0
    if s == 0:
        return 1 if n == 0 else 0
    return comb(n + s - 1, s - 1)


class Resolution:
    """The minimal kH-resolution of k, built lazily degree by degree."""

    def __init__(self, p: int, s: int):
        self.p = p
        self.s = s
        self.P = p**s
        reg = regular_module(p, s) if s else trivial_module(p, 1)
        self._mon = reg.monomial_actions() if s else np.ones((1, 1, 1), dtype=np.int64)
        self._bd: dict[int, np.ndarray] = {}
        self._index: dict[int, dict] = {}

    def labels(self, n: int) -> tuple[tuple[int, ...], ...]:
        return compositions(n, self.s) if n >= 0 else ()

    def rank(self, n: int) -> int:
        return betti(n, self.s)

    def label_index(self, n: int) -> dict:
        if n not in self._index:
            self._index[n] = {a: i for i, a in enumerate(self.labels(n))}
        return self._index[n]

    def dim(self, n: int) -> int:
        return self.rank(n) * self.P

    # -- free module maps ------------------------------------------------

    def free_map(self, images, src_rank: int) -> np.ndarray:
        """kH-linear map on a free module from the images of its generators.

        ``images`` has one column per source generator, written in the
        basis of the target free module.
        """
        p, P = self.p, self.P
        images = la.reduce(images, p).reshape(-1, src_rank)
        tgt_rank = images.shape[0] // P
        if src_rank == 0 or tgt_rank == 0:
            return np.zeros((tgt_rank * P, src_rank * P), dtype=np.int64)
        # out[(t, q), (g, k)] = sum_u mon[k, q, u] images[(t, u), g]
        v = images.reshape(tgt_rank, P, src_rank)
        out = la.mulmod(self._mon.reshape(P * P, P), v.transpose(1, 0, 2).reshape(P, -1), p)
        out = out.reshape(P, P, tgt_rank, src_rank)  # k, q, t, g
        return out.transpose(2, 1, 3, 0).reshape(tgt_rank * P, src_rank * P)

    def boundary_images(self, n: int) -> np.ndarray:
        """Images of the generators of P_n in P_{n-1} (one column each)."""
        p, s, P = self.p, self.s, self.P
        tgt = self.label_index(n - 1)
        out = np.zeros((self.rank(n - 1) * P, self.rank(n)), dtype=np.int64)
        for g, a in enumerate(self.labels(n)):
            sign = 1
            for j in range(s):
                if a[j] > 0:
                    e = [0] * s
                    e[j] = 1 if a[j] % 2 else p - 1
                    b = list(a)
                    b[j] -= 1
                    out[tgt[tuple(b)] * P + monomial_index(e, p), g] += sign
                if a[j] % 2:
                    sign = -sign
        return out % p

    def boundary(self, n: int) -> np.ndarray:
        """The matrix of d_n: P_n -> P_{n-1} (zero-sized for n <= 0)."""
        if n not in self._bd:
            if n <= 0:
                self._bd[n] = np.zeros((self.dim(n - 1), self.dim(n)), dtype=np.int64)
            else:
                self._bd[n] = self.free_map(self.boundary_images(n), self.rank(n))
        return self._bd[n]

    def augmentation(self) -> np.ndarray:
        e = np.zeros(self.P, dtype=np.int64)
        e[0] = 1
        return e

    # -- cochains ----------------------------------------------------------

    def lift(self, cocycle, degree: int, depth: int) -> list[np.ndarray]:
        """Chain map {g_i : P_{degree+i} -> P_i} for i <= depth lifting ``cocycle``.

        Each ``g_i`` is a full matrix; the particular solutions have all free
        variables zero so the lift is reproducible.
        """
        p, P = self.p, self.P
        c = la.reduce(cocycle, p).reshape(-1)
        if c.size != self.rank(degree):
            raise ValueError(f"cocycle of degree {degree} needs {self.rank(degree)} entries")
        maps = []
        images = np.zeros((P, self.rank(degree)), dtype=np.int64)
        images[0] = c
        maps.append(self.free_map(images, self.rank(degree)))
        for i in range(1, depth + 1):
            n = degree + i
            rhs = la.mulmod(maps[-1], self.boundary_images(n), p)
            if not self.rank(n):
                maps.append(np.zeros((self.dim(i), 0), dtype=np.int64))
                continue
            x = la.solve(self.boundary(i), rhs, p)
            if x is None:
                raise RuntimeError(f"chain lift failed at depth {i}; resolution not exact")
            maps.append(self.free_map(x, self.rank(n)))
        return maps

    def cup(self, gamma, dg: int, mu, dm: int) -> np.ndarray:
        """Cocycle of gamma o mu in degree dg + dm (composition of chain lifts)."""
        lift = self.lift(mu, dm, dg)[dg]
        P = self.P
        # constant coefficients of the images of the generators
        const = lift.reshape(self.rank(dg), P, self.rank(dg + dm), P)[:, 0, :, 0]
        return (la.reduce(gamma, self.p) @ const) % self.p

    def check_exact(self, n: int) -> bool:
        """Homology of the augmented complex vanishes at P_n."""
        p = self.p
        if n == 0:
            img = la.rank(self.boundary(1), p)
            return self.dim(0) - 1 == img
        ker = self.dim(n) - la.rank(self.boundary(n), p)
        return ker == la.rank(self.boundary(n + 1), p)

    def is_minimal(self, n: int) -> bool:
        """Every boundary entry lies in the radical: constant terms vanish."""
        if n <= 0:
            return True
        return not np.any(self.boundary_images(n).reshape(-1, self.P, self.rank(n))[:, 0])


@lru_cache(maxsize=None)
def resolution(p: int, s: int) -> Resolution:
    return Resolution(p, s)


# ---------------------------------------------------------------------------
# monomial basis of H^*(H, k)


def monomial_factors(label: tuple[int, ...], p: int) -> list[tuple[int, int]]:
    """Ordered factors (degree, j) of the monomial with the given label.

    For p = 2 the label is the exponent vector of eta_1..eta_s.  For odd p the
    label ``a`` encodes ``zeta^m eta^eps`` with ``a_j = 2 m_j + eps_j``;
    zetas come first, then the etas in increasing order.
    """
    if p == 2:
        return [(1, j) for j, a in enumerate(label) for _ in range(a)]
    zetas = [(2, j) for j, a in enumerate(label) for _ in range(a // 2)]
    etas = [(1, j) for j, a in enumerate(label) if a % 2]
    return zetas + etas


def generator_cocycle(res: Resolution, degree: int, j: int) -> np.ndarray:
    e = [0] * res.s
    e[j] = degree
    c = np.zeros(res.rank(degree), dtype=np.int64)
    c[res.label_index(degree)[tuple(e)]] = 1
    return c


@lru_cache(maxsize=None)
def monomial_to_cocycle(p: int, s: int, n: int) -> np.ndarray:
    """Column ``a`` = cocycle of the ordered chain-level product with label ``a``."""
    res = resolution(p, s)
    labels = res.labels(n)
    out = np.zeros((len(labels), len(labels)), dtype=np.int64)
    for col, a in enumerate(labels):
        factors = monomial_factors(a, p)
        # evaluate f_1 o (f_2 o (... o f_k)) from the right
        cur = np.ones(1, dtype=np.int64)
        deg = 0
        for fd, j in reversed(factors):
            g = generator_cocycle(res, fd, j)
            cur = res.cup(g, fd, cur, deg)
            deg += fd
        out[:, col] = cur
    return out % p


@lru_cache(maxsize=None)
def cocycle_to_monomial(p: int, s: int, n: int) -> np.ndarray:
    return la.inverse(monomial_to_cocycle(p, s, n), p)

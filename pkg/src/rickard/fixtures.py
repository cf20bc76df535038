"""Seeded module corpora for tests and the acceptance suite."""

from __future__ import annotations

import itertools

import numpy as np

from . import linalg as la
from .algebra import (
    Algebra,
    Module,
    Splitting,
    conjugate,
    direct_sum,
    dual,
    exponents,
    kh_regular,
    quotient,
    regular_module,
    standard_splitting,
    trivial_module,
)
from .stable import is_projective, omega, orbit_matrix


def staircase_module(p: int, r: int, cells) -> Module:
    """kG / I for the monomial ideal whose standard monomials are ``cells``.

    ``cells`` must be closed under lowering exponents.
    """
    cells = sorted(set(tuple(c) for c in cells))
    index = {c: i for i, c in enumerate(cells)}
    n = len(cells)
    acts = []
    for i in range(r):
        a = np.zeros((n, n), dtype=np.int64)
        for c, j in index.items():
            up = list(c)
            up[i] += 1
            if tuple(up) in index:
                a[index[tuple(up)], j] = 1
        acts.append(a)
    return Module(p, tuple(acts), f"kG/I[{n}]")


def random_down_set(p: int, r: int, size: int, rng: np.random.Generator) -> list[tuple]:
    """A random order ideal of exponent vectors with ``size`` elements."""
    cells = {(0,) * r}
    while len(cells) < size:
        frontier = []
        for c in cells:
            for i in range(r):
                up = list(c)
                up[i] += 1
                up = tuple(up)
                if up[i] < p and up not in cells and all(
                    tuple(up[:j] + (up[j] - 1,) + up[j + 1 :]) in cells for j in range(r) if up[j] > 0
                ):
                    frontier.append(up)
        if not frontier:
            break
        frontier = sorted(set(frontier))
        cells.add(frontier[int(rng.integers(len(frontier)))])
    return sorted(cells)


def random_invertible(n: int, p: int, rng: np.random.Generator) -> np.ndarray:
    while True:
        g = rng.integers(0, p, (n, n))
        if n == 0 or la.rank(g, p) == n:
            return g.astype(np.int64)


def random_cyclic_quotient(p: int, r: int, rng: np.random.Generator, relations: int = 1) -> Module:
    """kG modulo the submodule generated by random radical elements."""
    reg = regular_module(p, r)
    vs = rng.integers(0, p, (reg.dim, relations))
    vs[0] = 0
    span = orbit_matrix(reg, vs)
    basis = la.column_basis(span, p).reshape(reg.dim, -1)
    Q, _ = quotient(reg, basis)
    Q.name = "kG/(v)"
    return Q


def random_module(
    p: int, r: int, rng: np.random.Generator, lo: int = 2, hi: int = 12, nonprojective: bool = False
) -> Module:
    """Random module of dimension in [lo, hi] (best effort for the upper bound)."""
    kind = int(rng.integers(4))
    P = p**r
    for _ in range(50):
        if kind == 0:
            size = int(rng.integers(lo, min(hi, P) + 1))
            M = staircase_module(p, r, random_down_set(p, r, size, rng))
        elif kind == 1:
            M = dual(staircase_module(p, r, random_down_set(p, r, int(rng.integers(lo, min(hi, P) + 1)), rng)))
        elif kind == 2:
            M = random_cyclic_quotient(p, r, rng, int(rng.integers(1, 3)))
        else:
            a = staircase_module(p, r, random_down_set(p, r, int(rng.integers(1, max(2, hi // 2))), rng))
            b = staircase_module(p, r, random_down_set(p, r, int(rng.integers(1, max(2, hi // 2))), rng))
            M = direct_sum(a, b)
        if lo <= M.dim <= hi and not (nonprojective and is_projective(M)):
            return conjugate(M, random_invertible(M.dim, p, rng))
        kind = int(rng.integers(4))
    return trivial_module(p, r)


def corpus(seed: int = 0, count: int = 30, primes=(2, 3, 5), ranks=(2, 3), max_dim: int = 12) -> list[Module]:
    """Seeded corpus with kG, k and a kH inflation injected for each (p, r)."""
    rng = np.random.default_rng(seed)
    out: list[Module] = []
    pairs = list(itertools.product(primes, ranks))
    for p, r in pairs:
        alg = Algebra(p, r)
        if p**r <= max_dim:
            out.append(regular_module(p, r))
        out.append(trivial_module(p, r))
        kh = kh_regular(standard_splitting(alg))
        if kh.dim <= max_dim:
            out.append(kh)
    # modules with a free summand hidden by a change of basis
    for p, r in pairs:
        if 2 * p**r <= max_dim + p**r and p**r < max_dim:
            M = random_module(p, r, rng, 1, max_dim - p**r)
            S = direct_sum(M, regular_module(p, r))
            out.append(conjugate(S, random_invertible(S.dim, p, rng)))
    i = 0
    while len(out) < count:
        p, r = pairs[i % len(pairs)]
        out.append(random_module(p, r, rng, 2, max_dim))
        i += 1
    return out


def small_modules(p: int, r: int, split: Splitting, seed: int = 0, count: int = 3, lo: int = 4, hi: int = 6) -> list[Module]:
    """The finite-generation family: k, kH inflated, Omega(k) and random modules."""
    rng = np.random.default_rng(seed)
    k = trivial_module(p, r)
    mods = [k, kh_regular(split), omega(k)[0]]
    while len(mods) < 3 + count:
        mods.append(random_module(p, r, rng, lo, hi, nonprojective=True))
    return mods

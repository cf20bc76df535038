"""The graded ring modelling the stable endomorphisms of the idempotent module.

Degree-d elements live in H^d(H, k), written on the monomial basis labelled
by compositions of d (see :mod:`rickard.resolution`).  For p = 2 the ring
is the polynomial ring on the degree-one classes.  For odd p the product is
the cup product of ``k[zeta] (x) Lambda(eta)`` except that the product of
two odd-degree elements is zero.

:class:`EndElement` is a truncated element of the product over all degrees;
multiplication is the truncated convolution of the homogeneous parts.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from . import linalg as la
from .resolution import compositions


def _label_product(a: tuple, b: tuple, p: int, cup: bool) -> tuple[int, Optional[tuple]]:
    """(sign, label) of the product of two basis monomials; label None means 0."""
    if p == 2:
        return 1, tuple(x + y for x, y in zip(a, b))
    ea = [x % 2 for x in a]
    eb = [y % 2 for y in b]
    if not cup and sum(ea) % 2 and sum(eb) % 2:
        return 0, None
    if any(x and y for x, y in zip(ea, eb)):
        return 0, None
    # moving each eta of b past the larger-index etas of a
    swaps = sum(1 for i, x in enumerate(ea) if x for j, y in enumerate(eb) if y and j < i)
    sign = -1 if swaps % 2 else 1
    return sign, tuple(x + y for x, y in zip(a, b))


class GammaRing:
    """Graded commutative ring on ``s`` generator families over F_p.

    ``cup=True`` gives the cohomology ring H^*(H, k) itself (graded
    commutative); the default gives the ring with odd-odd products zero.
    """

    def __init__(self, p: int, s: int, cup: bool = False):
        self.p = p
        self.s = s
        self.cup = cup
        self._tables: dict[tuple[int, int], np.ndarray] = {}

    def labels(self, d: int) -> tuple:
        return compositions(d, self.s) if d >= 0 else ()

    def dim(self, d: int) -> int:
        return len(self.labels(d))

    def index(self, d: int) -> dict:
        return _index(d, self.s)

    def table(self, d: int, e: int) -> np.ndarray:
        """T[i, j, k]: coefficient of basis k (degree d+e) in b_i * b_j."""
        key = (d, e)
        if key not in self._tables:
            la_, lb = self.labels(d), self.labels(e)
            idx = self.index(d + e)
            t = np.zeros((len(la_), len(lb), self.dim(d + e)), dtype=np.int64)
            for i, a in enumerate(la_):
                for j, b in enumerate(lb):
                    sign, c = _label_product(a, b, self.p, self.cup)
                    if c is not None:
                        t[i, j, idx[c]] = sign % self.p
            self._tables[key] = t
        return self._tables[key]

    def multiply(self, x, d: int, y, e: int) -> np.ndarray:
        x = la.reduce(x, self.p)
        y = la.reduce(y, self.p)
        return np.einsum("i,j,ijk->k", x, y, self.table(d, e)) % self.p

    def monomial(self, label: Sequence[int]) -> "GammaElement":
        label = tuple(label)
        d = sum(label)
        v = np.zeros(self.dim(d), dtype=np.int64)
        v[self.index(d)[label]] = 1
        return GammaElement(self, d, v)

    def even_monomials(self, d: int) -> list[tuple]:
        """Basis labels of H_ev in degree d (only polynomial generators)."""
        if self.p == 2:
            return list(self.labels(d))
        return [a for a in self.labels(d) if all(x % 2 == 0 for x in a)]


@lru_cache(maxsize=None)
def _index(d: int, s: int) -> dict:
    return {a: i for i, a in enumerate(compositions(d, s))}


@lru_cache(maxsize=None)
def gamma_ring(p: int, s: int, cup: bool = False) -> GammaRing:
    return GammaRing(p, s, cup)


@dataclass(eq=False)
class GammaElement:
    """A homogeneous element of the ring."""

    ring: GammaRing
    degree: int
    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = la.reduce(self.coeffs, self.ring.p).reshape(self.ring.dim(self.degree))

    def __mul__(self, other: "GammaElement") -> "GammaElement":
        if other.ring is not self.ring:
            raise ValueError("elements of different rings")
        c = self.ring.multiply(self.coeffs, self.degree, other.coeffs, other.degree)
        return GammaElement(self.ring, self.degree + other.degree, c)

    def __add__(self, other: "GammaElement") -> "GammaElement":
        if other.degree != self.degree:
            raise ValueError("sum of elements of different degrees")
        return GammaElement(self.ring, self.degree, self.coeffs + other.coeffs)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GammaElement)
            and other.degree == self.degree
            and bool(np.array_equal(self.coeffs, other.coeffs))
        )

    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def terms(self) -> dict:
        labels = self.ring.labels(self.degree)
        return {labels[i]: int(self.coeffs[i]) for i in np.flatnonzero(self.coeffs)}

    def __repr__(self):
        return f"GammaElement(deg={self.degree}, {self.terms()})"


def gamma_multiply(a: GammaElement, b: GammaElement) -> GammaElement:
    return a * b


class EndElement:
    """Truncated element (g_0, .., g_N) of the product of the graded pieces."""

    def __init__(self, ring: GammaRing, components: Sequence):
        self.ring = ring
        self.components = [la.reduce(c, ring.p).reshape(ring.dim(i)) for i, c in enumerate(components)]

    @property
    def bound(self) -> int:
        return len(self.components) - 1

    @classmethod
    def zero(cls, ring: GammaRing, bound: int) -> "EndElement":
        return cls(ring, [np.zeros(ring.dim(i), dtype=np.int64) for i in range(bound + 1)])

    @classmethod
    def unit(cls, ring: GammaRing, bound: int) -> "EndElement":
        e = cls.zero(ring, bound)
        e.components[0][0] = 1
        return e

    @classmethod
    def from_terms(cls, ring: GammaRing, bound: int, terms: dict) -> "EndElement":
        """Build from ``{label: coefficient}``; terms above the bound are dropped."""
        e = cls.zero(ring, bound)
        for label, c in terms.items():
            d = sum(label)
            if d <= bound:
                e.components[d][ring.index(d)[tuple(label)]] += c
        e.components = [c % ring.p for c in e.components]
        return e

    @classmethod
    def homogeneous(cls, x: GammaElement, bound: int) -> "EndElement":
        e = cls.zero(x.ring, bound)
        if x.degree <= bound:
            e.components[x.degree] = x.coeffs.copy()
        return e

    def truncate(self, bound: int) -> "EndElement":
        comps = self.components[: bound + 1]
        comps += [np.zeros(self.ring.dim(i), dtype=np.int64) for i in range(len(comps), bound + 1)]
        return EndElement(self.ring, comps)

    def degree(self) -> Optional[int]:
        """Least i with a nonzero component; None if zero up to the bound."""
        for i, c in enumerate(self.components):
            if np.any(c):
                return i
        return None

    def __add__(self, other: "EndElement") -> "EndElement":
        n = min(self.bound, other.bound)
        return EndElement(self.ring, [self.components[i] + other.components[i] for i in range(n + 1)])

    def __sub__(self, other: "EndElement") -> "EndElement":
        n = min(self.bound, other.bound)
        return EndElement(self.ring, [self.components[i] - other.components[i] for i in range(n + 1)])

    def scale(self, c: int) -> "EndElement":
        return EndElement(self.ring, [c * x for x in self.components])

    def __mul__(self, other: "EndElement") -> "EndElement":
        n = min(self.bound, other.bound)
        ring = self.ring
        out = [np.zeros(ring.dim(i), dtype=np.int64) for i in range(n + 1)]
        for i in range(n + 1):
            a = self.components[i]
            if not np.any(a):
                continue
            for j in range(n + 1 - i):
                b = other.components[j]
                if np.any(b):
                    out[i + j] = out[i + j] + ring.multiply(a, i, b, j)
        return EndElement(ring, out)

    def __pow__(self, k: int) -> "EndElement":
        out = EndElement.unit(self.ring, self.bound)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, EndElement) or other.bound != self.bound:
            return False
        return all(np.array_equal(a, b) for a, b in zip(self.components, other.components))

    def is_invertible(self) -> bool:
        return bool(self.components[0][0] % self.ring.p)

    def inverse(self) -> "EndElement":
        """Truncated inverse via the geometric series in the augmentation ideal."""
        if not self.is_invertible():
            raise ValueError("element has zero constant term")
        p = self.ring.p
        c = int(self.components[0][0])
        cinv = pow(c, -1, p)
        unit = EndElement.unit(self.ring, self.bound)
        nil = unit - self.scale(cinv)  # 1 - x/c, augmentation ideal
        out = unit
        term = unit
        for _ in range(self.bound):
            term = term * nil
            out = out + term
        return out.scale(cinv)

    def vector(self, upto: Optional[int] = None) -> np.ndarray:
        n = self.bound if upto is None else upto
        return np.concatenate([self.components[i] for i in range(n + 1)])

    def terms(self) -> dict:
        out = {}
        for d, c in enumerate(self.components):
            labels = self.ring.labels(d)
            for i in np.flatnonzero(c):
                out[labels[i]] = int(c[i])
        return out

    def __repr__(self):
        return f"EndElement(N={self.bound}, {self.terms()})"


def end_multiply(a: EndElement, b: EndElement) -> EndElement:
    return a * b


def invertibility(a: EndElement) -> bool:
    return a.is_invertible()


def monomials_upto(ring: GammaRing, bound: int, even_only: bool = False) -> list[tuple]:
    out = []
    for d in range(bound + 1):
        out += ring.even_monomials(d) if even_only else list(ring.labels(d))
    return out

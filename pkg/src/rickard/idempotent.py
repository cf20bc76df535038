"""Finite truncations E_n of the idempotent module and their endomorphisms.

Restricted to kH, ``E_n`` is ``P_0 + P_1 (x) U + P_2 + P_3 (x) U + ...`` up to
layer ``n``.  The basis is layer-major, then resolution generator, then
U-power ``Z^j``, then kH-monomial.  In the split coordinates the X's act
through kH and Z acts by

* layer 0: zero;
* even layer i > 0: ``x -> d(x) (x) Z^0`` in layer i - 1;
* odd layer i: ``x (x) Z^j -> x (x) Z^{j+1}`` for j < p - 2 and
  ``x (x) Z^{p-2} -> d(x)`` in layer i - 1.

The stable class of a map ``f: E_N -> M`` has degree ``d`` when ``f`` can be
changed by a map through a projective to vanish on ``E_{d-1}`` but not on
``E_d``; its leading term is the class of the adjusted map on the layer.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from . import linalg as la
from .algebra import Module, PiPoint, Splitting, regular_module, trivial_module
from .gamma import EndElement, GammaRing, gamma_ring
from .resolution import Resolution, monomial_to_cocycle, resolution
from .stable import GammaSpace, Restriction, gamma_space, hull_functionals, phom_span, restrict


class RangeError(ValueError):
    """A requested quantity lies outside the stable range of a truncation."""


class IdempotentTruncation:
    def __init__(self, n: int, split: Splitting):
        if n < 0:
            raise ValueError("truncation level must be nonnegative")
        self.n = n
        self.split = split
        self.p = split.p
        self.s = split.s
        self.res: Resolution = resolution(self.p, self.s)
        self.P = self.res.P
        self.widths = [1 if i % 2 == 0 else self.p - 1 for i in range(n + 1)]
        sizes = [self.res.rank(i) * self.P * self.widths[i] for i in range(n + 1)]
        self.offsets = np.concatenate([[0], np.cumsum(sizes)]).astype(int)
        self.dim = int(self.offsets[-1])
        self._lift_cache: dict = {}

    # -- indexing -----------------------------------------------------------

    def layer_range(self, i: int) -> range:
        return range(int(self.offsets[i]), int(self.offsets[i + 1]))

    def dim_upto(self, m: int) -> int:
        return int(self.offsets[m + 1]) if m >= 0 else 0

    def layer_index(self, i: int, j: int = 0) -> np.ndarray:
        """Global indices of ``P_i (x) Z^j`` in (generator, monomial) order."""
        b, P, w = self.res.rank(i), self.P, self.widths[i]
        if not 0 <= j < w:
            raise IndexError(f"layer {i} has no U-power {j}")
        g = np.arange(b)[:, None]
        k = np.arange(P)[None, :]
        return (self.offsets[i] + (g * w + j) * P + k).reshape(-1)

    def layer_generators(self, i: int) -> np.ndarray:
        """Indices of the top generators ``g (x) 1`` of layer i."""
        return self.layer_index(i, 0)[:: self.P]

    def manifest(self) -> list[dict]:
        return [
            {
                "layer": i,
                "start": int(self.offsets[i]),
                "stop": int(self.offsets[i + 1]),
                "generators": self.res.rank(i),
                "u_width": self.widths[i],
            }
            for i in range(self.n + 1)
        ]

    # -- module structure ---------------------------------------------------

    @cached_property
    def z_split(self) -> np.ndarray:
        """Z in the split coordinates."""
        p = self.p
        Z = np.zeros((self.dim, self.dim), dtype=np.int64)
        for i in range(1, self.n + 1):
            d = self.res.boundary(i)
            if i % 2:
                for j in range(self.widths[i] - 1):
                    Z[self.layer_index(i, j + 1), self.layer_index(i, j)] = 1
                src = self.layer_index(i, self.widths[i] - 1)
                Z[np.ix_(self.layer_index(i - 1, 0), src)] = d
            else:
                Z[np.ix_(self.layer_index(i - 1, 0), self.layer_index(i, 0))] = d
        return Z % p

    @cached_property
    def x_split(self) -> list[np.ndarray]:
        if self.s == 0:
            return []
        blocks = self.dim // self.P
        reg = regular_module(self.p, self.s)
        return [np.kron(np.eye(blocks, dtype=np.int64), t) for t in reg.action]

    @cached_property
    def split_module(self) -> Module:
        return Module(self.p, tuple(self.x_split + [self.z_split]), f"E{self.n}")

    @cached_property
    def module(self) -> Module:
        m = self.split.from_split(self.split_module)
        m.name = f"E{self.n}"
        return m

    def sub(self, m: int) -> "IdempotentTruncation":
        """E_m with the same splitting (a prefix of this basis)."""
        if m > self.n:
            raise RangeError(f"E_{m} is not contained in E_{self.n}")
        if m == self.n:
            return self
        key = ("sub", m)
        if key not in self._lift_cache:
            self._lift_cache[key] = IdempotentTruncation(m, self.split)
        return self._lift_cache[key]

    def inclusion(self, m: int) -> np.ndarray:
        """iota_m: E_m -> E_n as a matrix."""
        return np.eye(self.dim, self.dim_upto(m), dtype=np.int64)

    def sigma(self) -> np.ndarray:
        """Augmentation E_n -> k: coefficient of the constant term of P_0."""
        row = np.zeros((1, self.dim), dtype=np.int64)
        row[0, 0] = 1
        return row

    def layer_quotient(self, i: int) -> Module:
        """E_i / E_{i-1}, acting on the basis of layer i."""
        E = self.sub(i).module
        sl = slice(int(self.offsets[i]), int(self.offsets[i + 1]))
        return Module(self.p, tuple(a[sl, sl].copy() for a in E.action), f"L{i}")

    # -- endomorphisms ------------------------------------------------------

    def _chain(self, d: int, idx: int) -> list[np.ndarray]:
        key = ("chain", d, idx)
        if key not in self._lift_cache:
            c = np.zeros(self.res.rank(d), dtype=np.int64)
            c[idx] = 1
            self._lift_cache[key] = self.res.lift(c, d, self.n - d)
        return self._lift_cache[key]

    def lift_cocycle(self, cocycle, d: int) -> np.ndarray:
        """The endomorphism of E_n induced by a degree-d cocycle (layer d+i -> i)."""
        p = self.p
        c = la.reduce(cocycle, p).reshape(-1)
        out = np.zeros((self.dim, self.dim), dtype=np.int64)
        if d > self.n:
            return out
        for idx in np.flatnonzero(c):
            out = out + int(c[idx]) * self._basis_lift(d, int(idx))
        return out % p

    def _basis_lift(self, d: int, idx: int) -> np.ndarray:
        key = ("lift", d, idx)
        if key in self._lift_cache:
            return self._lift_cache[key]
        p = self.p
        chain = self._chain(d, idx)
        out = np.zeros((self.dim, self.dim), dtype=np.int64)
        for i in range(self.n - d + 1):
            g = chain[i]
            if g.size == 0:
                continue
            if d % 2 == 0:
                for j in range(self.widths[i]):
                    out[np.ix_(self.layer_index(i, j), self.layer_index(i + d, j))] = g
            elif i % 2:
                out[np.ix_(self.layer_index(i, p - 2), self.layer_index(i + d, 0))] = g
            else:
                out[np.ix_(self.layer_index(i, 0), self.layer_index(i + d, 0))] = g
                if i >= 1:
                    dg = la.mulmod(self.res.boundary(i), g, p)
                    for j in range(1, self.widths[i + d]):
                        out[np.ix_(self.layer_index(i - 1, j - 1), self.layer_index(i + d, j))] = dg
        out %= p
        out.setflags(write=False)
        self._lift_cache[key] = out
        return out

    def lift_monomial(self, label) -> np.ndarray:
        """Endomorphism for a basis monomial of the graded ring."""
        d = sum(label)
        idx = gamma_ring(self.p, self.s).index(d)[tuple(label)]
        if d > self.n:
            return np.zeros((self.dim, self.dim), dtype=np.int64)
        return self.lift_cocycle(monomial_to_cocycle(self.p, self.s, d)[:, idx], d)

    def lift_element(self, x: EndElement) -> np.ndarray:
        p = self.p
        out = np.zeros((self.dim, self.dim), dtype=np.int64)
        for d in range(min(x.bound, self.n) + 1):
            comp = x.components[d]
            if np.any(comp):
                c = monomial_to_cocycle(p, self.s, d) @ comp % p
                out = out + self.lift_cocycle(c, d)
        return out % p

    def ring(self) -> GammaRing:
        return gamma_ring(self.p, self.s)


_E_CACHE: dict = {}


def build_E(n: int, split: Splitting) -> IdempotentTruncation:
    key = (n, split.alg, split.point)
    if key not in _E_CACHE:
        _E_CACHE[key] = IdempotentTruncation(n, split)
    return _E_CACHE[key]


def restrict_E(n: int, split: Splitting, pt: Optional[PiPoint] = None) -> Restriction:
    E = build_E(n, split)
    return restrict(E.module, pt or split.point)


def lift_endomorphism(cocycle, d: int, E: IdempotentTruncation) -> np.ndarray:
    return E.lift_cocycle(cocycle, d)


def sigma_witness(E: IdempotentTruncation, pt: PiPoint) -> bool:
    """A vector v with Z v = 0 and sigma(v) != 0 exists, and Z^{p-1}E lies in ker sigma.

    Together these say that sigma splits off a trivial summand of the
    restriction along ``pt``.
    """
    p = E.p
    Z = restrict(E.module, pt).matrix
    ker = la.nullspace(Z, p)
    sig = E.sigma()
    hits = (sig @ ker) % p
    if not np.any(hits):
        return False
    # sigma must vanish on the image of Z, so that the block through v is k
    return not np.any((sig @ Z) % p)


# ---------------------------------------------------------------------------
# degree and leading terms


@dataclass(eq=False)
class LeadingTerm:
    """Leading term of a stable map out of E_N.

    ``coords`` is the b_d x dim(Gamma) matrix of layer-generator images in
    Gamma coordinates, normalized modulo the classes that arise from maps
    through projectives vanishing on E_{d-1}.  ``stable`` holds coordinates
    of the restriction to E_d in a fixed basis of stable Hom(E_d, M).
    """

    degree: int
    coords: np.ndarray
    stable: np.ndarray

    def is_zero(self) -> bool:
        return not np.any(self.coords)

    def same_as(self, other: "LeadingTerm") -> bool:
        return (
            self.degree == other.degree
            and np.array_equal(self.coords, other.coords)
            and np.array_equal(self.stable, other.stable)
        )


@dataclass(eq=False)
class Peeled:
    degree: Optional[int]  # None: factors through a projective on all of E_N
    representative: np.ndarray


def _normal_form(v: np.ndarray, basis_rref: np.ndarray, pivots: list[int], p: int) -> np.ndarray:
    v = la.reduce(v, p).copy()
    for row, c in zip(basis_rref, pivots):
        if v[c]:
            v = (v - v[c] * row) % p
    return v


class DegreeCalculus:
    """Degree, peeling and leading terms for maps E_N -> M."""

    def __init__(self, E: IdempotentTruncation, M: Module):
        if M.p != E.p or M.r != E.split.r:
            raise ValueError("module does not match the truncation")
        self.E = E
        self.M = M
        self.p = E.p
        self._cache: dict = {}

    def functionals(self, d: int) -> np.ndarray:
        key = ("phi", d)
        if key not in self._cache:
            self._cache[key] = hull_functionals(self.E.sub(d).module)
        return self._cache[key]

    def phom(self, d: int) -> np.ndarray:
        """Rows spanning PHom(E_d, M) (flattened dim M x dim E_d)."""
        key = ("phom", d)
        if key not in self._cache:
            self._cache[key] = phom_span(self.E.sub(d).module, self.M, self.functionals(d))
        return self._cache[key]

    def phom_rref(self, d: int):
        key = ("phom_rref", d)
        if key not in self._cache:
            span = self.phom(d)
            if span.shape[0]:
                m, piv = la.rref(span, self.p)
                self._cache[key] = (m[: len(piv)], piv)
            else:
                self._cache[key] = (span, [])
        return self._cache[key]

    def restrict_to(self, f: np.ndarray, d: int) -> np.ndarray:
        f = la.reduce(f, self.p).reshape(self.M.dim, self.E.dim)
        return f[:, : self.E.dim_upto(d)]

    def factors_on(self, f: np.ndarray, d: int) -> bool:
        """Does f restricted to E_d factor through a projective?"""
        g = self.restrict_to(f, d).reshape(-1)
        rows, piv = self.phom_rref(d)
        return not np.any(_normal_form(g, rows, piv, self.p))

    def degree_by_factoring(self, f) -> Optional[int]:
        """Least d with f o iota_d not factoring through a projective."""
        for d in range(self.E.n + 1):
            if not self.factors_on(f, d):
                return d
        return None

    def extend_phom(self, coeffs: np.ndarray, d: int) -> np.ndarray:
        """The map E_N -> M through kG^t restricting to sum coeffs * PHom(E_d)-spanners.

        The hull functionals of E_d are extended by zero to E_N.
        """
        p, E, M = self.p, self.E, self.M
        phis = self.functionals(d)
        ext = np.zeros((phis.shape[0], E.dim), dtype=np.int64)
        ext[:, : phis.shape[1]] = phis
        span = phom_span(E.module, M, ext)
        return (coeffs @ span % p).reshape(M.dim, E.dim)

    def peel(self, f) -> Peeled:
        """Adjust f by maps through projectives to vanish on E_0, E_1, ...

        Stops at the first layer that cannot be killed; that layer is the
        degree of the stable class.
        """
        p = self.p
        f = la.reduce(f, p).reshape(self.M.dim, self.E.dim).copy()
        for d in range(self.E.n + 1):
            g = self.restrict_to(f, d).reshape(-1)
            span = self.phom(d)
            x = la.solve(span.T, g, p) if span.shape[0] else (None if np.any(g) else np.zeros(0, dtype=np.int64))
            if x is None:
                return Peeled(d, f)
            if x.size:
                f = (f - self.extend_phom(x, d)) % p
        return Peeled(None, f)

    def degree(self, f, stable_range: bool = True) -> Optional[int]:
        """Degree of the stable class of f; raises RangeError beyond N - 2."""
        d = self.peel(f).degree
        limit = self.E.n - 2 if stable_range else self.E.n
        if d is None or d > limit:
            raise RangeError(f"degree undetermined at truncation {self.E.n}")
        return d

    # -- layer coordinates ----------------------------------------------------

    def gamma(self, d: int) -> GammaSpace:
        key = ("gamma", d % 2)
        if key not in self._cache:
            self._cache[key] = gamma_space(self.M, self.E.split, odd=bool(d % 2))
        return self._cache[key]

    def layer_coords(self, f: np.ndarray, d: int) -> np.ndarray:
        """Gamma coordinates of the images of the layer-d generators."""
        f = la.reduce(f, self.p).reshape(self.M.dim, self.E.dim)
        g = self.gamma(d)
        rows = []
        for idx in self.E.layer_generators(d):
            c = g.coordinates(f[:, idx])
            if c is None:
                raise ValueError("map does not vanish on the previous layers")
            rows.append(c)
        return np.array(rows, dtype=np.int64).reshape(len(rows), g.dim)

    def kill_space(self, d: int):
        """RREF of the layer classes of maps through projectives vanishing on E_{d-1}."""
        key = ("kill", d)
        if key in self._cache:
            return self._cache[key]
        p, E, M = self.p, self.E, self.M
        span = self.phom(d)  # on E_d
        lo = E.dim_upto(d - 1)
        dd = E.dim_upto(d)
        g = self.gamma(d)
        width = E.res.rank(d) * g.dim
        vecs = []
        if span.shape[0]:
            maps = span.reshape(-1, M.dim, dd)
            low = maps[:, :, :lo].reshape(maps.shape[0], -1)
            null = la.nullspace(low.T, p) if lo else np.eye(maps.shape[0], dtype=np.int64)
            for k in range(null.shape[1]):
                h = np.tensordot(null[:, k], maps, axes=1) % p
                full = np.zeros((M.dim, E.dim), dtype=np.int64)
                full[:, :dd] = h
                vecs.append(self.layer_coords(full, d).reshape(-1))
        if vecs and width:
            m, piv = la.rref(np.array(vecs), p)
            out = (m[: len(piv)], piv)
        else:
            out = (np.zeros((0, width), dtype=np.int64), [])
        self._cache[key] = out
        return out

    def stable_basis(self, d: int):
        """Representatives of stable Hom(E_d, M) (rows) and the PHom RREF."""
        key = ("stbasis", d)
        if key not in self._cache:
            from .stable import extend_rows, hom_space

            Ed = self.E.sub(d).module
            hom = hom_space(Ed, self.M)
            rows, piv = self.phom_rref(d)
            idx = extend_rows(rows, hom, self.p)
            self._cache[key] = hom[idx] if idx else np.zeros((0, hom.shape[1]), dtype=np.int64)
        return self._cache[key]

    def stable_coords(self, f: np.ndarray, d: int) -> np.ndarray:
        p = self.p
        g = self.restrict_to(f, d).reshape(-1)
        reps = self.stable_basis(d)
        rows, _ = self.phom_rref(d)
        basis = np.vstack([reps, rows]) if rows.shape[0] else reps
        if basis.shape[0] == 0:
            return np.zeros(0, dtype=np.int64)
        x = la.solve(basis.T, g, p)
        if x is None:
            raise ValueError("restriction is not a homomorphism")
        return x[: reps.shape[0]]

    def leading_term(self, f, stable_range: bool = True) -> LeadingTerm:
        peeled = self.peel(f)
        d = peeled.degree
        limit = self.E.n - 2 if stable_range else self.E.n
        if d is None or d > limit:
            raise RangeError(f"degree undetermined at truncation {self.E.n}")
        coords = self.layer_coords(peeled.representative, d).reshape(-1)
        rows, piv = self.kill_space(d)
        coords = _normal_form(coords, rows, piv, self.p)
        g = self.gamma(d)
        return LeadingTerm(d, coords.reshape(-1, g.dim), self.stable_coords(peeled.representative, d))

    def compose_leading(self, lt: LeadingTerm, cocycle, n: int):
        """Predicted leading term of f o nu_hat from the leading term of f.

        Returns a LeadingTerm of degree d + n, or None when the predicted
        product vanishes (the composite then has larger degree).
        """
        p = self.p
        d = lt.degree
        res = self.E.res
        c = la.reduce(cocycle, p)
        chain = res.lift(c, n, d)[d]  # P_{d+n} -> P_d
        P = res.P
        const = chain.reshape(res.rank(d), P, res.rank(d + n), P)[:, 0, :, 0]
        g_src = self.gamma(d)
        g_dst = self.gamma(d + n)
        # Gamma-coordinates -> vectors, multiply, then back to coordinates
        vec = (g_src.representatives @ lt.coords.T) % p  # dim M x b_d
        if n % 2 and d % 2:
            vec = la.mulmod(la.matpow(g_src.z, p - 2, p), vec, p)
        new = (vec @ const) % p  # dim M x b_{d+n}
        rows = []
        for k in range(new.shape[1]):
            x = g_dst.coordinates(new[:, k])
            if x is None:
                raise ValueError("composite image left the Gamma numerator")
            rows.append(x)
        coords = np.array(rows, dtype=np.int64).reshape(-1)
        kr, kp = self.kill_space(d + n)
        coords = _normal_form(coords, kr, kp, p)
        if not np.any(coords):
            return None
        return LeadingTerm(d + n, coords.reshape(-1, g_dst.dim), np.zeros(0, dtype=np.int64))


def layer_hom_dimension_formula(i: int, M: Module, split: Splitting, alg=None) -> int:
    """dim Gamma(M) * b_i for even i, dim Gamma(M (x) U) * b_i for odd i."""
    from .algebra import Algebra, tensor_module, u_module

    res = resolution(split.p, split.s)
    if i % 2 == 0:
        return gamma_space(M, split).dim * res.rank(i)
    alg = alg or split.alg
    MU = tensor_module(M, u_module(split), alg, split)
    return gamma_space(MU, split).dim * res.rank(i)


def layer_factoring_criterion(f: np.ndarray, i: int, L: Module, M: Module, split: Splitting, E: IdempotentTruncation) -> bool:
    """Image test for maps out of a layer: images of generators in Z M (odd) or Z^{p-1} M (even)."""
    p = split.p
    Z = split.z_matrix(M)
    den = la.column_basis(Z if i % 2 else la.matpow(Z, p - 1, p), p)
    f = la.reduce(f, p).reshape(M.dim, L.dim)
    gens = E.layer_generators(i) - E.offsets[i]
    for idx in gens:
        v = f[:, idx]
        if not np.any(v):
            continue
        if den.shape[1] == 0 or la.solve(den, v, p) is None:
            return False
    return True

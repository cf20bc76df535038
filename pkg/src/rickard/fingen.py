"""Stable Hom(E_N, M) as a filtered module over the graded ring, generators,
annihilators and cone modules realizing them.

A map ``f: E_N -> M`` lies in filtration ``F_d`` when ``f o iota_{d-1}``
factors through a projective, i.e. its stable class has degree >= d.  Only
the quotient by ``F_{N-1}`` (degrees <= N - 2) is trusted; above that the
truncation is too short for degrees to be determined.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import linalg as la
from .algebra import Algebra, Module, Splitting, direct_sum, free_module, quotient, submodule, tensor_module
from .gamma import EndElement, GammaRing, gamma_ring, monomials_upto
from .idempotent import DegreeCalculus, IdempotentTruncation, RangeError, build_E
from .resolution import monomial_to_cocycle, resolution
from .stable import hom_space, phom_span, projective_cover, top_generators


class Unstabilized(RuntimeError):
    """Generator extraction did not settle inside the stabilization window."""


def loewy_length(p: int, r: int) -> int:
    return r * (p - 1) + 1


def _span_basis(cols: np.ndarray, p: int, n: int) -> np.ndarray:
    cols = np.asarray(cols, dtype=np.int64)
    if n == 0 or cols.size == 0:
        return np.zeros((n, 0), dtype=np.int64)
    cols = cols.reshape(n, -1)
    if cols.shape[1] == 0:
        return cols
    return la.column_basis(cols, p).reshape(n, -1)


def _dim(cols: np.ndarray, p: int) -> int:
    return la.rank(cols, p) if cols.size else 0


def _contains(basis: np.ndarray, v: np.ndarray, p: int) -> bool:
    if not np.any(v):
        return True
    if basis.shape[1] == 0:
        return False
    return la.solve(basis, v, p) is not None


def _intersect(a: np.ndarray, b: np.ndarray, p: int, n: int) -> np.ndarray:
    """Columns spanning span(a) cap span(b)."""
    if a.shape[1] == 0 or b.shape[1] == 0:
        return np.zeros((n, 0), dtype=np.int64)
    null = la.nullspace(np.hstack([a, (-b) % p]), p)
    return _span_basis(la.mulmod(a, null[: a.shape[1]], p), p, n)


class HomTruncation:
    """stable Hom(E_N, M) with its degree filtration and the End action."""

    def __init__(self, M: Module, N: int, split: Splitting):
        self.M = M
        self.N = N
        self.split = split
        self.p = M.p
        self.E: IdempotentTruncation = build_E(N, split)
        self.calc = DegreeCalculus(self.E, M)
        self.ring: GammaRing = gamma_ring(self.p, split.s)
        p = self.p
        self.hom = hom_space(self.E.module, M)
        h = self.hom.shape[0]
        self.h = h
        ph = self._coords_many(self.calc.phom(N))
        self.ph = _span_basis(ph, p, h)
        comp = la.complement_indices(self.ph, h, p) if self.ph.shape[1] else list(range(h))
        self.comp = list(comp)
        basis = np.hstack([self.ph, np.eye(h, dtype=np.int64)[:, self.comp]])
        self._to_v = la.inverse(basis, p)[self.ph.shape[1]:] if h else np.zeros((0, 0), dtype=np.int64)
        self.dim = len(self.comp)
        self.filtration = [self._filtration(d) for d in range(N + 2)]
        self._action: dict = {}

    # -- coordinates --------------------------------------------------------

    def _coords_many(self, rows: np.ndarray) -> np.ndarray:
        """Hom-basis coordinates (columns) of flattened maps given as rows."""
        p = self.p
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, self.M.dim * self.E.dim)
        if rows.shape[0] == 0:
            return np.zeros((self.h, 0), dtype=np.int64)
        x = la.solve(self.hom.T, rows.T, p)
        if x is None:
            raise ValueError("not a homomorphism out of E_N")
        return x.reshape(self.h, -1)

    def coords(self, f) -> np.ndarray:
        """Coordinates of the stable class of f in V = stable Hom(E_N, M)."""
        c = self._coords_many(la.reduce(f, self.p).reshape(1, -1))
        return (self._to_v @ c % self.p).reshape(-1)

    def representative(self, v) -> np.ndarray:
        v = la.reduce(v, self.p).reshape(-1)
        c = np.zeros(self.h, dtype=np.int64)
        c[self.comp] = v
        return (c @ self.hom % self.p).reshape(self.M.dim, self.E.dim)

    def _filtration(self, d: int) -> np.ndarray:
        """Columns (in V) spanning F_d."""
        p, h = self.p, self.h
        if d == 0:
            return np.eye(self.dim, dtype=np.int64)
        E, M = self.E, self.M
        lo = E.dim_upto(d - 1)
        maps = self.hom.reshape(h, M.dim, E.dim)[:, :, :lo].reshape(h, -1)
        span = self.calc.phom(d - 1)
        stack = np.vstack([maps, span]) if span.shape[0] else maps
        null = la.nullspace(stack.T, p)[:h]
        return _span_basis(self._to_v @ null % p, p, self.dim)

    # -- filtration data -------------------------------------------------------

    def layer_dims(self) -> list[int]:
        """dim F_d / F_{d+1} for d = 0..N."""
        dims = [_dim(f, self.p) for f in self.filtration]
        return [dims[d] - dims[d + 1] for d in range(self.N + 1)]

    def degree(self, v) -> Optional[int]:
        """Largest d with v in F_d; None for v in F_{N+1} = 0."""
        v = la.reduce(v, self.p)
        if not np.any(v):
            return None
        for d in range(self.N + 1, -1, -1):
            if _contains(self.filtration[d], v, self.p):
                return d
        return 0

    def graded_basis(self, d: int) -> np.ndarray:
        """Columns of F_d completing a basis of F_{d+1}."""
        hi, cur = self.filtration[d + 1], self.filtration[d]
        if cur.shape[1] == 0:
            return cur
        stack = np.hstack([hi, cur])
        _, piv = la.rref(stack, self.p)
        keep = [c - hi.shape[1] for c in piv if c >= hi.shape[1]]
        return cur[:, keep]

    # -- End action -----------------------------------------------------------

    def action_matrix(self, label) -> np.ndarray:
        """Matrix of v -> v o theta_hat on V for a basis monomial theta."""
        label = tuple(label)
        if label not in self._action:
            p = self.p
            L = self.E.lift_monomial(label)
            out = np.zeros((self.dim, self.dim), dtype=np.int64)
            for j in range(self.dim):
                e = np.zeros(self.dim, dtype=np.int64)
                e[j] = 1
                f = self.representative(e)
                out[:, j] = self.coords(la.mulmod(f, L, p))
            out.setflags(write=False)
            self._action[label] = out
        return self._action[label]

    def act(self, theta: EndElement, v) -> np.ndarray:
        p = self.p
        v = la.reduce(v, p)
        out = np.zeros(self.dim, dtype=np.int64)
        for label, c in theta.terms().items():
            if sum(label) <= self.N:
                out = out + c * (self.action_matrix(label) @ v)
        return out % p

    def action_by_map(self, theta: EndElement, v) -> np.ndarray:
        """Same as :meth:`act`, composing with the lifted endomorphism directly."""
        f = self.representative(v)
        return self.coords(la.mulmod(f, self.E.lift_element(theta), self.p))


_HT_CACHE: dict = {}


def hom_truncation(M: Module, N: int, split: Splitting, cache: bool = True) -> HomTruncation:
    if not cache:
        return HomTruncation(M, N, split)
    key = (id(M), N, split.alg, split.point)
    hit = _HT_CACHE.get(key)
    if hit is not None and hit.M is M:
        return hit
    ht = HomTruncation(M, N, split)
    _HT_CACHE[key] = ht
    return ht


def stabilization_guard(M: Module, N: int, split: Splitting) -> bool:
    """Layer dimensions up to N - 2 agree at truncations N and N + 1."""
    return stable_top(M, N, split) == N - 2


def stable_top(M: Module, N: int, split: Splitting) -> int:
    """Largest t <= N - 2 with layer dimensions for d <= t equal at N and N + 1.

    Truncation artifacts sit a fixed distance below N, so they move when N
    grows while the true layers stay put.
    """
    a = hom_truncation(M, N, split).layer_dims()
    b = hom_truncation(M, N + 1, split).layer_dims()
    for d in range(N - 1):
        if a[d] != b[d]:
            return d - 1
    return N - 2


# ---------------------------------------------------------------------------
# generators


@dataclass
class Generator:
    degree: int
    vector: np.ndarray
    representative: np.ndarray


@dataclass
class GeneratorSet:
    generators: list
    span: np.ndarray  # columns in V, closed under the action up to F_{N-1}
    certified: dict  # degree -> (covered dim, layer dim)
    window: int
    N: int
    top: int

    @property
    def degrees(self) -> list[int]:
        return [g.degree for g in self.generators]

    def ok(self) -> bool:
        return all(a == b for a, b in self.certified.values())


def _orbit(ht: HomTruncation, v: np.ndarray, d: int, bound: int) -> np.ndarray:
    """v o theta for every ring monomial theta with d + deg(theta) <= bound."""
    cols = []
    for label in monomials_upto(ht.ring, bound - d):
        if sum(label) == 0:
            cols.append(v)
        else:
            cols.append(ht.action_matrix(label) @ v % ht.p)
    return np.array(cols, dtype=np.int64).T.reshape(ht.dim, -1)


def extract_generators(
    M: Module,
    N: int,
    split: Splitting,
    window: Optional[int] = None,
    strict: bool = True,
    top: Optional[int] = None,
) -> GeneratorSet:
    """Generators of stable Hom(E_N, M) / F_{top+1} over the graded ring.

    Walks the degrees upwards, adding a layer basis vector whenever it is
    not already in the span of the generated submodule plus higher
    filtration.  ``top`` defaults to :func:`stable_top`.  The last generator
    must sit at least ``window`` (default the Loewy length) below ``top``,
    else :class:`Unstabilized`.
    """
    ht = hom_truncation(M, N, split)
    p = ht.p
    window = loewy_length(p, split.r) if window is None else window
    top = stable_top(M, N, split) if top is None else top
    gens: list[Generator] = []
    S = np.zeros((ht.dim, 0), dtype=np.int64)
    for d in range(top + 1):
        hi = ht.filtration[d + 1]
        for k in range(ht.graded_basis(d).shape[1]):
            v = ht.graded_basis(d)[:, k]
            base = np.hstack([S, hi])
            if _contains(base, v, p):
                continue
            gens.append(Generator(d, v.copy(), ht.representative(v)))
            S = _span_basis(np.hstack([S, _orbit(ht, v, d, top)]), p, ht.dim)
    if strict and gens and gens[-1].degree + window > top:
        raise Unstabilized(
            f"last generator in degree {gens[-1].degree} but stable range ends at {top} (window {window})"
        )
    certified = {}
    for d in range(top + 1):
        Fd, Fd1 = ht.filtration[d], ht.filtration[d + 1]
        cover = np.hstack([_intersect(S, Fd, p, ht.dim), Fd1])
        layer = _dim(Fd, p) - _dim(Fd1, p)
        certified[d] = (_dim(cover, p) - _dim(Fd1, p), layer)
    return GeneratorSet(gens, S, certified, window, N, top)


def generator_one_check(split: Splitting, N: int) -> bool:
    """M = k has exactly one generator, in degree 0."""
    from .algebra import trivial_module

    gs = extract_generators(trivial_module(split.p, split.r), N, split)
    return gs.degrees == [0] and gs.ok()


# ---------------------------------------------------------------------------
# annihilators


@dataclass
class Annihilator:
    """Truncated annihilator: elements of degree <= D killing V mod F_{D+1}."""

    D: int
    labels: list  # basis monomials of degree <= D, in order
    basis: np.ndarray  # columns: coefficient vectors over labels
    ring: GammaRing

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def elements(self) -> list[EndElement]:
        out = []
        for k in range(self.basis.shape[1]):
            terms = {lab: int(c) for lab, c in zip(self.labels, self.basis[:, k]) if c}
            out.append(EndElement.from_terms(self.ring, self.D, terms))
        return out

    def contains(self, x: EndElement) -> bool:
        v = np.array([x.terms().get(lab, 0) for lab in self.labels], dtype=np.int64)
        return _contains(self.basis, v, self.ring.p)

    def degree_dims(self) -> list[int]:
        """dim of A cap (sum of degrees >= e) for e = 0..D (a basis-free invariant)."""
        p = self.ring.p
        out = []
        for e in range(self.D + 1):
            low = [i for i, lab in enumerate(self.labels) if sum(lab) < e]
            if self.basis.shape[1] == 0:
                out.append(0)
                continue
            sub = self.basis[low]
            null = la.nullspace(sub, p) if low else np.eye(self.basis.shape[1], dtype=np.int64)
            out.append(null.shape[1])
        return out


def annihilator(M: Module, D: int, N: int, split: Splitting, use_generators: bool = True) -> Annihilator:
    """theta of degree <= D with theta . u in F_{D+1} for every generator u.

    With ``use_generators=False`` every basis vector of V is tested instead.
    """
    ht = hom_truncation(M, N, split)
    if D > N - 2:
        raise RangeError("annihilator degree beyond the stable range")
    p = ht.p
    labels = monomials_upto(ht.ring, D)
    if use_generators:
        gs = extract_generators(M, N, split, strict=False)
        if D > gs.top:
            raise RangeError(f"annihilator degree {D} beyond the stable range {gs.top}")
        if not gs.ok():
            raise Unstabilized("generators do not cover the stable range")
        vecs = [g.vector for g in gs.generators]
    else:
        vecs = [np.eye(ht.dim, dtype=np.int64)[:, j] for j in range(ht.dim)]
    F = ht.filtration[D + 1]
    # quotient map V -> V / F_{D+1}
    comp = la.complement_indices(F, ht.dim, p) if F.shape[1] else list(range(ht.dim))
    basis = np.hstack([F, np.eye(ht.dim, dtype=np.int64)[:, comp]])
    proj = la.inverse(basis, p)[F.shape[1]:] if ht.dim else np.zeros((0, 0), dtype=np.int64)
    blocks = []
    for v in vecs:
        cols = []
        for lab in labels:
            w = v if sum(lab) == 0 else ht.action_matrix(lab) @ v % p
            cols.append(proj @ w % p)
        blocks.append(np.array(cols, dtype=np.int64).T.reshape(len(comp), len(labels)))
    system = np.vstack(blocks) if blocks else np.zeros((0, len(labels)), dtype=np.int64)
    null = la.nullspace(system, p) if system.shape[0] else np.eye(len(labels), dtype=np.int64)
    return Annihilator(D, labels, null, ht.ring)


def is_truncated_ideal(A: Annihilator) -> bool:
    """A is closed under multiplication by ring monomials (degrees <= D)."""
    ring, D, p = A.ring, A.D, A.ring.p
    for x in A.elements():
        for lab in monomials_upto(ring, D):
            if sum(lab) == 0:
                continue
            y = x * EndElement.from_terms(ring, D, {lab: 1})
            if not A.contains(y):
                return False
    return True


def cohomology_action_annihilator(M: Module, D: int, split: Splitting, over_g: bool = False) -> Annihilator:
    """Tuples whose components annihilate H^*(H, M), or H^*(G, M) when ``over_g``.

    Ext is computed from the minimal resolution in the split coordinates,
    with kH acting through the X's (and kC through Z for ``over_g``).  The
    degree-i component ``gamma_i`` must kill Ext^j for all j <= D - i.
    """
    p, s = split.p, split.s
    ring = gamma_ring(p, s)
    nvar = s + 1 if over_g else s
    res = resolution(p, nvar)
    Ms = split.to_split(M)
    acts = list(Ms.action) if over_g else list(Ms.action[:s])
    P = res.P
    A = Module(p, tuple(acts)) if acts else None
    mon = A.monomial_actions() if A is not None else np.ones((1, M.dim, M.dim), dtype=np.int64)

    def cochains(n: int) -> np.ndarray:
        """Hom_kH(P_n, M) = M^{b_n}; coboundary to degree n+1 as a matrix."""
        b_img = res.boundary_images(n + 1).reshape(res.rank(n), P, res.rank(n + 1))
        # f (M^{b_n}) -> (f o d)(e_a) = sum_g sum_k coeff * t^k f(e_g)
        out = np.zeros((res.rank(n + 1) * M.dim, res.rank(n) * M.dim), dtype=np.int64)
        for a in range(res.rank(n + 1)):
            for g in range(res.rank(n)):
                blk = np.tensordot(b_img[g, :, a], mon, axes=1) % p
                out[a * M.dim : (a + 1) * M.dim, g * M.dim : (g + 1) * M.dim] = blk
        return out % p

    delta = {n: cochains(n) for n in range(-1, D + 1) if n >= 0}
    ext_basis = {}
    for n in range(D + 1):
        ker = la.nullspace(delta[n], p)
        img = la.column_basis(delta[n - 1], p) if n > 0 else np.zeros((ker.shape[0], 0), dtype=np.int64)
        img = img.reshape(ker.shape[0], -1)
        keep = []
        base = img
        for j in range(ker.shape[1]):
            v = ker[:, j]
            if not _contains(base, v, p):
                keep.append(v)
                base = np.hstack([base, v[:, None]])
        ext_basis[n] = (np.array(keep, dtype=np.int64).T.reshape(ker.shape[0], -1), img)

    labels = monomials_upto(ring, D)
    # inflation: H-labels extend by a zero in the Z slot
    cols_sys = []
    for lab in labels:
        i = sum(lab)
        col = []
        cocycle_h = monomial_to_cocycle(p, s, i)[:, ring.index(i)[lab]]
        if over_g:
            c = np.zeros(res.rank(i), dtype=np.int64)
            hl = resolution(p, s).labels(i)
            for k, a in enumerate(hl):
                c[res.label_index(i)[tuple(a) + (0,)]] = cocycle_h[k]
        else:
            c = cocycle_h
        for j in range(D - i + 1):
            gens, img = ext_basis[j]
            if gens.shape[1] == 0:
                continue
            chain = res.lift(c, i, j)[j]  # P_{i+j} -> P_j
            # y o chain for each Ext^j generator y in M^{b_j}
            for k in range(gens.shape[1]):
                y = gens[:, k].reshape(res.rank(j), M.dim)
                cm = chain.reshape(res.rank(j), P, res.rank(i + j), P)[:, :, :, 0]
                z = np.zeros((res.rank(i + j), M.dim), dtype=np.int64)
                for g in range(res.rank(j)):
                    for q in range(P):
                        w = mon[q] @ y[g] % p
                        z = z + np.outer(cm[g, q], w)
                z = z.reshape(-1) % p
                gens2, img2 = ext_basis[i + j]
                full = np.hstack([gens2, img2])
                x = la.solve(full, z, p) if full.shape[1] else np.zeros(0, dtype=np.int64)
                if x is None:
                    raise RuntimeError("Yoneda product left the cocycles")
                col.append((i, j, k, x[: gens2.shape[1]]))
        cols_sys.append(col)
    # each degree component separately: gamma_i kills Ext^j for j <= D - i
    blocks = []
    for i in range(D + 1):
        idx = [n for n, lab in enumerate(labels) if sum(lab) == i]
        rows = {}
        for n in idx:
            for (ii, j, k, x) in cols_sys[n]:
                rows.setdefault((j, k), {})[n] = x
        for (j, k), entries in rows.items():
            width = len(next(iter(entries.values())))
            blk = np.zeros((width, len(labels)), dtype=np.int64)
            for n, x in entries.items():
                blk[:, n] = x
            blocks.append(blk)
    system = np.vstack(blocks) if blocks else np.zeros((0, len(labels)), dtype=np.int64)
    null = la.nullspace(system, p) if system.shape[0] else np.eye(len(labels), dtype=np.int64)
    return Annihilator(D, labels, null, ring)


def same_annihilator(a: Annihilator, b: Annihilator) -> bool:
    p = a.ring.p
    if a.labels != b.labels or a.dim != b.dim:
        return False
    return all(_contains(a.basis, b.basis[:, k], p) for k in range(b.dim))


# ---------------------------------------------------------------------------
# cone modules


@dataclass
class Cone:
    zeta: EndElement
    n: int
    module: Module
    source_dim: int
    projective_rank: int
    exact: bool


def cone_of(zeta: EndElement, n: int, split: Splitting, degree: Optional[int] = None) -> Cone:
    """Kernel of [zeta_hat | rho]: E_n + kG^t -> E_{n-d}, rho covering the cokernel.

    ``d`` is the degree of zeta unless given (it must be given for zeta = 0).
    """
    p = split.p
    d = zeta.degree() if degree is None else degree
    if d is None:
        raise ValueError("zeta = 0 needs an explicit degree")
    if d > n:
        raise RangeError("truncation below the degree of zeta")
    E = build_E(n, split)
    low = E.dim_upto(n - d)
    zhat = E.lift_element(zeta.truncate(n))[:low]  # E_n -> E_{n-d}
    target = E.sub(n - d).module
    img = la.as_columns(la.column_basis(zhat, p), low)
    Q, proj = quotient(target, img)
    cover = projective_cover(Q)
    t = cover.rank
    P = split.alg.dim
    free = free_module(p, split.r, t)
    # generator images: preimages of the cover generators in E_{n-d}
    gen_imgs = []
    for j in range(t):
        v = cover.matrix[:, j * P]
        x = la.solve(proj, v, p)
        gen_imgs.append(x)
    rho = np.zeros((low, t * P), dtype=np.int64)
    mon = target.monomial_actions()
    for j, x in enumerate(gen_imgs):
        for k in range(P):
            rho[:, j * P + k] = mon[k] @ x % p
    total = np.hstack([zhat, rho]) % p
    src = direct_sum(E.module, free)
    ker = la.nullspace(total, p)
    Mz = submodule(src, ker)
    Mz.name = "cone"
    exact = la.rank(total, p) == low and Mz.dim == src.dim - low
    return Cone(zeta, n, Mz, src.dim, t, bool(exact))


@dataclass
class RealizeReport:
    annihilates: bool
    radical: dict  # annihilator basis index -> bool
    annihilator_dim: int
    cone_dim: int
    top: int

    @property
    def ok(self) -> bool:
        return self.annihilates and all(self.radical.values())


def verify_realize(zeta: EndElement, split: Splitting, n: int, N: int, D: int, power: Optional[int] = None) -> RealizeReport:
    """zeta^2 kills stable Hom(E_N, M_zeta) in the stable range; A_D(M_zeta) lies in rad (zeta).

    The second part solves ``zeta * sigma = gamma^power`` modulo degrees > D
    for every basis element gamma of the truncated annihilator.
    """
    p = split.p
    if zeta.is_invertible():
        raise ValueError("zeta is invertible; its cone is stably zero")
    power = loewy_length(p, split.r) if power is None else power
    cone = cone_of(zeta, n, split)
    M = cone.module
    ht = hom_truncation(M, N, split)
    top = stable_top(M, N, split)
    z2 = (zeta * zeta).truncate(N)
    hi = ht.filtration[top + 1]
    ann = all(_contains(hi, ht.act(z2, np.eye(ht.dim, dtype=np.int64)[:, j]), p) for j in range(ht.dim))
    A = annihilator(M, D, N, split)
    ring = ht.ring
    zt = zeta.truncate(D)
    labels = monomials_upto(ring, D)
    # columns: zeta * monomial, truncated at D
    cols = []
    for lab in labels:
        y = zt * EndElement.from_terms(ring, D, {lab: 1})
        cols.append(y.vector())
    Zmat = np.array(cols, dtype=np.int64).T
    radical = {}
    for k, g in enumerate(A.elements()):
        target = (g ** power).vector()
        radical[k] = la.solve(Zmat, target, p) is not None
    return RealizeReport(ann, radical, A.dim, M.dim, top)


# ---------------------------------------------------------------------------
# annihilator lemmas


def random_extension(L: Module, Nm: Module, rng: np.random.Generator) -> tuple[Module, np.ndarray, np.ndarray]:
    """A random extension 0 -> L -> M -> N -> 0 by a cocycle of commuting actions.

    Actions are block upper triangular ``[[A_L, C], [0, A_N]]``; the
    off-diagonal blocks are solved for so that the actions commute and are
    p-nilpotent.  Returns (M, inclusion, projection).
    """
    p, r = L.p, L.r
    a, b = L.dim, Nm.dim
    # unknowns C_1..C_r (a x b each); constraints: commuting, nilpotent
    n_unk = r * a * b

    def block_matrix(i, C):
        top = np.hstack([L.action[i], C])
        bot = np.hstack([np.zeros((b, a), dtype=np.int64), Nm.action[i]])
        return np.vstack([top, bot]) % p

    # t_i t_j - t_j t_i upper block: A_i C_j + C_i B_j - A_j C_i - C_j B_i (linear)
    # t_i^p upper block: sum_k A_i^k C_i B_i^{p-1-k} (linear)
    rows = []
    eye = np.eye(n_unk, dtype=np.int64)
    for i in range(r):
        for j in range(i + 1, r):
            cols = []
            for u in range(n_unk):
                Cs = eye[u].reshape(r, a, b)
                ti, tj = block_matrix(i, Cs[i]), block_matrix(j, Cs[j])
                comm = (ti @ tj - tj @ ti) % p
                cols.append(comm[:a, a:].reshape(-1))
            rows.append(np.array(cols).T)
        cols = []
        for u in range(n_unk):
            Cs = eye[u].reshape(r, a, b)
            ti = block_matrix(i, Cs[i])
            cols.append(la.matpow(ti, p, p)[:a, a:].reshape(-1))
        rows.append(np.array(cols).T)
    system = np.vstack(rows) % p
    null = la.nullspace(system, p)
    coeff = rng.integers(0, p, null.shape[1]) if null.shape[1] else np.zeros(0, dtype=np.int64)
    x = null @ coeff % p if null.shape[1] else np.zeros(n_unk, dtype=np.int64)
    Cs = x.reshape(r, a, b)
    M = Module(p, tuple(block_matrix(i, Cs[i]) for i in range(r)), "ext")
    inc = np.eye(a + b, a, dtype=np.int64)
    proj = np.eye(a + b, dtype=np.int64)[a:]
    return M, inc, proj


def check_ann_triangle(L: Module, M: Module, Nm: Module, D: int, N: int, split: Splitting) -> bool:
    """zeta in A(N), gamma in A(L) gives zeta * gamma in A(M) (degrees <= D)."""
    AL = annihilator(L, D, N, split)
    AN = annihilator(Nm, D, N, split)
    AM = annihilator(M, D, N, split)
    for z in AN.elements():
        for g in AL.elements():
            if not AM.contains((z * g).truncate(D)):
                return False
    return True


def check_tensor_ann(M: Module, Nfin: Module, D: int, N: int, split: Splitting, alg: Optional[Algebra] = None) -> bool:
    """zeta in A(M) gives zeta^l in A(M (x) N_fin), l the Loewy length."""
    alg = alg or split.alg
    ell = loewy_length(split.p, split.r)
    AM = annihilator(M, D, N, split)
    T = tensor_module(M, Nfin, alg, split)
    AT = annihilator(T, D, N, split)
    return all(AT.contains((z**ell).truncate(D)) for z in AM.elements())


def check_commute(M: Module, N: int, split: Splitting, D: int) -> bool:
    """The End action on V mod F_{D+1} is commutative on ring monomials."""
    ht = hom_truncation(M, N, split)
    p = ht.p
    labels = [lab for lab in monomials_upto(ht.ring, D) if sum(lab) > 0]
    F = ht.filtration[D + 1]
    for a in labels:
        for b in labels:
            A, B = ht.action_matrix(a), ht.action_matrix(b)
            diff = (A @ B - B @ A) % p
            for j in range(ht.dim):
                if not _contains(F, diff[:, j], p):
                    return False
    return True

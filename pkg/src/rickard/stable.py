"""Stable module category primitives: covers, syzygies, homs modulo projectives."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import linalg as la
from .algebra import Module, ModuleMap, PiPoint, Splitting, dual, free_module, restriction_matrix, submodule


@dataclass(eq=False)
class Cover:
    """Minimal projective cover kG^s -> M.

    The free module has basis ``(generator j, monomial k)`` at index
    ``j * p^r + k``; ``matrix`` is the surjection and ``kernel`` a column
    basis of its kernel.
    """

    target: Module
    generators: np.ndarray  # dim M x s, columns
    matrix: np.ndarray
    kernel: np.ndarray

    @property
    def rank(self) -> int:
        return self.generators.shape[1]

    def free(self) -> Module:
        return free_module(self.target.p, self.target.r, self.rank)


def top_generators(M: Module) -> np.ndarray:
    """Standard basis vectors spanning a complement of Rad(M)."""
    if M.dim == 0:
        return np.zeros((0, 0), dtype=np.int64)
    idx = la.complement_indices(M.radical_basis(), M.dim, M.p)
    return np.eye(M.dim, dtype=np.int64)[:, idx]


def orbit_matrix(M: Module, vectors) -> np.ndarray:
    """Columns ``t^k v_j`` at index ``j * p^r + k``."""
    mon = M.monomial_actions()
    v = la.as_columns(la.reduce(vectors, M.p), M.dim)
    P, n = mon.shape[0], M.dim
    # out[a, j, k] = sum_b mon[k, a, b] v[b, j]
    out = la.mulmod(mon.reshape(P * n, n), v, M.p).reshape(P, n, -1)
    return out.transpose(1, 2, 0).reshape(n, -1)


def projective_cover(M: Module) -> Cover:
    p = M.p
    gens = top_generators(M)
    if gens.shape[1] == 0:
        z = np.zeros((M.dim, 0), dtype=np.int64)
        return Cover(M, gens.reshape(M.dim, 0), z, np.zeros((0, 0), dtype=np.int64))
    mat = orbit_matrix(M, gens)
    return Cover(M, gens, mat, la.nullspace(mat, p))


def omega(M: Module) -> tuple[Module, ModuleMap]:
    """Omega(M) = kernel of a minimal projective cover; returns it and the cover map."""
    if M.dim == 0:
        return M, ModuleMap(M, M, np.zeros((0, 0), dtype=np.int64))
    cov = projective_cover(M)
    P = cov.free()
    return submodule(P, cov.kernel), ModuleMap(P, M, cov.matrix)


def omega_inverse(M: Module) -> Module:
    return dual(omega(dual(M))[0])


def omega_power(M: Module, n: int) -> Module:
    for _ in range(abs(n)):
        M = omega(M)[0] if n > 0 else omega_inverse(M)
    return M


def is_projective(M: Module) -> bool:
    return M.dim == M.p**M.r * M.top_dim()


def nonprojective_part(M: Module) -> Module:
    """The largest summand without free summands, as Omega(Omega^{-1}(M))."""
    return omega(omega_inverse(M))[0]


# ---------------------------------------------------------------------------
# homomorphism spaces


@dataclass(eq=False)
class Presentation:
    """Cover of X together with a section, used to parametrize Hom(X, -)."""

    source: Module
    cover: Cover
    section: np.ndarray  # (s p^r) x dim X, cover.matrix @ section = I
    relations: np.ndarray  # columns spanning the kernel of the cover


def presentation(X: Module) -> Presentation:
    cov = projective_cover(X)
    if X.dim == 0:
        return Presentation(X, cov, np.zeros((0, 0), dtype=np.int64), cov.kernel)
    sec = la.solve(cov.matrix, np.eye(X.dim, dtype=np.int64), X.p)
    rel = cov.kernel
    if rel.shape[1]:
        # a module generating set of the kernel suffices
        K = submodule(cov.free(), rel)
        rel = (rel @ top_generators(K)) % X.p
    return Presentation(X, cov, sec, rel)


def _image_map(M: Module, m: np.ndarray, s: int) -> np.ndarray:
    """Phi(m): the map kG^s -> M sending generator j to column j of m."""
    return orbit_matrix(M, m.reshape(s, M.dim).T)


def hom_space(X: Module, M: Module, pres: Optional[Presentation] = None) -> np.ndarray:
    """Basis of Hom_kG(X, M) as rows of flattened (dim M x dim X) matrices."""
    p = X.p
    if X.dim == 0 or M.dim == 0:
        return np.zeros((0, M.dim * X.dim), dtype=np.int64)
    pres = pres or presentation(X)
    s = pres.cover.rank
    P = p**X.r
    mon = M.monomial_actions()
    rel = pres.relations
    if rel.shape[1]:
        kr = rel.reshape(s, P, -1)
        n, C = M.dim, kr.shape[2]
        # B[c, a, j, b] = sum_k kr[j, k, c] mon[k, a, b]
        B = la.mulmod(kr.transpose(2, 0, 1).reshape(C * s, P), mon.reshape(P, n * n), p)
        B = B.reshape(C, s, n, n).transpose(0, 2, 1, 3).reshape(C * n, s * n)
        sol = la.nullspace(B, p)
    else:
        sol = np.eye(s * M.dim, dtype=np.int64)
    # F(m) = Phi(m) @ section; linear in m
    sec = pres.section.reshape(s, P, X.dim)
    # F[a, x] = sum_{j,k,b} mon[k,a,b] m[j,b] sec[j,k,x]
    n, N = M.dim, sol.shape[1]
    m = sol.reshape(s, n, N).transpose(1, 0, 2).reshape(n, s * N)
    T = la.mulmod(mon.reshape(P * n, n), m, p).reshape(P, n, s, N)
    T = T.transpose(1, 3, 2, 0).reshape(n * N, s * P)
    maps = la.mulmod(T, sec.reshape(s * P, X.dim), p).reshape(n, N, X.dim)
    return maps.transpose(1, 0, 2).reshape(N, -1)


def hom_from_generators(X: Module, M: Module, images, pres: Optional[Presentation] = None) -> np.ndarray:
    """The map X -> M sending the cover generators to the columns of ``images``.

    No check that the relations are respected.
    """
    pres = pres or presentation(X)
    s = pres.cover.rank
    phi = _image_map(M, la.reduce(images, X.p).T.reshape(-1), s)
    return (phi @ pres.section) % X.p


def hull_functionals(X: Module) -> np.ndarray:
    """Rows phi_j of X^* restricting to a basis of soc(X)^*."""
    p = X.p
    if X.dim == 0:
        return np.zeros((0, 0), dtype=np.int64)
    soc = la.nullspace(np.vstack(X.action), p)
    if soc.shape[1] == 0:
        return np.zeros((0, X.dim), dtype=np.int64)
    phi_t = la.solve(soc.T, np.eye(soc.shape[1], dtype=np.int64), p)
    return phi_t.T % p


def hull_embedding(X: Module, functionals=None) -> np.ndarray:
    """Injective hull X -> kG^t: x -> sum_k phi_j(t^k x) t^{top-k} e_j."""
    p = X.p
    phis = hull_functionals(X) if functionals is None else functionals
    mon = X.monomial_actions()
    # psi[j, k, x] = phi_j(t^k x), placed on monomial P-1-k
    psi = _functional_orbits(phis, mon, p)
    return psi[:, ::-1, :].reshape(-1, X.dim)


def _functional_orbits(phis, mon, p):
    P, n = mon.shape[0], mon.shape[1]
    out = la.mulmod(phis, mon.transpose(1, 0, 2).reshape(n, P * n), p)
    return out.reshape(-1, P, n)


def phom_span(X: Module, M: Module, functionals=None) -> np.ndarray:
    """Rows spanning PHom(X, M), flattened as in :func:`hom_space`.

    Row ``(j, c)`` is ``g o iota`` where ``g`` sends the j-th generator of the
    injective hull to the basis vector ``c`` of M.
    """
    p = X.p
    phis = hull_functionals(X) if functionals is None else la.reduce(functionals, p)
    if X.dim == 0 or M.dim == 0 or phis.shape[0] == 0:
        return np.zeros((0, M.dim * X.dim), dtype=np.int64)
    monx = X.monomial_actions()
    monm = M.monomial_actions()
    psi = _functional_orbits(phis, monx, p)
    P, n, J = monm.shape[0], M.dim, phis.shape[0]
    # span[j, c, a, x] = sum_k mon[P-1-k, a, c] psi[j, k, x]
    left = monm[::-1].transpose(2, 1, 0).reshape(n * n, P)
    span = la.mulmod(left, psi.transpose(1, 0, 2).reshape(P, J * X.dim), p)
    span = span.reshape(n, n, J, X.dim).transpose(2, 0, 1, 3)
    return span.reshape(-1, n * X.dim)


def factors_through_projective(f, X: Module, M: Module, span=None) -> bool:
    f = la.reduce(f, X.p).reshape(-1)
    span = phom_span(X, M) if span is None else span
    if span.shape[0] == 0:
        return not np.any(f)
    return la.solve(span.T, f, X.p) is not None


@dataclass(eq=False)
class StableHom:
    source: Module
    target: Module
    hom: np.ndarray  # rows
    phom: np.ndarray  # rows, RREF basis
    representatives: np.ndarray  # rows: Hom basis vectors independent mod PHom

    @property
    def dim(self) -> int:
        return self.representatives.shape[0]

    def coordinates(self, f) -> np.ndarray:
        """Coordinates of the class of f in the representative basis."""
        p = self.source.p
        f = la.reduce(f, p).reshape(-1)
        basis = np.vstack([self.representatives, self.phom]).T
        x = la.solve(basis, f, p)
        if x is None:
            raise ValueError("not a homomorphism")
        return x[: self.dim]


def extend_rows(base, candidates, p: int) -> list[int]:
    """Indices of candidate rows extending span(base) (first-come choice)."""
    base = np.asarray(base, dtype=np.int64)
    candidates = np.asarray(candidates, dtype=np.int64)
    if candidates.shape[0] == 0:
        return []
    nb = base.shape[0]
    stack = np.vstack([base, candidates]) if nb else candidates
    _, piv = la.rref(stack.T, p)
    return [c - nb for c in piv if c >= nb]


def stable_hom_basis(X: Module, M: Module) -> StableHom:
    p = X.p
    hom = hom_space(X, M)
    span = phom_span(X, M)
    ph = la.image_basis(span.T, p) if span.shape[0] else span
    idx = extend_rows(ph, hom, p)
    return StableHom(X, M, hom, ph, hom[idx] if idx else np.zeros((0, M.dim * X.dim), dtype=np.int64))


def stable_hom_dim(X: Module, M: Module) -> int:
    hom = hom_space(X, M)
    span = phom_span(X, M)
    return hom.shape[0] - (la.rank(span, X.p) if span.shape[0] else 0)


# ---------------------------------------------------------------------------
# restrictions and Jordan types


def jordan_type(Z, p: int) -> tuple[int, ...]:
    """Block sizes (descending) of a nilpotent matrix."""
    Z = la.reduce(Z, p)
    n = Z.shape[0]
    if n == 0:
        return ()
    ranks = [n]
    power = np.eye(n, dtype=np.int64)
    while ranks[-1] > 0:
        power = (power @ Z) % p
        ranks.append(la.rank(power, p))
        if len(ranks) > n + 1:
            raise ValueError("matrix is not nilpotent")
    at_least = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))]
    blocks = []
    for k in range(len(at_least), 0, -1):
        exact = at_least[k - 1] - (at_least[k] if k < len(at_least) else 0)
        blocks += [k] * exact
    return tuple(blocks)


@dataclass(frozen=True)
class Restriction:
    matrix: np.ndarray
    jordan: tuple
    p: int

    @property
    def nonprojective(self) -> tuple:
        return tuple(b for b in self.jordan if b < self.p)

    @property
    def nonprojective_dim(self) -> int:
        return sum(self.nonprojective)

    @property
    def free_rank(self) -> int:
        return sum(1 for b in self.jordan if b == self.p)

    def is_projective(self) -> bool:
        return not self.nonprojective


def restrict(M: Module, pt: PiPoint) -> Restriction:
    Z = restriction_matrix(M, pt)
    return Restriction(Z, jordan_type(Z, M.p), M.p)


# ---------------------------------------------------------------------------
# Gamma spaces


@dataclass(eq=False)
class GammaSpace:
    """ker Z / Z^{p-1} M (``odd=False``) or ker Z^{p-1} / Z M (``odd=True``)."""

    module: Module
    odd: bool
    representatives: np.ndarray  # columns
    denominator: np.ndarray  # columns spanning the subspace divided out
    z: np.ndarray

    @property
    def dim(self) -> int:
        return self.representatives.shape[1]

    def numerator_contains(self, v) -> bool:
        p = self.module.p
        k = p - 1 if self.odd else 1
        return not np.any(la.matpow(self.z, k, p) @ la.reduce(v, p) % p)

    def coordinates(self, v) -> Optional[np.ndarray]:
        """Coordinates of v modulo the denominator, or None if v is not in the numerator."""
        p = self.module.p
        v = la.reduce(v, p)
        basis = np.hstack([self.representatives, self.denominator])
        if basis.shape[1] == 0:
            return np.zeros(0, dtype=np.int64) if not np.any(v) else None
        x = la.solve(basis, v, p)
        return None if x is None else x[: self.dim]


def gamma_space(M: Module, split: Splitting, odd: bool = False) -> GammaSpace:
    p = M.p
    Z = split.z_matrix(M)
    if odd:
        num = la.nullspace(la.matpow(Z, p - 1, p), p)
        den = la.column_basis(Z, p)
    else:
        num = la.nullspace(Z, p)
        den = la.column_basis(la.matpow(Z, p - 1, p), p)
    den = la.as_columns(den, M.dim)
    idx = extend_rows(den.T, num.T, p)
    return GammaSpace(M, odd, la.as_columns(num[:, idx], M.dim), den, Z)

"""The truncated polynomial algebra kG = F_p[t_1..t_r]/(t_i^p) and its modules.

Conventions used throughout the package:

* Monomials ``t^e`` are indexed by exponent vectors ``e`` in ``[0, p)^r``,
  enumerated in ``itertools.product`` order (first exponent most significant).
* A module is given by ``r`` commuting ``p``-nilpotent matrices acting on
  column vectors.
* Tensor products put the first factor major, as in ``np.kron``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from . import linalg as la

HOPF_CHOICES = ("grouplike", "primitive")


def exponents(p: int, r: int) -> list[tuple[int, ...]]:
    return list(itertools.product(range(p), repeat=r))


def monomial_index(e: Sequence[int], p: int) -> int:
    idx = 0
    for a in e:
        idx = idx * p + int(a)
    return idx


@dataclass(frozen=True)
class Algebra:
    """kG with a chosen Hopf structure (``grouplike`` or ``primitive``)."""

    p: int
    r: int
    hopf: str = "primitive"

    def __post_init__(self):
        if self.p < 2 or any(self.p % q == 0 for q in range(2, self.p)):
            raise ValueError(f"p={self.p} is not prime")
        if self.r < 1:
            raise ValueError("need at least one generator")
        if self.hopf not in HOPF_CHOICES:
            raise ValueError(f"unknown Hopf structure {self.hopf!r}")

    @property
    def dim(self) -> int:
        return self.p**self.r

    @property
    def loewy_length(self) -> int:
        return self.r * (self.p - 1) + 1

    @cached_property
    def monomials(self) -> list[tuple[int, ...]]:
        return exponents(self.p, self.r)

    @property
    def top_index(self) -> int:
        return self.dim - 1

    def with_hopf(self, hopf: str) -> "Algebra":
        return Algebra(self.p, self.r, hopf)

    def generator(self, i: int) -> np.ndarray:
        """Coefficient vector of ``t_i`` (0-based ``i``)."""
        e = [0] * self.r
        e[i] = 1
        v = np.zeros(self.dim, dtype=np.int64)
        v[monomial_index(e, self.p)] = 1
        return v


@dataclass(eq=False)
class Module:
    """A finite-dimensional kG-module: ``r`` commuting p-nilpotent matrices."""

    p: int
    action: tuple
    name: str = ""
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        acts = [la.reduce(a, self.p) for a in self.action]
        if not acts:
            raise ValueError("a module needs at least one action matrix")
        n = acts[0].shape[0] if acts[0].ndim == 2 else 0
        for a in acts:
            if a.shape != (n, n):
                raise ValueError(f"action matrices must be {n}x{n}, got {a.shape}")
            a.setflags(write=False)
        self.action = tuple(acts)

    @property
    def r(self) -> int:
        return len(self.action)

    @property
    def dim(self) -> int:
        return self.action[0].shape[0]

    def validate(self) -> None:
        """Raise ``ValueError`` unless the actions commute and are p-nilpotent."""
        p = self.p
        for i, a in enumerate(self.action):
            if np.any(la.matpow(a, p, p)):
                raise ValueError(f"generator {i} does not satisfy t^p = 0")
            for j in range(i):
                b = self.action[j]
                if np.any((a @ b - b @ a) % p):
                    raise ValueError(f"generators {j} and {i} do not commute")

    def is_valid(self) -> bool:
        try:
            self.validate()
        except ValueError:
            return False
        return True

    def monomial_actions(self) -> np.ndarray:
        """Array ``out[k]`` = action of the k-th monomial of kG."""
        if "mon" not in self._cache:
            p, r, n = self.p, self.r, self.dim
            out = np.empty((p**r, n, n), dtype=np.int64)
            # build in product order, reusing prefixes
            for k, e in enumerate(exponents(p, r)):
                if k == 0:
                    out[0] = np.eye(n, dtype=np.int64)
                    continue
                # last nonzero coordinate drives the recursion
                j = max(i for i in range(r) if e[i])
                prev = list(e)
                prev[j] -= 1
                out[k] = la.mulmod(self.action[j], out[monomial_index(prev, p)], p)
            out.setflags(write=False)
            self._cache["mon"] = out
        return self._cache["mon"]

    def evaluate(self, coeffs) -> np.ndarray:
        """Action of the algebra element with the given monomial coefficients."""
        coeffs = la.reduce(coeffs, self.p)
        nz = np.flatnonzero(coeffs)
        out = np.zeros((self.dim, self.dim), dtype=np.int64)
        if nz.size:
            mon = self.monomial_actions()
            out = np.tensordot(coeffs[nz], mon[nz], axes=1) % self.p
        return out

    def radical_basis(self) -> np.ndarray:
        """Columns spanning Rad(M) = sum of the images of the generators."""
        if self.dim == 0:
            return np.zeros((0, 0), dtype=np.int64)
        return la.column_basis(np.hstack(self.action), self.p)

    def top_dim(self) -> int:
        if self.dim == 0:
            return 0
        return self.dim - la.rank(np.hstack(self.action), self.p)

    def socle_dim(self) -> int:
        if self.dim == 0:
            return 0
        return self.dim - la.rank(np.vstack(self.action), self.p)

    def with_action(self, action, name: str = "") -> "Module":
        return Module(self.p, tuple(action), name or self.name)

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<Module{label} p={self.p} r={self.r} dim={self.dim}>"


def same_module(a: Module, b: Module) -> bool:
    return (
        a.p == b.p
        and a.r == b.r
        and a.dim == b.dim
        and all(np.array_equal(x, y) for x, y in zip(a.action, b.action))
    )


# ---------------------------------------------------------------------------
# basic modules


def regular_module(p: int, r: int) -> Module:
    """kG acting on itself; basis = monomials in product order."""
    mons = exponents(p, r)
    n = len(mons)
    acts = []
    for i in range(r):
        t = np.zeros((n, n), dtype=np.int64)
        for k, e in enumerate(mons):
            if e[i] < p - 1:
                f = list(e)
                f[i] += 1
                t[monomial_index(f, p), k] = 1
        acts.append(t)
    return Module(p, tuple(acts), "kG")


def trivial_module(p: int, r: int) -> Module:
    return Module(p, tuple(np.zeros((1, 1), dtype=np.int64) for _ in range(r)), "k")


def zero_module(p: int, r: int) -> Module:
    return Module(p, tuple(np.zeros((0, 0), dtype=np.int64) for _ in range(r)), "0")


def free_module(p: int, r: int, rank: int) -> Module:
    return direct_sum(*([regular_module(p, r)] * rank)) if rank else zero_module(p, r)


def jordan_block(p: int, size: int) -> np.ndarray:
    """Nilpotent shift sending basis vector j to j+1."""
    return np.eye(size, k=-1, dtype=np.int64) % p


def direct_sum(*mods: Module) -> Module:
    if not mods:
        raise ValueError("direct_sum needs at least one module")
    p, r = mods[0].p, mods[0].r
    for m in mods:
        if (m.p, m.r) != (p, r):
            raise ValueError("direct_sum of modules over different algebras")
    n = sum(m.dim for m in mods)
    acts = []
    for i in range(r):
        a = np.zeros((n, n), dtype=np.int64)
        o = 0
        for m in mods:
            a[o : o + m.dim, o : o + m.dim] = m.action[i]
            o += m.dim
        acts.append(a)
    return Module(p, tuple(acts), "+".join(m.name or "?" for m in mods))


def dual(M: Module) -> Module:
    """The k-linear dual with kG acting by transposes.

    kG is commutative, so transposing gives a module without consulting the
    antipode; it is the dual used for injective hulls and Omega^{-1}.
    """
    return Module(M.p, tuple(a.T.copy() for a in M.action), f"{M.name}*" if M.name else "")


def submodule(M: Module, basis) -> Module:
    """The submodule spanned by the (independent, invariant) columns of ``basis``."""
    basis = la.as_columns(la.reduce(basis, M.p), M.dim)
    k = basis.shape[1]
    if k == 0:
        return zero_module(M.p, M.r)
    acts = []
    for a in M.action:
        x = la.solve(basis, (a @ basis) % M.p, M.p)
        if x is None:
            raise ValueError("subspace is not invariant under the action")
        acts.append(x)
    return Module(M.p, tuple(acts))


def quotient(M: Module, basis) -> tuple[Module, np.ndarray]:
    """M / span(basis); returns the quotient and the projection matrix."""
    p = M.p
    basis = la.as_columns(la.reduce(basis, p), M.dim)
    keep = la.complement_indices(basis, M.dim, p)
    # coordinates w.r.t. [basis | e_keep]; the projection reads the e_keep part
    full = np.hstack([basis, np.eye(M.dim, dtype=np.int64)[:, keep]])
    inv = la.inverse(full, p)
    proj = inv[basis.shape[1] :]
    lift = np.eye(M.dim, dtype=np.int64)[:, keep]
    acts = tuple((proj @ a @ lift) % p for a in M.action)
    return Module(p, acts), proj


def conjugate(M: Module, g) -> Module:
    """The isomorphic module with basis change ``g`` (action g A g^-1)."""
    gi = la.inverse(g, M.p)
    return Module(M.p, tuple((g @ a @ gi) % M.p for a in M.action), M.name)


# ---------------------------------------------------------------------------
# pi-points and splittings


@dataclass(frozen=True)
class PiPoint:
    """A linear point plus an optional tail in Rad^2(kG)."""

    linear: tuple
    tail: tuple = ()  # pairs (exponent tuple, coefficient)

    def __post_init__(self):
        object.__setattr__(self, "linear", tuple(int(c) for c in self.linear))
        object.__setattr__(
            self, "tail", tuple((tuple(int(a) for a in e), int(c)) for e, c in self.tail)
        )
        for e, _ in self.tail:
            if len(e) != len(self.linear):
                raise ValueError("tail exponent has the wrong length")
            if sum(e) < 2:
                raise ValueError("tail terms must lie in Rad^2")

    def element(self, p: int) -> np.ndarray:
        r = len(self.linear)
        if not any(c % p for c in self.linear):
            raise ValueError("pi-point has zero linear part")
        v = np.zeros(p**r, dtype=np.int64)
        for i, c in enumerate(self.linear):
            e = [0] * r
            e[i] = 1
            v[monomial_index(e, p)] += c
        for e, c in self.tail:
            if any(a >= p for a in e):
                continue
            v[monomial_index(e, p)] += c
        return v % p

    @classmethod
    def standard(cls, r: int) -> "PiPoint":
        return cls(tuple([0] * (r - 1) + [1]))


def restriction_matrix(M: Module, pt: PiPoint) -> np.ndarray:
    if len(pt.linear) != M.r:
        raise ValueError("pi-point and module have different ranks")
    return M.evaluate(pt.element(M.p))


def _multiply(a: np.ndarray, b: np.ndarray, p: int, r: int) -> np.ndarray:
    """Product of two elements of kG given as monomial coefficient vectors."""
    mons = exponents(p, r)
    out = np.zeros(p**r, dtype=np.int64)
    for i in np.flatnonzero(a):
        ei = mons[i]
        for j in np.flatnonzero(b):
            ej = mons[j]
            e = tuple(x + y for x, y in zip(ei, ej))
            if max(e) < p:
                out[monomial_index(e, p)] += a[i] * b[j]
    return out % p


@dataclass(eq=False)
class Splitting:
    """kG = kH (x) kC with kC = k[Z] and kH = k[X_1..X_{r-1}].

    ``split`` coordinates order the generators as ``(X_1, .., X_{r-1}, Z)``;
    the map ``phi`` sends a monomial in these to its expansion in the
    t-monomials.  Z's pivot is the leftmost nonzero linear coefficient and
    the X's are the remaining standard generators in increasing order.
    """

    alg: Algebra
    point: PiPoint
    Z: np.ndarray = field(init=False)
    X: list = field(init=False)
    phi: np.ndarray = field(init=False)
    phi_inv: np.ndarray = field(init=False)
    pivot: int = field(init=False)

    def __post_init__(self):
        p, r = self.alg.p, self.alg.r
        if len(self.point.linear) != r:
            raise ValueError("pi-point rank does not match algebra")
        self.Z = self.point.element(p)
        self.pivot = next(i for i, c in enumerate(self.point.linear) if c % p)
        self.X = [self.alg.generator(i) for i in range(r) if i != self.pivot]
        gens = self.X + [self.Z]
        one = np.zeros(p**r, dtype=np.int64)
        one[0] = 1
        mons = exponents(p, r)
        phi = np.zeros((p**r, p**r), dtype=np.int64)
        for k, e in enumerate(mons):
            v = one
            for g, a in zip(gens, e):
                for _ in range(a):
                    v = _multiply(v, g, p, r)
            phi[:, k] = v
        self.phi = phi
        self.phi_inv = la.inverse(phi, p)

    @property
    def p(self) -> int:
        return self.alg.p

    @property
    def r(self) -> int:
        return self.alg.r

    @property
    def s(self) -> int:
        return self.alg.r - 1

    def is_standard(self) -> bool:
        return np.array_equal(self.phi, np.eye(self.alg.dim, dtype=np.int64))

    def to_split(self, M: Module) -> Module:
        """Actions of ``X_1..X_{r-1}, Z`` on M."""
        if self.is_standard():
            return M
        return Module(M.p, tuple(M.evaluate(g) for g in self.X + [self.Z]))

    def from_split(self, N: Module) -> Module:
        """Inverse of :meth:`to_split`: recover the t-actions."""
        if self.is_standard():
            return N
        p, r = self.p, self.r
        acts = []
        for i in range(r):
            poly = self.phi_inv @ self.alg.generator(i) % p
            acts.append(N.evaluate(poly))
        return Module(p, tuple(acts), N.name)

    def z_matrix(self, M: Module) -> np.ndarray:
        return M.evaluate(self.Z)

    def x_matrices(self, M: Module) -> list[np.ndarray]:
        return [M.evaluate(x) for x in self.X]


def split_along(pt: PiPoint, alg: Algebra) -> Splitting:
    return Splitting(alg, pt)


def standard_splitting(alg: Algebra) -> Splitting:
    return Splitting(alg, PiPoint.standard(alg.r))


# ---------------------------------------------------------------------------
# Hopf structures and tensor products


def _tensor_actions(A: Sequence[np.ndarray], B: Sequence[np.ndarray], hopf: str, p: int):
    ia = np.eye(A[0].shape[0], dtype=np.int64)
    ib = np.eye(B[0].shape[0], dtype=np.int64)
    out = []
    for a, b in zip(A, B):
        t = np.kron(a, ib) + np.kron(ia, b)
        if hopf == "grouplike":
            t = t + np.kron(a, b)
        out.append(t % p)
    return out


def tensor_module(M: Module, N: Module, alg: Algebra, split: Optional[Splitting] = None) -> Module:
    """M (x) N with kG acting through the coproduct of ``alg``.

    Grouplike: ``t_i`` acts by ``A (x) 1 + 1 (x) B + A (x) B``.
    Primitive: ``t_i`` acts by ``A (x) 1 + 1 (x) B``.  When a splitting is
    given the coproduct is taken in its coordinates ``(X, Z)``, which makes
    the inclusion of k[Z] a Hopf map.
    """
    if (M.p, M.r) != (alg.p, alg.r) or (N.p, N.r) != (alg.p, alg.r):
        raise ValueError("modules do not match the algebra")
    if M.dim == 0 or N.dim == 0:
        return zero_module(alg.p, alg.r)
    if split is None or split.is_standard():
        return Module(alg.p, tuple(_tensor_actions(M.action, N.action, alg.hopf, alg.p)))
    ms, ns = split.to_split(M), split.to_split(N)
    t = Module(alg.p, tuple(_tensor_actions(ms.action, ns.action, alg.hopf, alg.p)))
    return split.from_split(t)


# ---------------------------------------------------------------------------
# inflations


def inflate_cyclic(W: np.ndarray, split: Splitting) -> Module:
    """Inflate a k[Z]-module (one nilpotent matrix) so that every X acts as 0."""
    p, s = split.p, split.s
    W = la.reduce(W, p)
    n = W.shape[0]
    acts = [np.zeros((n, n), dtype=np.int64) for _ in range(s)] + [W]
    return split.from_split(Module(p, tuple(acts)))


def inflate_h(actions: Sequence[np.ndarray], split: Splitting) -> Module:
    """Inflate a kH-module (matrices for X_1..X_{r-1}) so that Z acts as 0."""
    p = split.p
    acts = [la.reduce(a, p) for a in actions]
    if len(acts) != split.s:
        raise ValueError(f"expected {split.s} matrices for kH")
    n = acts[0].shape[0] if acts else 1
    acts.append(np.zeros((n, n), dtype=np.int64))
    return split.from_split(Module(p, tuple(acts)))


def u_module(split: Splitting) -> Module:
    """U: basis 1, Z, .., Z^{p-2}, Z the shift, kH acting trivially."""
    m = inflate_cyclic(jordan_block(split.p, split.p - 1), split)
    m.name = "U"
    return m


def kh_regular(split: Splitting) -> Module:
    """kH inflated to kG (Z acts as zero)."""
    reg = regular_module(split.p, split.s) if split.s else None
    if reg is None:
        return trivial_module(split.p, split.r)
    m = inflate_h(reg.action, split)
    m.name = "kH"
    return m


# ---------------------------------------------------------------------------
# maps


@dataclass(eq=False)
class ModuleMap:
    source: Module
    target: Module
    matrix: np.ndarray

    def __post_init__(self):
        self.matrix = la.reduce(self.matrix, self.source.p).reshape(self.target.dim, self.source.dim)

    def is_homomorphism(self) -> bool:
        p = self.source.p
        return all(
            not np.any((self.matrix @ a - b @ self.matrix) % p)
            for a, b in zip(self.source.action, self.target.action)
        )

    def validate(self) -> None:
        if not self.is_homomorphism():
            raise ValueError("matrix does not commute with the actions")

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """self o other."""
        return ModuleMap(other.source, self.target, self.matrix @ other.matrix)

"""Rank varieties over F_p, compactness loci and the restriction of E_n (x) M."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .algebra import Algebra, Module, PiPoint, Splitting, jordan_block, tensor_module, _tensor_actions
from .idempotent import build_E
from .stable import jordan_type, restrict


def projective_points(p: int, r: int) -> list[tuple[int, ...]]:
    """Points of P^{r-1}(F_p), first nonzero coordinate 1, in product order."""
    out = []
    for v in itertools.product(range(p), repeat=r):
        nz = [c for c in v if c]
        if nz and nz[0] == 1:
            out.append(v)
    return out


def rank_variety(M: Module, points: Optional[Sequence[PiPoint]] = None) -> list[tuple[int, ...]]:
    """F_p-points of the rank variety: linear pi-points where M is not free."""
    if points is None:
        points = [PiPoint(v) for v in projective_points(M.p, M.r)]
    return [tuple(pt.linear) for pt in points if not restrict(M, pt).is_projective()]


@dataclass
class LocusReport:
    bounded: bool
    dims: list[int]


def locus_check(family: Sequence[Module], pt: PiPoint) -> LocusReport:
    """Do the nonprojective parts of the restrictions stay bounded along a family?

    The family is read as M_1, M_2, ...; bounded means the second half never
    exceeds the largest nonprojective dimension of the first half.
    """
    dims = [restrict(M, pt).nonprojective_dim for M in family]
    half = max(1, len(dims) // 2)
    bounded = max(dims[half:], default=0) <= max(dims[:half])
    return LocusReport(bounded, dims)


def _jordan_tensor(a: Sequence[int], b: Sequence[int], p: int, hopf: str) -> list[int]:
    """Jordan type of the tensor product of two k[Z]/(Z^p)-modules."""
    out = []
    for x in a:
        for y in b:
            acts = _tensor_actions([jordan_block(p, x)], [jordan_block(p, y)], hopf, p)
            out.extend(jordan_type(acts[0], p))
    return out


@dataclass
class TensorMatch:
    ok: bool
    observed: list[int]
    predicted: list[int]


def tensor_idempotent_match(M: Module, n: int, split: Splitting, alg: Optional[Algebra] = None) -> TensorMatch:
    """Nonprojective blocks of alpha*(E_n (x) M) versus alpha*M plus alpha*D_n (x) alpha*M.

    alpha is the defining point of the splitting and D_n is the nonprojective
    part of alpha*E_n with one trivial block (the augmentation summand) removed.
    """
    alg = alg or split.alg
    p = split.p
    E = build_E(n, split)
    pt = split.point
    T = tensor_module(E.module, M, alg, split)
    observed = sorted(restrict(T, pt).nonprojective, reverse=True)
    e_blocks = list(restrict(E.module, pt).nonprojective)
    e_blocks.remove(1)
    m_blocks = list(restrict(M, pt).nonprojective)
    pred = m_blocks + _jordan_tensor(e_blocks, m_blocks, p, alg.hopf)
    predicted = sorted([b for b in pred if b != p], reverse=True)
    return TensorMatch(Counter(observed) == Counter(predicted), observed, predicted)

"""The acceptance matrix: eleven end-to-end checks with their time budgets.

Each check returns a :class:`CriterionResult`; ``details`` carries the
dimension and degree data that the Hopf-independence check compares.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import linalg as la
from .algebra import (
    Algebra,
    Module,
    direct_sum,
    kh_regular,
    regular_module,
    standard_splitting,
    trivial_module,
)
from .fingen import (
    Unstabilized,
    check_ann_triangle,
    check_tensor_ann,
    extract_generators,
    random_extension,
    stabilization_guard,
    verify_realize,
)
from .fixtures import corpus, random_module, small_modules
from .gamma import EndElement, gamma_ring
from .idempotent import DegreeCalculus, RangeError, build_E, layer_factoring_criterion, layer_hom_dimension_formula, sigma_witness
from .resolution import monomial_to_cocycle
from .stable import (
    factors_through_projective,
    hom_space,
    is_projective,
    nonprojective_part,
    omega,
    omega_inverse,
    omega_power,
    phom_span,
    restrict,
    stable_hom_dim,
)
from .varieties import locus_check, projective_points, rank_variety, tensor_idempotent_match


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    seconds: float
    budget: float
    details: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number:2d} {self.name} ({self.seconds:.1f}s, budget {self.budget:.0f}s)"


def _run(number: int, name: str, budget: float, body: Callable[[list, dict], None]) -> CriterionResult:
    failures: list = []
    details: dict = {}
    t = time.perf_counter()
    try:
        body(failures, details)
    except (RangeError, Unstabilized, RuntimeError, ValueError) as e:
        failures.append(f"{type(e).__name__}: {e}")
    secs = time.perf_counter() - t
    if secs > budget:
        failures.append(f"exceeded time budget {budget}s")
    return CriterionResult(number, name, not failures, secs, budget, details, failures)


# ---------------------------------------------------------------------------


def category_axioms(seed: int = 0, hopf: str = "primitive") -> CriterionResult:
    def body(fail, det):
        mods = corpus(seed, count=30, primes=(2, 3, 5), ranks=(2, 3), max_dim=12)
        det["modules"] = len(mods)
        for i, M in enumerate(mods):
            p, r = M.p, M.r
            if not M.is_valid():
                fail.append(f"module {i}: actions not commuting p-nilpotent")
                continue
            om, cover = omega(M)
            if om.dim != p**r * M.top_dim() - M.dim:
                fail.append(f"module {i}: dim Omega {om.dim}")
            back = omega_inverse(om)
            core = nonprojective_part(M)
            if back.dim != core.dim:
                fail.append(f"module {i}: Omega^-1 Omega dim {back.dim} vs {core.dim}")
            rest = M.dim - core.dim
            if rest % p**r or rest // p**r != M.top_dim() - core.top_dim():
                fail.append(f"module {i}: complement of the core is not free")
            if is_projective(M) != (core.dim == 0):
                fail.append(f"module {i}: projectivity disagrees with the core")
            if p**r <= 27:
                kg = regular_module(p, r)
                if stable_hom_dim(kg, M) or stable_hom_dim(M, kg):
                    fail.append(f"module {i}: stable Hom with kG nonzero")
            if is_projective(M) and stable_hom_dim(M, trivial_module(p, r)):
                fail.append(f"module {i}: projective module with nonzero stable Hom")

    return _run(1, "category axioms on the seeded corpus", 30, body)


def _expected_z(E, v: int) -> dict:
    """Z applied to basis vector v by the explicit case analysis (index -> coeff)."""
    p, P = E.p, E.P
    layer = int(np.searchsorted(E.offsets, v, side="right") - 1)
    local = v - int(E.offsets[layer])
    w = E.widths[layer]
    g, rem = divmod(local, w * P)
    j, k = divmod(rem, P)
    out: dict = {}
    if layer == 0:
        return out
    if layer % 2 and j < w - 1:
        out[int(E.offsets[layer]) + (g * w + j + 1) * P + k] = 1
        return out
    # d(x) lands in layer - 1 at U-power 0
    col = E.res.boundary(layer)[:, g * P + k]
    lo = layer - 1
    wl = E.widths[lo]
    for idx in np.flatnonzero(col):
        gg, kk = divmod(int(idx), P)
        out[int(E.offsets[lo]) + (gg * wl) * P + kk] = int(col[idx]) % p
    return out


def idempotent_structure(max_n: int = 10) -> CriterionResult:
    def body(fail, det):
        for p in (2, 3):
            for r in (2, 3):
                sp = standard_splitting(Algebra(p, r))
                res = None
                for n in range(max_n + 1):
                    E = build_E(n, sp)
                    res = E.res
                    want = sum(res.rank(i) * p ** (r - 1) * (1 if i % 2 == 0 else p - 1) for i in range(n + 1))
                    if E.dim != want:
                        fail.append(f"p={p} r={r} n={n}: dim {E.dim} != {want}")
                E = build_E(max_n, sp)
                Z = E.z_split
                for v in range(E.dim):
                    exp = _expected_z(E, v)
                    col = Z[:, v]
                    got = {int(i): int(col[i]) for i in np.flatnonzero(col)}
                    if got != exp:
                        fail.append(f"p={p} r={r}: Z on basis vector {v}")
                        break
                if not E.module.is_valid():
                    fail.append(f"p={p} r={r}: E_{max_n} actions invalid")
                for m in range(max_n):
                    Em = build_E(m, sp).module
                    d = Em.dim
                    for a, b in zip(E.module.action, Em.action):
                        if np.any(a[d:, :d]) or not np.array_equal(a[:d, :d], b):
                            fail.append(f"p={p} r={r}: iota_{m} is not a module map")
                            break
                det[f"{p},{r}"] = E.dim

    return _run(2, "E_n layer structure and inclusions", 60, body)


def defining_point_restriction(max_n: int = 12) -> CriterionResult:
    def body(fail, det):
        for p in (2, 3):
            sp = standard_splitting(Algebra(p, 2))
            dims = []
            for n in range(2, max_n + 1):
                E = build_E(n, sp)
                blocks = restrict(E.module, sp.point).nonprojective
                if 1 not in blocks:
                    fail.append(f"p={p} n={n}: no trivial block")
                if not sigma_witness(E, sp.point):
                    fail.append(f"p={p} n={n}: augmentation does not split off k")
                dims.append(sum(blocks))
            det[p] = dims
            if len(set(dims)) != 1:
                fail.append(f"p={p}: nonprojective dims vary {dims}")

    return _run(3, "defining-point restriction of E_n", 60, body)


def endomorphism_oracle(n: int = 10, top: int = 5) -> CriterionResult:
    def body(fail, det):
        for p in (2, 3):
            sp = standard_splitting(Algebra(p, 2))
            ring = gamma_ring(p, 1)
            E = build_E(n, sp)
            M = E.module
            span = phom_span(M, M)
            checked = 0
            for d in range(1, top + 1):
                for e in range(1, top + 1):
                    for a in ring.labels(d):
                        for b in ring.labels(e):
                            comp = la.mulmod(E.lift_monomial(a), E.lift_monomial(b), p)
                            prod = ring.monomial(a) * ring.monomial(b)
                            coc = monomial_to_cocycle(p, 1, d + e) @ prod.coeffs % p
                            want = E.lift_cocycle(coc, d + e)
                            if not factors_through_projective((comp - want) % p, M, M, span):
                                fail.append(f"p={p}: {a} * {b}")
                            if p == 3 and d % 2 and e % 2 and not factors_through_projective(comp, M, M, span):
                                fail.append(f"p=3: odd composite {a} * {b} is stably nonzero")
                            checked += 1
            det[p] = checked

    return _run(4, "lifted composites match ring products", 120, body)


def layer_data(hopf: str = "primitive", seed: int = 0, count: int = 10, max_i: int = 6) -> dict:
    """Layer stable Hom dimensions and factoring-criterion agreement."""
    rng = np.random.default_rng(seed)
    out = {"dims": [], "mismatch": [], "criterion": []}
    cases = [(2, 2), (3, 2), (2, 3), (3, 3)]
    for t in range(count):
        p, r = cases[t % len(cases)]
        alg = Algebra(p, r, hopf)
        sp = standard_splitting(alg)
        M = random_module(p, r, rng, 2, 6)
        E = build_E(max_i, sp)
        row = []
        for i in range(max_i + 1):
            L = E.layer_quotient(i)
            got = stable_hom_dim(L, M)
            want = layer_hom_dimension_formula(i, M, sp, alg)
            row.append(got)
            if got != want:
                out["mismatch"].append((t, i, got, want))
            hom = hom_space(L, M)
            span = phom_span(L, M)
            for h in hom:
                a = layer_factoring_criterion(h, i, L, M, sp, E)
                b = factors_through_projective(h, L, M, span)
                if a != b:
                    out["criterion"].append((t, i))
                    break
        out["dims"].append(row)
    return out


def layer_formula(hopf: str = "primitive", seed: int = 0) -> CriterionResult:
    def body(fail, det):
        data = layer_data(hopf, seed)
        det.update(dims=data["dims"])
        for t, i, got, want in data["mismatch"]:
            fail.append(f"module {t} layer {i}: {got} != {want}")
        for t, i in data["criterion"]:
            fail.append(f"module {t} layer {i}: image criterion disagrees")

    return _run(5, "layer Hom dimensions and factoring criterion", 60, body)


def degree_fuzz(seed: int = 0, N: int = 8, maps: int = 6, perturb: int = 5) -> CriterionResult:
    def body(fail, det):
        rng = np.random.default_rng(seed)
        checked = 0
        for p in (2, 3):
            sp = standard_splitting(Algebra(p, 2))
            k = trivial_module(p, 2)
            mods = [k, omega(k)[0], kh_regular(sp), random_module(p, 2, rng, 3, 6, nonprojective=True)]
            E = build_E(N, sp)
            for M in mods:
                calc = DegreeCalculus(E, M)
                hom = hom_space(E.module, M)
                span = calc.phom(N)
                if hom.shape[0] == 0:
                    continue
                for _ in range(maps):
                    f = rng.integers(0, p, hom.shape[0]) @ hom % p
                    try:
                        lt = calc.leading_term(f)
                    except RangeError:
                        continue
                    for _ in range(perturb):
                        g = (f + rng.integers(0, p, span.shape[0]) @ span) % p if span.shape[0] else f
                        lt2 = calc.leading_term(g)
                        if not lt.same_as(lt2):
                            fail.append(f"p={p} {M.name}: leading term moved under perturbation")
                        if calc.degree_by_factoring(g) != lt.degree:
                            fail.append(f"p={p} {M.name}: degree routes disagree")
                    checked += 1
        det["maps"] = checked
        if not checked:
            fail.append("no maps in the stable range")

    return _run(6, "degree and leading term are stable invariants", 30, body)


def fingen_data(hopf: str = "primitive", N: int = 12, seed: int = 0) -> dict:
    out = {}
    for p in (2, 3):
        sp = standard_splitting(Algebra(p, 2, hopf))
        for j, M in enumerate(small_modules(p, 2, sp, seed=seed)):
            gs = extract_generators(M, N, sp, top=N - 2)
            out[(p, j)] = {
                "degrees": gs.degrees,
                "certified": [gs.certified[d] for d in sorted(gs.certified)],
                "ok": gs.ok(),
                "guard": stabilization_guard(M, N, sp),
                "dim": M.dim,
            }
    return out


def finite_generation(hopf: str = "primitive", N: int = 12, seed: int = 0) -> CriterionResult:
    def body(fail, det):
        data = fingen_data(hopf, N, seed)
        det.update({f"{k[0]},{k[1]}": v for k, v in data.items()})
        for (p, j), v in data.items():
            if not v["ok"]:
                fail.append(f"p={p} module {j}: certification {v['certified']}")
            if not v["guard"]:
                fail.append(f"p={p} module {j}: layers not stable between N and N+1")
            if j == 0 and v["degrees"] != [0]:
                fail.append(f"p={p}: k has generators in degrees {v['degrees']}")

    return _run(7, "finite generation in the stable range", 180, body)


def realize_data(hopf: str = "primitive", n: int = 8, N: int = 12, D: int = 4) -> dict:
    sp = standard_splitting(Algebra(2, 2, hopf))
    ring = gamma_ring(2, 1)
    out = {}
    for name, terms in [("eta^2", {(2,): 1}), ("eta^4", {(4,): 1}), ("eta^2+eta^4", {(2,): 1, (4,): 1})]:
        z = EndElement.from_terms(ring, N + 4, terms)
        rep = verify_realize(z, sp, n, N, D, power=3)
        out[name] = {
            "annihilates": rep.annihilates,
            "radical": all(rep.radical.values()),
            "annihilator_dim": rep.annihilator_dim,
            "cone_dim": rep.cone_dim,
            "top": rep.top,
        }
    return out


def realization(hopf: str = "primitive") -> CriterionResult:
    def body(fail, det):
        data = realize_data(hopf)
        det.update(data)
        for name, v in data.items():
            if not v["annihilates"]:
                fail.append(f"{name}: zeta^2 does not kill the truncation")
            if not v["radical"]:
                fail.append(f"{name}: an annihilator element is outside rad(zeta)")
            if v["annihilator_dim"] == 0:
                fail.append(f"{name}: empty truncated annihilator")

    return _run(8, "cone modules realize the annihilator up to radical", 180, body)


def annihilator_lemmas(seed: int = 0, D: int = 4, N: int = 10) -> CriterionResult:
    def body(fail, det):
        rng = np.random.default_rng(seed)
        sp = standard_splitting(Algebra(2, 2))
        split_count = 0
        for t in range(10):
            L = random_module(2, 2, rng, 1, 3)
            Nm = random_module(2, 2, rng, 1, 3)
            M, _, _ = random_extension(L, Nm, rng)
            if not M.is_valid():
                fail.append(f"extension {t}: invalid module")
                continue
            if not check_ann_triangle(L, M, Nm, D, N, sp):
                fail.append(f"extension {t}: product of annihilators escapes")
            split_count += 1
        k = trivial_module(2, 2)
        finite = {"k": k, "Omega(k)": omega(k)[0], "kG": regular_module(2, 2)}
        for mname, M in {"kH": kh_regular(sp), "Omega(k)": omega(k)[0]}.items():
            for fname, F in finite.items():
                if not check_tensor_ann(M, F, D + 2, N, sp):
                    fail.append(f"tensor {mname} (x) {fname}: zeta^l not in the annihilator")
        det["extensions"] = split_count

    return _run(9, "annihilator lemmas", 60, body)


def hopf_independence(seed: int = 0) -> CriterionResult:
    def body(fail, det):
        for name, fn in [("layers", lambda h: layer_data(h, seed)["dims"]), ("fingen", fingen_data), ("realize", realize_data)]:
            a, b = fn("primitive"), fn("grouplike")
            if a != b:
                fail.append(f"{name}: data differs between Hopf structures")
        rng = np.random.default_rng(seed)
        for p in (2, 3):
            for hopf in ("primitive", "grouplike"):
                alg = Algebra(p, 2, hopf)
                sp = standard_splitting(alg)
                rng_h = np.random.default_rng(seed + p)
                for t in range(5):
                    M = random_module(p, 2, rng_h, 2, 6)
                    m = tensor_idempotent_match(M, 4, sp, alg)
                    if not m.ok:
                        fail.append(f"p={p} {hopf} module {t}: {m.observed} vs {m.predicted}")

    return _run(10, "Hopf independence", 120, body)


def varieties_check() -> CriterionResult:
    def body(fail, det):
        for p in (2, 3):
            for r in (2, 3):
                sp = standard_splitting(Algebra(p, r))
                if rank_variety(regular_module(p, r)):
                    fail.append(f"p={p} r={r}: kG has points")
                if rank_variety(trivial_module(p, r)) != projective_points(p, r):
                    fail.append(f"p={p} r={r}: k misses points")
                if rank_variety(kh_regular(sp)) != [tuple(sp.point.linear)]:
                    fail.append(f"p={p} r={r}: kH inflation variety is not the defining point")
            sp = standard_splitting(Algebra(p, 2))
            fam = [build_E(n, sp).module for n in range(2, 10)]
            rep = locus_check(fam, sp.point)
            det[f"E,{p}"] = rep.dims
            if not rep.bounded:
                fail.append(f"p={p}: E_n family not bounded")
            k = trivial_module(p, 2)
            sums = [direct_sum(*[omega_power(k, m) for m in range(n + 1)]) for n in range(1, 7)]
            rep = locus_check(sums, sp.point)
            det[f"Omega,{p}"] = rep.dims
            if rep.bounded:
                fail.append(f"p={p}: syzygy sums reported bounded")

    return _run(11, "rank varieties and compactness loci", 60, body)


CRITERIA = [
    category_axioms,
    idempotent_structure,
    defining_point_restriction,
    endomorphism_oracle,
    layer_formula,
    degree_fuzz,
    finite_generation,
    realization,
    annihilator_lemmas,
    hopf_independence,
    varieties_check,
]


def run_all(verbose: bool = True) -> list[CriterionResult]:
    out = []
    for fn in CRITERIA:
        res = fn()
        if verbose:
            print(res.line(), flush=True)
            for f in res.failures[:5]:
                print(f"      {f}", flush=True)
        out.append(res)
    return out

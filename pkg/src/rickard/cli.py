"""Command-line entry point: ``rickard <group> <command> [options]``.

Exit status 0 means every check passed, 1 a check failed (counterexamples go
to ``--out`` when given) and 2 a usage or input-format error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from . import io
from . import linalg as la
from .algebra import Algebra, Module, PiPoint, kh_regular, regular_module, split_along, tensor_module, trivial_module, u_module
from .fingen import (
    Unstabilized,
    annihilator,
    cone_of,
    extract_generators,
    hom_truncation,
    stable_top,
    verify_realize,
)
from .gamma import EndElement, gamma_ring
from .idempotent import DegreeCalculus, RangeError, build_E
from .stable import hom_space, is_projective, omega, omega_inverse, restrict
from .varieties import projective_points, rank_variety


class UsageError(Exception):
    pass


class CheckFailed(Exception):
    pass


@dataclass
class RunConfig:
    p: int = 2
    r: int = 2
    hopf: str = "primitive"
    truncation: int = 8
    window: Optional[int] = None
    seed: int = 0
    out: Optional[str] = None

    def validate(self) -> None:
        if self.truncation < 4:
            raise UsageError("--truncation must be at least 4")
        if self.window is not None and self.window < 1:
            raise UsageError("--window must be at least 1")
        try:
            Algebra(self.p, self.r, self.hopf)
        except ValueError as e:
            raise UsageError(str(e)) from None

    @property
    def alg(self) -> Algebra:
        return Algebra(self.p, self.r, self.hopf)


FIXTURES = {
    "k": lambda cfg, sp: trivial_module(cfg.p, cfg.r),
    "kG": lambda cfg, sp: regular_module(cfg.p, cfg.r),
    "kH": lambda cfg, sp: kh_regular(sp),
    "U": lambda cfg, sp: u_module(sp),
    "omega-k": lambda cfg, sp: omega(trivial_module(cfg.p, cfg.r))[0],
}


def _splitting(cfg: RunConfig, point: Optional[str]):
    pt = io.parse_point(point, cfg.r) if point else PiPoint.standard(cfg.r)
    try:
        return split_along(pt, cfg.alg)
    except (ValueError, StopIteration) as e:
        raise io.SchemaError(f"point: {e}") from None


def _module(cfg: RunConfig, source: str, sp, check: bool = True) -> Module:
    path = Path(source)
    if not path.exists() and source in FIXTURES:
        return FIXTURES[source](cfg, sp)
    if not path.exists():
        raise io.SchemaError(f"{source}: no such file or fixture ({', '.join(FIXTURES)})")
    M = io.load_module(path)
    if (M.p, M.r) != (cfg.p, cfg.r):
        raise io.SchemaError(f"{source}: module has p={M.p}, r={M.r} but --p {cfg.p} --r {cfg.r}")
    if check and not M.is_valid():
        raise io.SchemaError(f"{source}: actions are not commuting p-nilpotent (run 'module check')")
    return M


def _zeta(text: str, ring, bound: int) -> EndElement:
    """Parse ``label:coeff`` terms, e.g. ``2:1,4:1`` or ``1.1:1`` for multi-index labels."""
    terms = {}
    try:
        for part in text.split(","):
            lab, _, c = part.partition(":")
            label = tuple(int(x) for x in lab.split("."))
            terms[label] = terms.get(label, 0) + int(c or 1)
    except ValueError:
        raise io.SchemaError(f"zeta: cannot parse '{text}'") from None
    for label in terms:
        if len(label) != ring.s:
            raise io.SchemaError(f"zeta: label {label} needs {ring.s} entries")
    return EndElement.from_terms(ring, bound, terms)


class Reporter:
    def __init__(self, cfg: RunConfig, command: str):
        self.cfg = cfg
        self.report = {"command": command, "config": asdict(cfg), "passed": True}
        self.out = Path(cfg.out) if cfg.out else None
        if self.out:
            self.out.mkdir(parents=True, exist_ok=True)

    def say(self, text: str) -> None:
        print(text)

    def set(self, **kw) -> None:
        self.report.update(io.to_jsonable(kw))

    def artifact(self, name: str, obj) -> None:
        if self.out:
            (self.out / name).write_text(json.dumps(io.to_jsonable(obj), indent=1) + "\n")

    def fail(self, message: str, **artifacts) -> None:
        self.report["passed"] = False
        self.report.setdefault("failures", []).append(message)
        for name, obj in artifacts.items():
            self.artifact(f"counterexample-{name}.json", obj)

    def finish(self) -> int:
        if self.out:
            io.write_report(self.report, self.out / "report.json")
        return 0 if self.report["passed"] else 1


# ---------------------------------------------------------------------------
# commands


def cmd_module(cfg: RunConfig, args, rep: Reporter) -> None:
    sp = _splitting(cfg, getattr(args, "point", None))
    M = _module(cfg, args.module, sp, check=args.action != "check")
    if args.action == "check":
        ok = M.is_valid()
        rep.set(dim=M.dim, top=M.top_dim() if ok else None, valid=ok)
        rep.say(f"dim {M.dim}: {'valid' if ok else 'INVALID'} module")
        if ok:
            proj = is_projective(M)
            rep.set(socle=M.socle_dim(), projective=proj)
            rep.say(f"top {M.top_dim()}, socle {M.socle_dim()}, projective: {proj}")
        else:
            rep.fail("actions are not commuting p-nilpotent", module=io.module_to_dict(M))
    elif args.action == "omega":
        k = args.power
        out = M
        for _ in range(abs(k)):
            out = omega(out)[0] if k > 0 else omega_inverse(out)
        rep.set(dim=out.dim, power=k)
        rep.say(f"dim Omega^{k}(M) = {out.dim}")
        rep.artifact("module.json", io.module_to_dict(out))
    elif args.action == "tensor":
        N = _module(cfg, args.other, sp)
        T = tensor_module(M, N, cfg.alg, sp if args.point else None)
        ok = T.is_valid()
        rep.set(dim=T.dim, valid=ok)
        rep.say(f"dim M (x) N = {T.dim} ({cfg.hopf}); valid: {ok}")
        rep.artifact("module.json", io.module_to_dict(T))
        if not ok:
            rep.fail("tensor product is not a module")
    elif args.action == "restrict":
        res = restrict(M, sp.point)
        rep.set(point=io.point_to_dict(sp.point), jordan=list(res.jordan), nonprojective=list(res.nonprojective))
        rep.say(f"Jordan type {list(res.jordan)}; nonprojective part {list(res.nonprojective)}")
    elif args.action == "variety":
        pts = rank_variety(M)
        table = {",".join(map(str, v)): list(restrict(M, PiPoint(v)).jordan) for v in projective_points(cfg.p, cfg.r)}
        rep.set(points=[list(v) for v in pts], jordan=table)
        rep.say(f"rank variety: {[list(v) for v in pts] or 'empty'}")


def cmd_idempotent(cfg: RunConfig, args, rep: Reporter) -> None:
    sp = _splitting(cfg, args.point)
    n = args.n if args.n is not None else cfg.truncation
    E = build_E(n, sp)
    if args.action == "build":
        rep.set(n=n, dim=E.dim, layers=E.manifest())
        rep.say(f"E_{n}: dim {E.dim}, {len(E.manifest())} layers")
        for layer in E.manifest():
            rep.say(f"  layer {layer['layer']}: [{layer['start']}, {layer['stop']}) generators {layer['generators']}")
        rep.artifact("truncation.json", io.truncation_dump(E))
        if not E.module.is_valid():
            rep.fail("E_n actions are not commuting p-nilpotent")
    elif args.action == "restrict":
        pt = io.parse_point(args.at, cfg.r) if args.at else sp.point
        res = restrict(E.module, pt)
        rep.set(n=n, jordan=list(res.jordan), nonprojective=list(res.nonprojective))
        rep.say(f"E_{n} at {list(pt.linear)}: nonprojective part {list(res.nonprojective)} (free rank {res.free_rank})")
    elif args.action == "endo":
        ring = gamma_ring(cfg.p, cfg.r - 1)
        z = _zeta(args.zeta, ring, n)
        L = E.lift_element(z)
        ok = all(np.array_equal(L @ a % cfg.p, a @ L % cfg.p) for a in E.module.action)
        rep.set(n=n, zeta=z.terms(), commutes=ok, rank=la.rank(L, cfg.p))
        rep.say(f"lift of {z.terms()} on E_{n}: rank {la.rank(L, cfg.p)}, module map: {ok}")
        rep.artifact("endomorphism.json", L)
        if not ok:
            rep.fail("lifted endomorphism does not commute with the action", matrix=L)


def _random_map(cfg: RunConfig, ht) -> np.ndarray:
    rng = np.random.default_rng(cfg.seed)
    if ht.hom.shape[0] == 0:
        raise CheckFailed("Hom(E_N, M) is zero")
    return rng.integers(0, cfg.p, ht.hom.shape[0]) @ ht.hom % cfg.p


def _load_map(path: str, M: Module, E) -> np.ndarray:
    data = json.loads(Path(path).read_text())
    f = np.array(data, dtype=np.int64)
    if f.shape != (M.dim, E.dim):
        raise io.SchemaError(f"{path}: expected a {M.dim} x {E.dim} matrix")
    return f


def cmd_hom(cfg: RunConfig, args, rep: Reporter) -> None:
    sp = _splitting(cfg, args.point)
    M = _module(cfg, args.module, sp)
    N = cfg.truncation
    ht = hom_truncation(M, N, sp)
    if args.action == "layers":
        dims = ht.layer_dims()
        top = stable_top(M, N, sp)
        rep.set(truncation=N, layer_dims=dims, stable_top=top, dim=ht.dim)
        rep.say(f"stable Hom(E_{N}, M): dim {ht.dim}; layers {dims}; stable through degree {top}")
        return
    f = _load_map(args.map, M, ht.E) if args.map else _random_map(cfg, ht)
    calc = DegreeCalculus(ht.E, M)
    if args.action == "degree":
        d = calc.degree(f)
        d2 = calc.degree_by_factoring(f)
        rep.set(degree=d, degree_by_factoring=d2)
        rep.say(f"degree {d}")
        if d != d2:
            rep.fail("peeling and factoring disagree", map=f)
    elif args.action == "leading":
        lt = calc.leading_term(f)
        rep.set(degree=lt.degree, coordinates=lt.coords, stable=lt.stable)
        rep.say(f"degree {lt.degree}; leading term {lt.coords.tolist()}")


def cmd_fingen(cfg: RunConfig, args, rep: Reporter) -> None:
    sp = _splitting(cfg, args.point)
    M = _module(cfg, args.module, sp)
    N = cfg.truncation
    if args.action == "extract":
        gs = extract_generators(M, N, sp, window=cfg.window)
        rep.set(degrees=gs.degrees, certified={d: list(v) for d, v in gs.certified.items()}, top=gs.top)
        rep.say(f"generators in degrees {gs.degrees} (stable through {gs.top})")
        if not gs.ok():
            rep.fail("generators do not cover every layer", certified=gs.certified)
    elif args.action == "annihilator":
        D = args.degree
        A = annihilator(M, D, N, sp)
        rep.set(degree=D, dim=A.dim, elements=[x.terms() for x in A.elements()])
        rep.say(f"truncated annihilator up to degree {D}: dim {A.dim}")
        for x in A.elements():
            rep.say(f"  {x.terms()}")


def cmd_realize(cfg: RunConfig, args, rep: Reporter) -> None:
    sp = _splitting(cfg, args.point)
    ring = gamma_ring(cfg.p, cfg.r - 1)
    N = cfg.truncation
    z = _zeta(args.zeta, ring, N + 4)
    n = args.n if args.n is not None else max(N - 4, (z.degree() or 0) + 1)
    if args.action == "cone":
        c = cone_of(z, n, sp)
        rep.set(dim=c.module.dim, exact=c.exact, projective_rank=c.projective_rank)
        rep.say(f"M_zeta: dim {c.module.dim}; exact: {c.exact}")
        rep.artifact("module.json", io.module_to_dict(c.module))
        if not c.exact:
            rep.fail("cone sequence is not exact")
    elif args.action == "verify":
        r = verify_realize(z, sp, n, N, args.degree)
        rep.set(annihilates=r.annihilates, radical=r.radical, annihilator_dim=r.annihilator_dim, top=r.top)
        rep.say(f"zeta^2 annihilates: {r.annihilates}; annihilator in rad(zeta): {all(r.radical.values())}")
        if not r.ok:
            rep.fail("realization check failed", report=asdict(r))


def cmd_suite(cfg: RunConfig, args, rep: Reporter) -> None:
    from .acceptance import run_all

    results = run_all(verbose=True)
    rep.set(criteria=[{"number": r.number, "name": r.name, "passed": r.passed, "seconds": r.seconds, "failures": r.failures, "details": r.details} for r in results])
    for r in results:
        if not r.passed:
            rep.fail(f"criterion {r.number}: {r.name}")


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, default=2, help="characteristic")
    common.add_argument("--r", type=int, default=2, help="number of generators t_i")
    common.add_argument("--hopf", choices=["grouplike", "primitive"], default="primitive")
    common.add_argument("--truncation", type=int, default=8, help="truncation level N of E_N")
    common.add_argument("--window", type=int, default=None, help="stabilization window (default: Loewy length)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None, help="directory for the report and artifacts")
    common.add_argument("--point", default=None, help="defining pi-point, e.g. 1,1 or a JSON object")

    parser = argparse.ArgumentParser(prog="rickard", description=__doc__.splitlines()[0])
    groups = parser.add_subparsers(dest="group", required=True)

    g = groups.add_parser("module", help="single-module operations").add_subparsers(dest="action", required=True)
    for name in ("check", "omega", "tensor", "restrict", "variety"):
        sp = g.add_parser(name, parents=[common])
        sp.add_argument("module", help="module JSON file or fixture name (k, kG, kH, U, omega-k)")
        if name == "omega":
            sp.add_argument("--power", type=int, default=1, help="apply Omega this many times (negative: inverse)")
        if name == "tensor":
            sp.add_argument("other")

    g = groups.add_parser("idempotent", help="truncations E_n").add_subparsers(dest="action", required=True)
    for name in ("build", "restrict", "endo"):
        sp = g.add_parser(name, parents=[common])
        sp.add_argument("--n", type=int, default=None, help="truncation level (default --truncation)")
        if name == "restrict":
            sp.add_argument("--at", default=None, help="point to restrict along (default: the defining point)")
        if name == "endo":
            sp.add_argument("--zeta", required=True, help="ring element as label:coeff terms, e.g. 2:1,4:1")

    g = groups.add_parser("hom", help="stable Hom(E_N, M)").add_subparsers(dest="action", required=True)
    for name in ("layers", "degree", "leading"):
        sp = g.add_parser(name, parents=[common])
        sp.add_argument("module")
        if name != "layers":
            sp.add_argument("--map", default=None, help="JSON matrix of a map E_N -> M (default: seeded random)")

    g = groups.add_parser("fingen", help="generators and annihilators").add_subparsers(dest="action", required=True)
    for name in ("extract", "annihilator"):
        sp = g.add_parser(name, parents=[common])
        sp.add_argument("module")
        if name == "annihilator":
            sp.add_argument("--degree", type=int, default=4)

    g = groups.add_parser("realize", help="cone modules").add_subparsers(dest="action", required=True)
    for name in ("cone", "verify"):
        sp = g.add_parser(name, parents=[common])
        sp.add_argument("--zeta", required=True)
        sp.add_argument("--n", type=int, default=None, help="truncation used for the cone")
        if name == "verify":
            sp.add_argument("--degree", type=int, default=4)

    g = groups.add_parser("suite", help="acceptance matrix").add_subparsers(dest="action", required=True)
    g.add_parser("acceptance", parents=[common])
    return parser


COMMANDS = {
    "module": cmd_module,
    "idempotent": cmd_idempotent,
    "hom": cmd_hom,
    "fingen": cmd_fingen,
    "realize": cmd_realize,
    "suite": cmd_suite,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0) and 2
    cfg = RunConfig(args.p, args.r, args.hopf, args.truncation, args.window, args.seed, args.out)
    try:
        cfg.validate()
        rep = Reporter(cfg, f"{args.group} {args.action}")
        COMMANDS[args.group](cfg, args, rep)
    except (UsageError, io.SchemaError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (RangeError, Unstabilized) as e:
        print(f"range: {e}", file=sys.stderr)
        return 1
    except CheckFailed as e:
        print(f"failed: {e}", file=sys.stderr)
        return 1
    return rep.finish()


if __name__ == "__main__":
    sys.exit(main())

"""Conflations, pushouts and pullbacks, and Quillen's axioms on finite instances.

A conflation is a pair A -> B -> C where the first map is a kernel of the
second and the second a cokernel of the first. Everything is certified per
instance by exhaustive checks; nothing is assumed from the general theory.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import LimitExceeded, Obstruction, StructureError
from .modules import (DEFAULT_HOM_LIMIT, GammaModule, ModuleMorphism, biproduct, cokernel,
                      compose, enumerate_morphisms, identity, kernel, morphism_witness,
                      quotient_module, submodule, zero_module, zero_morphism)
from .monoid import congruence_closure
from .reports import Report


@dataclass
class Conflation:
    inflation: ModuleMorphism
    deflation: ModuleMorphism
    report: Report = field(default_factory=lambda: Report("conflation"))
    name: str | None = None

    @property
    def certified(self) -> bool:
        return self.report.passed

    @property
    def objects(self):
        return self.inflation.source, self.inflation.target, self.deflation.target


def certify(i: ModuleMorphism, p: ModuleMorphism) -> Report:
    """All conflation conditions for A -i-> B -p-> C, each with a witness on failure."""
    report = Report("conflation")
    if i.target is not p.source and i.target.size != p.source.size:
        raise StructureError("inflation and deflation are not composable")
    for name, f in (("inflation morphism", i), ("deflation morphism", p)):
        hit = morphism_witness(f)
        report.record(name, None if hit is None else {hit[0]: hit[1]})
    C = p.target
    bad = [a for a in range(i.source.size) if p.map[i.map[a]] != C.carrier.zero]
    report.record("composite zero", {"a": bad[0], "image": p.map[i.map[bad[0]]]} if bad else None)
    if bad:
        return report
    report.record("inflation injective", None if i.is_injective() else
                  {"map": list(i.map)})
    ker = {b for b in range(p.source.size) if p.map[b] == C.carrier.zero}
    extra = sorted(ker - set(i.map))
    report.record("image = kernel", {"b": extra[0]} if extra else None)
    cok = cokernel(i)
    comparison = [None] * cok.module.size
    hit = None
    for b in range(p.source.size):
        c = cok.projection.map[b]
        if comparison[c] is None:
            comparison[c] = p.map[b]
        elif comparison[c] != p.map[b]:
            hit = {"class": c, "b": b}
            break
    if hit is None:
        phi = ModuleMorphism(cok.module, C, tuple(comparison), p.slots)
        if not (phi.is_injective() and phi.is_surjective()):
            hit = {"comparison": list(phi.map)}
    report.record("cokernel comparison", hit)
    return report


def make_conflation(i: ModuleMorphism, p: ModuleMorphism, name=None) -> Conflation:
    """Certified conflation; raises Obstruction with the failed condition otherwise."""
    report = certify(i, p)
    if not report.passed:
        law, witness = report.first_witness()
        raise Obstruction(f"not a conflation: {law} fails", witness)
    return Conflation(i, p, report, name)


def is_inflation(i: ModuleMorphism) -> bool:
    return certify(i, cokernel(i).projection).passed


def is_deflation(p: ModuleMorphism) -> bool:
    return certify(kernel(p).inclusion, p).passed


def split_conflation(A: GammaModule, C: GammaModule, name=None) -> Conflation:
    B = biproduct(A, C)
    return make_conflation(B.inject_left, B.project_right, name)


def identity_conflations(M: GammaModule) -> list[Conflation]:
    """0 -> M -> M and M -> M -> 0."""
    Z = zero_module(M.parent, M.slots)
    return [make_conflation(zero_morphism(Z, M), identity(M)),
            make_conflation(identity(M), zero_morphism(M, Z))]


# ---- pushout and pullback -------------------------------------------------------------

@dataclass
class Square:
    module: GammaModule
    first: ModuleMorphism     # A' -> B' (pushout) or B' -> C' (pullback)
    second: ModuleMorphism    # B -> B' (pushout) or B' -> B (pullback)
    report: Report


def pushout(i: ModuleMorphism, f: ModuleMorphism) -> Square:
    """Pushout of B <-i- A -f-> A' as a quotient of A' (+) B."""
    if i.source.size != f.source.size:
        raise StructureError("i and f must share their source")
    A2, B = f.target, i.target
    bp = biproduct(A2, B)
    pairs = [(bp.inject_left.map[f.map[a]], bp.inject_right.map[i.map[a]])
             for a in range(i.source.size)]
    cong = congruence_closure(bp.module.carrier, pairs)
    Q, proj = quotient_module(bp.module, cong, "pushout")
    j2 = compose(proj, bp.inject_left)
    j = compose(proj, bp.inject_right)
    report = Report("pushout")
    lhs, rhs = compose(j2, f), compose(j, i)
    report.record("square commutes", None if lhs.map == rhs.map else
                  {"a": next(a for a in range(len(lhs.map)) if lhs.map[a] != rhs.map[a])})
    return Square(Q, j2, j, report)


def pullback(p: ModuleMorphism, g: ModuleMorphism) -> Square:
    """Pullback of B -p-> C <-g- C' as a submodule of B (+) C'."""
    if p.target.size != g.target.size:
        raise StructureError("p and g must share their target")
    B, C2 = p.source, g.source
    bp = biproduct(B, C2)
    nc = C2.size
    members = [b * nc + c for b in range(B.size) for c in range(nc) if p.map[b] == g.map[c]]
    P, inc = submodule(bp.module, members)
    q = compose(bp.project_left, inc)
    p2 = compose(bp.project_right, inc)
    report = Report("pullback")
    lhs, rhs = compose(p, q), compose(g, p2)
    report.record("square commutes", None if lhs.map == rhs.map else {"map": list(lhs.map)})
    return Square(P, p2, q, report)


def pushout_universal_property(i, f, sq: Square, tests, limit=DEFAULT_HOM_LIMIT) -> Report:
    """Every cocone (g': A' -> X, g: B -> X) with g'f = gi factors exactly once."""
    report = Report("pushout universal property")
    A2, B = f.target, i.target
    checked = 0
    for X in tests:
        if X.slots != B.slots:
            continue
        for g2 in enumerate_morphisms(A2, X, limit=limit):
            gf = compose(g2, f).map
            for g in enumerate_morphisms(B, X, limit=limit):
                if compose(g, i).map != gf:
                    continue
                count = sum(1 for u in enumerate_morphisms(sq.module, X, limit=limit)
                            if compose(u, sq.first).map == g2.map
                            and compose(u, sq.second).map == g.map)
                checked += 1
                if count != 1:
                    report.record("factorization", {"test": X.name, "g_prime": g2.map,
                                                    "g": g.map, "count": count})
                    return report
    report.record("factorization", None)
    report.info["cocones_checked"] = checked
    return report


def pullback_universal_property(p, g, sq: Square, tests, limit=DEFAULT_HOM_LIMIT) -> Report:
    """Every cone (h: X -> B, k: X -> C') with ph = gk factors exactly once."""
    report = Report("pullback universal property")
    B, C2 = p.source, g.source
    checked = 0
    for X in tests:
        if X.slots != B.slots:
            continue
        for h in enumerate_morphisms(X, B, limit=limit):
            ph = compose(p, h).map
            for k in enumerate_morphisms(X, C2, limit=limit):
                if compose(g, k).map != ph:
                    continue
                count = sum(1 for u in enumerate_morphisms(X, sq.module, limit=limit)
                            if compose(sq.second, u).map == h.map
                            and compose(sq.first, u).map == k.map)
                checked += 1
                if count != 1:
                    report.record("factorization", {"test": X.name, "h": h.map, "k": k.map,
                                                    "count": count})
                    return report
    report.record("factorization", None)
    report.info["cones_checked"] = checked
    return report


# ---- Quillen's axioms -------------------------------------------------------------------

def _composable(f: ModuleMorphism, g: ModuleMorphism) -> bool:
    return f.target is g.source


def check_quillen_instance(conflations, modules, limit: int = DEFAULT_HOM_LIMIT,
                           monos=()) -> Report:
    """E1-E3 over the given conflations, pushing and pulling along every morphism
    between the given modules.

    ``monos`` are extra injective morphisms; those that are not kernels of
    their cokernel are listed as excluded rather than counted as failures.
    """
    report = Report("Quillen axioms")
    conflations = [c for c in conflations if c.certified]
    counts = {"E1": 0, "E2 inflations": 0, "E2 deflations": 0, "E3 pushouts": 0,
              "E3 pullbacks": 0}

    # E1
    objects = []
    for c in conflations:
        for X in c.objects:
            if all(X is not Y for Y in objects):
                objects.append(X)
    for X in objects:
        try:
            identity_conflations(X)
            counts["E1"] += 2
        except Obstruction as exc:
            report.record("E1", {"module": X.name, "reason": str(exc)})
    report.record("E1", None)

    # E2
    inflations = [c.inflation for c in conflations]
    deflations = [c.deflation for c in conflations]
    for a in inflations:
        for b in inflations:
            if _composable(a, b):
                ba = compose(b, a)
                r = certify(ba, cokernel(ba).projection)
                counts["E2 inflations"] += 1
                if not r.passed:
                    report.record("E2 inflations", {"first": a.map, "second": b.map,
                                                    "failed": r.failed})
    report.record("E2 inflations", None)
    for a in deflations:
        for b in deflations:
            if _composable(a, b):
                ba = compose(b, a)
                r = certify(kernel(ba).inclusion, ba)
                counts["E2 deflations"] += 1
                if not r.passed:
                    report.record("E2 deflations", {"first": a.map, "second": b.map,
                                                    "failed": r.failed})
    report.record("E2 deflations", None)

    # E3
    for c in conflations:
        i, p = c.inflation, c.deflation
        A, C = i.source, p.target
        for X in modules:
            if X.slots != A.slots:
                continue
            try:
                along = enumerate_morphisms(A, X, limit=limit)
                back = enumerate_morphisms(X, C, limit=limit)
            except LimitExceeded as exc:
                report.unavailable("E3", str(exc))
                continue
            for f in along:
                try:
                    sq = pushout(i, f)
                    r = certify(sq.first, cokernel(sq.first).projection)
                except Obstruction as exc:
                    report.record("E3 pushouts", {"conflation": c.name, "f": f.map,
                                                  "obstruction": str(exc)})
                    continue
                counts["E3 pushouts"] += 1
                if not (r.passed and sq.report.passed):
                    report.record("E3 pushouts", {"conflation": c.name, "f": f.map,
                                                  "failed": r.failed})
            for g in back:
                sq = pullback(p, g)
                r = certify(kernel(sq.first).inclusion, sq.first)
                counts["E3 pullbacks"] += 1
                if not (r.passed and sq.report.passed):
                    report.record("E3 pullbacks", {"conflation": c.name, "g": g.map,
                                                   "failed": r.failed})
    report.record("E3 pushouts", None)
    report.record("E3 pullbacks", None)

    excluded = []
    for m in monos:
        if m.is_injective() and not is_inflation(m):
            excluded.append({"source": m.source.name, "target": m.target.name,
                             "map": list(m.map), "status": "not admissible - excluded"})
    report.info["counts"] = counts
    report.info["excluded"] = excluded
    return report

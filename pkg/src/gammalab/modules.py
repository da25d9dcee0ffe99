"""Positional left/right/bi-modules, morphisms, kernels, cokernels, biproducts.

A module is a finite commutative monoid together with one or more slot
actions. The action for slot ``j`` is a table with the same axes as the
parent's mu (``x_1..x_n, g_1..g_{n-1}``) except that axis ``j-1`` runs over
the module carrier. A module with one action is a positional (left/right)
module; with two it is a bi-module.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import bracketing
from .errors import LimitExceeded, Obstruction, StructureError
from .monoid import (Congruence, FiniteCommMonoid, congruence_closure, product_monoid,
                     quotient_monoid, trivial_monoid)
from .reports import Report
from .semiring import (DEFAULT_SCAN_BUDGET, GammaSemiring, _with_star, absorption_witness,
                       additivity_witness)

DEFAULT_HOM_LIMIT = 2 ** 20


class GammaModule:
    """A commutative monoid with slot-indexed actions of a GammaSemiring."""

    def __init__(self, carrier: FiniteCommMonoid, parent: GammaSemiring,
                 actions: dict, name: str | None = None):
        if not actions and actions != {}:
            raise StructureError("actions must be a mapping slot -> table")
        self.carrier = carrier
        self.parent = parent
        self.name = name
        tables = {}
        n = parent.n
        for slot, table in sorted(actions.items()):
            slot = int(slot)
            if not 1 <= slot <= n:
                raise StructureError(f"slot {slot} outside 1..{n}")
            shape = self.action_shape(slot)
            try:
                arr = np.asarray(table, dtype=np.int32)
            except (TypeError, ValueError):
                raise StructureError(f"action table for slot {slot} is not rectangular") from None
            if arr.shape != shape:
                if arr.size == int(np.prod(shape)):
                    arr = arr.reshape(shape)
                else:
                    raise StructureError(f"action for slot {slot} has {arr.size} entries, "
                                         f"expected {int(np.prod(shape))} for shape {shape}")
            if arr.size and (arr.min() < 0 or arr.max() >= carrier.size):
                bad = np.argwhere((arr < 0) | (arr >= carrier.size))[0]
                raise StructureError(f"action entry at {tuple(int(i) for i in bad)} "
                                     f"out of range for slot {slot}")
            arr = np.ascontiguousarray(arr)
            arr.setflags(write=False)
            tables[slot] = arr
        self.actions = tables

    def action_shape(self, slot: int) -> tuple:
        n, T, G = self.parent.n, self.parent.T, self.parent.Gamma
        shape = [T.size] * n + [G.size] * (n - 1)
        shape[slot - 1] = self.carrier.size
        return tuple(shape)

    @property
    def size(self) -> int:
        return self.carrier.size

    @property
    def slots(self) -> tuple[int, ...]:
        return tuple(sorted(self.actions))

    @property
    def is_bimodule(self) -> bool:
        return len(self.actions) == 2

    def act(self, slot: int, xs, m: int, gs) -> int:
        """Apply the slot action; ``xs`` are the n-1 semiring arguments."""
        args = list(xs)
        args.insert(slot - 1, m)
        return int(self.actions[slot][tuple(args) + tuple(gs)])

    def restrict(self, slots) -> "GammaModule":
        return GammaModule(self.carrier, self.parent, {s: self.actions[s] for s in slots},
                           self.name)

    def with_action_entry(self, slot, index, value) -> "GammaModule":
        """Copy with one action cell overwritten (for mutation tests)."""
        tables = {s: t.copy() for s, t in self.actions.items()}
        tables[slot][tuple(index)] = value
        return GammaModule(self.carrier, self.parent, tables, self.name)

    def __repr__(self):
        return f"GammaModule({self.name or ''}|M|={self.size}, slots={self.slots})"


def regular_module(S: GammaSemiring, slots=(2,), name=None) -> GammaModule:
    """T acting on itself: the action at slot j is mu."""
    return GammaModule(S.T, S, {s: S.mu for s in slots}, name or f"regular{tuple(slots)}")


def zero_module(S: GammaSemiring, slots=(2,)) -> GammaModule:
    carrier = trivial_monoid()
    n = S.n
    tables = {}
    for s in slots:
        shape = [S.T.size] * n + [S.Gamma.size] * (n - 1)
        shape[s - 1] = 1
        tables[s] = np.zeros(shape, dtype=np.int32)
    return GammaModule(carrier, S, tables, "0")


def module_from_function(carrier, S: GammaSemiring, slots, fn, name=None) -> GammaModule:
    """Tabulate ``fn(slot, xs, m, gs)`` for every slot."""
    tables = {}
    n = S.n
    for s in slots:
        shape = [S.T.size] * n + [S.Gamma.size] * (n - 1)
        shape[s - 1] = carrier.size
        table = np.empty(shape, dtype=np.int32)
        for idx in itertools.product(*(range(k) for k in shape)):
            args = list(idx[:n])
            m = args.pop(s - 1)
            table[idx] = fn(s, tuple(args), m, tuple(idx[n:]))
        tables[s] = table
    return GammaModule(carrier, S, tables, name)


# ---- axiom checks --------------------------------------------------------------

def _tree_str(tree) -> str:
    if isinstance(tree, str):
        return tree
    return "[" + ",".join(_tree_str(c) for c in tree) + "]"


def _m2_groups(n, slot, max_nodes):
    out = []
    for nodes in range(2, max_nodes + 1):
        for pos, trees in sorted(bracketing.module_bracketings(n, slot, nodes).items()):
            if len(trees) >= 2:
                out.append((nodes, pos, trees))
    return out


def check_m2(M: GammaModule, slot: int, report: Report, scan_budget=DEFAULT_SCAN_BUDGET,
             max_nodes: int = 3, sink=None) -> None:
    """All admissible bracketings of the same flattened word agree.

    Bracketings with 2 and 3 nodes are compared; groups whose scan would
    exceed ``scan_budget`` are skipped and counted in the report info.
    """
    S = M.parent
    n = S.n
    mu = S.mu
    # with a sink, the action table must already carry the sink index on
    # its module axis
    action = M.actions[slot]
    checked = skipped = 0
    witness = None
    for nodes, pos, trees in _m2_groups(n, slot, max_nodes):
        length = nodes * (n - 1) + 1
        sizes = [S.T.size] * length
        sizes[pos] = M.size
        total = int(np.prod(sizes, dtype=object)) * S.Gamma.size ** (length - 1)
        if total > scan_budget:
            skipped += 1
            continue
        checked += 1
        chunk = []
        remaining = total
        while remaining > 2 ** 22 and len(chunk) < length - 1:
            remaining //= sizes[len(chunk)]
            chunk.append(sizes[len(chunk)])
        for pinned in itertools.product(*(range(s) for s in chunk)):
            ev = bracketing.WordEvaluator(mu, n, length, sizes, S.Gamma.size, action=action,
                                          slot=slot, fixed=dict(enumerate(pinned)))
            base = ev.evaluate(trees[0])
            for other in trees[1:]:
                hit = bracketing.first_mismatch(base, ev.evaluate(other), sink)
                if hit is not None:
                    hit = list(hit)
                    hit[:len(pinned)] = pinned
                    witness = {"module_position": pos + 1, "reference": _tree_str(trees[0]),
                               "other": _tree_str(other), "leaves": hit[:length],
                               "params": hit[length:]}
                    break
            if witness:
                break
        if witness:
            break
    report.info.setdefault("M2_coverage", {})[slot] = {"groups_checked": checked,
                                                        "groups_skipped": skipped}
    if witness is None and checked == 0 and skipped:
        report.unavailable("M2", "every bracketing group exceeds the scan budget")
    else:
        report.record("M2", witness)


def check_action_axioms(M: GammaModule, slot: int, report: Report,
                        scan_budget=DEFAULT_SCAN_BUDGET, max_nodes: int = 3,
                        carrier_add=None, sink=None) -> None:
    S = M.parent
    n = S.n
    table = M.actions[slot]
    madd = M.carrier.add if carrier_add is None else carrier_add
    j = slot - 1

    m1 = None
    hit = additivity_witness(table, j, madd, madd, sink)
    if hit is not None:
        a, b, rest = hit
        m1 = {"slot": slot, "position": "module", "m": a, "m_prime": b,
              "args": _with_star(rest[:n - 1], j), "params": rest[n - 1:]}
    else:
        for i in range(n):
            if i == j:
                continue
            hit = additivity_witness(table, i, S.T.add, madd, sink)
            if hit is not None:
                a, b, rest = hit
                m1 = {"slot": slot, "position": i + 1, "a": a, "a_prime": b,
                      "args": _with_star(rest[:n - 1], i), "params": rest[n - 1:]}
                break
    report.record("M1", m1)

    m3 = None
    for i in range(n):
        zero_in = M.carrier.zero if i == j else S.T.zero
        hit = absorption_witness(table, i, zero_in, M.carrier.zero, sink)
        if hit is not None:
            m3 = {"slot": slot, "position": i + 1,
                  "args": _with_star(hit[:n - 1], i, zero_in), "params": hit[n - 1:]}
            break
    report.record("M3", m3)

    m4 = None
    for g in range(n - 1):
        hit = additivity_witness(table, n + g, S.Gamma.add, madd, sink)
        if hit is not None:
            a, b, rest = hit
            params = _with_star(rest[n:], g)
            m4 = {"slot": slot, "parameter": g + 1, "gamma": a, "gamma_prime": b,
                  "args": rest[:n], "params": params}
            break
    report.record("M4", m4)

    check_m2(M, slot, report, scan_budget, max_nodes, sink)


def validate_module(M: GammaModule, slot: int | None = None,
                    scan_budget=DEFAULT_SCAN_BUDGET, max_nodes: int = 3) -> Report:
    """M1-M4 for one action (the only one, unless ``slot`` is given)."""
    if slot is None:
        if len(M.actions) != 1:
            raise StructureError("module has several actions; name the slot or use "
                                 "validate_bimodule")
        slot = M.slots[0]
    report = Report(f"module {M.name or ''} slot {slot}".strip())
    check_action_axioms(M, slot, report, scan_budget, max_nodes)
    return report


def compatibility_witness(M: GammaModule, left: int, right: int):
    """First (left context, right context, m) where L.(m.R) != (L.m).R."""
    S = M.parent
    n = S.n
    L, R = M.actions[left], M.actions[right]
    k = n - 1
    # axes: a(k), alpha(k), b(k), beta(k), m
    axes = 4 * k + 1
    sizes = [S.T.size] * k + [S.Gamma.size] * k + [S.T.size] * k + [S.Gamma.size] * k + [M.size]

    def grid(i):
        shape = [1] * axes
        shape[i] = sizes[i]
        return np.arange(sizes[i]).reshape(shape)

    a = [grid(i) for i in range(k)]
    alpha = [grid(k + i) for i in range(k)]
    b = [grid(2 * k + i) for i in range(k)]
    beta = [grid(3 * k + i) for i in range(k)]
    m = grid(4 * k)

    def apply(table, slot, xs, inner, gs):
        args = list(xs)
        args.insert(slot - 1, inner)
        return table[tuple(args) + tuple(gs)]

    lhs = apply(L, left, a, apply(R, right, b, m, beta), alpha)
    rhs = apply(R, right, b, apply(L, left, a, m, alpha), beta)
    hit = bracketing.first_mismatch(lhs, rhs)
    if hit is None:
        return None
    return {"left_args": list(hit[:k]), "left_params": list(hit[k:2 * k]),
            "right_args": list(hit[2 * k:3 * k]), "right_params": list(hit[3 * k:4 * k]),
            "m": hit[4 * k]}


def validate_bimodule(M: GammaModule, scan_budget=DEFAULT_SCAN_BUDGET,
                      max_nodes: int = 3) -> Report:
    if len(M.actions) != 2:
        raise StructureError(f"bi-module needs exactly two actions, got slots {M.slots}")
    left, right = M.slots
    report = Report(f"bimodule {M.name or ''}".strip())
    for slot in (left, right):
        sub = Report("")
        check_action_axioms(M, slot, sub, scan_budget, max_nodes)
        for law, verdict in sub.verdicts.items():
            key = f"{law}@{slot}"
            report.verdicts[key] = verdict
            if law in sub.witnesses:
                report.witnesses[key] = sub.witnesses[law]
        report.info.update({f"{k}@{slot}": v for k, v in sub.info.items()})
    report.record("compatibility", compatibility_witness(M, left, right))
    return report


def validate_structure(M: GammaModule, **kw) -> Report:
    if len(M.actions) == 2:
        return validate_bimodule(M, **kw)
    if len(M.actions) == 1:
        return validate_module(M, **kw)
    return Report(f"monoid {M.name or ''}".strip())


# ---- morphisms -------------------------------------------------------------------

@dataclass
class ModuleMorphism:
    source: GammaModule
    target: GammaModule
    map: tuple[int, ...]
    slots: tuple[int, ...] | None = None

    def __post_init__(self):
        self.map = tuple(int(v) for v in self.map)
        if self.slots is None:
            self.slots = self.source.slots
        else:
            self.slots = tuple(self.slots)

    def __call__(self, m: int) -> int:
        return self.map[m]

    @property
    def array(self):
        return np.asarray(self.map, dtype=np.intp)

    def is_zero(self) -> bool:
        return all(v == self.target.carrier.zero for v in self.map)

    def is_injective(self) -> bool:
        return len(set(self.map)) == len(self.map)

    def is_surjective(self) -> bool:
        return len(set(self.map)) == self.target.size

    def image(self) -> list[int]:
        return sorted(set(self.map))


def _check_compatible(f: ModuleMorphism):
    if f.source.parent is not f.target.parent and not _same_parent(f.source.parent,
                                                                    f.target.parent):
        raise StructureError("source and target are over different semirings")
    missing = [s for s in f.slots if s not in f.source.actions or s not in f.target.actions]
    if missing:
        raise StructureError(f"slot mismatch: slots {missing} not carried by both modules")
    if len(f.map) != f.source.size:
        raise StructureError(f"map has {len(f.map)} entries, source has {f.source.size}")
    if any(not 0 <= v < f.target.size for v in f.map):
        raise StructureError("map value out of range")


def _same_parent(S1: GammaSemiring, S2: GammaSemiring) -> bool:
    return (S1.n == S2.n and S1.T == S2.T and S1.Gamma == S2.Gamma
            and np.array_equal(S1.mu, S2.mu))


def morphism_witness(f: ModuleMorphism):
    """(law, witness) for the first violated morphism law, or None."""
    src, dst = f.source, f.target
    arr = f.array
    if arr[src.carrier.zero] != dst.carrier.zero:
        return "zero", {"image_of_zero": int(arr[src.carrier.zero])}
    lhs = arr[src.carrier.add]
    rhs = dst.carrier.add[arr[:, None], arr[None, :]]
    hits = np.argwhere(lhs != rhs)
    if len(hits):
        return "additive", {"m": int(hits[0][0]), "m_prime": int(hits[0][1])}
    n = src.parent.n
    for slot in f.slots:
        lhs = arr[src.actions[slot]]
        rhs = np.take(dst.actions[slot], arr, axis=slot - 1)
        hits = np.argwhere(lhs != rhs)
        if len(hits):
            idx = [int(i) for i in hits[0]]
            args, params = idx[:n], idx[n:]
            m = args.pop(slot - 1)
            return "intertwines", {"slot": slot, "m": m, "args": _with_star(args, slot - 1),
                                   "params": params}
    return None


def is_morphism(f: ModuleMorphism) -> bool:
    return morphism_witness(f) is None


def validate_morphism(f: ModuleMorphism) -> Report:
    _check_compatible(f)
    report = Report("module morphism")
    hit = morphism_witness(f)
    for law in ("zero", "additive", "intertwines"):
        report.record(law, hit[1] if hit and hit[0] == law else None)
        if hit and hit[0] == law:
            break
    return report


def compose(g: ModuleMorphism, f: ModuleMorphism) -> ModuleMorphism:
    """g after f."""
    if f.target.size != g.source.size:
        raise StructureError("morphisms are not composable")
    return ModuleMorphism(f.source, g.target, tuple(g.map[v] for v in f.map), f.slots)


def add_morphisms(f: ModuleMorphism, g: ModuleMorphism) -> ModuleMorphism:
    """Pointwise sum; the result is re-validated before being returned."""
    if f.source.size != g.source.size or f.target.size != g.target.size:
        raise StructureError("morphisms have different source/target")
    add = f.target.carrier.add
    h = ModuleMorphism(f.source, f.target, tuple(int(add[a, b]) for a, b in zip(f.map, g.map)),
                       f.slots)
    hit = morphism_witness(h)
    if hit is not None:
        raise Obstruction("pointwise sum of morphisms is not a morphism", {hit[0]: hit[1]})
    return h


def identity(M: GammaModule) -> ModuleMorphism:
    return ModuleMorphism(M, M, tuple(range(M.size)))


def zero_morphism(M: GammaModule, N: GammaModule, slots=None) -> ModuleMorphism:
    return ModuleMorphism(M, N, (N.carrier.zero,) * M.size, slots)


def enumerate_morphisms(M: GammaModule, N: GammaModule, slots=None,
                        limit: int = DEFAULT_HOM_LIMIT) -> list[ModuleMorphism]:
    """All morphisms M -> N, found by assigning images to additive generators.

    Candidates are extended additively from the generators and then
    validated in full; result order is lexicographic in the map tuple.
    """
    slots = M.slots if slots is None else tuple(slots)
    gens = M.carrier.generators()
    count = N.size ** len(gens)
    if count > limit:
        raise LimitExceeded(f"{count} generator assignments exceed hom limit {limit}",
                            count, limit)
    Madd = M.carrier.add.tolist()
    Nadd = N.carrier.add.tolist()
    out = []
    for images in itertools.product(range(N.size), repeat=len(gens)):
        value = {M.carrier.zero: N.carrier.zero}
        frontier = [M.carrier.zero]
        ok = True
        while frontier and ok:
            nxt = []
            for x in frontier:
                vx = value[x]
                for g, img in zip(gens, images):
                    y = Madd[x][g]
                    vy = Nadd[vx][img]
                    old = value.get(y)
                    if old is None:
                        value[y] = vy
                        nxt.append(y)
                    elif old != vy:
                        ok = False
                        break
                if not ok:
                    break
            frontier = nxt
        if not ok or len(value) != M.size:
            continue
        f = ModuleMorphism(M, N, tuple(value[x] for x in range(M.size)), slots)
        if morphism_witness(f) is None:
            out.append(f)
    out.sort(key=lambda f: f.map)
    return out


def find_isomorphism(M: GammaModule, N: GammaModule, slots=None,
                     limit: int = DEFAULT_HOM_LIMIT) -> ModuleMorphism | None:
    """A bijective morphism M -> N, or None. Carrier size is checked first."""
    if M.size != N.size:
        return None
    if M.carrier.is_idempotent != N.carrier.is_idempotent:
        return None
    for f in enumerate_morphisms(M, N, slots, limit):
        if f.is_injective():
            return f
    return None


# ---- subobjects and quotients ----------------------------------------------------

def submodule(M: GammaModule, members) -> tuple[GammaModule, ModuleMorphism]:
    """Restrict M to ``members``; closure under + and every action is verified."""
    members = sorted(set(int(x) for x in members))
    index = {x: i for i, x in enumerate(members)}
    if M.carrier.zero not in index:
        raise Obstruction("subset does not contain zero", {"zero": M.carrier.zero})
    add = []
    for a in members:
        row = []
        for b in members:
            s = int(M.carrier.add[a, b])
            if s not in index:
                raise Obstruction("subset not closed under addition", {"a": a, "b": b})
            row.append(index[s])
        add.append(row)
    labels = [M.carrier.label(x) for x in members] if M.carrier.labels else None
    carrier = FiniteCommMonoid(add, index[M.carrier.zero], labels)
    sel = np.asarray(members, dtype=np.intp)
    remap = np.full(M.size, -1, dtype=np.int64)
    remap[sel] = np.arange(len(members))
    tables = {}
    for slot, table in M.actions.items():
        sub = np.take(table, sel, axis=slot - 1)
        mapped = remap[sub]
        if (mapped < 0).any():
            idx = [int(i) for i in np.argwhere(mapped < 0)[0]]
            n = M.parent.n
            args, params = idx[:n], idx[n:]
            args[slot - 1] = members[args[slot - 1]]
            raise Obstruction("subset not closed under the action",
                              {"slot": slot, "args": args, "params": params})
        tables[slot] = mapped
    K = GammaModule(carrier, M.parent, tables)
    return K, ModuleMorphism(K, M, tuple(members))


def quotient_module(N: GammaModule, cong: Congruence, name=None):
    """N / cong with induced actions; representative independence is verified."""
    Q, proj = quotient_monoid(N.carrier, cong)
    proj_arr = np.asarray(proj, dtype=np.intp)
    reps = np.asarray(cong.representatives(), dtype=np.intp)
    rep_of = reps[proj_arr]
    tables = {}
    n = N.parent.n
    for slot, table in N.actions.items():
        induced = proj_arr[table]
        moved = np.moveaxis(induced, slot - 1, 0)
        diff = np.argwhere(moved != moved[rep_of])
        if len(diff):
            m, *rest = (int(v) for v in diff[0])
            raise Obstruction("induced action is not well defined on the quotient",
                              {"slot": slot, "m": m, "representative": int(rep_of[m]),
                               "args": _with_star(rest[:n - 1], slot - 1),
                               "params": rest[n - 1:]})
        tables[slot] = np.take(induced, reps, axis=slot - 1)
    C = GammaModule(Q, N.parent, tables, name)
    return C, ModuleMorphism(N, C, tuple(proj))


@dataclass
class KernelResult:
    module: GammaModule
    inclusion: ModuleMorphism


@dataclass
class CokernelResult:
    module: GammaModule
    projection: ModuleMorphism
    congruence: Congruence
    coset_agrees: bool = True
    notes: list[str] = field(default_factory=list)


def kernel(f: ModuleMorphism) -> KernelResult:
    zero = f.target.carrier.zero
    members = [m for m in range(f.source.size) if f.map[m] == zero]
    try:
        K, inc = submodule(f.source, members)
    except Obstruction as exc:
        raise Obstruction(f"kernel not closed ({exc}); engine invariant violated",
                          exc.witness) from None
    inc.slots = f.slots
    return KernelResult(K, inc)


def coset_relation(N: GammaModule, image) -> Congruence:
    """n ~ n' iff n + i = n' + i' for some i, i' in the image (as a partition)."""
    add = N.carrier.add
    image = sorted(set(image))
    size = N.size
    parent = list(range(size))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for a in range(size):
        sums_a = {int(add[a, i]) for i in image}
        for b in range(a + 1, size):
            if any(int(add[b, i]) in sums_a for i in image):
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
    return Congruence.from_labels([find(x) for x in range(size)])


def cokernel(f: ModuleMorphism) -> CokernelResult:
    N = f.target
    zero = N.carrier.zero
    relations = [(v, zero) for v in sorted(set(f.map))]
    cong = congruence_closure(N.carrier, relations)
    C, proj = quotient_module(N, cong)
    proj.slots = f.slots
    cosets = coset_relation(N, f.map)
    agrees = cosets == cong
    notes = [] if agrees else ["coset relation n+Img(f) differs from the generated congruence"]
    return CokernelResult(C, proj, cong, agrees, notes)


@dataclass
class Biproduct:
    module: GammaModule
    inject_left: ModuleMorphism
    inject_right: ModuleMorphism
    project_left: ModuleMorphism
    project_right: ModuleMorphism


def biproduct(M: GammaModule, N: GammaModule, name=None) -> Biproduct:
    if M.slots != N.slots:
        raise StructureError(f"slot mismatch: {M.slots} vs {N.slots}")
    if not _same_parent(M.parent, N.parent):
        raise StructureError("modules over different semirings")
    carrier = product_monoid(M.carrier, N.carrier)
    nn = N.size
    tables = {}
    for slot in M.slots:
        tm = np.moveaxis(M.actions[slot], slot - 1, 0)
        tn = np.moveaxis(N.actions[slot], slot - 1, 0)
        combined = tm[:, None] * nn + tn[None, :]
        combined = combined.reshape((M.size * nn,) + tm.shape[1:])
        tables[slot] = np.moveaxis(combined, 0, slot - 1)
    P = GammaModule(carrier, M.parent, tables,
                    name or f"({M.name or 'M'}+{N.name or 'N'})")
    mz, nz = M.carrier.zero, N.carrier.zero
    i_m = ModuleMorphism(M, P, tuple(m * nn + nz for m in range(M.size)))
    i_n = ModuleMorphism(N, P, tuple(mz * nn + x for x in range(nn)))
    p_m = ModuleMorphism(P, M, tuple(k // nn for k in range(P.size)))
    p_n = ModuleMorphism(P, N, tuple(k % nn for k in range(P.size)))
    return Biproduct(P, i_m, i_n, p_m, p_n)


def biproduct_identities(B: Biproduct) -> Report:
    report = Report("biproduct identities")
    for name, f in (("i_M", B.inject_left), ("i_N", B.inject_right),
                    ("p_M", B.project_left), ("p_N", B.project_right)):
        hit = morphism_witness(f)
        report.record(f"{name} morphism", None if hit is None else {hit[0]: hit[1]})

    def check(name, h, expected):
        bad = [x for x in range(len(expected)) if h.map[x] != expected[x]]
        report.record(name, {"element": bad[0]} if bad else None)

    M, N = B.inject_left.source, B.inject_right.source
    check("p_M i_M = id", compose(B.project_left, B.inject_left), list(range(M.size)))
    check("p_N i_N = id", compose(B.project_right, B.inject_right), list(range(N.size)))
    check("p_N i_M = 0", compose(B.project_right, B.inject_left), [N.carrier.zero] * M.size)
    check("p_M i_N = 0", compose(B.project_left, B.inject_right), [M.carrier.zero] * N.size)
    total = add_morphisms(compose(B.inject_left, B.project_left),
                          compose(B.inject_right, B.project_right))
    check("i_M p_M + i_N p_N = id", total, list(range(B.module.size)))
    return report


# ---- universal properties ---------------------------------------------------------

def all_maps(src_size: int, dst_size: int, limit: int = DEFAULT_HOM_LIMIT):
    count = dst_size ** src_size
    if count > limit:
        raise LimitExceeded(f"{count} maps exceed enumeration limit {limit}", count, limit)
    return itertools.product(range(dst_size), repeat=src_size)


def kernel_universal_property(f: ModuleMorphism, ker: KernelResult, tests,
                              limit: int = DEFAULT_HOM_LIMIT) -> Report:
    """Each g: L -> M with f.g = 0 factors through the inclusion exactly once.

    Factorizations are counted by brute force over every map L -> Ker(f).
    """
    report = Report("kernel universal property")
    K, inc = ker.module, ker.inclusion
    checked = 0
    for L in tests:
        if L.slots != f.source.slots or not _same_parent(L.parent, f.source.parent):
            continue
        for g in enumerate_morphisms(L, f.source, f.slots, limit):
            if not compose(f, g).is_zero():
                continue
            count = 0
            for h in all_maps(L.size, K.size, limit):
                if any(inc.map[h[x]] != g.map[x] for x in range(L.size)):
                    continue
                if is_morphism(ModuleMorphism(L, K, h, f.slots)):
                    count += 1
            checked += 1
            if count != 1:
                report.record("factorization", {"test": L.name, "g": g.map, "count": count})
                return report
    report.record("factorization", None)
    report.info["cones_checked"] = checked
    return report


def cokernel_universal_property(f: ModuleMorphism, cok: CokernelResult, tests,
                                limit: int = DEFAULT_HOM_LIMIT) -> Report:
    """Each g: N -> Q with g.f = 0 factors through the projection exactly once."""
    report = Report("cokernel universal property")
    C, proj = cok.module, cok.projection
    checked = 0
    for Q in tests:
        if Q.slots != f.target.slots or not _same_parent(Q.parent, f.target.parent):
            continue
        for g in enumerate_morphisms(f.target, Q, f.slots, limit):
            if not compose(g, f).is_zero():
                continue
            count = 0
            for u in all_maps(C.size, Q.size, limit):
                if any(u[proj.map[y]] != g.map[y] for y in range(f.target.size)):
                    continue
                if is_morphism(ModuleMorphism(C, Q, u, f.slots)):
                    count += 1
            checked += 1
            if count != 1:
                report.record("factorization", {"test": Q.name, "g": g.map, "count": count})
                return report
    report.record("factorization", None)
    report.info["cocones_checked"] = checked
    return report

"""Depth-bounded free positional modules and their universal property.

A primitive term is a generator wrapped in a chain of action contexts; a
context is the (n-1)-tuple of semiring arguments around the module slot
together with the n-1 parameters. Contexts containing the semiring zero are
dropped (the term is zero). The carrier is the set of formal sums of at most
``sum_bound`` primitive terms with at most ``depth - 1`` contexts, divided by
the relations forced by the module axioms: additivity in every semiring
argument and parameter, and agreement of bracketings of the same word.
Sums or actions that would leave the bounded universe are undefined and are
reported as bound-exceeded rather than truncated.
"""
from __future__ import annotations

import itertools
from math import comb
from dataclasses import dataclass, field

import numpy as np

from . import bracketing
from .errors import LimitExceeded, StructureError
from .modules import DEFAULT_HOM_LIMIT, GammaModule, check_action_axioms
from .monoid import UNDEFINED, bounded_term_universe, congruence_closure
from .reports import Report
from .semiring import GammaSemiring

DEFAULT_FREE_LIMIT = 4096


@dataclass
class FreeModuleBounded:
    generators: list
    parent: GammaSemiring
    slot: int
    depth: int
    sum_bound: int
    chains: list            # (generator index, contexts innermost first)
    universe: object        # TermUniverse over chains
    classes: list           # universe element -> class
    add: np.ndarray         # class x class -> class, -1 undefined
    zero: int
    action: np.ndarray      # parent axes with the module axis over classes, -1 undefined
    status: str
    relation_counts: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return self.add.shape[0]

    def insertion(self, g: int) -> int:
        """Class of the generator term <x_g>."""
        return self.classes[self.universe.singleton(self.chains.index((g, ())))]

    def describe(self, c: int) -> str:
        members = [i for i, k in enumerate(self.classes) if k == c]
        return self._term_str(self.universe.elements[members[0]])

    def _term_str(self, term) -> str:
        if not term:
            return "0"
        return " + ".join(self._chain_str(self.chains[i]) for i in term)

    def _chain_str(self, chain) -> str:
        g, contexts = chain
        s = f"<{self.generators[g]}>"
        for xs, gs in contexts:
            args = [str(x) for x in xs]
            args.insert(self.slot - 1, s)
            s = "[" + ",".join(args) + "]_{" + ",".join(str(v) for v in gs) + "}"
        return s

    def as_module(self):
        """A module-shaped view with sink-padded tables for the axiom checkers."""
        sink = self.size
        add = np.where(self.add < 0, sink, self.add)
        add = np.pad(add, ((0, 1), (0, 1)), constant_values=sink)
        act = np.where(self.action < 0, sink, self.action)
        pad = [(0, 0)] * act.ndim
        pad[self.slot - 1] = (0, 1)
        act = np.pad(act, pad, constant_values=sink)
        return _SinkModule(self, add, act), sink


class _SinkCarrier:
    def __init__(self, add, zero):
        self.add = add
        self.zero = zero


class _SinkModule:
    def __init__(self, F: FreeModuleBounded, add, act):
        self.parent = F.parent
        self.size = F.size
        self.carrier = _SinkCarrier(add, F.zero)
        self.actions = {F.slot: act}
        self.name = "free"


def _contexts(S: GammaSemiring):
    k = S.n - 1
    T, G = S.T, S.Gamma
    nonzero = [x for x in range(T.size) if x != T.zero]
    return [(xs, gs) for xs in itertools.product(nonzero, repeat=k)
            for gs in itertools.product(range(G.size), repeat=k)]


def free_module(generators, S: GammaSemiring, slot: int = 2, depth: int = 2,
                sum_bound: int | None = None,
                limit: int = DEFAULT_FREE_LIMIT) -> FreeModuleBounded:
    """Bounded free module on ``generators`` over S acting at ``slot``."""
    if depth < 1:
        raise StructureError("depth must be >= 1")
    if not 1 <= slot <= S.n:
        raise StructureError(f"slot {slot} outside 1..{S.n}")
    generators = list(generators)
    if sum_bound is None:
        sum_bound = max(depth, 2)
    ctxs = _contexts(S)
    chains = []
    for g in range(len(generators)):
        for length in range(depth):
            for seq in itertools.product(ctxs, repeat=length):
                chains.append((g, tuple(seq)))
    projected = comb(len(chains) + sum_bound, sum_bound)
    if projected > limit:
        raise LimitExceeded(f"bounded free universe would hold {projected} terms "
                            f"(limit {limit})", projected, limit)
    universe = bounded_term_universe(chains, sum_bound, idempotent=False)
    chain_index = {c: i for i, c in enumerate(chains)}
    U = universe.monoid

    def term_of(chain_list):
        """Universe index of a multiset of chains, None if outside the bound."""
        if any(c is None for c in chain_list):
            return None
        key = tuple(sorted(chain_index[c] for c in chain_list if c != "zero"))
        try:
            return universe.index(key)
        except KeyError:
            return None

    def wrap(chain, ctx):
        if chain == "zero" or chain is None:
            return chain
        xs, gs = ctx
        if S.T.zero in xs:
            return "zero"
        g, seq = chain
        if len(seq) + 1 >= depth:
            return None
        return (g, seq + (ctx,))

    # unary action maps on the universe: one per context
    ctx_maps = []
    for ctx in ctxs:
        op = []
        for term in universe.elements:
            target = term_of([wrap(chains[i], ctx) for i in term])
            op.append(UNDEFINED if target is None else target)
        ctx_maps.append(op)

    relations = []
    counts = {"argument additivity": 0, "parameter additivity": 0, "bracketing": 0}
    T, G = S.T, S.Gamma
    vanishing = [(a, b) for a in range(T.size) for b in range(a, T.size)
                 if T.zero not in (a, b) and T.add[a, b] == T.zero]
    for chain in chains:
        g, seq = chain
        if not seq:
            continue
        here = chain_index[chain]
        for level, (xs, gs) in enumerate(seq):
            for pos in range(len(xs)):
                for a, b in itertools.product(range(T.size), repeat=2):
                    if T.add[a, b] != xs[pos]:
                        continue
                    parts = []
                    for v in (a, b):
                        new_xs = xs[:pos] + (v,) + xs[pos + 1:]
                        parts.append("zero" if v == T.zero else
                                     (g, seq[:level] + ((new_xs, gs),) + seq[level + 1:]))
                    other = term_of(parts)
                    if other is not None:
                        relations.append((universe.singleton(here), other))
                        counts["argument additivity"] += 1
                # the zero-argument context is dropped from the chains, so a
                # decomposition 0 = a + b relates the zero term to a sum
                for a, b in vanishing:
                    if xs[pos] != a:
                        continue
                    parts = [(g, seq[:level] + ((xs[:pos] + (v,) + xs[pos + 1:], gs),)
                              + seq[level + 1:]) for v in (a, b)]
                    other = term_of(parts)
                    if other is not None:
                        relations.append((U.zero, other))
                        counts["argument additivity"] += 1
            for pos in range(len(gs)):
                for a, b in itertools.product(range(G.size), repeat=2):
                    if G.add[a, b] != gs[pos]:
                        continue
                    parts = [(g, seq[:level] + ((xs, gs[:pos] + (v,) + gs[pos + 1:]),)
                              + seq[level + 1:]) for v in (a, b)]
                    other = term_of(parts)
                    if other is not None:
                        relations.append((universe.singleton(here), other))
                        counts["parameter additivity"] += 1

    for rel in _bracketing_relations(S, slot, depth, len(generators), term_of):
        relations.append(rel)
        counts["bracketing"] += 1

    cong = congruence_closure(U, relations, unary=ctx_maps)
    classes = list(cong.classes)
    reps = cong.representatives()
    size = len(reps)
    add = np.full((size, size), UNDEFINED, dtype=np.int64)
    cls = np.asarray(classes)
    # a class sum is defined when some pair of members has a defined sum
    for x, y in np.argwhere(U.add >= 0):
        add[cls[x], cls[y]] = cls[U.add[x, y]]
    n = S.n
    shape = [T.size] * n + [G.size] * (n - 1)
    shape[slot - 1] = size
    action = np.full(shape, UNDEFINED, dtype=np.int64)
    members = [[m for m in range(len(classes)) if classes[m] == c] for c in range(size)]
    # contexts with a zero argument send everything to the zero class
    zero_class = classes[U.zero]
    ctx_pos = {ctx: k for k, ctx in enumerate(ctxs)}
    for xs in itertools.product(range(T.size), repeat=n - 1):
        for gs in itertools.product(range(G.size), repeat=n - 1):
            for c in range(size):
                args = list(xs)
                args.insert(slot - 1, c)
                if T.zero in xs:
                    action[tuple(args) + gs] = zero_class
                    continue
                op = ctx_maps[ctx_pos[(xs, gs)]]
                for m in members[c]:
                    if op[m] >= 0:
                        action[tuple(args) + gs] = classes[op[m]]
                        break
    exceeded = bool((add < 0).any() or (action < 0).any())
    return FreeModuleBounded(generators, S, slot, depth, sum_bound, chains, universe, classes,
                             add, zero_class, action,
                             "bound-exceeded" if exceeded else "complete", counts)


def _bracketing_relations(S, slot, depth, ngens, term_of):
    """Chains obtained from different bracketings of one word are identified."""
    n = S.n
    T, G = S.T, S.Gamma
    out = []
    for nodes in (2, 3):
        for pos, trees in sorted(bracketing.module_bracketings(n, slot, nodes).items()):
            if len(trees) < 2:
                continue
            length = nodes * (n - 1) + 1
            t_positions = [i for i in range(length) if i != pos]
            total = T.size ** len(t_positions) * G.size ** (length - 1)
            if total > 2 ** 16:
                continue
            for leaves in itertools.product(range(T.size), repeat=len(t_positions)):
                word = dict(zip(t_positions, leaves))
                for params in itertools.product(range(G.size), repeat=length - 1):
                    for g in range(ngens):
                        terms = []
                        for tree in trees:
                            chain = _tree_chain(tree, word, params, S, slot, g, depth)
                            if chain is not None:
                                terms.append(term_of([chain]))
                        terms = [t for t in terms if t is not None]
                        for other in terms[1:]:
                            if other != terms[0]:
                                out.append((terms[0], other))
    return out


def _tree_chain(tree, word, params, S, slot, g, depth):
    """Evaluate mu-subtrees and return the chain for the action spine."""
    contexts = []

    def walk(node, start):
        if isinstance(node, str):
            if node == bracketing.M_LEAF:
                return "m", start + 1
            return word[start], start + 1
        vals, gaps, pos = [], [], start
        for k, child in enumerate(node):
            v, pos = walk(child, pos)
            vals.append(v)
            if k < len(node) - 1:
                gaps.append(params[pos - 1])
        if "m" in vals:
            xs = tuple(v for v in vals if v != "m")
            contexts.append((xs, tuple(gaps)))
            return "m", pos
        return S(vals, gaps), pos

    walk(tree, 0)
    if any(S.T.zero in xs for xs, _ in contexts):
        return "zero"
    if len(contexts) >= depth:
        return None
    return (g, tuple(contexts))


def validate_free_module(F: FreeModuleBounded, scan_budget=2 ** 24) -> Report:
    """M1-M4 on the defined part of the bounded carrier."""
    view, sink = F.as_module()
    report = Report(f"free module depth {F.depth}")
    check_action_axioms(view, F.slot, report, scan_budget, 3, carrier_add=view.carrier.add,
                        sink=sink)
    report.info["status"] = F.status
    undefined = int((F.action < 0).sum())
    if undefined:
        report.info["bound_exceeded_action_cells"] = undefined
    return report


# ---- universal property -------------------------------------------------------------

def _class_members(F):
    out = [[] for _ in range(F.size)]
    for m, c in enumerate(F.classes):
        out[c].append(m)
    return out


def extend_morphism(F: FreeModuleBounded, M: GammaModule, phi) -> tuple:
    """The map F -> M determined by phi on generators.

    Returns (values per class, report). The report checks that the value is
    independent of the chosen representative and that the map is a morphism
    on every defined sum and action cell.
    """
    if F.slot not in M.actions:
        raise StructureError(f"target module has no action at slot {F.slot}")
    phi = [int(v) for v in phi]
    if len(phi) != len(F.generators):
        raise StructureError("phi must give one value per generator")
    report = Report("extended morphism")

    def chain_value(chain):
        g, seq = chain
        v = phi[g]
        for xs, gs in seq:
            v = M.act(F.slot, xs, v, gs)
        return v

    chain_vals = [chain_value(c) for c in F.chains]
    term_vals = [M.carrier.sum(chain_vals[i] for i in term) for term in F.universe.elements]
    values = [None] * F.size
    bad = None
    for m, c in enumerate(F.classes):
        if values[c] is None:
            values[c] = term_vals[m]
        elif values[c] != term_vals[m] and bad is None:
            bad = {"class": c, "term": F.universe.format(m)}
    report.record("well-defined", bad)
    hit = partial_morphism_witness(F, M, values)
    report.record("morphism", hit)
    return values, report


def partial_morphism_witness(F: FreeModuleBounded, M: GammaModule, values):
    vals = np.asarray(values, dtype=np.intp)
    if vals[F.zero] != M.carrier.zero:
        return {"zero": int(vals[F.zero])}
    defined = F.add >= 0
    lhs = np.where(defined, vals[np.where(defined, F.add, 0)], -1)
    rhs = M.carrier.add[vals[:, None], vals[None, :]]
    hits = np.argwhere(defined & (lhs != rhs))
    if len(hits):
        return {"a": int(hits[0][0]), "b": int(hits[0][1])}
    act = F.action
    defined = act >= 0
    lhs = np.where(defined, vals[np.where(defined, act, 0)], -1)
    rhs = np.take(M.actions[F.slot], vals, axis=F.slot - 1)
    hits = np.argwhere(defined & (lhs != rhs))
    if len(hits):
        return {"action_cell": [int(i) for i in hits[0]]}
    return None


def reachable_from_generators(F: FreeModuleBounded) -> set:
    """Classes reachable from the generators and zero by defined sums and actions."""
    seen = {F.zero} | {F.insertion(g) for g in range(len(F.generators))}
    frontier = list(seen)
    moved = np.moveaxis(F.action, F.slot - 1, 0)
    while frontier:
        nxt = []
        for c in frontier:
            images = set(int(v) for v in np.unique(moved[c]) if v >= 0)
            images |= set(int(F.add[c, d]) for d in seen if F.add[c, d] >= 0)
            for v in images:
                if v not in seen:
                    seen.add(v)
                    nxt.append(v)
        frontier = nxt
        if not frontier:
            # sums of newly reached pairs
            extra = {int(F.add[a, b]) for a in seen for b in seen if F.add[a, b] >= 0} - seen
            if extra:
                seen |= extra
                frontier = list(extra)
    return seen


def representability(F: FreeModuleBounded, M: GammaModule,
                     limit: int = DEFAULT_HOM_LIMIT) -> Report:
    """Restriction {morphisms F -> M} -> Maps(X, M) is a bijection.

    Surjective: every phi extends to a validated morphism. Injective: every
    class is generated from the generators, so morphisms agreeing on the
    generators agree everywhere; when the map space is small enough this is
    re-confirmed by brute-force enumeration of all maps F -> M.
    """
    report = Report("free representability")
    k = len(F.generators)
    count = 0
    for phi in itertools.product(range(M.size), repeat=k):
        _, sub = extend_morphism(F, M, phi)
        if not sub.passed:
            report.record("surjective", {"phi": list(phi), **sub.witnesses})
            return report
        count += 1
    report.record("surjective", None)
    missing = sorted(set(range(F.size)) - reachable_from_generators(F))
    report.record("generated", {"unreachable_classes": missing} if missing else None)
    report.info["maps"] = M.size ** k
    report.info["extensions"] = count
    if M.size ** F.size <= limit:
        found = 0
        gens = [F.insertion(g) for g in range(k)]
        seen = set()
        for values in itertools.product(range(M.size), repeat=F.size):
            if partial_morphism_witness(F, M, values) is None:
                key = tuple(values[c] for c in gens)
                if key in seen:
                    report.record("injective", {"phi": list(key)})
                    return report
                seen.add(key)
                found += 1
        report.record("injective", None if found == M.size ** k else {"morphisms": found})
        report.info["morphisms_enumerated"] = found
    else:
        report.info["injective_by"] = "generation argument"
    return report

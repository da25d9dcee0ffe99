"""Positional tensor products, internal Hom and the tensor-Hom adjunction.

The tensor M (x) N is the quotient of the free commutative monoid on the
pairs (m, n) by biadditivity, zero and balancing relations. Because
c.(m, n) ~ (c.m, n), the count of each pair can be reduced along the cyclic
submonoid generated by m; the term universe used here is therefore the
finite product of those cycles and the quotient is exact (no truncation).
Only the size of that universe is bounded.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import LimitExceeded, Obstruction, StructureError
from .modules import (DEFAULT_HOM_LIMIT, GammaModule, ModuleMorphism, _same_parent, all_maps,
                      cokernel, compose, enumerate_morphisms, is_morphism, morphism_witness)
from .monoid import Congruence, FiniteCommMonoid
from .reports import Report

DEFAULT_TENSOR_LIMIT = 4096


# ---- the term universe ---------------------------------------------------------------

class PairUniverse:
    """Count vectors over generator tuples, each count reduced along a cycle.

    ``tuples[p]`` is a tuple of nonzero elements (one per factor). Count ``c``
    of tuple p lives in ``0 .. radix[p]-1``; once past ``index[p]`` it wraps
    with ``period[p]``.
    """

    def __init__(self, tuples, cycles):
        self.tuples = list(tuples)
        self.pos = {t: i for i, t in enumerate(self.tuples)}
        self.index = [c[0] for c in cycles]
        self.period = [c[1] for c in cycles]
        self.radix = [i + p for i, p in cycles]
        self.weights = []
        w = 1
        for r in self.radix:
            self.weights.append(w)
            w *= r
        self.size = w

    def digits(self, x: int) -> list[int]:
        out = []
        for r in self.radix:
            out.append(x % r)
            x //= r
        return out

    def encode(self, digits) -> int:
        return sum(d * w for d, w in zip(digits, self.weights))

    def reduce(self, p: int, c: int) -> int:
        i, per = self.index[p], self.period[p]
        return c if c < i + per else i + (c - i) % per

    def add(self, x: int, y: int) -> int:
        dx, dy = self.digits(x), self.digits(y)
        return self.encode(self.reduce(p, a + b) for p, (a, b) in enumerate(zip(dx, dy)))

    def bump(self, x: int, p: int) -> int:
        """x + e_p."""
        c = (x // self.weights[p]) % self.radix[p]
        new = self.reduce(p, c + 1)
        return x + (new - c) * self.weights[p]

    def unit(self, key) -> int:
        """e_key, or 0 when some coordinate of the tuple is zero."""
        p = self.pos.get(key)
        return 0 if p is None else self.weights[p]

    def digit_matrix(self) -> np.ndarray:
        xs = np.arange(self.size)
        cols = [(xs // w) % r for w, r in zip(self.weights, self.radix)]
        if not cols:
            return np.zeros((self.size, 0), dtype=np.int64)
        return np.stack(cols, axis=1)


def _nonzero(M: GammaModule):
    return [m for m in range(M.size) if m != M.carrier.zero]


def build_universe(factors, limit: int) -> PairUniverse:
    tuples = list(itertools.product(*(_nonzero(F) for F in factors)))
    cycles = [factors[0].carrier.cycle(t[0]) for t in tuples]
    size = 1
    for i, p in cycles:
        size *= i + p
        if size > limit:
            raise LimitExceeded(f"tensor term universe exceeds {limit} elements", size, limit)
    return PairUniverse(tuples, cycles)


def _flat_action(M: GammaModule, slot: int) -> np.ndarray:
    """Action as a (|M|, contexts) array; contexts are (args, params) in table order."""
    moved = np.moveaxis(M.actions[slot], slot - 1, 0)
    return moved.reshape(M.size, -1)


def _unflatten(flat: np.ndarray, M_size_axis: int, slot: int, S) -> np.ndarray:
    n = S.n
    shape = (M_size_axis,) + (S.T.size,) * (n - 1) + (S.Gamma.size,) * (n - 1)
    return np.moveaxis(flat.reshape(shape), 0, slot - 1)


# ---- closure ------------------------------------------------------------------------------

def _close(U: PairUniverse, relations) -> list[int]:
    """Union-find closure of ``relations`` under translation by every unit e_p."""
    parent = list(range(U.size))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    work = list(relations)
    while work:
        a, b = work.pop()
        ra, rb = find(a), find(b)
        if ra == rb:
            continue
        if rb < ra:
            ra, rb = rb, ra
        parent[rb] = ra
        for p in range(len(U.tuples)):
            work.append((U.bump(a, p), U.bump(b, p)))
    return [find(x) for x in range(U.size)]


def tensor_relations(factors, slot_pairs, U: PairUniverse):
    """(kind, lhs, rhs) relations for additivity in each factor and balancing.

    ``slot_pairs[i] = (j, k)`` balances factor i acting at slot j against
    factor i+1 acting at slot k, with the same arguments and parameters.
    """
    out = []
    nz = [_nonzero(F) for F in factors]
    for i, F in enumerate(factors):
        add = F.carrier.add
        others = nz[:i] + nz[i + 1:]
        for rest in itertools.product(*others):
            for a in range(F.size):
                for b in range(a, F.size):
                    def key(x):
                        return rest[:i] + (x,) + rest[i:]
                    lhs = U.unit(key(int(add[a, b])))
                    rhs = U.add(U.unit(key(a)), U.unit(key(b)))
                    if lhs != rhs:
                        out.append(("additivity", lhs, rhs))
    for i, (j, k) in enumerate(slot_pairs):
        A = _flat_action(factors[i], j)
        B = _flat_action(factors[i + 1], k)
        contexts = A.shape[1]
        others = nz[:i] + [[None], [None]] + nz[i + 2:]
        for rest in itertools.product(*others):
            for m in range(factors[i].size):
                for nn in range(factors[i + 1].size):
                    for c in range(contexts):
                        t = list(rest)
                        t[i], t[i + 1] = int(A[m, c]), nn
                        lhs = U.unit(tuple(t))
                        t[i], t[i + 1] = m, int(B[nn, c])
                        rhs = U.unit(tuple(t))
                        if lhs != rhs:
                            out.append(("balancing", lhs, rhs))
    return out


# ---- results ------------------------------------------------------------------------------

@dataclass
class TensorResult:
    module: GammaModule | None
    factor: dict                 # generator tuple -> class (tuples with a zero map to 0)
    status: str
    universe: PairUniverse | None
    classes: list
    slot_pairs: tuple
    relation_counts: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
    factors: tuple = ()

    @property
    def complete(self) -> bool:
        return self.status == "complete"

    def factor_of(self, *elems) -> int:
        return self.factor[tuple(elems)]


def multi_tensor(factors, slot_pairs=None, limit: int = DEFAULT_TENSOR_LIMIT,
                 induce: bool = True) -> TensorResult:
    """Tensor of several modules, consecutive ones balanced at ``slot_pairs``."""
    factors = list(factors)
    if len(factors) < 2:
        raise StructureError("need at least two factors")
    S = factors[0].parent
    for F in factors[1:]:
        if not _same_parent(S, F.parent):
            raise StructureError("factors are over different semirings")
    if slot_pairs is None:
        slot_pairs = [(max(factors[i].slots), min(factors[i + 1].slots))
                      for i in range(len(factors) - 1)]
    slot_pairs = tuple(tuple(p) for p in slot_pairs)
    for i, (j, k) in enumerate(slot_pairs):
        if j not in factors[i].actions or k not in factors[i + 1].actions:
            raise StructureError(f"factor {i + 1} or {i + 2} lacks the balancing slot {(j, k)}")
    try:
        U = build_universe(factors, limit)
    except LimitExceeded as exc:
        return TensorResult(None, {}, "bound-exceeded", None, [], slot_pairs,
                            warnings=[str(exc)], factors=tuple(factors))
    rels = tensor_relations(factors, slot_pairs, U)
    counts = {"additivity": 0, "balancing": 0}
    for kind, _, _ in rels:
        counts[kind] += 1
    roots = _close(U, [(a, b) for _, a, b in rels])
    cong = Congruence.from_labels(roots)
    classes = list(cong.classes)
    reps = cong.representatives()
    table = [[classes[U.add(r, s)] for s in reps] for r in reps]
    Q = FiniteCommMonoid(table, classes[0])
    factor = {}
    for elems in itertools.product(*(range(F.size) for F in factors)):
        factor[elems] = classes[U.unit(elems)]
    result = TensorResult(None, factor, "complete", U, classes, slot_pairs, counts,
                          factors=tuple(factors))
    actions = {}
    if induce:
        actions = _induced_actions(result, Q, factors, slot_pairs, S)
    result.module = GammaModule(Q, S, actions, "(" + " (x) ".join(
        F.name or "M" for F in factors) + ")")
    return result


def positional_tensor(M: GammaModule, N: GammaModule, j: int | None = None,
                      k: int | None = None, limit: int = DEFAULT_TENSOR_LIMIT,
                      induce: bool = True) -> TensorResult:
    """M (x) N balancing M's slot-j action against N's slot-k action."""
    j = max(M.slots) if j is None else j
    k = min(N.slots) if k is None else k
    return multi_tensor([M, N], [(j, k)], limit, induce)


def _multiples(Q: FiniteCommMonoid, top: int) -> np.ndarray:
    """mult[c, q] = c.q for c < top."""
    out = np.empty((max(top, 1), Q.size), dtype=np.int64)
    out[0] = Q.zero
    for c in range(1, top):
        out[c] = Q.add[out[c - 1], np.arange(Q.size)]
    return out


def _evaluate(U: PairUniverse, Q: FiniteCommMonoid, images: np.ndarray) -> np.ndarray:
    """Sum over p of count_p(x) . images[p]; images has shape (pairs, k)."""
    D = U.digit_matrix()
    mult = _multiples(Q, max(U.radix, default=1))
    acc = np.full((U.size, images.shape[1]), Q.zero, dtype=np.int64)
    for p in range(len(U.tuples)):
        acc = Q.add[acc, mult[D[:, p][:, None], images[p][None, :]]]
    return acc


def _class_consistent(values: np.ndarray, classes, reps):
    """First universe element whose row differs from its class representative."""
    cls = np.asarray(classes)
    rep_rows = values[np.asarray(reps)[cls]]
    bad = np.argwhere((values != rep_rows).any(axis=1))
    return None if len(bad) == 0 else int(bad[0][0])


def _induced_actions(result: TensorResult, Q, factors, slot_pairs, S) -> dict:
    """Residual actions: first factor's unused slots, then the last factor's."""
    U = result.universe
    used_first = slot_pairs[0][0]
    used_last = slot_pairs[-1][1]
    plan = [(0, s) for s in factors[0].slots if s != used_first]
    taken = {s for _, s in plan}
    last = len(factors) - 1
    for s in factors[last].slots:
        if s == used_last:
            continue
        if s in taken:
            result.warnings.append(f"slot {s} carried by both outer factors; "
                                   f"the first factor's action is used")
            continue
        plan.append((last, s))
    cong = Congruence.from_labels(result.classes)
    reps = cong.representatives()
    actions = {}
    for which, s in plan:
        A = _flat_action(factors[which], s)
        images = np.empty((len(U.tuples), A.shape[1]), dtype=np.int64)
        for p, t in enumerate(U.tuples):
            for c in range(A.shape[1]):
                moved = list(t)
                moved[which] = int(A[t[which], c])
                images[p, c] = result.factor[tuple(moved)]
        values = _evaluate(U, Q, images)
        bad = _class_consistent(values, result.classes, reps)
        if bad is not None:
            result.warnings.append(f"induced action at slot {s} is not well defined "
                                   f"(universe element {bad}); dropped")
            continue
        actions[s] = _unflatten(values[np.asarray(reps)], Q.size, s, S)
    return actions


def validate_tensor(result: TensorResult) -> Report:
    """Factor map is additive in every argument and balanced."""
    report = Report("tensor factor map")
    if not result.complete:
        report.unavailable("additive", "tensor bound exceeded")
        report.unavailable("balanced", "tensor bound exceeded")
        return report
    factors, Q = result.factors, result.module.carrier
    hit = None
    for elems in itertools.product(*(range(F.size) for F in factors)):
        for i, F in enumerate(factors):
            for b in range(F.size):
                other = elems[:i] + (b,) + elems[i + 1:]
                joint = elems[:i] + (int(F.carrier.add[elems[i], b]),) + elems[i + 1:]
                if result.factor[joint] != Q.add[result.factor[elems], result.factor[other]]:
                    hit = {"factor": i + 1, "elements": list(elems), "other": b}
                    break
            if hit:
                break
        if hit:
            break
    report.record("additive", hit)
    hit = None
    for i, (j, k) in enumerate(result.slot_pairs):
        A = _flat_action(factors[i], j)
        B = _flat_action(factors[i + 1], k)
        for elems in itertools.product(*(range(F.size) for F in factors)):
            m, nn = elems[i], elems[i + 1]
            for c in range(A.shape[1]):
                lhs = elems[:i] + (int(A[m, c]), nn) + elems[i + 2:]
                rhs = elems[:i] + (m, int(B[nn, c])) + elems[i + 2:]
                if result.factor[lhs] != result.factor[rhs]:
                    hit = {"pair": i + 1, "elements": list(elems), "context": c}
                    break
            if hit:
                break
        if hit:
            break
    report.record("balanced", hit)
    return report


# ---- coequalizer universal property -------------------------------------------------------

def balanced_maps(M: GammaModule, N: GammaModule, P_carrier: FiniteCommMonoid, j: int, k: int,
                  limit: int = DEFAULT_HOM_LIMIT):
    """Every biadditive balanced map M x N -> P, as an |M| x |N| array.

    Values are assigned on pairs of additive generators and extended in each
    argument; each candidate is then re-checked in full.
    """
    gm, gn = M.carrier.generators(), N.carrier.generators()
    count = P_carrier.size ** (len(gm) * len(gn))
    if count > limit:
        raise LimitExceeded(f"{count} generator assignments exceed limit {limit}", count, limit)
    A, B = _flat_action(M, j), _flat_action(N, k)
    Madd, Nadd, Padd = M.carrier.add, N.carrier.add, P_carrier.add
    out = []
    for values in itertools.product(range(P_carrier.size), repeat=len(gm) * len(gn)):
        beta = np.full((M.size, N.size), -1, dtype=np.int64)
        beta[M.carrier.zero, :] = P_carrier.zero
        beta[:, N.carrier.zero] = P_carrier.zero
        ok = True
        # extend along M for each generator of N, then along N
        for col, y in enumerate(gn):
            column = _extend_additive(Madd, M.carrier.zero, gm,
                                      [values[r * len(gn) + col] for r in range(len(gm))], Padd,
                                      P_carrier.zero)
            if column is None:
                ok = False
                break
            beta[:, y] = column
        if not ok:
            continue
        for x in range(M.size):
            row = _extend_additive(Nadd, N.carrier.zero, gn, [beta[x, y] for y in gn], Padd,
                                   P_carrier.zero)
            if row is None:
                ok = False
                break
            beta[x, :] = row
        if not ok:
            continue
        if _biadditive(beta, Madd, Nadd, Padd) and _balanced(beta, A, B):
            out.append(beta)
    return out


def _extend_additive(add, zero, gens, images, target_add, target_zero):
    value = {zero: target_zero}
    frontier = [zero]
    size = add.shape[0]
    while frontier:
        nxt = []
        for x in frontier:
            for g, img in zip(gens, images):
                y = int(add[x, g])
                v = int(target_add[value[x], img])
                if y not in value:
                    value[y] = v
                    nxt.append(y)
                elif value[y] != v:
                    return None
        frontier = nxt
    if len(value) != size:
        return None
    return [value[x] for x in range(size)]


def _biadditive(beta, Madd, Nadd, Padd) -> bool:
    left = beta[Madd, :]                          # [a, b, y] = beta(a+b, y)
    right = Padd[beta[:, None, :], beta[None, :, :]]
    if not np.array_equal(left, right):
        return False
    left = beta[:, Nadd]                          # [x, a, b] = beta(x, a+b)
    right = Padd[beta[:, :, None], beta[:, None, :]]
    return bool(np.array_equal(left, right))


def _balanced(beta, A, B) -> bool:
    # beta(act(m), n) == beta(m, act(n)) for every context
    lhs = beta[A[:, None, :], np.arange(beta.shape[1])[None, :, None]]
    rhs = beta[np.arange(beta.shape[0])[:, None, None], B[None, :, :]]
    return bool(np.array_equal(lhs, rhs))


def coequalizer_universal_property(result: TensorResult, P_carrier: FiniteCommMonoid,
                                   limit: int = DEFAULT_HOM_LIMIT) -> Report:
    """Every balanced biadditive beta factors as u . factor for exactly one monoid map u."""
    report = Report("tensor universal property")
    if not result.complete or len(result.factors) != 2:
        report.unavailable("factorization", "needs a complete two-factor tensor")
        return report
    M, N = result.factors
    (j, k), = result.slot_pairs
    Q = result.module.carrier
    fac = np.array([[result.factor[(x, y)] for y in range(N.size)] for x in range(M.size)])
    betas = balanced_maps(M, N, P_carrier, j, k, limit)
    for beta in betas:
        found = 0
        for u in all_maps(Q.size, P_carrier.size, limit):
            u = np.asarray(u)
            if u[Q.zero] != P_carrier.zero:
                continue
            if not np.array_equal(u[Q.add], P_carrier.add[u[:, None], u[None, :]]):
                continue
            if np.array_equal(u[fac], beta):
                found += 1
        if found != 1:
            report.record("factorization", {"beta": beta.tolist(), "factorizations": found})
            return report
    report.record("factorization", None)
    report.info["balanced_maps"] = len(betas)
    return report


# ---- induced maps ------------------------------------------------------------------------

def tensor_map(maps, source: TensorResult, target: TensorResult) -> ModuleMorphism:
    """f1 (x) ... (x) fk between tensors, checked for well-definedness."""
    if not (source.complete and target.complete):
        raise StructureError("tensor map needs complete tensors")
    U = source.universe
    Q = target.module.carrier
    images = np.empty((len(U.tuples), 1), dtype=np.int64)
    for p, t in enumerate(U.tuples):
        images[p, 0] = target.factor[tuple(f.map[x] if f is not None else x
                                           for f, x in zip(maps, t))]
    values = _evaluate(U, Q, images)[:, 0]
    cong = Congruence.from_labels(source.classes)
    reps = cong.representatives()
    bad = _class_consistent(values[:, None], source.classes, reps)
    if bad is not None:
        raise Obstruction("induced tensor map is not well defined", {"universe_element": bad})
    slots = tuple(s for s in source.module.slots if s in target.module.actions)
    return ModuleMorphism(source.module, target.module, tuple(int(values[r]) for r in reps),
                          slots)


# ---- internal Hom ------------------------------------------------------------------------

@dataclass
class HomModule:
    module: GammaModule
    maps: list                    # element index -> map tuple M -> P
    source: GammaModule
    target: GammaModule
    slots: tuple                  # (j, k)
    intertwined: tuple            # source slots every element intertwines

    def index(self, f) -> int:
        return self._index[tuple(f)]

    def __post_init__(self):
        self._index = {tuple(m): i for i, m in enumerate(self.maps)}


def internal_hom(M: GammaModule, P: GammaModule, j: int, k: int, extra_slots=None,
                 limit: int = DEFAULT_HOM_LIMIT) -> HomModule:
    """Morphisms M -> P intertwining M's slots other than j.

    The slot-k action precomposes with M's slot-j action,
    ``(t . f)(m) = f([t, m]_j)``; each extra slot s post-composes with P's
    slot-s action, ``(t * f)(m) = [t, f(m)]_s``.
    """
    if j not in M.actions:
        raise StructureError(f"source has no action at slot {j}")
    residual = tuple(s for s in M.slots if s != j)
    if extra_slots is None:
        extra_slots = tuple(s for s in P.slots if s not in residual and s != k)
    for s in residual + tuple(extra_slots):
        if s not in P.actions:
            raise StructureError(f"target has no action at slot {s}")
    maps = [f.map for f in enumerate_morphisms(M, P, residual, limit)]
    index = {m: i for i, m in enumerate(maps)}
    size = len(maps)
    arr = np.asarray(maps, dtype=np.int64).reshape(size, M.size)
    summed = P.carrier.add[arr[:, None, :], arr[None, :, :]]
    table = np.empty((size, size), dtype=np.int64)
    for a in range(size):
        for b in range(size):
            key = tuple(int(v) for v in summed[a, b])
            if key not in index:
                raise Obstruction("pointwise sum leaves the Hom set", {"f": maps[a], "g": maps[b]})
            table[a, b] = index[key]
    zero = index[(P.carrier.zero,) * M.size]
    carrier = FiniteCommMonoid(table, zero)
    S = M.parent
    actions = {}
    A = _flat_action(M, j)                        # (|M|, contexts)
    contexts = A.shape[1]
    flat = np.empty((size, contexts), dtype=np.int64)
    for a in range(size):
        composed = arr[a][A]                      # [m, c] = f([t, m]_j)
        for c in range(contexts):
            key = tuple(int(v) for v in composed[:, c])
            if key not in index:
                raise Obstruction("precomposed action leaves the Hom set",
                                  {"f": maps[a], "context": c})
            flat[a, c] = index[key]
    actions[k] = _unflatten(flat, size, k, S)
    for s in extra_slots:
        if s == k:
            continue
        B = _flat_action(P, s)
        flat = np.empty((size, contexts), dtype=np.int64)
        for a in range(size):
            composed = B[arr[a]]                  # [m, c] = [t, f(m)]_s
            for c in range(contexts):
                key = tuple(int(v) for v in composed[:, c])
                if key not in index:
                    raise Obstruction("post-composed action leaves the Hom set",
                                      {"f": maps[a], "slot": s, "context": c})
                flat[a, c] = index[key]
        actions[s] = _unflatten(flat, size, s, S)
    H = GammaModule(carrier, S, actions, f"Hom({M.name or 'M'},{P.name or 'P'})")
    return HomModule(H, maps, M, P, (j, k), residual)


# ---- adjunction ---------------------------------------------------------------------------

def check_adjunction(M: GammaModule, N: GammaModule, P: GammaModule, j: int | None = None,
                     k: int | None = None, limit: int = DEFAULT_HOM_LIMIT,
                     tensor_limit: int = DEFAULT_TENSOR_LIMIT, naturality=True) -> Report:
    """Currying Hom(M (x) N, P) -> Hom(N, Hom(M, P)) is a bijection."""
    j = max(M.slots) if j is None else j
    k = min(N.slots) if k is None else k
    report = Report("tensor-hom adjunction")
    T = positional_tensor(M, N, j, k, tensor_limit)
    if not T.complete:
        report.unavailable("bijection", "tensor bound exceeded")
        return report
    TM = T.module
    n_residual = tuple(s for s in N.slots if s != k)
    m_residual = tuple(s for s in M.slots if s != j)
    if set(n_residual) & set(m_residual) or set(TM.slots) != set(m_residual + n_residual):
        report.unavailable("bijection", "residual slots of the factors overlap")
        return report
    missing = [s for s in TM.slots if s not in P.actions]
    if missing:
        report.unavailable("bijection", f"target lacks slots {missing}")
        return report
    H = internal_hom(M, P, j, k, n_residual, limit)
    left = enumerate_morphisms(TM, P, TM.slots, limit)
    right = enumerate_morphisms(N, H.module, N.slots, limit)
    report.info["hom_tensor"] = len(left)
    report.info["hom_curried"] = len(right)
    report.info["internal_hom_size"] = H.module.size

    def curry(g):
        out = []
        for y in range(N.size):
            f = tuple(g.map[T.factor[(x, y)]] for x in range(M.size))
            if f not in H._index:
                return None, {"g": g.map, "n": y, "map": f}
            out.append(H._index[f])
        return ModuleMorphism(N, H.module, tuple(out), N.slots), None

    images = set()
    for g in left:
        c, bad = curry(g)
        if bad is not None:
            report.record("curried lands in Hom", bad)
            return report
        hit = morphism_witness(c)
        if hit is not None:
            report.record("curried is a morphism", {"g": g.map, hit[0]: hit[1]})
            return report
        if c.map in images:
            report.record("injective", {"g": g.map})
            return report
        images.add(c.map)
    report.record("curried lands in Hom", None)
    report.record("curried is a morphism", None)
    report.record("injective", None)
    missing = sorted(r.map for r in right if r.map not in images)
    report.record("surjective", {"uncovered": list(missing[0])} if missing else None)
    if naturality:
        _naturality(report, T, H, left, P, M, j, k, n_residual, limit)
    return report


def _naturality(report, T, H, left, P, M, j, k, n_residual, limit):
    """Squares for post-composition with every endomorphism of P."""
    checked = 0
    for h in enumerate_morphisms(P, P, P.slots, limit):
        for g in left:
            hg = compose(h, g)
            for y in range(T.factors[1].size):
                lhs = tuple(hg.map[T.factor[(x, y)]] for x in range(M.size))
                f = H.maps[H._index[tuple(g.map[T.factor[(x, y)]] for x in range(M.size))]]
                rhs = tuple(h.map[v] for v in f)
                if lhs != rhs:
                    report.record("naturality in P", {"h": h.map, "g": g.map, "n": y})
                    return
            checked += 1
    report.record("naturality in P", None)
    report.info["naturality_squares"] = checked


# ---- exactness ---------------------------------------------------------------------------

def check_hom_left_exact(M: GammaModule, conflation, limit: int = DEFAULT_HOM_LIMIT) -> Report:
    """0 -> Hom(M,A) -> Hom(M,B) -> Hom(M,C) is exact at Hom(M,A) and Hom(M,B)."""
    i, p = conflation.inflation, conflation.deflation
    A, B, C = i.source, i.target, p.target
    slots = M.slots
    report = Report("Hom(M,-) left exact")
    hA = enumerate_morphisms(M, A, slots, limit)
    hB = enumerate_morphisms(M, B, slots, limit)
    hC_zero = tuple([C.carrier.zero] * M.size)
    pushed = {}
    for f in hA:
        img = compose(i, f).map
        if img in pushed:
            report.record("injective at Hom(M,A)", {"f": f.map, "g": pushed[img]})
            break
        pushed[img] = f.map
    report.record("injective at Hom(M,A)", None)
    kernel = {g.map for g in hB if compose(p, g).map == hC_zero}
    image = set(pushed)
    diff = sorted(kernel ^ image)
    report.record("kernel = image at Hom(M,B)", {"morphism": list(diff[0]),
                                                 "in_kernel": diff[0] in kernel} if diff else None)
    report.info["sizes"] = [len(hA), len(hB), len(enumerate_morphisms(M, C, slots, limit))]
    return report


def check_tensor_right_exact(N: GammaModule, conflation, j: int | None = None,
                             k: int | None = None, limit: int = DEFAULT_TENSOR_LIMIT) -> Report:
    """A(x)N -> B(x)N -> C(x)N -> 0 is exact at C(x)N and at B(x)N.

    Exactness at B(x)N means the canonical comparison from the cokernel of
    i(x)N to C(x)N is an isomorphism.
    """
    i, p = conflation.inflation, conflation.deflation
    A, B, C = i.source, i.target, p.target
    j = max(B.slots) if j is None else j
    k = min(N.slots) if k is None else k
    report = Report("-(x)N right exact")
    tens = [positional_tensor(X, N, j, k, limit) for X in (A, B, C)]
    if not all(t.complete for t in tens):
        report.unavailable("surjective at C(x)N", "tensor bound exceeded")
        report.unavailable("cokernel comparison", "tensor bound exceeded")
        return report
    TA, TB, TC = tens
    iN = tensor_map([i, None], TA, TB)
    pN = tensor_map([p, None], TB, TC)
    for name, f in (("i(x)N", iN), ("p(x)N", pN)):
        hit = morphism_witness(f)
        report.record(f"{name} morphism", None if hit is None else {hit[0]: hit[1]})
    report.record("composite zero", None if compose(pN, iN).is_zero() else {"map": compose(pN, iN).map})
    report.record("surjective at C(x)N", None if pN.is_surjective() else
                  {"missed": sorted(set(range(TC.module.size)) - set(pN.map))})
    cok = cokernel(iN)
    comparison = [None] * cok.module.size
    bad = None
    for y in range(TB.module.size):
        c = cok.projection.map[y]
        if comparison[c] is None:
            comparison[c] = pN.map[y]
        elif comparison[c] != pN.map[y]:
            bad = {"class": c}
            break
    if bad is None:
        phi = ModuleMorphism(cok.module, TC.module, tuple(comparison), iN.slots)
        if not is_morphism(phi):
            bad = {"comparison": "not a morphism"}
        elif not (phi.is_injective() and phi.is_surjective()):
            bad = {"comparison": list(phi.map)}
    report.record("cokernel comparison", bad)
    report.info["sizes"] = [TA.module.size, TB.module.size, TC.module.size]
    return report

"""n-ary Gamma-semirings: axiom checks, realizations, homomorphisms, ideals, spectra."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import bracketing
from .errors import LimitExceeded, Obstruction, StructureError
from .monoid import (FiniteCommMonoid, boolean_monoid, congruence_closure,
                     quotient_monoid, trivial_monoid, trunc_tropical_monoid, z2_monoid)
from .reports import Report

TABLE_CAP = 2 ** 24
DEFAULT_SCAN_BUDGET = 2 ** 27
DEFAULT_IDEAL_LIMIT = 16


class GammaSemiring:
    """Carriers T and Gamma with an n-ary operation mu: T^n x Gamma^(n-1) -> T.

    ``mu`` is either a numpy table with axes (x_1..x_n, g_1..g_{n-1}) or a
    callable ``mu(xs, gs) -> int``; callables are tabulated on construction
    as long as the domain stays under TABLE_CAP entries.
    """

    def __init__(self, T: FiniteCommMonoid, Gamma: FiniteCommMonoid, arity: int, mu,
                 provenance: str = "table", name: str | None = None):
        if arity < 2:
            raise StructureError(f"arity must be >= 2, got {arity}")
        self.T = T
        self.Gamma = Gamma
        self.n = arity
        self.provenance = provenance
        self.name = name
        shape = (T.size,) * arity + (Gamma.size,) * (arity - 1)
        if callable(mu) and not isinstance(mu, np.ndarray):
            entries = int(np.prod(shape, dtype=object))
            if entries > TABLE_CAP:
                raise LimitExceeded(f"mu domain has {entries} entries (cap {TABLE_CAP})",
                                    entries, TABLE_CAP)
            table = np.empty(shape, dtype=np.int32)
            for idx in itertools.product(*(range(s) for s in shape)):
                table[idx] = mu(idx[:arity], idx[arity:])
        else:
            try:
                table = np.asarray(mu, dtype=np.int32)
            except (TypeError, ValueError):
                raise StructureError("mu table is not rectangular") from None
            if table.shape != shape:
                if table.size == int(np.prod(shape)):
                    table = table.reshape(shape)
                else:
                    raise StructureError(
                        f"mu table has {table.size} entries, expected {int(np.prod(shape))} "
                        f"for shape {shape}")
        if table.size and (table.min() < 0 or table.max() >= T.size):
            bad = np.argwhere((table < 0) | (table >= T.size))[0]
            raise StructureError(f"mu entry at {tuple(int(i) for i in bad)} out of range")
        table = np.ascontiguousarray(table, dtype=np.int32)
        table.setflags(write=False)
        self.mu = table

    def __repr__(self):
        return (f"GammaSemiring(|T|={self.T.size}, |Gamma|={self.Gamma.size}, n={self.n}, "
                f"provenance={self.provenance!r})")

    def __call__(self, xs: Sequence[int], gs: Sequence[int]) -> int:
        return int(self.mu[tuple(xs) + tuple(gs)])

    def with_entry(self, xs, gs, value) -> "GammaSemiring":
        """Copy with one table cell overwritten (used for mutation tests)."""
        table = self.mu.copy()
        table[tuple(xs) + tuple(gs)] = value
        return GammaSemiring(self.T, self.Gamma, self.n, table, "table", self.name)

    def split_index(self, index):
        index = [int(i) for i in index]
        return index[:self.n], index[self.n:]


# ---- generic exhaustive law checks (shared with module code) ----------------

def additivity_witness(table, axis, dom_add, cod_add, sink=None):
    """First (a, b, rest) where table is not additive along ``axis``.

    ``rest`` is the index of the remaining axes in their original order with
    ``axis`` removed. Sink cells (undefined values) are ignored.
    """
    moved = np.moveaxis(table, axis, 0)
    dom_add = np.asarray(dom_add)
    cod_add = np.asarray(cod_add)
    lhs = moved[dom_add]
    rhs = cod_add[moved[:, None], moved[None, :]]
    if sink is not None:
        dom_undefined = (dom_add == sink)
        mask = (lhs != rhs) & (lhs != sink) & (rhs != sink)
        mask &= ~dom_undefined.reshape(dom_undefined.shape + (1,) * (moved.ndim - 1))
        hits = np.argwhere(mask)
    else:
        hits = np.argwhere(lhs != rhs)
    if len(hits) == 0:
        return None
    a, b, *rest = (int(i) for i in hits[0])
    return a, b, rest


def absorption_witness(table, axis, zero_in, zero_out, sink=None):
    sliced = np.take(table, zero_in, axis=axis)
    mask = sliced != zero_out
    if sink is not None:
        mask &= sliced != sink
    hits = np.argwhere(mask)
    if len(hits) == 0:
        return None
    return [int(i) for i in hits[0]]


def _with_star(rest, pos, value="*"):
    rest = list(rest)
    rest.insert(pos, value)
    return rest


def check_tree_family(evaluator_factory, groups, total, budget, chunk_leaves):
    """Compare every tree in each group against the group's first tree.

    Returns (witness, skipped) where witness is a dict or None. Chunks over
    the leading leaves when ``total`` is large so memory stays bounded.
    """
    if total > budget:
        return None, True
    for key, trees in groups:
        if len(trees) < 2:
            continue
        for pinned in itertools.product(*(range(s) for s in chunk_leaves)):
            ev = evaluator_factory(dict(enumerate(pinned)))
            base = ev.evaluate(trees[0])
            for other in trees[1:]:
                hit = bracketing.first_mismatch(base, ev.evaluate(other), ev_sink(ev))
                if hit is not None:
                    hit = list(hit)
                    for i, v in enumerate(pinned):
                        hit[i] = v
                    return {"group": key, "reference": trees[0], "other": other,
                            "index": hit}, False
    return None, False


def ev_sink(ev):
    return getattr(ev, "sink", None)


def _chunk_sizes(leaf_sizes, total, target=2 ** 22):
    chunk = []
    while total > target and len(chunk) < len(leaf_sizes) - 1:
        total //= leaf_sizes[len(chunk)]
        chunk.append(leaf_sizes[len(chunk)])
    return chunk


def validate_gamma_semiring(S: GammaSemiring, scan_budget: int = DEFAULT_SCAN_BUDGET) -> Report:
    """Exhaustive A1-A3 verdicts plus an informational A4 witness search."""
    report = Report(f"semiring {S.name or ''}".strip())
    n, T, G, mu = S.n, S.T, S.Gamma, S.mu

    for i in range(n):
        hit = additivity_witness(mu, i, T.add, T.add)
        if hit is not None:
            a, b, rest = hit
            args, params = rest[:n - 1], rest[n - 1:]
            report.record("A1", {"slot": i + 1, "a": a, "a_prime": b,
                                 "args": _with_star(args, i), "params": params})
            break
    else:
        report.record("A1", None)

    for i in range(n):
        hit = absorption_witness(mu, i, T.zero, T.zero)
        if hit is not None:
            args, params = hit[:n - 1], hit[n - 1:]
            report.record("A2", {"slot": i + 1, "args": _with_star(args, i, T.zero),
                                 "params": params})
            break
    else:
        report.record("A2", None)

    length = 2 * n - 1
    sizes = [T.size] * length
    total = T.size ** length * G.size ** (length - 1)
    trees = bracketing.two_node_trees(n)
    chunk = _chunk_sizes(sizes, total)

    def factory(fixed):
        return bracketing.WordEvaluator(mu, n, length, sizes, G.size, fixed=fixed)

    witness, skipped = check_tree_family(factory, [("A3", trees)], total, scan_budget, chunk)
    if skipped:
        report.unavailable("A3", f"scan of {total} assignments exceeds budget {scan_budget}")
    elif witness is None:
        report.record("A3", None)
    else:
        idx = witness["index"]
        p = trees.index(witness["other"]) + 1
        report.record("A3", {"positions": [1, p], "word": idx[:length],
                             "params": idx[length:]})
    report.info["A3_convention"] = "inner operation at outer position p, parameters read left to right"

    report.info["A4"] = symmetry_witness(S)
    return report


def symmetry_witness(S: GammaSemiring):
    """A tuple and transposition that change the output, or 'fully symmetric'."""
    n, mu = S.n, S.mu
    for i, j in itertools.combinations(range(n), 2):
        swapped = np.swapaxes(mu, i, j)
        hits = np.argwhere(mu != swapped)
        if len(hits):
            xs, gs = S.split_index(hits[0])
            ys = list(xs)
            ys[i], ys[j] = ys[j], ys[i]
            return {"args": xs, "params": gs, "swap": [i + 1, j + 1],
                    "value": S(xs, gs), "swapped_value": S(ys, gs)}
    return "fully symmetric"


# ---- named scalar bases and realizations ------------------------------------

@dataclass(frozen=True)
class ScalarBase:
    name: str
    monoid: FiniteCommMonoid
    mul: Callable[[int, int], int]
    one: int

    @property
    def size(self):
        return self.monoid.size

    def plus(self, a, b):
        return int(self.monoid.add[a, b])


def scalar_base(name: str) -> ScalarBase:
    """boolean, z2, or trunc-tropical(k) (also written trunc-tropical-k)."""
    key = name.strip().lower()
    if key == "boolean":
        return ScalarBase("boolean", boolean_monoid(), lambda a, b: a & b, 1)
    if key == "z2":
        return ScalarBase("z2", z2_monoid(), lambda a, b: a & b, 1)
    if key.startswith("trunc-tropical"):
        digits = key[len("trunc-tropical"):].strip("()-")
        try:
            k = int(digits)
        except ValueError:
            raise StructureError(f"bad tropical bound in {name!r}") from None
        inf = k + 1

        def mul(a, b):
            if a == inf or b == inf:
                return inf
            return a + b if a + b <= k else inf

        return ScalarBase(f"trunc-tropical({k})", trunc_tropical_monoid(k), mul, 0)
    raise StructureError(f"unknown scalar base {name!r}")


def _matrix_ops(base: ScalarBase, m: int):
    size = base.size
    count = size ** (m * m)

    def decode(i):
        digits = []
        for _ in range(m * m):
            digits.append(i % size)
            i //= size
        return tuple(tuple(digits[r * m:(r + 1) * m]) for r in range(m))

    def encode(mat):
        i = 0
        for entry in reversed([e for row in mat for e in row]):
            i = i * size + entry
        return i

    def matmul(A, B):
        out = []
        for r in range(m):
            row = []
            for c in range(m):
                acc = base.monoid.zero
                for k in range(m):
                    acc = base.plus(acc, base.mul(A[r][k], B[k][c]))
                row.append(acc)
            out.append(tuple(row))
        return tuple(out)

    def scale(g, A):
        return tuple(tuple(base.mul(g, e) for e in row) for row in A)

    mats = [decode(i) for i in range(count)]
    add = [[encode(tuple(tuple(base.plus(a, b) for a, b in zip(ra, rb))
                         for ra, rb in zip(A, B))) for B in mats] for A in mats]
    zero = encode(tuple((base.monoid.zero,) * m for _ in range(m)))
    return mats, encode, matmul, scale, add, zero


def build_matrix_realization(base: str, m: int, n: int, limit: int = DEFAULT_IDEAL_LIMIT,
                             order: str = "written") -> GammaSemiring:
    """m x m matrices over a named scalar base; Gamma = the scalars.

    ``order="written"`` evaluates g1 A1 A2 g2 A3 ... g_{n-1} A_n;
    ``order="interleaved"`` evaluates A1 g1 A2 g2 ... g_{n-1} A_n.
    Scalars act entrywise.
    """
    sb = scalar_base(base)
    size = sb.size ** (m * m)
    if size > limit:
        raise LimitExceeded(f"|T| = {size} exceeds carrier limit {limit}", size, limit)
    if order not in ("written", "interleaved"):
        raise StructureError(f"unknown order {order!r}")
    mats, encode, matmul, scale, add, zero = _matrix_ops(sb, m)
    T = FiniteCommMonoid(add, zero, [_fmt_matrix(A, sb) for A in mats])
    prod_cache = {}

    def mul(A, B):
        key = (A, B)
        if key not in prod_cache:
            prod_cache[key] = matmul(A, B)
        return prod_cache[key]

    def mu(xs, gs):
        As = [mats[x] for x in xs]
        if order == "written":
            acc = scale(gs[0], mul(As[0], As[1]))
            for i in range(2, n):
                acc = mul(scale(gs[i - 1], acc), As[i])
        else:
            acc = As[0]
            for i in range(1, n):
                acc = mul(scale(gs[i - 1], acc), As[i])
        return encode(acc)

    name = f"matrix({sb.name}, m={m}, n={n})"
    return GammaSemiring(T, sb.monoid, n, mu, "matrix", name)


def _fmt_matrix(A, sb):
    lab = sb.monoid.label
    if len(A) == 1:
        return lab(A[0][0])
    return "[" + ";".join(" ".join(lab(e) for e in row) for row in A) + "]"


def additive_endomaps(V: FiniteCommMonoid) -> list[tuple[int, ...]]:
    """All monoid endomorphisms of V, in lexicographic order of value tuples."""
    maps = []
    for f in itertools.product(range(V.size), repeat=V.size):
        if f[V.zero] != V.zero:
            continue
        if all(f[V.add[a, b]] == V.add[f[a], f[b]]
               for a in range(V.size) for b in range(a, V.size)):
            maps.append(f)
    return maps


def build_endomorphism_realization(V: FiniteCommMonoid, n: int,
                                   gamma_maps: Sequence[Sequence[int]],
                                   limit: int = DEFAULT_IDEAL_LIMIT) -> GammaSemiring:
    """T = End(V), Gamma = additive closure of ``gamma_maps``, mu = f1.g1.f2...g_{n-1}.f_n."""
    if V.size ** V.size > 2 ** 20:
        raise LimitExceeded(f"|V|^|V| = {V.size ** V.size} maps to enumerate",
                            V.size ** V.size, 2 ** 20)
    for g in gamma_maps:
        g = tuple(int(v) for v in g)
        if len(g) != V.size:
            raise StructureError(f"gamma map {g} has wrong length")
        if g[V.zero] != V.zero:
            raise StructureError(f"gamma map {g} is not additive: sends zero to {g[V.zero]}",
                                 {"map": g, "a": V.zero})
        for a, b in itertools.product(range(V.size), repeat=2):
            if g[V.add[a, b]] != V.add[g[a], g[b]]:
                raise StructureError(f"gamma map {g} is not additive at ({a}, {b})",
                                     {"map": g, "a": a, "b": b})
    ends = additive_endomaps(V)
    if len(ends) > limit:
        raise LimitExceeded(f"|End(V)| = {len(ends)} exceeds carrier limit {limit}",
                            len(ends), limit)
    index = {f: i for i, f in enumerate(ends)}

    def pointwise(f, g):
        return tuple(int(V.add[a, b]) for a, b in zip(f, g))

    T = FiniteCommMonoid([[index[pointwise(f, g)] for g in ends] for f in ends],
                         index[tuple([V.zero] * V.size)], ["".join(map(str, f)) for f in ends])
    zero_map = tuple([V.zero] * V.size)
    closure = [zero_map]
    frontier = [tuple(int(v) for v in g) for g in gamma_maps]
    while frontier:
        g = frontier.pop(0)
        if g in closure:
            continue
        closure.append(g)
        frontier.extend(pointwise(g, h) for h in list(closure))
    closure.sort()
    gindex = {g: i for i, g in enumerate(closure)}
    Gamma = FiniteCommMonoid([[gindex[pointwise(f, g)] for g in closure] for f in closure],
                             gindex[zero_map], ["".join(map(str, g)) for g in closure])

    def compose(f, g):
        return tuple(f[g[v]] for v in range(V.size))

    def mu(xs, gs):
        acc = ends[xs[-1]]
        for i in range(n - 2, -1, -1):
            acc = compose(ends[xs[i]], compose(closure[gs[i]], acc))
        return index[acc]

    return GammaSemiring(T, Gamma, n, mu, "endo", f"End(V), n={n}")


def scalar_product_semiring(base: str = "boolean", n: int = 3,
                            gamma_unit_only: bool = False) -> GammaSemiring:
    """T = Gamma = base scalars and mu = product of every argument and parameter.

    With ``gamma_unit_only`` the parameter monoid is the one-element monoid
    whose single element acts as the multiplicative unit.
    """
    sb = scalar_base(base)
    Gamma = trivial_monoid() if gamma_unit_only else sb.monoid

    def mu(xs, gs):
        acc = sb.one
        for x in xs:
            acc = sb.mul(acc, x)
        if not gamma_unit_only:
            for g in gs:
                acc = sb.mul(acc, g)
        return acc

    name = f"{sb.name}-product(n={n}{', Gamma={1}' if gamma_unit_only else ''})"
    return GammaSemiring(sb.monoid, Gamma, n, mu, "table", name)


def b3(gamma_unit_only: bool = False) -> GammaSemiring:
    """Boolean AND of three arguments and two parameters."""
    S = scalar_product_semiring("boolean", 3, gamma_unit_only)
    S.name = "B3" if not gamma_unit_only else "B3[Gamma={1}]"
    return S


def z2_realization(n: int = 3) -> GammaSemiring:
    S = build_matrix_realization("z2", 1, n)
    S.name = f"Z2(n={n})"
    return S


def m2b() -> GammaSemiring:
    S = build_matrix_realization("boolean", 2, 3)
    S.name = "M2B"
    return S


# ---- homomorphisms ------------------------------------------------------------

@dataclass
class SemiringHom:
    source: GammaSemiring
    target: GammaSemiring
    f_T: tuple[int, ...]
    f_Gamma: tuple[int, ...]


def _monoid_hom_witness(f, src: FiniteCommMonoid, dst: FiniteCommMonoid):
    f = np.asarray(f)
    if f[src.zero] != dst.zero:
        return {"zero": src.zero, "image": int(f[src.zero])}
    lhs = f[src.add]
    rhs = dst.add[f[:, None], f[None, :]]
    hits = np.argwhere(lhs != rhs)
    if len(hits):
        a, b = (int(i) for i in hits[0])
        return {"a": a, "b": b}
    return None


def validate_homomorphism(h: SemiringHom) -> Report:
    S, S2 = h.source, h.target
    if S.n != S2.n:
        raise StructureError(f"arity mismatch: {S.n} vs {S2.n}")
    fT = np.asarray(h.f_T, dtype=np.intp)
    fG = np.asarray(h.f_Gamma, dtype=np.intp)
    if fT.shape != (S.T.size,) or fG.shape != (S.Gamma.size,):
        raise StructureError("map tables do not match carrier sizes")
    if fT.min() < 0 or fT.max() >= S2.T.size or fG.min() < 0 or fG.max() >= S2.Gamma.size:
        raise StructureError("map value out of range")
    report = Report("semiring homomorphism")
    report.record("f_T additive", _monoid_hom_witness(fT, S.T, S2.T))
    report.record("f_Gamma additive", _monoid_hom_witness(fG, S.Gamma, S2.Gamma))
    lhs = fT[S.mu]
    rhs = S2.mu[np.ix_(*([fT] * S.n + [fG] * (S.n - 1)))]
    hits = np.argwhere(lhs != rhs)
    if len(hits):
        xs, gs = S.split_index(hits[0])
        report.record("intertwines mu", {"args": xs, "params": gs})
    else:
        report.record("intertwines mu", None)
    return report


# ---- ideals -----------------------------------------------------------------

@dataclass(frozen=True)
class GammaIdeal:
    members: frozenset
    parent: GammaSemiring

    def __contains__(self, x):
        return x in self.members

    @property
    def mask(self) -> int:
        return sum(1 << x for x in self.members)

    def __repr__(self):
        return f"GammaIdeal({sorted(self.members)})"


def _absorb_images(S: GammaSemiring) -> list[int]:
    """Bitmask of every value reachable by inserting a into some slot."""
    out = []
    for a in range(S.T.size):
        bits = 0
        for i in range(S.n):
            for v in np.unique(np.take(S.mu, a, axis=i)):
                bits |= 1 << int(v)
        out.append(bits)
    return out


def is_gamma_ideal(S: GammaSemiring, members) -> Report:
    members = sorted(set(int(x) for x in members))
    report = Report("gamma ideal")
    inside = np.zeros(S.T.size, dtype=bool)
    inside[members] = True
    report.record("contains zero", None if inside[S.T.zero] else {"zero": S.T.zero})
    add_hit = None
    for a in members:
        for b in members:
            if not inside[S.T.add[a, b]]:
                add_hit = {"a": a, "b": b, "sum": int(S.T.add[a, b])}
                break
        if add_hit:
            break
    report.record("add-closed", add_hit)
    hit = None
    for i in range(S.n):
        moved = np.moveaxis(S.mu, i, 0)[members]
        bad = np.argwhere(~inside[moved])
        if len(bad):
            k, *rest = (int(v) for v in bad[0])
            args, params = rest[:S.n - 1], rest[S.n - 1:]
            hit = {"slot": i + 1, "args": _with_star(args, i, members[k]), "params": params}
            break
    report.record("absorbing", hit)
    return report


def enumerate_ideals(S: GammaSemiring, limit: int = DEFAULT_IDEAL_LIMIT) -> list[GammaIdeal]:
    """All Gamma-ideals in ascending bitmask order."""
    size = S.T.size
    if size > limit:
        raise LimitExceeded(f"|T| = {size} exceeds ideal-enumeration limit {limit}", size, limit)
    reach = _absorb_images(S)
    add = S.T.add.tolist()
    zero_bit = 1 << S.T.zero
    ideals = []
    for mask in range(1 << size):
        if not mask & zero_bit:
            continue
        members = [x for x in range(size) if mask >> x & 1]
        if any(reach[a] & ~mask for a in members):
            continue
        if any(not mask >> add[a][b] & 1 for a in members for b in members):
            continue
        ideals.append(GammaIdeal(frozenset(members), S))
    return ideals


def is_prime(S: GammaSemiring, ideal: GammaIdeal) -> dict | None:
    """None when prime; otherwise a witness tuple (or 'improper')."""
    if len(ideal.members) == S.T.size:
        return {"reason": "improper"}
    inside = np.zeros(S.T.size, dtype=bool)
    inside[sorted(ideal.members)] = True
    in_p = inside[S.mu]
    none_inside = np.ones(S.mu.shape, dtype=bool)
    for i in range(S.n):
        shape = [1] * S.mu.ndim
        shape[i] = S.T.size
        none_inside &= ~inside.reshape(shape)
    hits = np.argwhere(in_p & none_inside)
    if len(hits):
        xs, gs = S.split_index(hits[0])
        return {"args": xs, "params": gs, "value": S(xs, gs)}
    return None


def prime_spectrum(S: GammaSemiring, limit: int = DEFAULT_IDEAL_LIMIT) -> list[GammaIdeal]:
    return [I for I in enumerate_ideals(S, limit) if is_prime(S, I) is None]


def quotient_semiring(S: GammaSemiring, ideal: GammaIdeal):
    """T/I with the induced operation, plus the projection homomorphism.

    The additive quotient identifies I with zero; the induced mu is checked
    for representative independence and an Obstruction is raised otherwise.
    """
    report = is_gamma_ideal(S, ideal.members)
    if not report.passed:
        raise StructureError(f"not a Gamma-ideal: {report.first_witness()}")
    cong = congruence_closure(S.T, [(x, S.T.zero) for x in sorted(ideal.members)])
    Tq, proj = quotient_monoid(S.T, cong)
    proj_arr = np.asarray(proj, dtype=np.intp)
    induced = proj_arr[S.mu]
    reps = np.asarray(cong.representatives(), dtype=np.intp)
    # every representative choice must agree: compare each slot's value on a
    # and on the class representative of a
    rep_of = reps[proj_arr]
    for i in range(S.n):
        moved = np.moveaxis(induced, i, 0)
        diff = np.argwhere(moved != moved[rep_of])
        if len(diff):
            a, *rest = (int(v) for v in diff[0])
            args, params = rest[:S.n - 1], rest[S.n - 1:]
            raise Obstruction("induced mu is not well defined on T/I",
                              {"slot": i + 1, "a": a, "representative": int(rep_of[a]),
                               "args": _with_star(args, i), "params": params})
    table = induced[np.ix_(*([reps] * S.n + [np.arange(S.Gamma.size)] * (S.n - 1)))]
    Q = GammaSemiring(Tq, S.Gamma, S.n, table, "table",
                      f"{S.name}/I" if S.name else None)
    hom = SemiringHom(S, Q, tuple(proj), tuple(range(S.Gamma.size)))
    return Q, hom

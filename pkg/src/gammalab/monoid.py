"""Finite commutative monoids, congruences and bounded congruence closure.

Elements are dense indices ``0..size-1``. The zero is an explicit field and
need not be index 0.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import Obstruction, StructureError
from .reports import Report

UNDEFINED = -1


def _as_table(add) -> np.ndarray:
    try:
        table = np.asarray(add, dtype=np.int64)
    except (TypeError, ValueError) as exc:
        raise StructureError(f"addition table is not rectangular: {exc}") from None
    return table


def _check_structure(table: np.ndarray, zero: int, allow_undefined=False) -> None:
    if table.ndim != 2 or table.shape[0] != table.shape[1]:
        raise StructureError(f"addition table must be square, got shape {table.shape}")
    size = table.shape[0]
    if size == 0:
        raise StructureError("carrier must be non-empty")
    low = UNDEFINED if allow_undefined else 0
    if table.size and (table.min() < low or table.max() >= size):
        bad = np.argwhere((table < low) | (table >= size))[0]
        raise StructureError(
            f"addition entry at {tuple(int(i) for i in bad)} out of range 0..{size - 1}")
    if not 0 <= zero < size:
        raise StructureError(f"zero index {zero} out of range 0..{size - 1}")


def validate_comm_monoid(add, zero: int) -> Report:
    """Check commutativity, associativity and neutrality of a raw table.

    Structural problems (non-square, out-of-range) raise StructureError;
    law failures are reported with the smallest witness per law.
    """
    table = _as_table(add)
    _check_structure(table, zero)
    report = Report("commutative monoid")
    size = table.shape[0]

    bad = np.argwhere(table != table.T)
    report.record("commutative", {"a": bad[0][0], "b": bad[0][1]} if len(bad) else None)

    # (a+b)+c vs a+(b+c) over all triples at once
    left = table[table[:, :, None], np.arange(size)[None, None, :]]
    right = table[np.arange(size)[:, None, None], table[None, :, :]]
    bad = np.argwhere(left != right)
    report.record("associative",
                  {"a": bad[0][0], "b": bad[0][1], "c": bad[0][2]} if len(bad) else None)

    bad = np.flatnonzero(table[:, zero] != np.arange(size))
    report.record("neutral", {"a": bad[0]} if len(bad) else None)
    return report


class FiniteCommMonoid:
    """A finite commutative monoid given by its full addition table."""

    def __init__(self, add, zero: int = 0, labels: Sequence[str] | None = None,
                 check: bool = True):
        table = _as_table(add)
        _check_structure(table, zero)
        if check:
            report = validate_comm_monoid(table, zero)
            if not report.passed:
                law, witness = report.first_witness()
                raise StructureError(f"not a commutative monoid: {law} fails at {witness}")
        table.setflags(write=False)
        self.add = table
        self.zero = int(zero)
        self.size = table.shape[0]
        if labels is not None and len(labels) != self.size:
            raise StructureError(f"{len(labels)} labels for {self.size} elements")
        self.labels = tuple(str(l) for l in labels) if labels is not None else None
        self._generators = None

    def __repr__(self):
        return f"FiniteCommMonoid(size={self.size}, zero={self.zero})"

    def __eq__(self, other):
        return (isinstance(other, FiniteCommMonoid) and self.zero == other.zero
                and np.array_equal(self.add, other.add))

    def __hash__(self):
        return hash((self.zero, self.add.tobytes()))

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else str(i)

    def plus(self, a: int, b: int) -> int:
        return int(self.add[a, b])

    def sum(self, items: Iterable[int]) -> int:
        total = self.zero
        for x in items:
            total = int(self.add[total, x])
        return total

    def multiple(self, k: int, a: int) -> int:
        total = self.zero
        for _ in range(k):
            total = int(self.add[total, a])
        return total

    @property
    def is_idempotent(self) -> bool:
        return bool(np.all(self.add[np.arange(self.size), np.arange(self.size)]
                           == np.arange(self.size)))

    def generators(self) -> list[int]:
        """A small additive generating set, chosen greedily in index order."""
        if self._generators is None:
            gens: list[int] = []
            reached = {self.zero}
            for x in range(self.size):
                if x in reached:
                    continue
                gens.append(x)
                frontier = list(reached)
                while frontier:
                    nxt = []
                    for y in frontier:
                        for g in gens:
                            z = int(self.add[y, g])
                            if z not in reached:
                                reached.add(z)
                                nxt.append(z)
                    frontier = nxt
            self._generators = gens
        return list(self._generators)

    def cycle(self, a: int) -> tuple[int, int]:
        """(index, period) of the cyclic submonoid generated by ``a``.

        ``k*a`` for ``k >= index`` repeats with the given period.
        """
        seen = {}
        x, k = self.zero, 0
        while x not in seen:
            seen[x] = k
            x = int(self.add[x, a])
            k += 1
        return seen[x], k - seen[x]


class PartialMonoid:
    """A commutative monoid fragment whose addition may be undefined (-1).

    Produced by bounded constructions; undefined cells mean the sum would
    leave the bounded universe.
    """

    def __init__(self, add, zero: int, labels=None):
        table = _as_table(add)
        _check_structure(table, zero, allow_undefined=True)
        table.setflags(write=False)
        self.add = table
        self.zero = int(zero)
        self.size = table.shape[0]
        self.labels = tuple(labels) if labels is not None else None

    @property
    def complete(self) -> bool:
        return bool(np.all(self.add >= 0))

    def generators(self) -> list[int]:
        return list(range(self.size))

    def label(self, i):
        return str(self.labels[i]) if self.labels else str(i)


@dataclass(frozen=True)
class Congruence:
    """A partition of a carrier, stored as element -> class index.

    Classes are numbered by their smallest member, ascending.
    """

    classes: tuple[int, ...]

    @staticmethod
    def from_labels(labels: Sequence[int]) -> "Congruence":
        renum: dict[int, int] = {}
        out = []
        for lab in labels:
            if lab not in renum:
                renum[lab] = len(renum)
            out.append(renum[lab])
        return Congruence(tuple(out))

    @staticmethod
    def identity(size: int) -> "Congruence":
        return Congruence(tuple(range(size)))

    @staticmethod
    def total(size: int) -> "Congruence":
        return Congruence((0,) * size)

    @property
    def size(self) -> int:
        return len(self.classes)

    @property
    def num_classes(self) -> int:
        return max(self.classes) + 1 if self.classes else 0

    def same(self, a: int, b: int) -> bool:
        return self.classes[a] == self.classes[b]

    def blocks(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.num_classes)]
        for x, c in enumerate(self.classes):
            out[c].append(x)
        return out

    def representatives(self) -> list[int]:
        return [b[0] for b in self.blocks()]

    def refines(self, other: "Congruence") -> bool:
        """True when every class of self lies inside a class of other."""
        seen: dict[int, int] = {}
        for mine, theirs in zip(self.classes, other.classes):
            if seen.setdefault(mine, theirs) != theirs:
                return False
        return True

    def compatibility_witness(self, add) -> dict | None:
        """First (a, a', b) with a~a' but a+b !~ a'+b, or None."""
        table = np.asarray(add)
        cls = np.asarray(self.classes)
        for block in self.blocks():
            if len(block) < 2:
                continue
            a = block[0]
            for a2 in block[1:]:
                for b in range(len(cls)):
                    x, y = table[a, b], table[a2, b]
                    if x < 0 or y < 0:
                        continue
                    if cls[x] != cls[y]:
                        return {"a": a, "a_prime": a2, "b": b}
        return None


def congruence_closure(base, pairs: Iterable[tuple[int, int]],
                       generators: Sequence[int] | None = None,
                       unary: Sequence[Sequence[int]] = ()) -> Congruence:
    """Smallest addition-compatible equivalence containing ``pairs``.

    Union-find with a worklist: every merge of (a, b) schedules the
    translated pairs (a+g, b+g) for each additive generator g. Roots are
    always the smaller index so class numbering is reproducible.
    Undefined sums (partial carriers) are skipped. Each map in ``unary``
    (element -> element, -1 when undefined) is also respected.
    """
    size = base.size
    table = base.add.tolist()
    for a, b in pairs:
        if not (0 <= a < size and 0 <= b < size):
            raise StructureError(f"pair {(a, b)} out of range 0..{size - 1}")
    gens = list(generators) if generators is not None else base.generators()
    parent = list(range(size))
    unary_ops = [list(op) for op in unary]

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    work = deque((int(a), int(b)) for a, b in pairs)
    partial = any(v < 0 for row in table for v in row) or any(
        v < 0 for op in unary_ops for v in op)
    while True:
        while work:
            a, b = work.popleft()
            ra, rb = find(a), find(b)
            if ra == rb:
                continue
            if rb < ra:
                ra, rb = rb, ra
            parent[rb] = ra
            row_a, row_b = table[a], table[b]
            for g in gens:
                x, y = row_a[g], row_b[g]
                if x >= 0 and y >= 0:
                    work.append((x, y))
            for op in unary_ops:
                x, y = op[a], op[b]
                if x >= 0 and y >= 0:
                    work.append((x, y))
        if not partial:
            break
        # With undefined sums a merge may have been reached through a member whose
        # translate is undefined, so the pairwise propagation above can miss
        # a ~ b => a+g ~ b+g. Sweep every class until nothing changes.
        ops = [[row[g] for row in table] for g in gens] + unary_ops
        for op in ops:
            first = {}
            for x in range(size):
                y = op[x]
                if y < 0:
                    continue
                r = find(x)
                if r in first:
                    if find(first[r]) != find(y):
                        work.append((first[r], y))
                else:
                    first[r] = y
        if not work:
            break
    return Congruence.from_labels([find(x) for x in range(size)])


def quotient_monoid(base: FiniteCommMonoid, cong: Congruence):
    """Quotient monoid and the projection (list: element -> class)."""
    if cong.size != base.size:
        raise StructureError(f"congruence over {cong.size} elements, monoid has {base.size}")
    witness = cong.compatibility_witness(base.add)
    if witness is not None:
        raise Obstruction("partition is not compatible with addition", witness)
    reps = cong.representatives()
    cls = cong.classes
    table = [[cls[base.add[r, s]] for s in reps] for r in reps]
    labels = None
    if base.labels:
        labels = ["[" + base.label(r) + "]" for r in reps]
    result = FiniteCommMonoid(table, cls[base.zero], labels)
    return result, list(cls)


@dataclass
class PresentedQuotient:
    base: object
    relations: list[tuple[int, int]]
    result: object
    projection: list[int]
    status: str = "complete"
    congruence: Congruence | None = field(default=None, repr=False)


def present_quotient(base, relations, generators=None) -> PresentedQuotient:
    """Quotient of a (possibly partial) carrier by the congruence generated by relations."""
    cong = congruence_closure(base, relations, generators)
    if isinstance(base, FiniteCommMonoid):
        result, proj = quotient_monoid(base, cong)
        status = "complete"
    else:
        reps = cong.representatives()
        cls = cong.classes
        table = [[cls[base.add[r, s]] if base.add[r, s] >= 0 else UNDEFINED for s in reps]
                 for r in reps]
        result = PartialMonoid(table, cls[base.zero])
        proj = list(cls)
        status = "complete" if result.complete else "bound-exceeded"
    return PresentedQuotient(base, list(relations), result, proj, status, cong)


@dataclass
class TermUniverse:
    """Formal sums of at most ``bound`` primitive terms.

    ``elements[i]`` is a sorted tuple of generator indices (a multiset, or
    a set when idempotent). ``monoid.add`` holds -1 where a sum would exceed
    the bound.
    """

    generators: list
    bound: int
    idempotent: bool
    elements: list[tuple[int, ...]]
    monoid: PartialMonoid
    status: str

    def index(self, term: tuple[int, ...]) -> int:
        return self._index[term]

    def __post_init__(self):
        self._index = {t: i for i, t in enumerate(self.elements)}

    def singleton(self, g: int) -> int:
        return self._index[(g,)]

    def format(self, i: int) -> str:
        term = self.elements[i]
        if not term:
            return "0"
        return "+".join(str(self.generators[g]) for g in term)


def bounded_term_universe(generators: Sequence, depth_bound: int,
                          idempotent: bool = False) -> TermUniverse:
    """All formal sums of up to ``depth_bound`` generators.

    Sums that would need more than ``depth_bound`` terms are undefined in
    the resulting partial monoid, and the status becomes ``bound-exceeded``.
    """
    if depth_bound < 1:
        raise StructureError("depth_bound must be >= 1")
    k = len(generators)
    elements: list[tuple[int, ...]] = []
    for size in range(depth_bound + 1):
        if idempotent:
            elements.extend(itertools.combinations(range(k), size))
        else:
            elements.extend(itertools.combinations_with_replacement(range(k), size))
    index = {t: i for i, t in enumerate(elements)}
    n = len(elements)
    table = np.full((n, n), UNDEFINED, dtype=np.int64)
    exceeded = False
    for i, s in enumerate(elements):
        for j, t in enumerate(elements):
            if idempotent:
                merged = tuple(sorted(set(s) | set(t)))
            else:
                merged = tuple(sorted(s + t))
            target = index.get(merged)
            if target is None:
                exceeded = True
            else:
                table[i, j] = target
    monoid = PartialMonoid(table, index[()])
    return TermUniverse(list(generators), depth_bound, idempotent, elements, monoid,
                        "bound-exceeded" if exceeded else "complete")


# ---- standard carriers -------------------------------------------------------

def boolean_monoid() -> FiniteCommMonoid:
    return FiniteCommMonoid([[0, 1], [1, 1]], 0, ["0", "1"])


def z2_monoid() -> FiniteCommMonoid:
    return FiniteCommMonoid([[0, 1], [1, 0]], 0, ["0", "1"])


def trivial_monoid() -> FiniteCommMonoid:
    return FiniteCommMonoid([[0]], 0, ["0"])


def chain_monoid(k: int) -> FiniteCommMonoid:
    """{0 < 1 < ... < k} under max."""
    return FiniteCommMonoid([[max(a, b) for b in range(k + 1)] for a in range(k + 1)], 0)


def cyclic_group_monoid(k: int) -> FiniteCommMonoid:
    return FiniteCommMonoid([[(a + b) % k for b in range(k)] for a in range(k)], 0)


def trunc_tropical_monoid(k: int) -> FiniteCommMonoid:
    """{0, ..., k, inf} under min; index k+1 is inf, the additive zero."""
    size = k + 2
    table = [[min(a, b) for b in range(size)] for a in range(size)]
    return FiniteCommMonoid(table, k + 1, [str(i) for i in range(k + 1)] + ["inf"])


def product_monoid(left: FiniteCommMonoid, right: FiniteCommMonoid) -> FiniteCommMonoid:
    """Direct product; pair (a, b) has index a * |right| + b."""
    nl, nr = left.size, right.size
    table = np.empty((nl * nr, nl * nr), dtype=np.int64)
    for a, b, c, d in itertools.product(range(nl), range(nr), range(nl), range(nr)):
        table[a * nr + b, c * nr + d] = left.add[a, c] * nr + right.add[b, d]
    labels = [f"({left.label(a)},{right.label(b)})" for a in range(nl) for b in range(nr)]
    return FiniteCommMonoid(table, left.zero * nr + right.zero, labels, check=False)

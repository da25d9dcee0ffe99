"""Slow, independent re-implementations used as test oracles.

Nothing here imports the engine's checking code: loops are plain Python
over nested lists, so a bug in the vectorized paths cannot hide in both.
"""
from __future__ import annotations

import itertools


def _nested(table):
    return table.tolist() if hasattr(table, "tolist") else table


def _lookup(mu, xs, gs):
    v = mu
    for i in tuple(xs) + tuple(gs):
        v = v[i]
    return v


# ---- semiring axioms ------------------------------------------------------------------

def semiring_axioms(S) -> dict:
    """A1-A3 verdicts (True = holds) by direct loops."""
    n, T, G = S.n, S.T.size, S.Gamma.size
    mu = _nested(S.mu)
    add = _nested(S.T.add)
    zero = S.T.zero
    out = {"A1": True, "A2": True, "A3": True}
    for slot in range(n):
        for rest in itertools.product(range(T), repeat=n - 1):
            for gs in itertools.product(range(G), repeat=n - 1):
                def at(v):
                    xs = list(rest)
                    xs.insert(slot, v)
                    return _lookup(mu, xs, gs)
                if at(zero) != zero:
                    out["A2"] = False
                for a in range(T):
                    for b in range(T):
                        if at(add[a][b]) != add[at(a)][at(b)]:
                            out["A1"] = False
    out["A3"] = _a3_n3(mu, T, G) if n == 3 else _a3_generic(mu, n, T, G)
    return out


def _a3_n3(mu, T, G) -> bool:
    """mu(mu(a,b,c),d,e) = mu(a,mu(b,c,d),e) = mu(a,b,mu(c,d,e)), gaps g1..g4."""
    # col[x][y][g][h] = tuple over z of mu(x, y, z; g, h)
    col = [[[[tuple(mu[x][y][z][g][h] for z in range(T)) for h in range(G)]
             for g in range(G)] for y in range(T)] for x in range(T)]
    for a, b, c in itertools.product(range(T), repeat=3):
        for g1, g2, g3, g4 in itertools.product(range(G), repeat=4):
            u = mu[a][b][c][g1][g2]
            for d in range(T):
                left = col[u][d][g3][g4]
                v = mu[b][c][d][g2][g3]
                middle = col[a][v][g1][g4]
                if left != middle:
                    return False
                inner = col[c][d][g3][g4]
                outer = mu[a][b]
                right = tuple(outer[w][g1][g2] for w in inner)
                if left != right:
                    return False
    return True


def _a3_generic(mu, n, T, G) -> bool:
    length = 2 * n - 1
    for word in itertools.product(range(T), repeat=length):
        for gaps in itertools.product(range(G), repeat=length - 1):
            values = set()
            for p in range(n):
                inner = _lookup(mu, word[p:p + n], gaps[p:p + n - 1])
                outer = word[:p] + (inner,) + word[p + n:]
                params = gaps[:p] + gaps[p + n - 1:]
                values.add(_lookup(mu, outer, params))
            if len(values) > 1:
                return False
    return True


# ---- module axioms -----------------------------------------------------------------------

def module_axioms(M, slot: int) -> dict:
    """M1, M3, M4 and the two-node bracketing part of M2, by direct loops."""
    S = M.parent
    n, T, G = S.n, S.T.size, S.Gamma.size
    mu = _nested(S.mu)
    act = _nested(M.actions[slot])
    madd, tadd, gadd = _nested(M.carrier.add), _nested(S.T.add), _nested(S.Gamma.add)
    j = slot - 1
    out = {"M1": True, "M2": True, "M3": True, "M4": True}

    def apply(xs, m, gs):
        args = list(xs)
        args.insert(j, m)
        return _lookup(act, args, gs)

    for xs in itertools.product(range(T), repeat=n - 1):
        for gs in itertools.product(range(G), repeat=n - 1):
            if apply(xs, M.carrier.zero, gs) != M.carrier.zero:
                out["M3"] = False
            if S.T.zero in xs:
                for m in range(M.size):
                    if apply(xs, m, gs) != M.carrier.zero:
                        out["M3"] = False
            for m, m2 in itertools.product(range(M.size), repeat=2):
                if apply(xs, madd[m][m2], gs) != madd[apply(xs, m, gs)][apply(xs, m2, gs)]:
                    out["M1"] = False
            for m in range(M.size):
                for i in range(n - 1):
                    for a, b in itertools.product(range(T), repeat=2):
                        xa, xb, xs_ = list(xs), list(xs), list(xs)
                        xa[i], xb[i], xs_[i] = a, b, tadd[a][b]
                        if apply(xs_, m, gs) != madd[apply(xa, m, gs)][apply(xb, m, gs)]:
                            out["M1"] = False
                    for a, b in itertools.product(range(G), repeat=2):
                        ga, gb, g_ = list(gs), list(gs), list(gs)
                        ga[i], gb[i], g_[i] = a, b, gadd[a][b]
                        if apply(xs, m, g_) != madd[apply(xs, m, ga)][apply(xs, m, gb)]:
                            out["M4"] = False
    out["M2"] = _m2_two_node(M, slot, mu, apply)
    return out


def _m2_two_node(M, slot, mu, apply) -> bool:
    """Words of length 2n-1 with the module element inside a nested action."""
    S = M.parent
    n, T, G = S.n, S.T.size, S.Gamma.size
    j = slot - 1
    length = 2 * n - 1
    for pos in range(length):
        for word in itertools.product(range(T), repeat=length - 1):
            for gaps in itertools.product(range(G), repeat=length - 1):
                for m in range(M.size):
                    full = list(word)
                    full.insert(pos, "m")
                    values = set()
                    for p in range(n):
                        group = full[p:p + n]
                        outer = full[:p] + ["*"] + full[p + n:]
                        inner_params = gaps[p:p + n - 1]
                        outer_params = gaps[:p] + gaps[p + n - 1:]
                        if "m" in group:
                            if group.index("m") != j:
                                continue
                            xs = [x for x in group if x != "m"]
                            inner = apply(xs, m, inner_params)
                            if outer.index("*") != j:
                                continue
                            ys = [x for x in outer if x != "*"]
                            values.add(apply(ys, inner, outer_params))
                        else:
                            inner = _lookup(mu, group, inner_params)
                            if outer.index("m") != j:
                                continue
                            ys = [inner if x == "*" else x for x in outer if x != "m"]
                            values.add(apply(ys, m, outer_params))
                    if len(values) > 1:
                        return False
    return True


def _parse_tree(text):
    """'[t,[t,m,t],t]' -> nested lists of 't'/'m'."""
    stack = [[]]
    for ch in text:
        if ch == "[":
            stack.append([])
        elif ch == "]":
            node = stack.pop()
            stack[-1].append(node)
        elif ch in "tm":
            stack[-1].append(ch)
    return stack[0][0]


def evaluate_bracketing(M, slot: int, tree: str, leaves, params):
    """Value of one bracketed word: leaves left to right, one parameter per gap.

    The module leaf takes its value from ``leaves`` like any other leaf.
    """
    mu = _nested(M.parent.mu)
    act = _nested(M.actions[slot])
    gaps = list(params)

    def ev(node, start):
        if isinstance(node, str):
            return leaves[start], start + 1, node == "m"
        values, gs, has_m, pos = [], [], False, start
        for k, child in enumerate(node):
            v, pos, m = ev(child, pos)
            values.append(v)
            has_m = has_m or m
            if k < len(node) - 1:
                gs.append(gaps[pos - 1])
        return _lookup(act if has_m else mu, values, gs), pos, has_m

    return ev(_parse_tree(tree), 0)[0]


def replay_m2(M, slot: int, witness: dict) -> bool:
    """True when the two bracketings in an M2 witness really disagree."""
    a = evaluate_bracketing(M, slot, witness["reference"], witness["leaves"], witness["params"])
    b = evaluate_bracketing(M, slot, witness["other"], witness["leaves"], witness["params"])
    return a != b


# ---- congruences ---------------------------------------------------------------------------

def set_partitions(items):
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for k in range(len(part)):
            yield part[:k] + [[first] + part[k]] + part[k + 1:]


def _labels(blocks, size):
    lab = [0] * size
    for k, block in enumerate(blocks):
        for x in block:
            lab[x] = k
    return lab


def _canonical(lab):
    seen = {}
    return [seen.setdefault(v, len(seen)) for v in lab]


def smallest_congruence_by_partitions(add, pairs, unary=()):
    """Finest partition that contains ``pairs`` and is compatible with ``add``
    (and every unary map). Exhaustive over all set partitions."""
    add = _nested(add)
    size = len(add)
    best = None
    for blocks in set_partitions(range(size)):
        lab = _labels(blocks, size)
        if any(lab[a] != lab[b] for a, b in pairs):
            continue
        ok = all(lab[add[a][c]] == lab[add[b][c]]
                 for a in range(size) for b in range(size) if lab[a] == lab[b]
                 for c in range(size))
        ok = ok and all(lab[op[a]] == lab[op[b]] for op in unary
                        for a in range(size) for b in range(size) if lab[a] == lab[b])
        if not ok:
            continue
        if best is None or len(blocks) > best[0]:
            best = (len(blocks), lab)
    return _canonical(best[1])


def smallest_congruence_by_matrix(size, add, pairs):
    """Fixpoint of the boolean relation matrix: reflexive, symmetric,
    transitive and translation-closed. ``add`` is a callable or table."""
    plus = add if callable(add) else (lambda a, b, t=_nested(add): t[a][b])
    rel = [[a == b for b in range(size)] for a in range(size)]
    for a, b in pairs:
        rel[a][b] = rel[b][a] = True
    changed = True
    while changed:
        changed = False
        for a in range(size):
            for b in range(size):
                if not rel[a][b]:
                    continue
                for c in range(size):
                    x, y = plus(a, c), plus(b, c)
                    if not rel[x][y]:
                        rel[x][y] = rel[y][x] = True
                        changed = True
                    if rel[b][c] and not rel[a][c]:
                        rel[a][c] = rel[c][a] = True
                        changed = True
    lab = [min(b for b in range(size) if rel[a][b]) for a in range(size)]
    return _canonical(lab)


# ---- tensor -----------------------------------------------------------------------------

def tensor_partition(M, N, j: int, k: int):
    """Tensor term universe and its smallest congruence, built from scratch.

    Returns (pairs, elements, labels): elements are count tuples indexed like
    ``pairs``; labels give the class of each element.
    """
    S = M.parent
    n = S.n
    mz, nz = M.carrier.zero, N.carrier.zero
    pairs = [(m, y) for m in range(M.size) if m != mz for y in range(N.size) if y != nz]
    madd, nadd = _nested(M.carrier.add), _nested(N.carrier.add)
    bounds = []
    for m, _ in pairs:
        seq, x = [], mz
        while x not in seq:
            seq.append(x)
            x = madd[x][m]
        start = seq.index(x)
        bounds.append((start, len(seq) - start))

    def wrap(p, c):
        start, per = bounds[p]
        while c >= start + per:
            c -= per
        return c

    elements = list(itertools.product(*(range(s + p) for s, p in bounds)))
    index = {e: i for i, e in enumerate(elements)}
    pos = {pr: i for i, pr in enumerate(pairs)}

    def plus(a, b):
        ea, eb = elements[a], elements[b]
        return index[tuple(wrap(p, ea[p] + eb[p]) for p in range(len(pairs)))]

    def unit(m, y):
        e = [0] * len(pairs)
        if m != mz and y != nz:
            e[pos[(m, y)]] = 1
        return index[tuple(e)]

    rels = []
    for m, m2 in itertools.product(range(M.size), repeat=2):
        for y in range(N.size):
            rels.append((unit(madd[m][m2], y), plus(unit(m, y), unit(m2, y))))
    for y, y2 in itertools.product(range(N.size), repeat=2):
        for m in range(M.size):
            rels.append((unit(m, nadd[y][y2]), plus(unit(m, y), unit(m, y2))))
    A, B = _nested(M.actions[j]), _nested(N.actions[k])
    for xs in itertools.product(range(S.T.size), repeat=n - 1):
        for gs in itertools.product(range(S.Gamma.size), repeat=n - 1):
            for m in range(M.size):
                for y in range(N.size):
                    am = list(xs)
                    am.insert(j - 1, m)
                    bn = list(xs)
                    bn.insert(k - 1, y)
                    rels.append((unit(_lookup(A, am, gs), y), unit(m, _lookup(B, bn, gs))))
    size = len(elements)
    if size <= 9:
        table = [[plus(a, b) for b in range(size)] for a in range(size)]
        labels = smallest_congruence_by_partitions(table, rels)
    else:
        labels = smallest_congruence_by_matrix(size, plus, rels)
    return pairs, elements, labels


# ---- primes ------------------------------------------------------------------------------

def prime_ideals(S) -> list[frozenset]:
    """Every proper prime Gamma-ideal, by scanning all subsets of T."""
    n, T, G = S.n, S.T.size, S.Gamma.size
    mu = _nested(S.mu)
    add = _nested(S.T.add)
    out = []
    tuples = [(xs, gs) for xs in itertools.product(range(T), repeat=n)
              for gs in itertools.product(range(G), repeat=n - 1)]
    for r in range(T):
        for members in itertools.combinations(range(T), r):
            P = set(members)
            if S.T.zero not in P:
                continue
            if any(add[a][b] not in P for a in P for b in P):
                continue
            if any(_lookup(mu, xs, gs) not in P for xs, gs in tuples if P & set(xs)):
                continue
            if all(P & set(xs) for xs, gs in tuples if _lookup(mu, xs, gs) in P):
                out.append(frozenset(P))
    return out


# ---- morphisms ---------------------------------------------------------------------------

def morphisms(M, N, slots=None) -> list[tuple]:
    """Every map M -> N that is additive, fixes zero and intertwines ``slots``."""
    slots = M.slots if slots is None else slots
    S = M.parent
    n = S.n
    madd, nadd = _nested(M.carrier.add), _nested(N.carrier.add)
    acts = {s: (_nested(M.actions[s]), _nested(N.actions[s])) for s in slots}
    contexts = [(xs, gs) for xs in itertools.product(range(S.T.size), repeat=n - 1)
                for gs in itertools.product(range(S.Gamma.size), repeat=n - 1)]
    out = []
    for f in itertools.product(range(N.size), repeat=M.size):
        if f[M.carrier.zero] != N.carrier.zero:
            continue
        if any(f[madd[a][b]] != nadd[f[a]][f[b]] for a in range(M.size) for b in range(M.size)):
            continue
        ok = True
        for s, (am, an) in acts.items():
            for xs, gs in contexts:
                for m in range(M.size):
                    args = list(xs)
                    args.insert(s - 1, m)
                    lhs = f[_lookup(am, args, gs)]
                    args[s - 1] = f[m]
                    if lhs != _lookup(an, args, gs):
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                break
        if ok:
            out.append(f)
    return out

"""Bracketings of flattened n-ary words and their vectorized evaluation.

A word is a sequence of leaves ``x_0 .. x_{L-1}`` with one parameter in each
of the ``L-1`` gaps. A bracketing is a tree of n-ary nodes over the leaves;
the parameters of a node are the gaps between its consecutive children, read
left to right. Two bracketings of the same word are compared by evaluating
both over every assignment of leaves and gap parameters.

Trees are nested tuples. A leaf is the string ``"t"`` (semiring element) or
``"m"`` (module element). A node is a tuple of ``n`` subtrees.
"""
from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

T_LEAF = "t"
M_LEAF = "m"


@lru_cache(maxsize=None)
def shapes(n: int, nodes: int) -> tuple:
    """All n-ary tree shapes with exactly ``nodes`` internal nodes (leaves 't')."""
    if nodes == 0:
        return (T_LEAF,)
    out = []
    # distribute nodes-1 internal nodes among n children
    for split in _compositions(nodes - 1, n):
        for kids in itertools.product(*(shapes(n, k) for k in split)):
            out.append(tuple(kids))
    return tuple(out)


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def leaf_count(tree) -> int:
    if isinstance(tree, str):
        return 1
    return sum(leaf_count(c) for c in tree)


def _place_module(tree, pos, counter):
    if isinstance(tree, str):
        here = counter[0]
        counter[0] += 1
        return M_LEAF if here == pos else T_LEAF
    return tuple(_place_module(c, pos, counter) for c in tree)


def contains_module(tree) -> bool:
    if isinstance(tree, str):
        return tree == M_LEAF
    return any(contains_module(c) for c in tree)


def admissible(tree, slot: int) -> bool:
    """Every node whose subtree holds the module leaf carries it at ``slot`` (1-based)."""
    if isinstance(tree, str):
        return True
    holders = [i for i, c in enumerate(tree) if contains_module(c)]
    if holders and holders != [slot - 1]:
        return False
    return all(admissible(c, slot) for c in tree)


def module_bracketings(n: int, slot: int, nodes: int) -> dict[int, list]:
    """Admissible module bracketings with ``nodes`` nodes, grouped by module leaf position."""
    groups: dict[int, list] = {}
    for shape in shapes(n, nodes):
        count = leaf_count(shape)
        for pos in range(count):
            tree = _place_module(shape, pos, [0])
            if admissible(tree, slot):
                groups.setdefault(pos, []).append(tree)
    return groups


def two_node_trees(n: int) -> list:
    """Inner operation at outer position p = 1..n, in that order."""
    return [tuple(tuple([T_LEAF] * n) if i == p else T_LEAF for i in range(n))
            for p in range(n)]


class WordEvaluator:
    """Evaluates bracketings of a fixed-length word with numpy broadcasting.

    ``mu`` is the semiring table (n T-axes then n-1 parameter axes).
    ``action`` (optional) is a module action table with the module element on
    axis ``slot-1``. ``leaf_sizes`` gives the carrier size for each leaf.
    Leaves listed in ``fixed`` are pinned to a single value (chunking).
    """

    def __init__(self, mu, n, length, leaf_sizes, param_size, action=None, slot=None,
                 fixed=None):
        self.mu = mu
        self.action = action
        self.slot = slot
        self.n = n
        self.length = length
        axes = length + (length - 1)
        fixed = fixed or {}
        self.leaves = []
        for i in range(length):
            if i in fixed:
                self.leaves.append(np.intp(fixed[i]))
            else:
                shape = [1] * axes
                shape[i] = leaf_sizes[i]
                self.leaves.append(np.arange(leaf_sizes[i]).reshape(shape))
        self.params = []
        for g in range(length - 1):
            shape = [1] * axes
            shape[length + g] = param_size
            self.params.append(np.arange(param_size).reshape(shape))

    def evaluate(self, tree):
        value, _ = self._eval(tree, 0)
        return value

    def _eval(self, tree, start):
        if isinstance(tree, str):
            return self.leaves[start], start + 1
        values = []
        gaps = []
        pos = start
        for k, child in enumerate(tree):
            v, pos = self._eval(child, pos)
            values.append(v)
            if k < len(tree) - 1:
                gaps.append(self.params[pos - 1])
        table = self.action if contains_module(tree) else self.mu
        return table[tuple(values) + tuple(gaps)], pos


def first_mismatch(left, right, sink=None):
    """Index of the first position where the arrays differ (ignoring sink cells)."""
    left, right = np.broadcast_arrays(left, right)
    diff = left != right
    if sink is not None:
        diff &= (left != sink) & (right != sink)
    hits = np.argwhere(diff)
    if len(hits) == 0:
        return None
    return tuple(int(i) for i in hits[0])

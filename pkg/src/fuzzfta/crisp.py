"""Crisp unreliability by cut-set summation, bottom-up propagation and BDDs."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np

from fuzzfta import _backend
from fuzzfta.errors import BoundExceededError, DagRejectedError, MethodError
from fuzzfta.tree import MAX_ENUMERATED_EVENTS, FaultTree, NodeType

DEFAULT_NODE_CAP = 1_000_000

METHODS = ("cutset", "bu", "bdd")


def node_cap_from_env():
    raw = os.environ.get("FUZZFTA_NODE_CAP")
    if raw is None or raw.strip() == "":
        return DEFAULT_NODE_CAP
    try:
        cap = int(float(raw))
    except ValueError:
        raise ValueError(f"FUZZFTA_NODE_CAP must be an integer, got {raw!r}") from None
    if cap < 2:
        raise ValueError("FUZZFTA_NODE_CAP must be at least 2")
    return cap


def crisp_probabilities(tree: FaultTree, attribution: Mapping) -> dict[str, float]:
    """Float probability per basic event; rejects fuzzy or missing entries."""
    out = {}
    for be in tree.basic_events:
        if be not in attribution:
            raise MethodError(f"basic event {be!r} has no probability")
        p = attribution[be]
        if isinstance(p, bool) or not isinstance(p, (int, float, np.floating, np.integer)):
            raise MethodError(
                f"basic event {be!r} carries a {type(p).__name__}; crisp analysis needs numbers"
            )
        p = float(p)
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"probability of {be!r} is {p!r}, outside [0, 1]")
        out[be] = p
    return out


def unreliability_cutset(tree: FaultTree, attribution: Mapping, max_events=MAX_ENUMERATED_EVENTS) -> float:
    probs = crisp_probabilities(tree, attribution)
    table = tree.structure_table(max_events)
    return _backend.kernels.cutset_probability(table, [probs[b] for b in tree.basic_events])


def require_tree(tree: FaultTree, what="bottom-up propagation"):
    if not tree.is_tree_structured():
        shared = [v for v, ps in tree.parents.items() if len(ps) > 1]
        raise DagRejectedError(
            f"{what} needs a tree-structured fault tree, but {', '.join(sorted(shared))} "
            "have several parents, so sibling subtrees are not independent; "
            "use the BDD method for crisp analysis"
        )


def unreliability_bottom_up(tree: FaultTree, attribution: Mapping) -> float:
    require_tree(tree)
    probs = crisp_probabilities(tree, attribution)
    value = {}
    for v in tree.postorder:
        kind = tree.type_of(v)
        if kind is NodeType.BE:
            value[v] = probs[v]
        elif kind is NodeType.AND:
            value[v] = math.prod(value[w] for w in tree.children[v])
        else:
            value[v] = 1.0 - math.prod(1.0 - value[w] for w in tree.children[v])
    return value[tree.root]


@dataclass(frozen=True)
class Bdd:
    """Reduced ordered BDD.

    Node ids 0 and 1 are the terminals; decision node ``i >= 2`` is
    ``nodes[i - 2] = (level, low, high)`` with ``order[level]`` its variable.
    Children always have smaller ids than their parents.
    """

    order: tuple
    nodes: tuple
    root: int

    def __len__(self):
        return len(self.nodes)

    def node(self, i):
        if i < 2:
            raise IndexError("terminals have no decision")
        level, low, high = self.nodes[i - 2]
        return self.order[level], low, high

    def reachable(self):
        seen, stack = set(), [self.root]
        while stack:
            i = stack.pop()
            if i < 2 or i in seen:
                continue
            seen.add(i)
            _, low, high = self.nodes[i - 2]
            stack += [low, high]
        return sorted(seen)

    def evaluate(self, event: Mapping[str, bool]) -> bool:
        i = self.root
        while i >= 2:
            level, low, high = self.nodes[i - 2]
            i = high if event[self.order[level]] else low
        return bool(i)

    def describe(self):
        """Nested tuples ``(var, low, high)`` with terminals as 0/1; handy for tests."""
        def walk(i):
            if i < 2:
                return i
            level, low, high = self.nodes[i - 2]
            return (self.order[level], walk(low), walk(high))

        return walk(self.root)


class _Builder:
    """Unique table plus memoised apply; owned by one build call."""

    def __init__(self, n_levels, node_cap):
        self.nodes = []
        self.unique = {}
        self.memo = {}
        self.n_levels = n_levels
        self.node_cap = node_cap

    def level(self, i):
        return self.nodes[i - 2][0] if i >= 2 else self.n_levels

    def mk(self, level, low, high):
        if low == high:
            return low
        key = (level, low, high)
        found = self.unique.get(key)
        if found is not None:
            return found
        if len(self.nodes) + 2 >= self.node_cap:
            raise BoundExceededError(
                f"BDD exceeds the node cap of {self.node_cap}; raise FUZZFTA_NODE_CAP "
                "or try another variable order"
            )
        self.nodes.append(key)
        self.unique[key] = len(self.nodes) + 1
        return len(self.nodes) + 1

    def apply(self, op, u, v):
        if op == "and":
            if u == 0 or v == 0:
                return 0
            if u == 1:
                return v
            if v == 1 or u == v:
                return u
        else:
            if u == 1 or v == 1:
                return 1
            if u == 0:
                return v
            if v == 0 or u == v:
                return u
        key = (op, u, v) if u < v else (op, v, u)
        found = self.memo.get(key)
        if found is not None:
            return found
        lu, lv = self.level(u), self.level(v)
        top = min(lu, lv)
        u0, u1 = (self.nodes[u - 2][1], self.nodes[u - 2][2]) if lu == top else (u, u)
        v0, v1 = (self.nodes[v - 2][1], self.nodes[v - 2][2]) if lv == top else (v, v)
        result = self.mk(top, self.apply(op, u0, v0), self.apply(op, u1, v1))
        self.memo[key] = result
        return result


def _resolve_order(tree, order):
    if order is None:
        return tuple(tree.basic_events)
    order = tuple(order)
    if sorted(order) != sorted(tree.basic_events) or len(set(order)) != len(order):
        raise ValueError(
            "variable order must list every basic event exactly once; "
            f"expected {sorted(tree.basic_events)}, got {list(order)}"
        )
    return order


def build_bdd(tree: FaultTree, order: Optional[Sequence[str]] = None, node_cap: Optional[int] = None) -> Bdd:
    order = _resolve_order(tree, order)
    builder = _Builder(len(order), node_cap_from_env() if node_cap is None else node_cap)
    level_of = {v: i for i, v in enumerate(order)}
    built = {}
    for v in tree.postorder:
        kind = tree.type_of(v)
        if kind is NodeType.BE:
            built[v] = builder.mk(level_of[v], 0, 1)
            continue
        op = "and" if kind is NodeType.AND else "or"
        acc = None
        for w in tree.children[v]:
            acc = built[w] if acc is None else builder.apply(op, acc, built[w])
        built[v] = acc
    return _compact(order, builder.nodes, built[tree.root])


def _compact(order, nodes, root):
    """Drop nodes left unreachable by intermediate gate results; ids stay children-first."""
    bdd = Bdd(order, tuple(nodes), root)
    keep = bdd.reachable()
    remap = {0: 0, 1: 1}
    fresh = []
    for i in keep:
        level, low, high = nodes[i - 2]
        fresh.append((level, remap[low], remap[high]))
        remap[i] = len(fresh) + 1
    return Bdd(order, tuple(fresh), remap[root])


def unreliability_bdd(bdd: Bdd, attribution: Mapping) -> float:
    missing = [v for v in bdd.order if v not in attribution]
    if missing:
        raise MethodError(f"no probability for BDD variables {missing}")
    value = [0.0, 1.0]
    for level, low, high in bdd.nodes:
        p = float(attribution[bdd.order[level]])
        value.append(p * value[high] + (1.0 - p) * value[low])
    return value[bdd.root]


def unreliability_bdd_batch(bdd: Bdd, columns: Mapping[str, np.ndarray]) -> np.ndarray:
    """Vectorised evaluation over many attributions at once (one array per variable)."""
    size = np.broadcast(*columns.values()).shape if columns else ()
    value = [np.zeros(size), np.ones(size)]
    for level, low, high in bdd.nodes:
        p = np.asarray(columns[bdd.order[level]], dtype=float)
        value.append(p * value[high] + (1.0 - p) * value[low])
    return value[bdd.root]


def unreliability(tree: FaultTree, attribution: Mapping, method="bdd", order=None, **options) -> float:
    if method == "cutset":
        return unreliability_cutset(tree, attribution, **options)
    if method == "bu":
        return unreliability_bottom_up(tree, attribution)
    if method == "bdd":
        probs = crisp_probabilities(tree, attribution)
        return unreliability_bdd(build_bdd(tree, order, **options), probs)
    raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")

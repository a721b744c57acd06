"""Fuzzy unreliability.

Three routes:

* :func:`fuzzy_unreliability_exact` enumerates every combination of support
  points of finite (discrete) attributions and folds with max-min.  Works on
  DAGs; used as the reference.
* :func:`fuzzy_unreliability_bu_discrete` propagates discrete fuzzy numbers
  bottom-up with extended gate formulas.  Tree-structured inputs only.
* :func:`fuzzy_unreliability_bu_alpha` is the production path: every basic
  event is cut into ``n_cuts`` intervals and gates are evaluated level-wise
  with interval arithmetic.  Tree-structured inputs only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

from fuzzfta import alpha as alpha_mod
from fuzzfta.alpha import AlphaCutSeries
from fuzzfta.crisp import build_bdd, require_tree, unreliability_bdd_batch
from fuzzfta.errors import BoundExceededError, MethodError
from fuzzfta.fuzzy import (
    MERGE_TOL,
    DiscreteFuzzy,
    FuzzyNumber,
    _merge,
    zadeh_complement,
    zadeh_extend,
    zadeh_extend_binary,
)
from fuzzfta.tree import FaultTree, NodeType

DEFAULT_MAX_COMBINATIONS = 1_000_000
DEFAULT_N_CUTS = 100


@dataclass(frozen=True)
class FuzzyResult:
    """Either an exact discrete result or an alpha-cut series, plus provenance."""

    method: str
    model: str = ""
    exact: Optional[DiscreteFuzzy] = None
    series: Optional[AlphaCutSeries] = None
    n_cuts: Optional[int] = None
    authoritative: bool = True
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if (self.exact is None) == (self.series is None):
            raise ValueError("a fuzzy result holds exactly one of `exact` or `series`")


def _discrete(tree, attribution):
    out = {}
    for be in tree.basic_events:
        if be not in attribution:
            raise MethodError(f"basic event {be!r} has no attribution")
        p = attribution[be]
        if isinstance(p, DiscreteFuzzy):
            out[be] = p
        elif isinstance(p, (int, float, np.floating)) and not isinstance(p, bool):
            out[be] = DiscreteFuzzy.singleton(float(p))
        else:
            raise MethodError(
                f"basic event {be!r} carries a {type(p).__name__}; the discrete routes need "
                "finite supports (use the alpha-cut route for tri/trap/gauss)"
            )
    return out


def fuzzy_unreliability_exact(
    tree: FaultTree,
    attribution: Mapping,
    max_combinations=DEFAULT_MAX_COMBINATIONS,
    tol=MERGE_TOL,
    chunk=1 << 16,
) -> DiscreteFuzzy:
    """Sup-min over every crisp combination of the attributions' support points.

    Each combination is scored by evaluating the unreliability function through a
    BDD, so the structure may be any valid DAG.
    """
    fuzzy = _discrete(tree, attribution)
    events = list(tree.basic_events)
    sizes = [len(fuzzy[b]) for b in events]
    total = math.prod(sizes)
    if total > max_combinations:
        raise BoundExceededError(
            f"{total} support combinations exceed the bound of {max_combinations}"
        )
    bdd = build_bdd(tree)
    values, memberships = [], []
    for start in range(0, total, chunk):
        flat = np.arange(start, min(start + chunk, total))
        picks = np.unravel_index(flat, sizes)
        columns = {b: fuzzy[b].values[i] for b, i in zip(events, picks)}
        mu = np.minimum.reduce([fuzzy[b].memberships[i] for b, i in zip(events, picks)])
        v = unreliability_bdd_batch(bdd, columns)
        v, mu = _merge(np.broadcast_to(v, mu.shape), mu, tol)
        values.append(v)
        memberships.append(mu)
    v, mu = _merge(np.concatenate(values), np.concatenate(memberships), tol)
    return DiscreteFuzzy._from_merged(v, mu)


def propagate_discrete(tree: FaultTree, attribution: Mapping, tol=MERGE_TOL) -> dict[str, DiscreteFuzzy]:
    """Discrete fuzzy value of every node, computed bottom-up."""
    require_tree(tree, "fuzzy bottom-up propagation")
    fuzzy = _discrete(tree, attribution)
    value = {}
    for v in tree.postorder:
        kind = tree.type_of(v)
        if kind is NodeType.BE:
            value[v] = fuzzy[v]
            continue
        kids = [value[w] for w in tree.children[v]]
        if kind is NodeType.OR:
            kids = [zadeh_complement(k, tol) for k in kids]
        acc = kids[0]
        for k in kids[1:]:
            acc = zadeh_extend_binary("mul", acc, k, tol)
        value[v] = zadeh_complement(acc, tol) if kind is NodeType.OR else acc
    return value


def fuzzy_unreliability_bu_discrete(tree: FaultTree, attribution: Mapping, tol=MERGE_TOL) -> DiscreteFuzzy:
    return propagate_discrete(tree, attribution, tol)[tree.root]


def _series_for(be, p, n_cuts):
    if isinstance(p, DiscreteFuzzy):
        raise MethodError(
            f"basic event {be!r} is discrete; discrete and interval-valued attributions "
            "cannot be mixed in the alpha-cut route (use the exact or discrete path)"
        )
    if isinstance(p, FuzzyNumber):
        return alpha_mod.discretize(p, n_cuts, clamp_to_unit=True)
    if isinstance(p, (int, float, np.floating)) and not isinstance(p, bool):
        return AlphaCutSeries.constant(min(max(float(p), 0.0), 1.0), n_cuts)
    raise MethodError(f"basic event {be!r} has an unsupported attribution {type(p).__name__}")


def fuzzy_unreliability_bu_alpha(
    tree: FaultTree, attribution: Mapping, n_cuts: int = DEFAULT_N_CUTS
) -> AlphaCutSeries:
    return propagate_alpha(tree, attribution, n_cuts)[tree.root]


def propagate_alpha(tree: FaultTree, attribution: Mapping, n_cuts: int = DEFAULT_N_CUTS):
    """Alpha-cut series of every node; basic events are clamped into [0, 1]."""
    require_tree(tree, "fuzzy bottom-up propagation")
    value = {}
    for v in tree.postorder:
        kind = tree.type_of(v)
        if kind is NodeType.BE:
            if v not in attribution:
                raise MethodError(f"basic event {v!r} has no attribution")
            value[v] = _series_for(v, attribution[v], n_cuts)
            continue
        kids = [value[w] for w in tree.children[v]]
        if kind is NodeType.OR:
            kids = [alpha_mod.complement(k) for k in kids]
        acc = kids[0]
        for k in kids[1:]:
            acc = alpha_mod.series_op("mul", acc, k)
        value[v] = alpha_mod.complement(acc) if kind is NodeType.OR else acc
    return value


# ----------------------------------------------------------- BDD counterexample


@dataclass(frozen=True)
class CounterexampleReport:
    naive: DiscreteFuzzy
    exact: DiscreteFuzzy
    order: tuple
    differ: bool
    authoritative: bool = False

    def lines(self):
        def fmt(x):
            return "{" + ", ".join(f"{v:.12g} ↦ {m:.12g}" for v, m in x.items()) + "}"

        return [
            f"variable order: {' < '.join(self.order)}",
            f"naive fuzzy BDD (NON-AUTHORITATIVE): {fmt(self.naive)}",
            f"exact (sup-min enumeration):         {fmt(self.exact)}",
            f"differ: {'yes' if self.differ else 'no'}",
        ]


def naive_fuzzy_bdd(tree: FaultTree, attribution: Mapping, order=None, tol=MERGE_TOL) -> DiscreteFuzzy:
    """Lift the BDD recurrence to fuzzy values.  Known to be wrong in general.

    Each decision node on ``v`` extends ``p*h + (1-p)*l`` jointly over
    ``(p_v, high, low)``, so the two occurrences of ``p_v`` inside one node are
    tied; nodes sharing a variable are still combined as if independent, which
    is where the result departs from the true fuzzy unreliability.
    """
    fuzzy = _discrete(tree, attribution)
    bdd = build_bdd(tree, order)
    value = [DiscreteFuzzy.singleton(0.0), DiscreteFuzzy.singleton(1.0)]
    for level, low, high in bdd.nodes:
        p = fuzzy[bdd.order[level]]
        value.append(
            zadeh_extend(lambda q, h, l: q * h + (1.0 - q) * l, p, value[high], value[low], tol=tol)
        )
    return value[bdd.root]


def counterexample_instance():
    """``OR(v, AND(u, w))`` with ``u, w`` at 0.5 and ``v`` either 0 or 1; order u < v < w."""
    tree = FaultTree.checked(
        {"top": "OR", "g": "AND", "u": "BE", "v": "BE", "w": "BE"},
        {"top": ["v", "g"], "g": ["u", "w"]},
        "top",
        name="bdd-counterexample",
    )
    attribution = {
        "u": DiscreteFuzzy({0.5: 1.0}),
        "v": DiscreteFuzzy({0.0: 1.0, 1.0: 1.0}),
        "w": DiscreteFuzzy({0.5: 1.0}),
    }
    return tree, attribution, ("u", "v", "w")


def fuzzy_bdd_counterexample(
    tree: Optional[FaultTree] = None,
    attribution: Optional[Mapping] = None,
    order: Optional[Sequence[str]] = None,
    tol=MERGE_TOL,
) -> CounterexampleReport:
    if tree is None:
        tree, default_attr, default_order = counterexample_instance()
        attribution = default_attr if attribution is None else attribution
        order = default_order if order is None else order
    if attribution is None:
        raise ValueError("an attribution is required with a custom tree")
    bdd_order = tuple(order) if order is not None else tuple(tree.basic_events)
    naive = naive_fuzzy_bdd(tree, attribution, bdd_order, tol)
    exact = fuzzy_unreliability_exact(tree, attribution, tol=tol)
    return CounterexampleReport(naive, exact, bdd_order, differ=not naive.isclose(exact, tol))

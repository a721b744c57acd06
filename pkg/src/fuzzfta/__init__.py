"""Crisp and fuzzy unreliability analysis of static fault trees."""

from fuzzfta._backend import BACKEND
from fuzzfta.alpha import AlphaCutSeries, complement, discretize, series_op, to_membership_samples
from fuzzfta.analysis import (
    FuzzyResult,
    fuzzy_bdd_counterexample,
    fuzzy_unreliability_bu_alpha,
    fuzzy_unreliability_bu_discrete,
    fuzzy_unreliability_exact,
)
from fuzzfta.crisp import (
    Bdd,
    build_bdd,
    unreliability,
    unreliability_bdd,
    unreliability_bottom_up,
    unreliability_cutset,
)
from fuzzfta.errors import (
    BoundExceededError,
    DagRejectedError,
    FuzzFTAError,
    MethodError,
    ParseError,
    ValidationError,
)
from fuzzfta.fuzzy import (
    DiscreteFuzzy,
    GaussianFuzzy,
    Interval,
    TrapezoidalFuzzy,
    TriangularFuzzy,
    alpha_cut,
    interval_op,
    membership,
    zadeh_extend,
    zadeh_extend_binary,
)
from fuzzfta.tree import (
    FaultTree,
    NodeType,
    cut_sets,
    is_tree_structured,
    load,
    parse,
    serialize,
    structure_function,
    validate,
)

__version__ = "0.1.0"

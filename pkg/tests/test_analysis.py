import numpy as np
import pytest

from gen import random_convex, random_discrete, random_probs, random_tree
from fuzzfta import bench
from fuzzfta.alpha import discretize
from fuzzfta.analysis import (
    counterexample_instance,
    fuzzy_bdd_counterexample,
    fuzzy_unreliability_bu_alpha,
    fuzzy_unreliability_bu_discrete,
    fuzzy_unreliability_exact,
    naive_fuzzy_bdd,
    propagate_alpha,
    propagate_discrete,
)
from fuzzfta.crisp import unreliability_bottom_up
from fuzzfta.errors import BoundExceededError, DagRejectedError, MethodError
from fuzzfta.fuzzy import DiscreteFuzzy, TriangularFuzzy
from fuzzfta.tree import FaultTree


@pytest.fixture
def roadtrip_fuzzy():
    tree, _ = bench.load_model("roadtrip")
    attr = {
        "a": DiscreteFuzzy({0.5: 0.7, 0.8: 1.0}),
        "b": DiscreteFuzzy({0.1: 1.0}),
        "c": DiscreteFuzzy({0.4: 1.0}),
    }
    return tree, attr


WANT = DiscreteFuzzy({0.23: 0.7, 0.368: 1.0})


def test_exact_enumerator_example(roadtrip_fuzzy):
    got = fuzzy_unreliability_exact(*roadtrip_fuzzy)
    assert got.isclose(WANT, tol=1e-9)
    assert got.memberships.tolist() == [0.7, 1.0]


def test_discrete_bottom_up_example(roadtrip_fuzzy):
    values = propagate_discrete(*roadtrip_fuzzy)
    assert values["car"].isclose(DiscreteFuzzy({0.46: 1.0}), tol=1e-12)
    assert values["trip"].isclose(WANT, tol=1e-9)
    assert values["trip"].memberships.tolist() == [0.7, 1.0]


def test_crisp_numbers_are_singletons(roadtrip_fuzzy):
    tree, attr = roadtrip_fuzzy
    mixed = dict(attr, b=0.1, c=0.4)
    assert fuzzy_unreliability_bu_discrete(tree, mixed).isclose(WANT, tol=1e-9)
    assert fuzzy_unreliability_exact(tree, mixed).isclose(WANT, tol=1e-9)


@pytest.mark.parametrize("seed", range(60))
def test_bottom_up_equals_exact_on_trees(seed):
    rng = np.random.default_rng(seed)
    tree = random_tree(rng, int(rng.integers(1, 6)))
    attr = {b: random_discrete(rng) for b in tree.basic_events}
    bu = fuzzy_unreliability_bu_discrete(tree, attr)
    exact = fuzzy_unreliability_exact(tree, attr)
    assert bu.isclose(exact)
    np.testing.assert_array_equal(bu.memberships, exact.memberships)


def test_exact_runs_on_dags_and_bu_rejects_them():
    dag = FaultTree.checked(
        {"top": "OR", "g1": "AND", "g2": "AND", "x": "BE", "y": "BE", "z": "BE"},
        {"top": ["g1", "g2"], "g1": ["x", "y"], "g2": ["y", "z"]},
        "top",
    )
    attr = {"x": DiscreteFuzzy({0.5: 1.0}), "y": DiscreteFuzzy({0.0: 0.5, 1.0: 1.0}), "z": 0.5}
    got = fuzzy_unreliability_exact(dag, attr)
    assert got.isclose(DiscreteFuzzy({0.0: 0.5, 0.75: 1.0}))
    with pytest.raises(DagRejectedError):
        fuzzy_unreliability_bu_discrete(dag, attr)
    with pytest.raises(DagRejectedError):
        fuzzy_unreliability_bu_alpha(dag, {"x": 0.5, "y": TriangularFuzzy(0, 0.5, 1), "z": 0.5})


def test_exact_bound():
    rng = np.random.default_rng(1)
    tree = random_tree(rng, 6)
    attr = {b: DiscreteFuzzy({0.1: 0.5, 0.2: 1.0, 0.3: 0.5}) for b in tree.basic_events}
    with pytest.raises(BoundExceededError, match="729"):
        fuzzy_unreliability_exact(tree, attr, max_combinations=700)
    assert len(fuzzy_unreliability_exact(tree, attr, max_combinations=729, chunk=50)) > 1


def test_exact_chunking_is_invisible():
    rng = np.random.default_rng(2)
    tree = random_tree(rng, 5)
    attr = {b: random_discrete(rng) for b in tree.basic_events}
    whole = fuzzy_unreliability_exact(tree, attr)
    assert fuzzy_unreliability_exact(tree, attr, chunk=3).isclose(whole, tol=0.0)


def test_discrete_routes_reject_convex(roadtrip_fuzzy):
    tree, attr = roadtrip_fuzzy
    convex = dict(attr, a=TriangularFuzzy(0.5, 0.8, 1.0))
    with pytest.raises(MethodError, match="alpha-cut"):
        fuzzy_unreliability_exact(tree, convex)
    with pytest.raises(MethodError, match="cannot be mixed"):
        fuzzy_unreliability_bu_alpha(tree, dict(convex, b=DiscreteFuzzy({0.1: 1.0})))


def test_missing_attribution(roadtrip_fuzzy):
    tree, attr = roadtrip_fuzzy
    with pytest.raises(MethodError):
        fuzzy_unreliability_bu_alpha(tree, {"a": 0.5})
    with pytest.raises(MethodError):
        fuzzy_unreliability_exact(tree, {"a": 0.5})


# ------------------------------------------------------------- alpha-cut route

def test_roadtrip_tri_scheme_alpha_one():
    tree, attr = bench.load_model("roadtrip")
    fuzzy = {b: TriangularFuzzy(0.2 * p, p, 1.8 * p) for b, p in attr.items()}
    series = fuzzy_unreliability_bu_alpha(tree, fuzzy, 100)
    assert series.n_cuts == 100
    lo, hi = series.cut(99)
    assert lo == pytest.approx(0.368, abs=1e-12) and hi == pytest.approx(0.368, abs=1e-12)
    # a's upper corner 1.44 is clamped to 1 on ingestion
    a_series = propagate_alpha(tree, fuzzy, 100)["a"]
    assert a_series.upper[0] <= 1.0


def test_crisp_inputs_give_constant_series():
    tree, attr = bench.load_model("roadtrip")
    series = fuzzy_unreliability_bu_alpha(tree, attr, 10)
    np.testing.assert_allclose(series.lower, 0.368, atol=1e-15)
    np.testing.assert_allclose(series.upper, 0.368, atol=1e-15)


def _endpoint_values(tree, attr, n_cuts):
    cuts = {b: discretize(attr[b], n_cuts, clamp_to_unit=True) for b in tree.basic_events}
    lows, highs = [], []
    for k in range(n_cuts):
        lows.append(unreliability_bottom_up(tree, {b: float(cuts[b].lower[k]) for b in cuts}))
        highs.append(unreliability_bottom_up(tree, {b: float(cuts[b].upper[k]) for b in cuts}))
    return np.array(lows), np.array(highs)


@pytest.mark.parametrize("seed", range(25))
def test_endpoints_match_crisp_bottom_up(seed):
    rng = np.random.default_rng(500 + seed)
    tree = random_tree(rng, int(rng.integers(1, 13)))
    probs = random_probs(rng, tree, 1e-4, 0.5)
    attr = {b: random_convex(rng, p) for b, p in probs.items()}
    series = fuzzy_unreliability_bu_alpha(tree, attr, 20)
    lows, highs = _endpoint_values(tree, attr, 20)
    np.testing.assert_allclose(series.lower, lows, rtol=0, atol=1e-12)
    np.testing.assert_allclose(series.upper, highs, rtol=0, atol=1e-12)
    assert series.is_nested() and series.within_unit()


# ------------------------------------------------------------- counterexample

def test_naive_bdd_counterexample():
    report = fuzzy_bdd_counterexample()
    assert report.order == ("u", "v", "w")
    assert report.naive.isclose(DiscreteFuzzy({0.25: 1.0, 0.5: 1.0, 0.75: 1.0, 1.0: 1.0}))
    assert report.exact.isclose(DiscreteFuzzy({0.25: 1.0, 1.0: 1.0}))
    assert report.differ
    assert not report.authoritative
    text = "\n".join(report.lines())
    assert "NON-AUTHORITATIVE" in text and "differ: yes" in text


def test_naive_bdd_agrees_on_singletons():
    tree, _, order = counterexample_instance()
    for q in (0.0, 0.3, 1.0):
        attr = {"u": DiscreteFuzzy({0.5: 1.0}), "v": DiscreteFuzzy({q: 1.0}), "w": DiscreteFuzzy({0.5: 1.0})}
        report = fuzzy_bdd_counterexample(tree, attr, order)
        assert not report.differ
        assert report.exact.values.tolist() == pytest.approx([q + (1 - q) * 0.25])


def test_naive_bdd_singleton_sweep():
    rng = np.random.default_rng(9)
    for _ in range(20):
        tree = random_tree(rng, int(rng.integers(1, 7)), dag=True)
        attr = {b: DiscreteFuzzy.singleton(p) for b, p in random_probs(rng, tree).items()}
        report = fuzzy_bdd_counterexample(tree, attr)
        assert not report.differ


def test_custom_tree_needs_attribution():
    tree, _, _ = counterexample_instance()
    with pytest.raises(ValueError):
        fuzzy_bdd_counterexample(tree)


def test_naive_bdd_value_shape():
    tree, attr, order = counterexample_instance()
    got = naive_fuzzy_bdd(tree, attr, order)
    assert len(got) == 4 and got.height() == 1.0

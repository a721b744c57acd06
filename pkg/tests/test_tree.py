import numpy as np
import pytest

from gen import random_convex, random_discrete, random_tree
from fuzzfta import bench
from fuzzfta.errors import BoundExceededError, ParseError, ValidationError
from fuzzfta.fuzzy import DiscreteFuzzy, GaussianFuzzy, TrapezoidalFuzzy, TriangularFuzzy
from fuzzfta.tree import (
    FaultTree,
    NodeType,
    all_events,
    cut_sets,
    event_from_bits,
    is_tree_structured,
    parse,
    serialize,
    structure_function,
    validate,
)


@pytest.fixture
def roadtrip():
    return bench.load_model("roadtrip")


def codes(tree):
    return {d.code for d in validate(tree)}


def test_roadtrip_is_valid(roadtrip):
    tree, attribution = roadtrip
    assert validate(tree) == []
    assert tree.root == "trip"
    assert tree.basic_events == ("a", "b", "c")
    assert tree.type_of("trip") is NodeType.AND
    assert tree.children["car"] == ("b", "c")
    assert attribution == {"a": 0.8, "b": 0.1, "c": 0.4}


def test_cycle_detected():
    tree = FaultTree({"r": "OR", "g": "AND", "x": "BE"}, {"r": ["g"], "g": ["x", "h"]}, "r")
    assert "undefined" in codes(tree)
    cyc = FaultTree({"r": "OR", "g": "AND", "h": "OR", "x": "BE"}, {"r": ["g"], "g": ["h", "x"], "h": ["g"]}, "r")
    assert "cycle" in codes(cyc)
    with pytest.raises(ValidationError, match="cycle"):
        cyc.check()


def test_be_with_child():
    tree = FaultTree({"r": "OR", "x": "BE", "y": "BE"}, {"r": ["x"], "x": ["y"]}, "r")
    assert "typed-leaf" in codes(tree)


def test_gate_without_children():
    tree = FaultTree({"r": "OR", "g": "AND", "x": "BE"}, {"r": ["x", "g"]}, "r")
    assert "typed-leaf" in codes(tree)


def test_multiple_roots_and_orphans():
    tree = FaultTree({"r": "OR", "x": "BE", "s": "AND", "y": "BE"}, {"r": ["x"], "s": ["y"]}, "r")
    got = codes(tree)
    assert {"multiple-roots", "orphan"} <= got
    diag = next(d for d in validate(tree) if d.code == "orphan")
    assert set(diag.nodes) == {"s", "y"}


def test_root_with_parent():
    tree = FaultTree({"r": "OR", "g": "AND", "x": "BE"}, {"r": ["g"], "g": ["x", "r"]}, "r")
    assert "root-has-parent" in codes(tree)


def test_tree_structure_detection(roadtrip):
    assert is_tree_structured(roadtrip[0])
    t = FaultTree.checked({"top": "OR", "g": "AND", "u": "BE", "v": "BE", "w": "BE"},
                          {"top": ["v", "g"], "g": ["u", "w"]}, "top")
    assert is_tree_structured(t)
    dag = FaultTree.checked({"top": "OR", "g1": "AND", "g2": "AND", "x": "BE", "y": "BE", "z": "BE"},
                            {"top": ["g1", "g2"], "g1": ["x", "y"], "g2": ["y", "z"]}, "top")
    assert not is_tree_structured(dag)


def test_single_be_tree():
    t = FaultTree.checked({"x": "BE"}, {}, "x")
    assert t.basic_events == ("x",)
    assert cut_sets(t) == {"1"}


def test_structure_function(roadtrip):
    tree = roadtrip[0]
    assert structure_function(tree, "trip", event_from_bits(tree, "101")) is True
    assert structure_function(tree, "trip", event_from_bits(tree, "011")) is False
    assert structure_function(tree, "car", event_from_bits(tree, "011")) is True
    assert structure_function(tree, "trip", event_from_bits(tree, "000")) is False
    with pytest.raises(KeyError):
        structure_function(tree, "trip", {"a": True})


def test_cut_sets(roadtrip):
    assert cut_sets(roadtrip[0]) == {"111", "110", "101"}
    t = FaultTree.checked({"r": "AND", "x": "BE", "y": "BE"}, {"r": ["x", "y"]}, "r")
    assert cut_sets(t) == {"11"}


def test_cut_set_bound():
    rng = np.random.default_rng(0)
    t = random_tree(rng, 8)
    with pytest.raises(BoundExceededError):
        cut_sets(t, max_events=7)


@pytest.mark.parametrize("seed", range(30))
def test_cut_sets_agree_with_structure_function(seed):
    rng = np.random.default_rng(seed)
    tree = random_tree(rng, int(rng.integers(1, 11)), dag=bool(seed % 2))
    cuts = cut_sets(tree)
    for event in all_events(tree):
        bits = "".join("1" if event[b] else "0" for b in tree.basic_events)
        assert (bits in cuts) == structure_function(tree, tree.root, event)


@pytest.mark.parametrize("seed", range(20))
def test_structure_function_is_monotone(seed):
    rng = np.random.default_rng(100 + seed)
    tree = random_tree(rng, int(rng.integers(2, 9)), dag=bool(seed % 2))
    for event in all_events(tree):
        if not structure_function(tree, tree.root, event):
            continue
        # switching any further BE on must keep the top event failed
        for b in tree.basic_events:
            raised = dict(event, **{b: True})
            assert structure_function(tree, tree.root, raised)


# ----------------------------------------------------------------------- parser

def test_parse_all_attribute_kinds():
    text = """
    # comment line
    toplevel top;
    top or g x1;   # trailing comment
    g and x2 x3 x4 x5;
    x1 prob=0.25;
    x2 tri=0.1,0.2,0.3;
    x3 trap=0.1,0.2,0.3,0.4;
    x4 gauss=0.5,0.1;
    x5 discrete=0.5:0.7,0.8:1;
    """
    tree, attr = parse(text, name="kinds")
    assert tree.name == "kinds"
    assert attr["x1"] == 0.25
    assert attr["x2"] == TriangularFuzzy(0.1, 0.2, 0.3)
    assert attr["x3"] == TrapezoidalFuzzy(0.1, 0.2, 0.3, 0.4)
    assert attr["x4"] == GaussianFuzzy(0.5, 0.1)
    assert attr["x5"].isclose(DiscreteFuzzy({0.5: 0.7, 0.8: 1.0}))


def test_benchmark_identifiers_with_dashes():
    tree, _ = parse("toplevel T;\nT or B2-1-1 B.x_y;\nB2-1-1 prob=0.1;\nB.x_y prob=1e-3;\n")
    assert tree.basic_events == ("B2-1-1", "B.x_y")


@pytest.mark.parametrize(
    "text, line, fragment",
    [
        ("toplevel X;\n", 1, "undefined node 'X'"),
        ("toplevel T;\nT or a b;\na prob=0.1;\n", 2, "undefined node 'b'"),
        ("toplevel T;\nT or a;\na prob=0.1;\na prob=0.2;\n", 4, "duplicate definition"),
        ("toplevel T;\nT or a;\nT and a;\na prob=0.1;\n", 3, "duplicate definition"),
        ("toplevel T;\nT or a\na prob=0.1;\n", 2, "missing ';'"),
        ("toplevel T;\nT xor a;\na prob=0.1;\n", 2, "expected 'and', 'or'"),
        ("toplevel T;\nT or a;\na prob=abc;\n", 3, "expected a number"),
        ("toplevel T;\nT or a;\na prob=1.5;\n", 3, "outside [0, 1]"),
        ("toplevel T;\nT or a;\na tri=0.1,0.2;\n", 3, "3 comma-separated"),
        ("toplevel T;\nT or a;\na tri=0.3,0.2,0.1;\n", 3, "a <= b <= d"),
        ("toplevel T;\nT or a;\na weibull=1,2;\n", 3, "unknown attribute"),
        ("toplevel T;\nT or a;\na discrete=0.1-1;\n", 3, "value:membership"),
        ("toplevel T; T or a;\na prob=0.1;\n", 1, "one declaration per line"),
        ("T or a;\na prob=0.1;\n", None, "no 'toplevel'"),
    ],
)
def test_parse_errors(text, line, fragment):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert fragment in str(info.value)
    assert info.value.line == line


def test_parse_error_column():
    with pytest.raises(ParseError) as info:
        parse("toplevel T;\nT or a  zz;\na prob=0.1;\n")
    assert (info.value.line, info.value.column) == (2, 9)


def test_attribution_for_gate_is_rejected():
    with pytest.raises(ParseError, match="duplicate definition"):
        parse("toplevel T;\nT or a;\nT prob=0.3;\na prob=0.1;\n")


def test_parsed_structure_is_validated():
    with pytest.raises(ValidationError, match="orphan"):
        parse("toplevel T;\nT or a;\na prob=0.1;\nb prob=0.2;\n")


@pytest.mark.parametrize("name, n_be, n_gates", [("roadtrip", 3, 2), ("CSD", 6, 4), ("LSTF", 35, 15)])
def test_bundled_models(name, n_be, n_gates):
    tree, attr = bench.load_model(name)
    assert (len(tree.basic_events), len(tree.gates)) == (n_be, n_gates)
    assert set(tree.types.values()) == {NodeType.BE, NodeType.AND, NodeType.OR}
    assert is_tree_structured(tree)
    assert all(0 <= attr[b] <= 1 for b in tree.basic_events)


def _random_attr(rng, tree):
    out = {}
    for i, b in enumerate(tree.basic_events):
        kind = i % 3
        if kind == 0:
            out[b] = float(rng.uniform())
        elif kind == 1:
            out[b] = random_convex(rng, float(rng.uniform(0.01, 0.5)))
        else:
            out[b] = random_discrete(rng)
    return out


@pytest.mark.parametrize("seed", range(25))
def test_serialize_parse_round_trip(seed):
    rng = np.random.default_rng(seed)
    tree = random_tree(rng, int(rng.integers(1, 12)), dag=bool(seed % 3 == 0))
    attr = _random_attr(rng, tree)
    text = serialize(tree, attr)
    back, back_attr = parse(text)
    assert back == tree
    assert serialize(back, back_attr) == text
    for b in tree.basic_events:
        if isinstance(attr[b], DiscreteFuzzy):
            assert back_attr[b].isclose(attr[b], tol=0.0)
        else:
            assert back_attr[b] == attr[b]


def test_serialize_is_deterministic(roadtrip):
    assert serialize(*roadtrip) == (
        "toplevel trip;\ntrip and a car;\ncar or b c;\na prob=0.8;\nb prob=0.1;\nc prob=0.4;\n"
    )


def test_tree_is_read_only(roadtrip):
    with pytest.raises(TypeError):
        roadtrip[0].children["trip"] = ("a",)

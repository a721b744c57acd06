"""Static fault trees: model, validation, structure function, cut sets and
the line-oriented ``.ft`` text format."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from pathlib import Path
from types import MappingProxyType
from typing import Mapping, Sequence, Union

import numpy as np

from fuzzfta import _backend
from fuzzfta.errors import BoundExceededError, ParseError, ValidationError
from fuzzfta.fuzzy import (
    DiscreteFuzzy,
    FuzzyNumber,
    GaussianFuzzy,
    TrapezoidalFuzzy,
    TriangularFuzzy,
)

#: Largest number of basic events the exhaustive routines will enumerate.
MAX_ENUMERATED_EVENTS = 20

ID_PATTERN = r"[A-Za-z0-9_.\-]+"
_ID_RE = re.compile(rf"^{ID_PATTERN}$")

Probability = Union[float, FuzzyNumber, DiscreteFuzzy]
Attribution = Mapping[str, Probability]


class NodeType(str, Enum):
    BE = "BE"
    AND = "AND"
    OR = "OR"


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    nodes: tuple = ()

    def __str__(self):
        return f"[{self.code}] {self.message}"


class FaultTree:
    """Rooted DAG of AND/OR gates over basic events.

    Construction only records the structure; call :meth:`validate` (or use
    :meth:`checked`) to confirm it is a well-formed fault tree.
    """

    def __init__(
        self,
        types: Mapping[str, Union[NodeType, str]],
        children: Mapping[str, Sequence[str]],
        root: str,
        name: str = "",
    ):
        self._types = MappingProxyType({k: NodeType(v) for k, v in types.items()})
        self._children = MappingProxyType(
            {k: tuple(children.get(k, ())) for k in self._types}
            | {k: tuple(v) for k, v in children.items() if k not in self._types}
        )
        self._root = root
        self.name = name

    @classmethod
    def checked(cls, types, children, root, name=""):
        tree = cls(types, children, root, name)
        tree.check()
        return tree

    @property
    def types(self):
        return self._types

    @property
    def children(self):
        return self._children

    @property
    def root(self):
        return self._root

    @property
    def nodes(self):
        return tuple(self._types)

    def type_of(self, node) -> NodeType:
        return self._types[node]

    def __repr__(self):
        return (
            f"FaultTree(name={self.name!r}, root={self._root!r}, "
            f"{len(self.basic_events)} BEs, {len(self.gates)} gates)"
        )

    def __eq__(self, other):
        if not isinstance(other, FaultTree):
            return NotImplemented
        return (
            self._root == other._root
            and dict(self._types) == dict(other._types)
            and dict(self._children) == dict(other._children)
        )

    __hash__ = None

    @cached_property
    def discovery_order(self) -> tuple:
        """Depth-first, left-to-right pre-order from the root (each node once)."""
        seen, order, stack = set(), [], [self._root]
        while stack:
            node = stack.pop()
            if node in seen or node not in self._types:
                continue
            seen.add(node)
            order.append(node)
            stack.extend(reversed(self._children.get(node, ())))
        return tuple(order)

    @cached_property
    def basic_events(self) -> tuple:
        """BEs in discovery order; this is the default variable order."""
        return tuple(v for v in self.discovery_order if self._types[v] is NodeType.BE)

    @cached_property
    def gates(self) -> tuple:
        return tuple(v for v in self.discovery_order if self._types[v] is not NodeType.BE)

    @cached_property
    def parents(self) -> Mapping[str, tuple]:
        found = {v: [] for v in self._types}
        for parent, kids in self._children.items():
            for kid in kids:
                found.setdefault(kid, []).append(parent)
        return MappingProxyType({k: tuple(v) for k, v in found.items()})

    @cached_property
    def postorder(self) -> tuple:
        """Reachable nodes with every child before its parents; root last."""
        seen, order = set(), []

        def visit(node):
            seen.add(node)
            for kid in self._children[node]:
                if kid not in seen:
                    visit(kid)
            order.append(node)

        visit(self._root)
        return tuple(order)

    def validate(self) -> list[Diagnostic]:
        """Every violation of the fault-tree invariants, empty when valid."""
        diags = []
        types, children = self._types, self._children
        if self._root not in types:
            diags.append(Diagnostic("undefined-root", f"root {self._root!r} is not a node", (self._root,)))
        for node, kids in children.items():
            if node not in types:
                diags.append(Diagnostic("undefined", f"edges declared for unknown node {node!r}", (node,)))
            for kid in kids:
                if kid not in types:
                    diags.append(
                        Diagnostic("undefined", f"{node!r} references undefined node {kid!r}", (node, kid))
                    )
        for node, kind in types.items():
            if not _ID_RE.match(node):
                diags.append(Diagnostic("identifier", f"invalid node identifier {node!r}", (node,)))
            has_kids = bool(children.get(node))
            if kind is NodeType.BE and has_kids:
                diags.append(Diagnostic("typed-leaf", f"basic event {node!r} has children", (node,)))
            if kind is not NodeType.BE and not has_kids:
                diags.append(Diagnostic("typed-leaf", f"gate {node!r} has no children", (node,)))
        roots = [v for v in types if not self.parents.get(v)]
        if len(roots) > 1:
            diags.append(
                Diagnostic("multiple-roots", f"nodes without parents: {', '.join(roots)}", tuple(roots))
            )
        if self._root in types and self.parents.get(self._root):
            diags.append(
                Diagnostic("root-has-parent", f"root {self._root!r} has incoming edges", (self._root,))
            )
        cycle = self._find_cycle()
        if cycle:
            diags.append(Diagnostic("cycle", "cycle " + " -> ".join(cycle), tuple(cycle)))
        if self._root in types:
            reachable = set(self.discovery_order)
            orphans = [v for v in types if v not in reachable]
            if orphans:
                diags.append(
                    Diagnostic("orphan", f"unreachable from root: {', '.join(orphans)}", tuple(orphans))
                )
        return diags

    def check(self):
        diags = self.validate()
        if diags:
            raise ValidationError("; ".join(str(d) for d in diags), diags)
        return self

    def _find_cycle(self):
        white, grey, black = 0, 1, 2
        colour = {v: white for v in self._types}
        path = []

        def visit(node):
            colour[node] = grey
            path.append(node)
            for kid in self._children.get(node, ()):
                if kid not in colour:
                    continue
                if colour[kid] == grey:
                    return path[path.index(kid):] + [kid]
                if colour[kid] == white:
                    found = visit(kid)
                    if found:
                        return found
            path.pop()
            colour[node] = black
            return None

        for start in self._types:
            if colour[start] == white:
                found = visit(start)
                if found:
                    return found
        return None

    def is_tree_structured(self) -> bool:
        """True when every non-root node has exactly one parent edge."""
        return all(
            len(self.parents.get(v, ())) == 1 for v in self.discovery_order if v != self._root
        )

    @cached_property
    def _compiled(self):
        order = self.postorder
        position = {v: i for i, v in enumerate(order)}
        var_of = {b: i for i, b in enumerate(self.basic_events)}
        codes = {NodeType.BE: 0, NodeType.AND: 1, NodeType.OR: 2}
        kind = np.array([codes[self._types[v]] for v in order], dtype=np.int8)
        ptr, idx = [0], []
        for v in order:
            idx.extend(position[k] for k in self._children[v])
            ptr.append(len(idx))
        var = np.array([var_of.get(v, -1) for v in order], dtype=np.int64)
        return kind, np.array(ptr, dtype=np.int64), np.array(idx, dtype=np.int64), var

    def structure_table(self, max_events=MAX_ENUMERATED_EVENTS) -> np.ndarray:
        """Root value for every safety event, indexed by bitmask over :attr:`basic_events`."""
        n = len(self.basic_events)
        if n > max_events:
            raise BoundExceededError(
                f"{n} basic events exceed the enumeration bound of {max_events}"
            )
        kind, ptr, idx, var = self._compiled
        return _backend.kernels.structure_table(kind, ptr, idx, var, n)


def validate(tree: FaultTree) -> list[Diagnostic]:
    return tree.validate()


def is_tree_structured(tree: FaultTree) -> bool:
    return tree.is_tree_structured()


def structure_function(tree: FaultTree, node: str, event: Mapping[str, bool]) -> bool:
    missing = set(tree.basic_events) - set(event)
    if missing:
        raise KeyError(f"safety event lacks basic events {sorted(missing)}")
    memo = {}

    def value(v):
        if v not in memo:
            kind = tree.type_of(v)
            if kind is NodeType.BE:
                memo[v] = bool(event[v])
            elif kind is NodeType.AND:
                memo[v] = all(value(w) for w in tree.children[v])
            else:
                memo[v] = any(value(w) for w in tree.children[v])
        return memo[v]

    return value(node)


def event_from_bits(tree: FaultTree, bits: Union[str, Sequence[int]]) -> dict[str, bool]:
    """Safety event from a bit string like ``"101"`` in :attr:`basic_events` order."""
    if len(bits) != len(tree.basic_events):
        raise ValueError(f"expected {len(tree.basic_events)} bits, got {len(bits)}")
    return {b: str(bit) == "1" for b, bit in zip(tree.basic_events, bits)}


def format_event(tree: FaultTree, event: Mapping[str, bool]) -> str:
    return "".join("1" if event[b] else "0" for b in tree.basic_events)


def cut_sets(tree: FaultTree, max_events=MAX_ENUMERATED_EVENTS) -> set[str]:
    """Every safety event reaching the root, as bit strings in BE order."""
    n = len(tree.basic_events)
    table = tree.structure_table(max_events)
    return {
        "".join("1" if (mask >> v) & 1 else "0" for v in range(n))
        for mask in np.flatnonzero(table).tolist()
    }


def all_events(tree: FaultTree):
    for bits in itertools.product((0, 1), repeat=len(tree.basic_events)):
        yield dict(zip(tree.basic_events, map(bool, bits)))


# ---------------------------------------------------------------- text format

_STMT_RE = re.compile(rf"^\s*(?P<id>{ID_PATTERN})\s+(?P<body>.*?)\s*$", re.S)
_NUM = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"
_NUM_RE = re.compile(rf"^{_NUM}$")


def _number(text, line, column):
    if not _NUM_RE.match(text.strip()):
        raise ParseError(f"expected a number, found {text.strip()!r}", line, column)
    return float(text)


def _numbers(text, count, line, column, what):
    parts = text.split(",")
    if len(parts) != count:
        raise ParseError(f"{what} takes {count} comma-separated numbers, got {len(parts)}", line, column)
    return [_number(p, line, column) for p in parts]


def _parse_attribute(key, value, line, column):
    key = key.lower()
    try:
        if key == "prob":
            p = _number(value, line, column)
            if not 0.0 <= p <= 1.0:
                raise ParseError(f"probability {p!r} outside [0, 1]", line, column)
            return p
        if key == "tri":
            return TriangularFuzzy(*_numbers(value, 3, line, column, "tri"))
        if key == "trap":
            return TrapezoidalFuzzy(*_numbers(value, 4, line, column, "trap"))
        if key == "gauss":
            return GaussianFuzzy(*_numbers(value, 2, line, column, "gauss"))
        if key == "discrete":
            pairs = []
            for item in value.split(","):
                if item.count(":") != 1:
                    raise ParseError(f"discrete entry {item.strip()!r} is not value:membership", line, column)
                v, m = item.split(":")
                pairs.append((_number(v, line, column), _number(m, line, column)))
            return DiscreteFuzzy(pairs)
    except ValueError as exc:
        raise ParseError(str(exc), line, column) from None
    raise ParseError(f"unknown attribute {key!r}", line, column)


def parse(text: str, name: str = "") -> tuple[FaultTree, dict[str, Probability]]:
    """Parse ``.ft`` text into a validated tree and its attribution."""
    root = None
    root_line = None
    types: dict[str, NodeType] = {}
    children: dict[str, list[str]] = {}
    attribution: dict[str, Probability] = {}
    defined_at: dict[str, int] = {}
    referenced: dict[str, tuple[int, int]] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0]
        if not content.strip():
            continue
        stripped = content.rstrip()
        if not stripped.endswith(";"):
            raise ParseError("missing ';' at end of declaration", lineno, len(stripped) + 1)
        body = stripped[:-1]
        if ";" in body:
            raise ParseError("one declaration per line", lineno, body.index(";") + 1)
        indent = len(body) - len(body.lstrip())
        m = _STMT_RE.match(body)
        if not m:
            raise ParseError(f"malformed declaration {body.strip()!r}", lineno, indent + 1)
        ident, rest = m.group("id"), m.group("body")
        rest_col = m.start("body") + 1

        if ident.lower() == "toplevel":
            if not re.fullmatch(ID_PATTERN, rest):
                raise ParseError(f"invalid top-level identifier {rest!r}", lineno, rest_col)
            if root is not None:
                raise ParseError(f"duplicate toplevel (first on line {root_line})", lineno, indent + 1)
            root, root_line = rest, lineno
            continue

        if ident in defined_at:
            raise ParseError(
                f"duplicate definition of {ident!r} (first on line {defined_at[ident]})", lineno, indent + 1
            )
        head, _, tail = rest.partition(" ")
        if head.lower() in ("and", "or"):
            kids = tail.split()
            if not kids:
                raise ParseError(f"gate {ident!r} has no children", lineno, rest_col)
            search = m.start("body") + len(head)
            for kid in kids:
                pos = body.index(kid, search)
                col, search = pos + 1, pos + len(kid)
                if not re.fullmatch(ID_PATTERN, kid):
                    raise ParseError(f"invalid identifier {kid!r}", lineno, col)
                referenced.setdefault(kid, (lineno, col))
            types[ident] = NodeType(head.upper())
            children[ident] = kids
        elif "=" in rest:
            key, _, value = rest.partition("=")
            if " " in key.strip():
                raise ParseError(f"malformed attribute {rest!r}", lineno, rest_col)
            attribution[ident] = _parse_attribute(key.strip(), value.strip(), lineno, rest_col)
            types[ident] = NodeType.BE
        else:
            raise ParseError(f"expected 'and', 'or' or an attribute, found {rest!r}", lineno, rest_col)
        defined_at[ident] = lineno

    if root is None:
        raise ParseError("no 'toplevel' declaration")
    if root not in types:
        raise ParseError(f"toplevel refers to undefined node {root!r}", root_line)
    for kid, (lineno, col) in referenced.items():
        if kid not in types:
            raise ParseError(f"reference to undefined node {kid!r}", lineno, col)

    tree = FaultTree(types, children, root, name)
    tree.check()
    return tree, attribution


def load(path: Union[str, Path]) -> tuple[FaultTree, dict[str, Probability]]:
    path = Path(path)
    return parse(path.read_text(), name=path.stem)


def format_attribute(p: Probability) -> str:
    if isinstance(p, DiscreteFuzzy):
        return "discrete=" + ",".join(f"{v!r}:{m!r}" for v, m in p.items())
    if isinstance(p, TriangularFuzzy):
        return f"tri={p.a!r},{p.b!r},{p.d!r}"
    if isinstance(p, TrapezoidalFuzzy):
        return f"trap={p.a!r},{p.b!r},{p.c!r},{p.d!r}"
    if isinstance(p, GaussianFuzzy):
        return f"gauss={p.m!r},{p.d!r}"
    return f"prob={float(p)!r}"


def serialize(tree: FaultTree, attribution: Attribution) -> str:
    """Deterministic ``.ft`` text: gates in pre-order, then basic events."""
    lines = [f"toplevel {tree.root};"]
    for gate in tree.gates:
        kids = " ".join(tree.children[gate])
        lines.append(f"{gate} {tree.type_of(gate).value.lower()} {kids};")
    for be in tree.basic_events:
        if be not in attribution:
            raise ValidationError(f"basic event {be!r} has no attribution")
        lines.append(f"{be} {format_attribute(attribution[be])};")
    return "\n".join(lines) + "\n"

"""Compound-graph data model, validation, generation and transformations.

A compound graph is a set of nodes with a tree-shaped containment function
(stored child-ward as ordered ``children`` lists), plus edges. Edges whose
endpoints do not share a parent are *hierarchy-crossing* and are routed after
layout rather than by the per-container algorithms.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Iterable, Optional

from .errors import TransformError

DEFAULT_BASE_WIDTH = 100.0
DEFAULT_BASE_HEIGHT = 60.0
DEFAULT_LABEL_HEIGHT = 12.0
CHAR_WIDTH_FACTOR = 7.0  # unit label width per character at text scale 1


class NodeType(str, Enum):
    ROOT = "root"
    FLEXIBLE = "flexible"
    FIXED = "fixed"


class Algorithm(str, Enum):
    TOPDOWNPACKING = "topdownpacking"
    SHELF = "shelf"
    LAYERED = "layered"
    RADIAL = "radial"


class Approximator(str, Enum):
    BASE = "base"
    NODE_COUNT = "nodeCount"
    LOOKAHEAD = "lookahead"


@dataclass(frozen=True)
class Label:
    text: str
    unit_width: float = 0.0
    unit_height: float = DEFAULT_LABEL_HEIGHT

    def __post_init__(self):
        if self.unit_width <= 0.0:
            object.__setattr__(
                self, "unit_width", CHAR_WIDTH_FACTOR * max(1, len(self.text))
            )


@dataclass(frozen=True)
class Node:
    id: str
    node_type: NodeType = NodeType.FLEXIBLE
    base_width: float = DEFAULT_BASE_WIDTH
    base_height: float = DEFAULT_BASE_HEIGHT
    children: tuple[str, ...] = ()
    algorithm: Algorithm = Algorithm.SHELF
    approximator: Approximator = Approximator.NODE_COUNT
    title: Optional[Label] = None
    is_core: bool = False  # balloon-transform core marker, rendered red


@dataclass(frozen=True)
class Edge:
    source: str
    target: str


@dataclass
class CompoundGraph:
    nodes: dict[str, Node]
    edges: list[Edge]
    root: str

    def __post_init__(self):
        self._parent: Optional[dict[str, str]] = None

    # -- derived indices ---------------------------------------------------

    def parent_map(self) -> dict[str, str]:
        if self._parent is None:
            parent = {}
            for node in self.nodes.values():
                for c in node.children:
                    parent[c] = node.id
            self._parent = parent
        return self._parent

    def parent_of(self, node_id: str) -> Optional[str]:
        return self.parent_map().get(node_id)

    def children_of(self, node_id: str) -> tuple[str, ...]:
        return self.nodes[node_id].children

    def depth_of(self, node_id: str) -> int:
        parent = self.parent_map()
        d = 0
        while node_id in parent:
            node_id = parent[node_id]
            d += 1
        return d

    def iter_depth_first(self, start: Optional[str] = None) -> Iterable[str]:
        stack = [start or self.root]
        while stack:
            nid = stack.pop()
            yield nid
            stack.extend(reversed(self.nodes[nid].children))

    def edge_keys(self) -> list[str]:
        """Stable unique key per edge, aligned with ``self.edges``."""
        seen: dict[str, int] = {}
        keys = []
        for e in self.edges:
            base = f"{e.source}->{e.target}"
            n = seen.get(base, 0)
            seen[base] = n + 1
            keys.append(base if n == 0 else f"{base}#{n}")
        return keys

    def is_hierarchy_crossing(self, edge: Edge) -> bool:
        parent = self.parent_map()
        return parent.get(edge.source) != parent.get(edge.target)

    def sibling_edges_of(self, container: str) -> list[tuple[str, Edge]]:
        """Edges whose endpoints are both direct children of ``container``."""
        members = set(self.nodes[container].children)
        out = []
        for key, e in zip(self.edge_keys(), self.edges):
            if e.source in members and e.target in members:
                out.append((key, e))
        return out

    def hierarchy_edges(self) -> list[tuple[str, Edge]]:
        return [
            (key, e)
            for key, e in zip(self.edge_keys(), self.edges)
            if self.is_hierarchy_crossing(e)
        ]

    def with_nodes(self, nodes: dict[str, Node]) -> "CompoundGraph":
        return CompoundGraph(nodes=nodes, edges=list(self.edges), root=self.root)

    def label_count(self) -> int:
        return sum(1 for n in self.nodes.values() if n.title is not None)


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    hierarchy_edge_count: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations


def validate(graph: CompoundGraph) -> ValidationReport:
    """Check every structural invariant; violations are data, not errors."""
    report = ValidationReport()
    v = report.violations

    if graph.root not in graph.nodes:
        v.append(f"root node '{graph.root}' does not exist")
        return report

    occurrences: dict[str, int] = {}
    for node in graph.nodes.values():
        if not node.id:
            v.append("empty node id")
        if node.base_width <= 0 or node.base_height <= 0:
            v.append(f"non-positive base size at {node.id}")
        if node.title is not None and node.title.unit_height <= 0:
            v.append(f"non-positive label height at {node.id}")
        for c in node.children:
            if c not in graph.nodes:
                v.append(f"unknown child '{c}' listed under {node.id}")
            occurrences[c] = occurrences.get(c, 0) + 1

    for nid, count in occurrences.items():
        if count > 1:
            v.append(f"non-tree containment at {nid}")
    if graph.root in occurrences:
        v.append(f"root {graph.root} appears as a child")

    roots = [n.id for n in graph.nodes.values() if n.node_type is NodeType.ROOT]
    if graph.nodes[graph.root].node_type is not NodeType.ROOT:
        v.append(f"root node {graph.root} must have node type ROOT")
    for r in roots:
        if r != graph.root:
            v.append(f"non-root node {r} has node type ROOT")

    # Reachability catches cycles and orphaned subtrees.
    seen = set()
    stack = [graph.root]
    while stack:
        nid = stack.pop()
        if nid in seen:
            continue
        seen.add(nid)
        stack.extend(c for c in graph.nodes[nid].children if c in graph.nodes)
    for nid in graph.nodes:
        if nid not in seen:
            v.append(f"node {nid} not reachable from root")

    for node in graph.nodes.values():
        if (
            node.node_type is NodeType.FIXED
            and node.children
            and node.algorithm is not Algorithm.TOPDOWNPACKING
        ):
            report.warnings.append(
                f"FIXED node {node.id} uses {node.algorithm.value}, which cannot "
                "fill an assigned size"
            )

    for e in graph.edges:
        if e.source not in graph.nodes or e.target not in graph.nodes:
            v.append(f"edge {e.source}->{e.target} has an unknown endpoint")
        elif not v and graph.is_hierarchy_crossing(e):
            report.hierarchy_edge_count += 1
    return report


# -- synthetic graphs ------------------------------------------------------


def generate_random_graph(
    seed: int,
    max_depth: int,
    max_children: int,
    label_probability: float = 0.5,
    fixed_levels: bool = False,
    edge_probability: float = 0.4,
) -> CompoundGraph:
    """Deterministic random compound graph, a stand-in corpus generator.

    The root always receives exactly ``max_children`` children; deeper nodes
    get a random count, with a chance of stopping early. With ``fixed_levels``
    every even-depth container becomes a FIXED grid, alternating with
    FLEXIBLE levels.
    """
    if max_depth < 1 or max_children < 1:
        raise ValueError("max_depth and max_children must be >= 1")
    rng = random.Random(seed)
    nodes: dict[str, Node] = {}
    edges: list[Edge] = []
    counter = [0]

    def fresh_id() -> str:
        counter[0] += 1
        return f"n{counter[0]}"

    def make_title(nid: str) -> Optional[Label]:
        if rng.random() < label_probability:
            return Label(text=f"Node {nid}")
        return None

    def build(nid: str, depth: int) -> None:
        if depth >= max_depth:
            n_children = 0
        elif depth == 0:
            n_children = max_children
        elif rng.random() < 0.85:
            n_children = rng.randint(1, max_children)
        else:
            n_children = 0

        child_ids = tuple(fresh_id() for _ in range(n_children))
        if n_children == 0:
            node_type = NodeType.FLEXIBLE
            algorithm = Algorithm.SHELF
        elif fixed_levels and depth % 2 == 0 and depth > 0:
            node_type = NodeType.FIXED
            algorithm = Algorithm.TOPDOWNPACKING
        else:
            node_type = NodeType.FLEXIBLE
            algorithm = rng.choice([Algorithm.SHELF, Algorithm.LAYERED])
        if depth == 0:
            node_type = NodeType.ROOT

        nodes[nid] = Node(
            id=nid,
            node_type=node_type,
            children=child_ids,
            algorithm=algorithm,
            approximator=Approximator.NODE_COUNT,
            title=make_title(nid),
        )
        if algorithm is Algorithm.LAYERED and n_children >= 2:
            for a, b in zip(child_ids, child_ids[1:]):
                if rng.random() < edge_probability:
                    edges.append(Edge(a, b))
        for c in child_ids:
            build(c, depth + 1)

    root_id = "root"
    counter_root = root_id
    build(counter_root, 0)
    return CompoundGraph(nodes=nodes, edges=edges, root=root_id)


# -- balloon-tree transformation ------------------------------------------


def tree_to_balloon_compound(tree: CompoundGraph) -> CompoundGraph:
    """Rebuild a tree as nested radial compounds.

    Every internal node ``v`` becomes a compound ``v``-group containing the
    original node as a red-marked core plus one entry per child: leaves stay
    leaves, internal children become nested compounds. Edges connect each
    core with its child entries; edges into nested compounds' cores are
    hierarchy-crossing.
    """
    for node in tree.nodes.values():
        for c in node.children:
            if c not in tree.nodes:
                raise TransformError(f"unknown child '{c}' in input tree")
    occurrences: dict[str, int] = {}
    for node in tree.nodes.values():
        for c in node.children:
            occurrences[c] = occurrences.get(c, 0) + 1
    bad = [nid for nid, n in occurrences.items() if n > 1]
    if bad or tree.root in occurrences:
        raise TransformError(f"input containment is not a tree (at {bad or tree.root})")
    for e in tree.edges:
        if tree.parent_map().get(e.target) != e.source:
            raise TransformError(
                f"edge {e.source}->{e.target} does not mirror the containment tree"
            )

    root_node = tree.nodes[tree.root]
    if not root_node.children:
        only = replace(root_node, node_type=NodeType.ROOT)
        return CompoundGraph(nodes={only.id: only}, edges=[], root=only.id)

    def group_id(nid: str) -> str:
        gid = f"{nid}__group"
        while gid in tree.nodes:
            gid += "_"
        return gid

    nodes: dict[str, Node] = {}
    edges: list[Edge] = []

    def build(vid: str) -> str:
        """Create the compound for internal node ``vid``; returns its id."""
        v = tree.nodes[vid]
        core = replace(
            v, children=(), node_type=NodeType.FLEXIBLE, is_core=True,
            algorithm=Algorithm.SHELF,
        )
        nodes[core.id] = core
        entries = [core.id]
        for cid in v.children:
            child = tree.nodes[cid]
            if child.children:
                gid = build(cid)
                entries.append(gid)
                edges.append(Edge(vid, cid))  # hierarchy-crossing, core to core
            else:
                nodes[cid] = replace(child, node_type=NodeType.FLEXIBLE)
                entries.append(cid)
                edges.append(Edge(vid, cid))
        gid = group_id(vid)
        nodes[gid] = Node(
            id=gid,
            node_type=NodeType.FLEXIBLE,
            children=tuple(entries),
            algorithm=Algorithm.RADIAL,
            approximator=Approximator.NODE_COUNT,
        )
        return gid

    top = build(tree.root)
    nodes[top] = replace(nodes[top], node_type=NodeType.ROOT)
    return CompoundGraph(nodes=nodes, edges=edges, root=top)


def complete_tree(arity: int, depth: int) -> CompoundGraph:
    """Complete ``arity``-ary tree of the given depth as a compound graph."""
    nodes: dict[str, Node] = {}

    def build(nid: str, d: int) -> None:
        children = ()
        if d < depth:
            children = tuple(f"{nid}.{i}" for i in range(arity))
        nodes[nid] = Node(
            id=nid,
            node_type=NodeType.ROOT if nid == "t" else NodeType.FLEXIBLE,
            children=children,
            title=Label(text=nid),
        )
        for c in children:
            build(c, d + 1)

    build("t", 0)
    return CompoundGraph(nodes=nodes, edges=[], root="t")

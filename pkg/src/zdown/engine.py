"""Recursive layout drivers: bottom-up, top-down, incremental expansion.

Coordinate model: every node's rect is stored in its parent's *inner drawing*
frame (the unscaled frame in which the parent arranged its children,
including the padding inset). A parent's ``child_scale`` maps that frame
into the parent's content area; cumulative products of these factors yield
absolute geometry.
"""
from __future__ import annotations

import copy
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

from .algorithms import arrange_children, topdownpacking_layout
from .approximators import ApproximationContext, predict_size
from .errors import LayoutError
from .geometry import LocalLayout, Rect, route_straight
from .model import Algorithm, CompoundGraph, Edge, NodeType

_EPS = 1e-12


class Direction(str, Enum):
    BOTTOM_UP = "bottom-up"
    TOP_DOWN = "top-down"


@dataclass(frozen=True)
class LayoutConfig:
    gap: float = 10.0
    padding: float = 15.0
    target_aspect: float = 1.5
    vertical_fill: bool = False
    cap_scale_at_one: bool = False

    def approximation_context(self, graph: CompoundGraph) -> ApproximationContext:
        return ApproximationContext(
            graph=graph,
            gap=self.gap,
            padding=self.padding,
            target_aspect=self.target_aspect,
            vertical_fill=self.vertical_fill,
        )


DEFAULT_CONFIG = LayoutConfig()


@dataclass
class NodeLayout:
    rect: Rect
    child_scale: float = 1.0
    laid_out: bool = True
    inner_size: Optional[tuple[float, float]] = None


@dataclass
class EdgeRoute:
    owner: str  # container whose inner frame the points live in
    points: list[tuple[float, float]]


@dataclass
class Layout:
    direction: Direction
    size: tuple[float, float]
    nodes: dict[str, NodeLayout]
    edges: dict[str, EdgeRoute]


@dataclass
class AbsNode:
    rect: Rect
    cumulative_scale: float
    child_scale: float
    laid_out: bool


@dataclass
class AbsLabel:
    node_id: str
    text: str
    rect: Rect
    text_scale: float


@dataclass
class AbsoluteLayout:
    direction: Direction
    size: tuple[float, float]
    nodes: dict[str, AbsNode]
    labels: list[AbsLabel]
    edges: dict[str, list[tuple[float, float]]]
    hierarchy_routes: dict[str, list[tuple[float, float]]] = field(default_factory=dict)
    edge_notes: dict[str, str] = field(default_factory=dict)


# -- scale and composition helpers ----------------------------------------


def compute_scale(assigned: tuple[float, float], laid_out: tuple[float, float]) -> float:
    """Largest uniform factor under which the child drawing fits the box."""
    lw, lh = laid_out
    if lw <= 0 or lh <= 0:
        raise LayoutError("laid-out size must be strictly positive")
    return min(assigned[0] / lw, assigned[1] / lh)


def compose_drawing(
    content: tuple[float, float], drawing: tuple[float, float], scale: float
) -> Rect:
    """Placement of a scaled child drawing centered in the leftover space."""
    w = scale * drawing[0]
    h = scale * drawing[1]
    return Rect((content[0] - w) / 2.0, (content[1] - h) / 2.0, w, h)


def _title_height(graph: CompoundGraph, node_id: str) -> float:
    title = graph.nodes[node_id].title
    return title.unit_height if title else 0.0


# -- bottom-up ------------------------------------------------------------


def bottom_up_layout(graph: CompoundGraph, config: LayoutConfig = DEFAULT_CONFIG) -> Layout:
    """Classic recursion: children first, parents sized around them, scale 1."""
    nodes: dict[str, NodeLayout] = {}
    edges: dict[str, EdgeRoute] = {}
    size = _bottom_up_subtree(graph, graph.root, config, nodes, edges)
    nodes[graph.root].rect = Rect(0.0, 0.0, *size)
    return Layout(direction=Direction.BOTTOM_UP, size=size, nodes=nodes, edges=edges)


def _bottom_up_subtree(graph, nid, cfg, nodes, edges) -> tuple[float, float]:
    node = graph.nodes[nid]
    if not node.children:
        size = (node.base_width, node.base_height)
        nodes[nid] = NodeLayout(rect=Rect(0.0, 0.0, *size))
        return size
    child_sizes = {
        c: _bottom_up_subtree(graph, c, cfg, nodes, edges) for c in node.children
    }
    local = arrange_children(
        graph, nid, child_sizes, cfg.gap, cfg.target_aspect, cfg.vertical_fill
    )
    p = cfg.padding
    for c in node.children:
        r = local.rects[c]
        nodes[c].rect = Rect(p + r.x, p + r.y, r.width, r.height)
    for key, pts in local.routes.items():
        edges[key] = EdgeRoute(owner=nid, points=[(p + x, p + y) for x, y in pts])
    inner = (local.size[0] + 2 * p, local.size[1] + 2 * p)
    size = (inner[0], inner[1] + _title_height(graph, nid))
    nodes[nid] = NodeLayout(rect=Rect(0.0, 0.0, *size), inner_size=inner)
    return size


# -- top-down -------------------------------------------------------------


def top_down_layout(
    graph: CompoundGraph,
    marked: Optional[Callable[[str], bool]] = None,
    config: LayoutConfig = DEFAULT_CONFIG,
    predictor: Optional[Callable[[str], tuple[float, float]]] = None,
) -> Layout:
    """Parent sizes fixed first, children scaled to fit (Flexible) or tiled
    at full size (Fixed). ``marked`` returning False defers a node's interior.

    ``predictor`` overrides the per-node size approximators; used for oracle
    testing with perfect (bottom-up) sizes.
    """
    if marked is None:
        marked = lambda _nid: True
    nodes: dict[str, NodeLayout] = {}
    edges: dict[str, EdgeRoute] = {}
    size = _top_down_subtree(graph, graph.root, None, marked, config, predictor, nodes, edges)
    nodes[graph.root].rect = Rect(0.0, 0.0, *size)
    return Layout(direction=Direction.TOP_DOWN, size=size, nodes=nodes, edges=edges)


def _top_down_subtree(
    graph, nid, assigned, marked, cfg, predictor, nodes, edges
) -> tuple[float, float]:
    node = graph.nodes[nid]
    title_h = _title_height(graph, nid)
    p = cfg.padding

    if not node.children:
        size = assigned if assigned is not None else (node.base_width, node.base_height)
        nl = nodes.setdefault(nid, NodeLayout(rect=Rect(0.0, 0.0, *size)))
        nl.child_scale = 1.0
        nl.laid_out = True
        return size

    if node.node_type is NodeType.FIXED:
        if assigned is None:
            raise LayoutError(f"FIXED node {nid} cannot act as layout root")
        if node.algorithm is not Algorithm.TOPDOWNPACKING:
            raise LayoutError(
                f"FIXED node {nid}: algorithm {node.algorithm.value} cannot "
                "fill an assigned size"
            )
        content = (max(assigned[0], _EPS), max(assigned[1] - title_h, _EPS))
        region = (max(content[0] - 2 * p, _EPS), max(content[1] - 2 * p, _EPS))
        cells = topdownpacking_layout(node.children, region, cfg.gap, cfg.vertical_fill)
        child_rects = {
            c: Rect(p + r.x, p + r.y, r.width, r.height)
            for c, r in cells.rects.items()
        }
        for key, e in graph.sibling_edges_of(nid):
            pts = route_straight(child_rects[e.source], child_rects[e.target])
            if pts is not None:
                edges[key] = EdgeRoute(owner=nid, points=pts)
        inner = content
        scale = 1.0
        size = assigned
    else:
        if predictor is not None:
            child_sizes = {c: predictor(c) for c in node.children}
        else:
            ctx = cfg.approximation_context(graph)
            child_sizes = {c: predict_size(c, ctx) for c in node.children}
        local = arrange_children(
            graph, nid, child_sizes, cfg.gap, cfg.target_aspect, cfg.vertical_fill
        )
        child_rects = {
            c: Rect(p + r.x, p + r.y, r.width, r.height)
            for c, r in local.rects.items()
        }
        for key, pts in local.routes.items():
            edges[key] = EdgeRoute(owner=nid, points=[(p + x, p + y) for x, y in pts])
        inner = (local.size[0] + 2 * p, local.size[1] + 2 * p)
        if assigned is None:  # ROOT takes its size from the layout
            scale = 1.0
            size = (inner[0], inner[1] + title_h)
        else:
            content = (max(assigned[0], _EPS), max(assigned[1] - title_h, _EPS))
            scale = compute_scale(content, inner)
            if cfg.cap_scale_at_one and scale > 1.0:
                scale = 1.0
            size = assigned

    nl = nodes.setdefault(nid, NodeLayout(rect=Rect(0.0, 0.0, *size)))
    nl.child_scale = scale
    nl.laid_out = True
    nl.inner_size = inner

    for c in node.children:
        r = child_rects[c]
        nodes[c] = NodeLayout(rect=r, child_scale=1.0, laid_out=False, inner_size=None)
        if marked(c):
            _top_down_subtree(
                graph, c, (r.width, r.height), marked, cfg, predictor, nodes, edges
            )
    return size


# -- incremental expansion ------------------------------------------------


@dataclass
class ExpandResult:
    layout: Layout
    changed_nodes: list[str]
    new_edges: list[str]
    notice: Optional[str] = None


def expand_marked(
    layout: Layout,
    graph: CompoundGraph,
    node_id: str,
    config: LayoutConfig = DEFAULT_CONFIG,
    predictor: Optional[Callable[[str], tuple[float, float]]] = None,
) -> ExpandResult:
    """Lay out a deferred node's subtree within its frozen rect.

    All previously laid-out geometry is untouched; the result is
    bit-identical to what a non-incremental run would have produced.
    """
    if node_id not in layout.nodes:
        raise LayoutError(f"unknown node {node_id}")
    current = layout.nodes[node_id]
    if current.laid_out:
        return ExpandResult(layout, [], [], notice=f"{node_id} already laid out")
    parent = graph.parent_of(node_id)
    if parent is not None and not layout.nodes[parent].laid_out:
        raise LayoutError(f"parent of {node_id} not laid out")

    nodes = {k: copy.copy(v) for k, v in layout.nodes.items()}
    edges = dict(layout.edges)
    before = set(nodes)
    _top_down_subtree(
        graph,
        node_id,
        (current.rect.width, current.rect.height),
        lambda _nid: True,
        config,
        predictor,
        nodes,
        edges,
    )
    changed = [node_id] + [n for n in nodes if n not in before]
    new_edges = [k for k in edges if k not in layout.edges]
    return ExpandResult(
        Layout(layout.direction, layout.size, nodes, edges), changed, new_edges
    )


def deferred_nodes(layout: Layout) -> list[str]:
    return [nid for nid, nl in layout.nodes.items() if not nl.laid_out]


# -- absolute geometry ----------------------------------------------------

_LABEL_INSET = 4.0


def absolute_geometry(
    graph: CompoundGraph,
    layout: Layout,
    config: LayoutConfig = DEFAULT_CONFIG,
) -> AbsoluteLayout:
    """Flatten the recursive layout into absolute rects and cumulative scales."""
    abs_nodes: dict[str, AbsNode] = {}
    labels: list[AbsLabel] = []
    abs_edges: dict[str, list[tuple[float, float]]] = {}
    routes_by_owner: dict[str, list[str]] = {}
    for key, route in layout.edges.items():
        routes_by_owner.setdefault(route.owner, []).append(key)

    def visit(nid: str, ox: float, oy: float, k: float) -> None:
        node = graph.nodes[nid]
        nl = layout.nodes[nid]
        w, h = nl.rect.width, nl.rect.height
        abs_nodes[nid] = AbsNode(
            rect=Rect(ox, oy, k * w, k * h),
            cumulative_scale=k,
            child_scale=nl.child_scale,
            laid_out=nl.laid_out,
        )
        if node.title is not None:
            labels.append(
                AbsLabel(
                    node_id=nid,
                    text=node.title.text,
                    rect=Rect(
                        ox + k * _LABEL_INSET,
                        oy,
                        k * node.title.unit_width,
                        k * node.title.unit_height,
                    ),
                    text_scale=k,
                )
            )
        if not node.children or not nl.laid_out or nl.inner_size is None:
            return
        title_h = _title_height(graph, nid)
        s = nl.child_scale
        placed = compose_drawing((w, h - title_h), nl.inner_size, s)
        ix = ox + k * placed.x
        iy = oy + k * (title_h + placed.y)
        for key in routes_by_owner.get(nid, ()):
            pts = layout.edges[key].points
            abs_edges[key] = [(ix + k * s * x, iy + k * s * y) for x, y in pts]
        for c in node.children:
            if c not in layout.nodes:
                continue
            cr = layout.nodes[c].rect
            visit(c, ix + k * s * cr.x, iy + k * s * cr.y, k * s)

    visit(graph.root, 0.0, 0.0, 1.0)
    result = AbsoluteLayout(
        direction=layout.direction,
        size=layout.size,
        nodes=abs_nodes,
        labels=labels,
        edges=abs_edges,
    )
    routes, notes = route_hierarchy_edges(result, graph.hierarchy_edges())
    result.hierarchy_routes = routes
    result.edge_notes = notes
    return result


def route_hierarchy_edges(
    absolute: AbsoluteLayout, edges: list[tuple[str, Edge]]
) -> tuple[dict[str, list[tuple[float, float]]], dict[str, str]]:
    """Straight absolute segments between endpoint centers, clipped to borders.

    Edges whose endpoints were deferred are omitted and noted; degenerate
    geometry (nested or coincident endpoints) yields a flagged zero-length
    route.
    """
    routes: dict[str, list[tuple[float, float]]] = {}
    notes: dict[str, str] = {}
    for key, e in edges:
        src = absolute.nodes.get(e.source)
        tgt = absolute.nodes.get(e.target)
        if src is None or tgt is None:
            notes[key] = "endpoint not laid out"
            continue
        pts = route_straight(src.rect, tgt.rect)
        if pts is None:
            center = src.rect.center
            routes[key] = [center, center]
            notes[key] = "degenerate"
        else:
            routes[key] = pts
    return routes, notes


# -- configuration variants and oracles -----------------------------------

VARIANTS = ("flexible", "lookahead", "fixed")


def apply_variant(graph: CompoundGraph, variant: str) -> CompoundGraph:
    """Rewrite node types/approximators to one of the named configurations."""
    from dataclasses import replace

    from .model import Approximator

    if variant not in VARIANTS:
        raise ValueError(f"unknown variant '{variant}'")
    nodes = {}
    for nid, node in graph.nodes.items():
        is_root = nid == graph.root
        if variant == "fixed":
            depth = graph.depth_of(nid)
            if is_root:
                nodes[nid] = replace(
                    node,
                    node_type=NodeType.ROOT,
                    algorithm=Algorithm.TOPDOWNPACKING,
                    approximator=Approximator.NODE_COUNT,
                )
            elif node.children and depth % 2 == 0:
                nodes[nid] = replace(
                    node,
                    node_type=NodeType.FIXED,
                    algorithm=Algorithm.TOPDOWNPACKING,
                    approximator=Approximator.NODE_COUNT,
                )
            else:
                nodes[nid] = replace(
                    node,
                    node_type=NodeType.FLEXIBLE,
                    approximator=Approximator.NODE_COUNT,
                )
        else:
            approx = (
                Approximator.LOOKAHEAD
                if variant == "lookahead"
                else Approximator.NODE_COUNT
            )
            nodes[nid] = replace(
                node,
                node_type=NodeType.ROOT if is_root else NodeType.FLEXIBLE,
                approximator=approx,
            )
    return graph.with_nodes(nodes)


def bottom_up_size_predictor(
    graph: CompoundGraph, config: LayoutConfig = DEFAULT_CONFIG
) -> Callable[[str], tuple[float, float]]:
    """Perfect size oracle: each node's exact bottom-up drawing size."""
    reference = bottom_up_layout(graph, config)

    def predict(node_id: str) -> tuple[float, float]:
        r = reference.nodes[node_id].rect
        return (r.width, r.height)

    return predict

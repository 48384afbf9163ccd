"""File formats: graph documents, layout documents, SVG rendering, CSV export.

One JSON interchange format covers both graphs (nested node objects) and
layouts (graph document plus per-node geometry), keeping the CLI, service
and viewer thin.
"""
from __future__ import annotations

import json
from typing import Optional

from .engine import (
    AbsoluteLayout,
    Direction,
    EdgeRoute,
    Layout,
    LayoutConfig,
    DEFAULT_CONFIG,
    NodeLayout,
    absolute_geometry,
    compose_drawing,
)
from .errors import GraphParseError
from .geometry import Rect
from .metrics import MetricSeries
from .model import (
    Algorithm,
    Approximator,
    CompoundGraph,
    Edge,
    Label,
    Node,
    NodeType,
    validate,
)

LAYOUT_FORMAT = "zdown-layout"
PRECISION = 6


def _round(value: float) -> float:
    return round(value, PRECISION)


def _round_seq(values) -> list[float]:
    return [_round(v) for v in values]


# -- graph documents -------------------------------------------------------


def _enum(cls, raw, what):
    try:
        return cls(raw)
    except ValueError:
        valid = ", ".join(m.value for m in cls)
        raise GraphParseError(f"unknown {what} '{raw}' (expected one of: {valid})")


def _parse_label(raw) -> Label:
    if isinstance(raw, str):
        return Label(text=raw)
    if isinstance(raw, dict):
        return Label(
            text=str(raw.get("text", "")),
            unit_width=float(raw.get("width", 0.0)),
            unit_height=float(raw.get("height", 12.0)),
        )
    raise GraphParseError(f"label must be a string or object, got {type(raw).__name__}")


def parse_graph_obj(doc: dict) -> CompoundGraph:
    """Build a compound graph from an already-decoded document object."""
    nodes: dict[str, Node] = {}
    edges: list[Edge] = []

    def walk(obj, is_root: bool) -> str:
        if not isinstance(obj, dict):
            raise GraphParseError("node entries must be objects")
        nid = obj.get("id")
        if not nid or not isinstance(nid, str):
            raise GraphParseError("every node needs a non-empty string 'id'")
        if nid in nodes:
            raise GraphParseError(f"duplicate id '{nid}'")
        default_type = "root" if is_root else "flexible"
        node_type = _enum(NodeType, obj.get("nodeType", default_type), "nodeType")
        algorithm = _enum(Algorithm, obj.get("algorithm", "shelf"), "algorithm")
        approximator = _enum(
            Approximator, obj.get("approximator", "nodeCount"), "approximator"
        )
        label = obj.get("label")
        children = obj.get("children", [])
        if not isinstance(children, list):
            raise GraphParseError(f"'children' of {nid} must be an array")
        nodes[nid] = Node(id=nid)  # reserve the id before recursing
        child_ids = tuple(walk(c, False) for c in children)
        nodes[nid] = Node(
            id=nid,
            node_type=node_type,
            base_width=float(obj.get("width", 100.0)),
            base_height=float(obj.get("height", 60.0)),
            children=child_ids,
            algorithm=algorithm,
            approximator=approximator,
            title=_parse_label(label) if label is not None else None,
            is_core=bool(obj.get("core", False)),
        )
        for e in obj.get("edges", []):
            if not isinstance(e, dict) or "source" not in e or "target" not in e:
                raise GraphParseError(f"malformed edge entry under {nid}")
            edges.append(Edge(str(e["source"]), str(e["target"])))
        return nid

    root = walk(doc, True)
    return CompoundGraph(nodes=nodes, edges=edges, root=root)


def parse_graph(text: str) -> CompoundGraph:
    """Parse a graph document; raises with line/column on syntax errors."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphParseError(exc.msg, line=exc.lineno, column=exc.colno) from exc
    return parse_graph_obj(doc)


def graph_to_obj(graph: CompoundGraph) -> dict:
    edges_by_container: dict[Optional[str], list[Edge]] = {}
    parent = graph.parent_map()
    for e in graph.edges:
        container = parent.get(e.source)
        if parent.get(e.target) != container:
            container = graph.root  # hierarchy-crossing edges live at the root
        edges_by_container.setdefault(container, []).append(e)

    def build(nid: str) -> dict:
        node = graph.nodes[nid]
        obj = {
            "id": nid,
            "nodeType": node.node_type.value,
            "width": node.base_width,
            "height": node.base_height,
            "algorithm": node.algorithm.value,
            "approximator": node.approximator.value,
        }
        if node.title is not None:
            obj["label"] = {
                "text": node.title.text,
                "width": node.title.unit_width,
                "height": node.title.unit_height,
            }
        if node.is_core:
            obj["core"] = True
        if node.children:
            obj["children"] = [build(c) for c in node.children]
        own_edges = edges_by_container.get(nid, [])
        if own_edges:
            obj["edges"] = [{"source": e.source, "target": e.target} for e in own_edges]
        return obj

    return build(graph.root)


def serialize_graph(graph: CompoundGraph) -> str:
    return json.dumps(graph_to_obj(graph), indent=2) + "\n"


# -- layout documents ------------------------------------------------------


def layout_to_obj(
    graph: CompoundGraph,
    layout: Layout,
    absolute: Optional[AbsoluteLayout] = None,
    config: LayoutConfig = DEFAULT_CONFIG,
) -> dict:
    if absolute is None:
        absolute = absolute_geometry(graph, layout, config)
    nodes = {}
    for nid, nl in layout.nodes.items():
        entry = {
            "rect": _round_seq([nl.rect.x, nl.rect.y, nl.rect.width, nl.rect.height]),
            "childScale": _round(nl.child_scale),
            "laidOut": nl.laid_out,
        }
        if nl.inner_size is not None:
            entry["innerSize"] = _round_seq(nl.inner_size)
        ab = absolute.nodes.get(nid)
        if ab is not None:
            entry["cumulativeScale"] = _round(ab.cumulative_scale)
            entry["absoluteRect"] = _round_seq(
                [ab.rect.x, ab.rect.y, ab.rect.width, ab.rect.height]
            )
        nodes[nid] = entry
    return {
        "format": LAYOUT_FORMAT,
        "direction": layout.direction.value,
        "size": _round_seq(layout.size),
        "graph": graph_to_obj(graph),
        "nodes": nodes,
        "edges": {
            key: {
                "owner": route.owner,
                "points": [_round_seq(pt) for pt in route.points],
            }
            for key, route in layout.edges.items()
        },
        "hierarchyEdges": {
            key: [_round_seq(pt) for pt in pts]
            for key, pts in absolute.hierarchy_routes.items()
        },
        "edgeNotes": dict(absolute.edge_notes),
    }


def serialize_layout(
    graph: CompoundGraph,
    layout: Layout,
    absolute: Optional[AbsoluteLayout] = None,
    config: LayoutConfig = DEFAULT_CONFIG,
) -> str:
    return json.dumps(layout_to_obj(graph, layout, absolute, config), indent=2) + "\n"


def is_layout_doc(doc: dict) -> bool:
    return isinstance(doc, dict) and doc.get("format") == LAYOUT_FORMAT


def parse_layout(text: str) -> tuple[CompoundGraph, Layout]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphParseError(exc.msg, line=exc.lineno, column=exc.colno) from exc
    if not is_layout_doc(doc):
        raise GraphParseError("not a layout document (missing format marker)")
    graph = parse_graph_obj(doc["graph"])
    nodes = {}
    for nid, entry in doc["nodes"].items():
        x, y, w, h = entry["rect"]
        inner = entry.get("innerSize")
        nodes[nid] = NodeLayout(
            rect=Rect(x, y, w, h),
            child_scale=float(entry.get("childScale", 1.0)),
            laid_out=bool(entry.get("laidOut", True)),
            inner_size=tuple(inner) if inner else None,
        )
    edges = {
        key: EdgeRoute(owner=e["owner"], points=[tuple(p) for p in e["points"]])
        for key, e in doc.get("edges", {}).items()
    }
    layout = Layout(
        direction=Direction(doc["direction"]),
        size=tuple(doc["size"]),
        nodes=nodes,
        edges=edges,
    )
    return graph, layout


# -- SVG rendering ---------------------------------------------------------


def _fmt(value: float) -> str:
    text = f"{value:.6f}".rstrip("0").rstrip(".")
    return text if text not in ("", "-0") else "0"


def _escape(text: str) -> str:
    return (
        text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
    )


def render_svg(
    graph: CompoundGraph,
    layout: Layout,
    config: LayoutConfig = DEFAULT_CONFIG,
    absolute: Optional[AbsoluteLayout] = None,
) -> str:
    """Nested SVG groups mirroring the layout composition.

    Each compound node writes its children inside a translate+scale group so
    child coordinates stay in their local frame; labels keep unit font size
    and inherit the group scale.
    """
    if absolute is None:
        absolute = absolute_geometry(graph, layout, config)
    parts: list[str] = []
    w, h = layout.size
    parts.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(w)}" '
        f'height="{_fmt(h)}" viewBox="0 0 {_fmt(w)} {_fmt(h)}" '
        'font-family="sans-serif">'
    )
    parts.append(
        "<defs><pattern id=\"deferred\" width=\"8\" height=\"8\" "
        "patternUnits=\"userSpaceOnUse\" patternTransform=\"rotate(45)\">"
        "<rect width=\"8\" height=\"8\" fill=\"#f4f4f4\"/>"
        "<line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"8\" stroke=\"#cccccc\" "
        "stroke-width=\"2\"/></pattern></defs>"
    )
    routes_by_owner: dict[str, list[str]] = {}
    for key, route in layout.edges.items():
        routes_by_owner.setdefault(route.owner, []).append(key)

    def emit(nid: str, x: float, y: float) -> None:
        node = graph.nodes[nid]
        nl = layout.nodes[nid]
        rw, rh = nl.rect.width, nl.rect.height
        parts.append(f'<g transform="translate({_fmt(x)},{_fmt(y)})">')
        if node.is_core:
            fill = "#d04040"
        elif not nl.laid_out:
            fill = "url(#deferred)"
        else:
            fill = "#ffffff"
        parts.append(
            f'<rect x="0" y="0" width="{_fmt(rw)}" height="{_fmt(rh)}" rx="4" '
            f'fill="{fill}" fill-opacity="0.9" stroke="#333333"/>'
        )
        if node.title is not None:
            parts.append(
                f'<text x="4" y="{_fmt(node.title.unit_height - 2.0)}" '
                f'font-size="{_fmt(node.title.unit_height)}">'
                f"{_escape(node.title.text)}</text>"
            )
        if node.children and nl.laid_out and nl.inner_size is not None:
            title_h = node.title.unit_height if node.title else 0.0
            s = nl.child_scale
            placed = compose_drawing((rw, rh - title_h), nl.inner_size, s)
            parts.append(
                f'<g transform="translate({_fmt(placed.x)},'
                f'{_fmt(title_h + placed.y)}) scale({_fmt(s)})">'
            )
            for key in routes_by_owner.get(nid, ()):
                pts = " ".join(
                    f"{_fmt(px)},{_fmt(py)}" for px, py in layout.edges[key].points
                )
                parts.append(
                    f'<polyline points="{pts}" fill="none" stroke="#555555"/>'
                )
            for c in node.children:
                if c in layout.nodes:
                    cr = layout.nodes[c].rect
                    emit(c, cr.x, cr.y)
            parts.append("</g>")
        parts.append("</g>")

    emit(graph.root, 0.0, 0.0)
    for key, pts in absolute.hierarchy_routes.items():
        joined = " ".join(f"{_fmt(px)},{_fmt(py)}" for px, py in pts)
        parts.append(
            f'<polyline points="{joined}" fill="none" stroke="#8040a0" '
            'stroke-dasharray="4 2"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


# -- CSV export ------------------------------------------------------------


def write_metrics_csv(series: MetricSeries) -> str:
    lines = ["z,s_d,v,r,R"]
    for row in series.rows:
        lines.append(
            ",".join(
                f"{value:.6f}" for value in (row.z, row.s_d, row.v, row.r, row.R)
            )
        )
    return "\n".join(lines) + "\n"


def write_discrepancy_csv(discrepancies: dict[str, float]) -> str:
    lines = ["node_id,D"]
    for nid in sorted(discrepancies):
        lines.append(f"{nid},{discrepancies[nid]:.6f}")
    return "\n".join(lines) + "\n"

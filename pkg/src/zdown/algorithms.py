"""Concrete child-layout backends.

Each backend arranges a container's direct children in a local frame with
origin (0, 0) and returns a :class:`~zdown.geometry.LocalLayout`. All
backends are pure and deterministic in their input order.
"""
from __future__ import annotations

import math
from typing import Mapping, Sequence

from .geometry import LocalLayout, Rect, bounding_size, half_diagonal, route_straight
from .model import Algorithm, CompoundGraph, Edge


def grid_shape(n: int) -> tuple[int, int]:
    """Columns and rows of the packing grid for ``n`` nodes."""
    if n <= 0:
        return (0, 0)
    cols = math.ceil(math.sqrt(n))
    rows = math.ceil(n / cols)
    return (cols, rows)


def topdownpacking_predict(n: int, base: tuple[float, float], gap: float) -> tuple[float, float]:
    """Size of the grid packing of ``n`` base-size nodes, known before layout."""
    cols, rows = grid_shape(n)
    if n <= 0:
        return (0.0, 0.0)
    w, h = base
    return (cols * w + (cols - 1) * gap, rows * h + (rows - 1) * gap)


def topdownpacking_layout(
    child_ids: Sequence,
    parent_size: tuple[float, float],
    gap: float,
    vertical_fill: bool = False,
) -> LocalLayout:
    """Tile ``parent_size`` with equal cells in a near-square grid.

    Empty trailing rows are removed and the remaining rows stretched to fill
    the parent height; the cells of a final incomplete row are expanded
    horizontally to span the full width. With ``vertical_fill`` the final row
    keeps the regular cell width and only the vertical stretch is applied.
    """
    n = len(child_ids)
    width, height = parent_size
    if n == 0:
        return LocalLayout(rects={}, routes={}, size=parent_size)
    cols, rows = grid_shape(n)
    cell_w = (width - (cols - 1) * gap) / cols
    cell_h = (height - (rows - 1) * gap) / rows
    rects = {}
    full_rows = n // cols
    for i, cid in enumerate(child_ids):
        row, col = divmod(i, cols)
        y = row * (cell_h + gap)
        if row < full_rows or vertical_fill:
            rects[cid] = Rect(col * (cell_w + gap), y, cell_w, cell_h)
        else:
            last = n - full_rows * cols
            wide_w = (width - (last - 1) * gap) / last
            rects[cid] = Rect(col * (wide_w + gap), y, wide_w, cell_h)
    return LocalLayout(rects=rects, routes={}, size=parent_size)


def shelf_pack(
    child_sizes: Sequence[tuple[float, float]],
    target_aspect: float,
    gap: float,
) -> LocalLayout:
    """Greedy shelf packing keyed by input position.

    A new shelf starts whenever adding the next child would push the layout
    width beyond ``sqrt(total_area * target_aspect)``.
    """
    total_area = sum(w * h for w, h in child_sizes)
    max_width = math.sqrt(total_area * target_aspect)
    rects = {}
    x = 0.0
    shelf_y = 0.0
    shelf_h = 0.0
    for i, (w, h) in enumerate(child_sizes):
        if x > 0.0 and x + w > max_width:
            shelf_y += shelf_h + gap
            x = 0.0
            shelf_h = 0.0
        rects[i] = Rect(x, shelf_y, w, h)
        x += w + gap
        shelf_h = max(shelf_h, h)
    size = bounding_size(rects.values())
    return LocalLayout(rects=rects, routes={}, size=size)


def _forward_edges(child_ids: Sequence, edges: Sequence[Edge]) -> list[Edge]:
    """Drop back edges found by a depth-first traversal in input order."""
    adjacency: dict = {c: [] for c in child_ids}
    for e in edges:
        adjacency[e.source].append(e.target)
    state: dict = {}  # 1 = on stack, 2 = done
    back: set[tuple[str, str]] = set()

    def visit(v):
        state[v] = 1
        for t in adjacency[v]:
            if state.get(t) == 1:
                back.add((v, t))
            elif t not in state:
                visit(t)
        state[v] = 2

    for c in child_ids:
        if c not in state:
            visit(c)
    return [e for e in edges if (e.source, e.target) not in back]


def layered_layout(
    child_ids: Sequence,
    edges: Sequence[Edge],
    child_sizes: Mapping,
    spacing: float,
) -> LocalLayout:
    """Minimal layered arrangement: longest-path ranks, one barycenter sweep."""
    order = list(child_ids)
    index = {c: i for i, c in enumerate(order)}
    forward = _forward_edges(order, edges)
    preds: dict = {c: [] for c in order}
    for e in forward:
        preds[e.target].append(e.source)

    rank: dict = {}

    def rank_of(v) -> int:
        if v not in rank:
            rank[v] = 0  # guards self-referential chains
            rank[v] = max((rank_of(p) + 1 for p in preds[v]), default=0)
        return rank[v]

    for c in order:
        rank_of(c)
    n_ranks = max(rank.values()) + 1 if rank else 0
    ranks: list[list] = [[] for _ in range(n_ranks)]
    for c in order:
        ranks[rank[c]].append(c)

    for r in range(1, n_ranks):
        prev_pos = {c: i for i, c in enumerate(ranks[r - 1])}
        def key(c):
            ps = [prev_pos[p] for p in preds[c] if p in prev_pos]
            bary = sum(ps) / len(ps) if ps else math.inf
            return (bary, index[c])
        ranks[r].sort(key=key)

    rects = {}
    x = 0.0
    for members in ranks:
        col_w = max(child_sizes[c][0] for c in members)
        y = 0.0
        for c in members:
            w, h = child_sizes[c]
            rects[c] = Rect(x + (col_w - w) / 2.0, y, w, h)
            y += h + spacing
        x += col_w + spacing

    routes = {}
    for i, e in enumerate(forward):
        pts = route_straight(rects[e.source], rects[e.target])
        if pts is not None:
            routes[i] = pts
    size = bounding_size(rects.values(), routes.values())
    return LocalLayout(rects=rects, routes=routes, size=size)


def radial_layout(
    core,
    satellites: Sequence,
    child_sizes: Mapping,
    spacing: float,
) -> LocalLayout:
    """Core centered, satellites on a circle at equal angular steps from east.

    The ring radius is the maximum of the core-clearance radius and the
    chord needed to keep adjacent satellites apart.
    """
    cw, ch = child_sizes[core]
    core_hd = half_diagonal(cw, ch)
    m = len(satellites)
    if m == 0:
        return LocalLayout(rects={core: Rect(0.0, 0.0, cw, ch)}, routes={}, size=(cw, ch))

    hds = {s: half_diagonal(*child_sizes[s]) for s in satellites}
    radius = max(core_hd + hds[s] + spacing for s in satellites)
    if m >= 2:
        step = 2.0 * math.pi / m
        for i, s in enumerate(satellites):
            t = satellites[(i + 1) % m]
            need = (hds[s] + hds[t] + spacing) / (2.0 * math.sin(step / 2.0))
            radius = max(radius, need)

    centers = {core: (0.0, 0.0)}
    for i, s in enumerate(satellites):
        angle = 2.0 * math.pi * i / m
        centers[s] = (radius * math.cos(angle), radius * math.sin(angle))

    min_x = min(centers[c][0] - child_sizes[c][0] / 2.0 for c in centers)
    min_y = min(centers[c][1] - child_sizes[c][1] / 2.0 for c in centers)
    rects = {
        c: Rect(
            centers[c][0] - child_sizes[c][0] / 2.0 - min_x,
            centers[c][1] - child_sizes[c][1] / 2.0 - min_y,
            child_sizes[c][0],
            child_sizes[c][1],
        )
        for c in centers
    }
    size = bounding_size(rects.values())
    return LocalLayout(rects=rects, routes={}, size=size)


def arrange_children(
    graph: CompoundGraph,
    node_id: str,
    child_sizes: Mapping[str, tuple[float, float]],
    gap: float,
    target_aspect: float,
    vertical_fill: bool = False,
) -> LocalLayout:
    """Dispatch to the container's configured algorithm.

    For grid packing under a non-FIXED parent the grid is sized from the
    largest child and every child is centered in its cell at its own size.
    Sibling edges not routed by the algorithm itself get straight routes.
    """
    node = graph.nodes[node_id]
    children = list(node.children)
    sibling_edges = graph.sibling_edges_of(node_id)

    if node.algorithm is Algorithm.LAYERED:
        local = layered_layout(
            children, [e for _, e in sibling_edges], child_sizes, gap
        )
        # layered_layout keys routes by forward-edge index; rebuild graph keys.
        forward = _forward_edges(children, [e for _, e in sibling_edges])
        key_by_edge = {}
        for key, e in sibling_edges:
            key_by_edge.setdefault((e.source, e.target), []).append(key)
        routes = {}
        used: dict = {}
        for i, e in enumerate(forward):
            ks = key_by_edge[(e.source, e.target)]
            k = ks[used.setdefault((e.source, e.target), 0)]
            used[(e.source, e.target)] += 1
            if i in local.routes:
                routes[k] = local.routes[i]
        local.routes = routes
        return local

    if node.algorithm is Algorithm.RADIAL:
        core = next((c for c in children if graph.nodes[c].is_core), children[0])
        satellites = [c for c in children if c != core]
        local = radial_layout(core, satellites, child_sizes, gap)
    elif node.algorithm is Algorithm.TOPDOWNPACKING:
        cell = (
            max(child_sizes[c][0] for c in children),
            max(child_sizes[c][1] for c in children),
        )
        region = topdownpacking_predict(len(children), cell, gap)
        cells = topdownpacking_layout(children, region, gap, vertical_fill)
        rects = {}
        for c in children:
            cr = cells.rects[c]
            w, h = child_sizes[c]
            rects[c] = Rect(
                cr.x + (cr.width - w) / 2.0, cr.y + (cr.height - h) / 2.0, w, h
            )
        local = LocalLayout(rects=rects, routes={}, size=region)
    else:
        sizes = [child_sizes[c] for c in children]
        packed = shelf_pack(sizes, target_aspect, gap)
        local = LocalLayout(
            rects={c: packed.rects[i] for i, c in enumerate(children)},
            routes={},
            size=packed.size,
        )

    for key, e in sibling_edges:
        pts = route_straight(local.rects[e.source], local.rects[e.target])
        if pts is not None:
            local.routes[key] = pts
    local.size = bounding_size(local.rects.values(), local.routes.values()) if (
        node.algorithm is not Algorithm.TOPDOWNPACKING
    ) else local.size
    return local

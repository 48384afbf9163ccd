"""Node size approximators: strategies that assign sizes before layout."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .algorithms import arrange_children
from .model import Approximator, CompoundGraph


@dataclass(frozen=True)
class ApproximationContext:
    """Read-only inputs shared by all approximators."""

    graph: CompoundGraph
    gap: float
    padding: float
    target_aspect: float
    vertical_fill: bool = False


def base_size_approx(node_id: str, ctx: ApproximationContext) -> tuple[float, float]:
    """The node's base size, regardless of contents."""
    node = ctx.graph.nodes[node_id]
    return (node.base_width, node.base_height)


def node_count_approx(node_id: str, ctx: ApproximationContext) -> tuple[float, float]:
    """Base size multiplied by the square root of the child count.

    Both dimensions use the same factor, preserving the base aspect ratio.
    """
    node = ctx.graph.nodes[node_id]
    factor = math.sqrt(max(1, len(node.children)))
    return (node.base_width * factor, node.base_height * factor)


def lookahead_approx(node_id: str, ctx: ApproximationContext) -> tuple[float, float]:
    """Trial-lay-out one hierarchical layer and take the resulting size.

    Children are sized with the node count approximator, the node's own
    algorithm arranges them, and the drawing size (padding plus title band
    included) becomes the prediction. The trial layout is discarded.
    """
    graph = ctx.graph
    node = graph.nodes[node_id]
    if not node.children:
        return (node.base_width, node.base_height)
    child_sizes = {c: node_count_approx(c, ctx) for c in node.children}
    local = arrange_children(
        graph, node_id, child_sizes, ctx.gap, ctx.target_aspect, ctx.vertical_fill
    )
    title_h = node.title.unit_height if node.title else 0.0
    return (
        local.size[0] + 2.0 * ctx.padding,
        local.size[1] + 2.0 * ctx.padding + title_h,
    )


_DISPATCH = {
    Approximator.BASE: base_size_approx,
    Approximator.NODE_COUNT: node_count_approx,
    Approximator.LOOKAHEAD: lookahead_approx,
}


def predict_size(node_id: str, ctx: ApproximationContext) -> tuple[float, float]:
    """Apply the node's configured approximator."""
    return _DISPATCH[ctx.graph.nodes[node_id].approximator](node_id, ctx)

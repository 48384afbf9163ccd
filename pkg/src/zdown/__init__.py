"""Top-down and bottom-up layout of compound graphs with zoom metrics."""

from .engine import (
    AbsoluteLayout,
    Direction,
    Layout,
    LayoutConfig,
    absolute_geometry,
    apply_variant,
    bottom_up_layout,
    expand_marked,
    top_down_layout,
)
from .model import (
    Algorithm,
    Approximator,
    CompoundGraph,
    Edge,
    Label,
    Node,
    NodeType,
    generate_random_graph,
    tree_to_balloon_compound,
    validate,
)

__all__ = [
    "AbsoluteLayout",
    "Algorithm",
    "Approximator",
    "CompoundGraph",
    "Direction",
    "Edge",
    "Label",
    "Layout",
    "LayoutConfig",
    "Node",
    "NodeType",
    "absolute_geometry",
    "apply_variant",
    "bottom_up_layout",
    "expand_marked",
    "generate_random_graph",
    "top_down_layout",
    "tree_to_balloon_compound",
    "validate",
]

__version__ = "0.1.0"

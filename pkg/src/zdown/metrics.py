"""Zoom-axis normalization and the two evaluation metrics.

The z-level maps [0, 1] onto diagram scales: z=1 is zoom-to-fit, z=0 shows
the smallest details at intended size. Readability multiplies the fraction
of legible labels with the visible proportion of the diagram; scale
discrepancy measures the max/min spread of sibling scale factors.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .engine import AbsoluteLayout, Direction
from .model import CompoundGraph


@dataclass(frozen=True)
class Viewport:
    width: float = 600.0
    height: float = 400.0

    @property
    def area(self) -> float:
        return self.width * self.height


@dataclass(frozen=True)
class ZoomProfile:
    a: float
    direction: Direction
    degenerate: bool = False


@dataclass
class MetricRow:
    z: float
    s_d: float
    v: float
    r: float
    R: float


@dataclass
class MetricSeries:
    rows: list[MetricRow]
    discrepancies: dict[str, float] = field(default_factory=dict)
    degenerate: bool = False  # no labels in the diagram


def compute_a(
    absolute: AbsoluteLayout, viewport: Viewport, direction: Direction | None = None
) -> ZoomProfile:
    """Diagram-specific zoom constant.

    Bottom-up: the zoom-to-fit render scale, capped at 1. Top-down: the
    inverse of the smallest cumulative element scale (>= 1 since the root
    is drawn at scale 1).
    """
    direction = direction or absolute.direction
    w, h = absolute.size
    if w <= 0 or h <= 0 or not absolute.nodes:
        return ZoomProfile(a=1.0, direction=direction, degenerate=True)
    if direction is Direction.BOTTOM_UP:
        return ZoomProfile(
            a=min(viewport.width / w, viewport.height / h, 1.0), direction=direction
        )
    min_scale = min(n.cumulative_scale for n in absolute.nodes.values())
    return ZoomProfile(a=1.0 / min_scale, direction=direction)


def diagram_scale(a: float, z: float) -> float:
    """Render scale of the diagram at z-level ``z``."""
    if a <= 1.0:
        return z * (a - 1.0) + 1.0
    # (1-z)(a-1)+1 rather than z(1-a)+a: exact 1.0 at z=1 for any a
    return (1.0 - z) * (a - 1.0) + 1.0


def visible_proportion(diagram_area: float, viewport: Viewport, s_d: float) -> float:
    """Proportion of the diagram inside the viewport, capped at 1."""
    return min(viewport.area / (diagram_area * s_d * s_d), 1.0)


def readable_fraction(absolute: AbsoluteLayout, s_d: float) -> float:
    """Fraction of labels whose render scale reaches the legibility threshold."""
    labels = absolute.labels
    if not labels:
        return 0.0
    readable = sum(1 for t in labels if t.text_scale * s_d >= 1.0)
    return readable / len(labels)


def readability_curve(
    absolute: AbsoluteLayout,
    viewport: Viewport = Viewport(),
    samples: int = 101,
) -> MetricSeries:
    """Sample z uniformly on [0, 1] and record (s_d, v, r, R) per level."""
    if samples < 2:
        raise ValueError("samples must be >= 2")
    profile = compute_a(absolute, viewport)
    area = absolute.size[0] * absolute.size[1]
    rows = []
    for i in range(samples):
        z = i / (samples - 1)
        s_d = diagram_scale(profile.a, z)
        v = visible_proportion(area, viewport, s_d) if area > 0 else 1.0
        r = readable_fraction(absolute, s_d)
        rows.append(MetricRow(z=z, s_d=s_d, v=v, r=r, R=r * v))
    return MetricSeries(rows=rows, degenerate=not absolute.labels)


def scale_discrepancy(
    absolute: AbsoluteLayout, graph: CompoundGraph, node_id: str
) -> float:
    """Max/min spread of the children's scale factors, minus one."""
    scales = [
        absolute.nodes[c].child_scale
        for c in graph.nodes[node_id].children
        if c in absolute.nodes and absolute.nodes[c].laid_out
    ]
    if len(scales) < 2:
        return 0.0
    return max(scales) / min(scales) - 1.0


def discrepancy_map(absolute: AbsoluteLayout, graph: CompoundGraph) -> dict[str, float]:
    """Per-compound-node scale discrepancy for every laid-out container."""
    return {
        nid: scale_discrepancy(absolute, graph, nid)
        for nid, node in graph.nodes.items()
        if node.children and nid in absolute.nodes and absolute.nodes[nid].laid_out
    }


@dataclass
class DiscrepancyHistogram:
    bin_width: float
    max_bin: float
    counts: list[int]
    outliers: int
    values: dict[str, float]


def discrepancy_histogram(
    absolute: AbsoluteLayout,
    graph: CompoundGraph,
    bin_width: float = 1.0,
    max_bin: float = 50.0,
) -> DiscrepancyHistogram:
    """Bin every compound node's discrepancy; values past the range are outliers."""
    values = discrepancy_map(absolute, graph)
    n_bins = int(round(max_bin / bin_width))
    counts = [0] * n_bins
    outliers = 0
    for d in values.values():
        idx = int(d // bin_width)
        if d > max_bin or idx >= n_bins:
            outliers += 1
        else:
            counts[idx] += 1
    return DiscrepancyHistogram(
        bin_width=bin_width,
        max_bin=max_bin,
        counts=counts,
        outliers=outliers,
        values=values,
    )


def evaluate(
    absolute: AbsoluteLayout,
    graph: CompoundGraph,
    viewport: Viewport = Viewport(),
    samples: int = 101,
) -> MetricSeries:
    """Readability curve plus per-node discrepancies in one series."""
    series = readability_curve(absolute, viewport, samples)
    series.discrepancies = discrepancy_map(absolute, graph)
    return series

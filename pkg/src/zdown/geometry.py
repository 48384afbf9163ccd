"""Rectangles, polylines and small geometric helpers."""
from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle, origin at the top-left corner."""

    x: float
    y: float
    width: float
    height: float

    @property
    def right(self) -> float:
        return self.x + self.width

    @property
    def bottom(self) -> float:
        return self.y + self.height

    @property
    def center(self) -> tuple[float, float]:
        return (self.x + self.width / 2.0, self.y + self.height / 2.0)

    def contains_rect(self, other: "Rect", tol: float = 1e-9) -> bool:
        return (
            other.x >= self.x - tol
            and other.y >= self.y - tol
            and other.right <= self.right + tol
            and other.bottom <= self.bottom + tol
        )

    def contains_point(self, px: float, py: float, tol: float = 1e-9) -> bool:
        return (
            self.x - tol <= px <= self.right + tol
            and self.y - tol <= py <= self.bottom + tol
        )


def rects_overlap(a: Rect, b: Rect, tol: float = 1e-9) -> bool:
    """True when the interiors of two rectangles intersect."""
    return (
        a.x < b.right - tol
        and b.x < a.right - tol
        and a.y < b.bottom - tol
        and b.y < a.bottom - tol
    )


@dataclass
class LocalLayout:
    """Arrangement of sibling nodes in a shared (parent-local) frame.

    ``size`` is the minimal bounding box over all rects and edge routes.
    """

    rects: dict = field(default_factory=dict)
    routes: dict = field(default_factory=dict)
    size: tuple[float, float] = (0.0, 0.0)


def bounding_size(rects, routes=None) -> tuple[float, float]:
    """Minimal bounding-box size around rects and polylines anchored at (0,0)."""
    w = 0.0
    h = 0.0
    for r in rects:
        w = max(w, r.right)
        h = max(h, r.bottom)
    if routes:
        for pts in routes:
            for (px, py) in pts:
                w = max(w, px)
                h = max(h, py)
    return (w, h)


def half_diagonal(width: float, height: float) -> float:
    return math.hypot(width / 2.0, height / 2.0)


def _exit_parameter(rect: Rect, cx: float, cy: float, dx: float, dy: float) -> float:
    """Parameter t at which the ray from (cx, cy) leaves ``rect``.

    The ray origin must lie inside the rectangle.
    """
    t = math.inf
    if dx > 0:
        t = min(t, (rect.right - cx) / dx)
    elif dx < 0:
        t = min(t, (rect.x - cx) / dx)
    if dy > 0:
        t = min(t, (rect.bottom - cy) / dy)
    elif dy < 0:
        t = min(t, (rect.y - cy) / dy)
    return t


def route_straight(source: Rect, target: Rect):
    """Straight segment between two rect centers, clipped to the rect borders.

    Returns a two-point polyline, or ``None`` for degenerate cases (equal
    centers, or rects so close/overlapping that the clipped segment inverts).
    """
    sx, sy = source.center
    tx, ty = target.center
    dx, dy = tx - sx, ty - sy
    if dx == 0 and dy == 0:
        return None
    t_exit = _exit_parameter(source, sx, sy, dx, dy)
    # Entry into the target is one minus the exit parameter of the reverse ray.
    t_entry = 1.0 - _exit_parameter(target, tx, ty, -dx, -dy)
    if not (0.0 <= t_exit < t_entry <= 1.0):
        return None
    p0 = (sx + t_exit * dx, sy + t_exit * dy)
    p1 = (sx + t_entry * dx, sy + t_entry * dy)
    return [p0, p1]

import itertools
import math

import pytest

from zdown.algorithms import (
    layered_layout,
    radial_layout,
    shelf_pack,
    topdownpacking_layout,
    topdownpacking_predict,
)
from zdown.geometry import Rect, rects_overlap, route_straight
from zdown.model import Edge


def ids(n):
    return [f"c{i}" for i in range(n)]


class TestTopdownpackingLayout:
    def test_nine_fill_three_by_three(self):
        local = topdownpacking_layout(ids(9), (90, 60), 0)
        for i in range(9):
            row, col = divmod(i, 3)
            r = local.rects[f"c{i}"]
            assert r == Rect(col * 30.0, row * 20.0, 30.0, 20.0)
        assert local.size == (90, 60)

    def test_six_removes_final_row(self):
        local = topdownpacking_layout(ids(6), (90, 60), 0)
        for i in range(6):
            row, col = divmod(i, 3)
            r = local.rects[f"c{i}"]
            assert r == Rect(col * 30.0, row * 30.0, 30.0, 30.0)

    def test_five_expands_incomplete_row(self):
        local = topdownpacking_layout(ids(5), (90, 60), 0)
        for i in range(3):
            assert local.rects[f"c{i}"] == Rect(i * 30.0, 0.0, 30.0, 30.0)
        assert local.rects["c3"] == Rect(0.0, 30.0, 45.0, 30.0)
        assert local.rects["c4"] == Rect(45.0, 30.0, 45.0, 30.0)

    def test_empty_input(self):
        local = topdownpacking_layout([], (90, 60), 0)
        assert local.rects == {}
        assert local.size == (90, 60)

    @pytest.mark.parametrize("n", range(1, 101))
    def test_tiles_parent_exactly(self, n):
        gap = 10.0
        parent = (400.0, 300.0)
        local = topdownpacking_layout(ids(n), parent, gap)
        rects = list(local.rects.values())
        parent_rect = Rect(0, 0, *parent)
        for r in rects:
            assert parent_rect.contains_rect(r, 1e-6)
        for a, b in itertools.combinations(rects, 2):
            assert not rects_overlap(a, b, 1e-9)
        # cells plus gap strips cover the parent area
        cols = math.ceil(math.sqrt(n))
        rows = math.ceil(n / cols)
        row_counts = [
            min(cols, n - r * cols) for r in range(rows)
        ]
        gap_area = (rows - 1) * gap * parent[0] + sum(
            (k - 1) * gap * (parent[1] - (rows - 1) * gap) / rows for k in row_counts
        )
        assert sum(r.width * r.height for r in rects) + gap_area == pytest.approx(
            parent[0] * parent[1], abs=1e-6
        )


class TestTopdownpackingPredict:
    def test_values(self):
        assert topdownpacking_predict(9, (100, 60), 0) == (300, 180)
        assert topdownpacking_predict(6, (100, 60), 0) == (300, 120)
        assert topdownpacking_predict(1, (100, 60), 5) == (100, 60)

    @pytest.mark.parametrize("n", range(1, 101))
    def test_layout_in_predicted_size_never_shrinks(self, n):
        base = (100.0, 60.0)
        gap = 7.0
        predicted = topdownpacking_predict(n, base, gap)
        local = topdownpacking_layout(ids(n), predicted, gap)
        for r in local.rects.values():
            assert r.width >= base[0] - 1e-9
            assert r.height >= base[1] - 1e-9


class TestShelfPack:
    def test_single_child(self):
        local = shelf_pack([(100, 60)], 1.5, 10)
        assert local.rects[0] == Rect(0, 0, 100, 60)
        assert local.size == (100, 60)

    def test_four_equal_children_two_shelves(self):
        local = shelf_pack([(100, 60)] * 4, 2.0, 0)
        assert local.rects[0] == Rect(0, 0, 100, 60)
        assert local.rects[1] == Rect(100, 0, 100, 60)
        assert local.rects[2] == Rect(0, 60, 100, 60)
        assert local.rects[3] == Rect(100, 60, 100, 60)
        assert local.size == (200, 120)

    def test_aspect_within_factor_two_of_target(self):
        # The shelf granularity is one child, so the guarantee only kicks in
        # once children are small relative to the packing as a whole.
        import random

        rng = random.Random(0)
        for _ in range(200):
            n = rng.randint(30, 120)
            w = rng.uniform(15, 50)
            h = rng.uniform(15, 50)
            target = rng.uniform(0.75, 2.0)
            local = shelf_pack([(w, h)] * n, target, 0)
            aspect = local.size[0] / local.size[1]
            assert target / 2 <= aspect <= target * 2

    def test_no_overlap_and_deterministic(self):
        sizes = [(50, 30), (80, 40), (20, 90), (60, 60), (100, 10)]
        a = shelf_pack(sizes, 1.5, 5)
        b = shelf_pack(sizes, 1.5, 5)
        assert a.rects == b.rects
        for r1, r2 in itertools.combinations(a.rects.values(), 2):
            assert not rects_overlap(r1, r2)


class TestLayeredLayout:
    sizes = {c: (100.0, 60.0) for c in "abcd"}

    def test_two_nodes_one_edge(self):
        local = layered_layout(["a", "b"], [Edge("a", "b")], self.sizes, 20)
        assert local.rects["a"].x < local.rects["b"].x
        assert len(local.routes) == 1

    def test_chain_three_ranks(self):
        local = layered_layout(
            ["a", "b", "c"], [Edge("a", "b"), Edge("b", "c")], self.sizes, 20
        )
        assert local.rects["a"].x < local.rects["b"].x < local.rects["c"].x

    def test_diamond_ranks(self):
        edges = [Edge("a", "b"), Edge("a", "c"), Edge("b", "d"), Edge("c", "d")]
        local = layered_layout(["a", "b", "c", "d"], edges, self.sizes, 20)
        assert local.rects["b"].x == local.rects["c"].x
        assert local.rects["a"].x < local.rects["b"].x < local.rects["d"].x

    def test_cycle_broken_by_input_order(self):
        edges = [Edge("a", "b"), Edge("b", "a")]
        local = layered_layout(["a", "b"], edges, self.sizes, 20)
        assert local.rects["a"].x < local.rects["b"].x

    def test_forward_edges_rank_monotone(self):
        import random

        rng = random.Random(3)
        for _ in range(30):
            n = rng.randint(2, 10)
            members = [f"v{i}" for i in range(n)]
            sizes = {m: (rng.uniform(20, 120), rng.uniform(20, 80)) for m in members}
            edges = [
                Edge(rng.choice(members), rng.choice(members)) for _ in range(n)
            ]
            edges = [e for e in edges if e.source != e.target]
            local = layered_layout(members, edges, sizes, 15)
            for r1, r2 in itertools.combinations(local.rects.values(), 2):
                assert not rects_overlap(r1, r2)


class TestRadialLayout:
    def test_core_only(self):
        local = radial_layout("core", [], {"core": (100, 60)}, 20)
        assert local.rects["core"] == Rect(0, 0, 100, 60)
        assert local.size == (100, 60)

    def test_four_satellites_on_axes(self):
        sizes = {c: (100.0, 60.0) for c in ["core", "s0", "s1", "s2", "s3"]}
        local = radial_layout("core", ["s0", "s1", "s2", "s3"], sizes, 10)
        cx, cy = local.rects["core"].center
        angles = []
        for s in ["s0", "s1", "s2", "s3"]:
            sx, sy = local.rects[s].center
            angles.append(math.degrees(math.atan2(sy - cy, sx - cx)) % 360)
        assert angles == pytest.approx([0.0, 90.0, 180.0, 270.0], abs=1e-9)

    def test_no_overlap_property(self):
        import random

        rng = random.Random(7)
        for _ in range(40):
            m = rng.randint(1, 10)
            sizes = {"core": (rng.uniform(30, 150), rng.uniform(30, 100))}
            sats = []
            for i in range(m):
                sid = f"s{i}"
                sizes[sid] = (rng.uniform(20, 140), rng.uniform(20, 90))
                sats.append(sid)
            local = radial_layout("core", sats, sizes, 10)
            for r1, r2 in itertools.combinations(local.rects.values(), 2):
                assert not rects_overlap(r1, r2, 1e-6)


class TestRouteStraight:
    def test_clipped_segment(self):
        pts = route_straight(Rect(0, 0, 10, 10), Rect(100, 0, 10, 10))
        assert pts == [(10.0, 5.0), (100.0, 5.0)]

    def test_degenerate_containment(self):
        assert route_straight(Rect(0, 0, 100, 100), Rect(40, 40, 20, 20)) is None

    def test_same_center(self):
        assert route_straight(Rect(0, 0, 10, 10), Rect(0, 0, 10, 10)) is None

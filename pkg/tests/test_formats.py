import json
import xml.etree.ElementTree as ET

import pytest

from zdown.engine import absolute_geometry, top_down_layout
from zdown.errors import GraphParseError
from zdown.formats import (
    is_layout_doc,
    parse_graph,
    parse_layout,
    render_svg,
    serialize_graph,
    serialize_layout,
    write_discrepancy_csv,
    write_metrics_csv,
)
from zdown.metrics import evaluate
from zdown.model import NodeType, generate_random_graph, validate


SAMPLE = """
{
  "id": "root",
  "label": "Root",
  "children": [
    {"id": "a", "label": {"text": "A", "width": 40, "height": 14},
     "children": [{"id": "a1"}, {"id": "a2"}],
     "edges": [{"source": "a1", "target": "a2"}]},
    {"id": "b", "width": 80, "height": 40}
  ],
  "edges": [{"source": "a1", "target": "b"}]
}
"""


class TestParseGraph:
    def test_minimal_document(self):
        g = parse_graph('{"id": "root", "children": []}')
        assert list(g.nodes) == ["root"]
        assert g.nodes["root"].node_type is NodeType.ROOT

    def test_sample_document(self):
        g = parse_graph(SAMPLE)
        assert validate(g).ok
        assert g.nodes["a"].title.unit_width == 40
        assert g.nodes["b"].base_width == 80
        assert len(g.edges) == 2
        assert g.is_hierarchy_crossing(g.edges[1])

    def test_duplicate_id(self):
        doc = '{"id": "x", "children": [{"id": "x"}]}'
        with pytest.raises(GraphParseError, match="duplicate id 'x'"):
            parse_graph(doc)

    def test_unknown_enum_lists_valid_values(self):
        doc = '{"id": "r", "algorithm": "sunburst"}'
        with pytest.raises(GraphParseError, match="topdownpacking"):
            parse_graph(doc)

    def test_syntax_error_has_position(self):
        try:
            parse_graph('{"id": "r",\n  "children": ]}')
        except GraphParseError as exc:
            assert exc.line == 2
            assert exc.column is not None
        else:
            pytest.fail("expected a parse error")

    def test_round_trip_idempotent(self):
        g = parse_graph(SAMPLE)
        once = serialize_graph(g)
        twice = serialize_graph(parse_graph(once))
        assert once == twice


class TestLayoutDocuments:
    def graph(self):
        return generate_random_graph(12, 3, 3, label_probability=0.7)

    def test_round_trip(self):
        g = self.graph()
        layout = top_down_layout(g)
        text = serialize_layout(g, layout)
        doc = json.loads(text)
        assert is_layout_doc(doc)
        g2, layout2 = parse_layout(text)
        assert set(g2.nodes) == set(g.nodes)
        # local geometry is stored rounded, so it survives byte-for-byte;
        # absolute geometry is recomputed and may wobble in the last decimal
        doc2 = json.loads(serialize_layout(g2, layout2))
        assert doc2["graph"] == doc["graph"]
        assert doc2["edges"] == doc["edges"]
        for nid, entry in doc["nodes"].items():
            other = doc2["nodes"][nid]
            assert other["rect"] == entry["rect"]
            assert other["childScale"] == entry["childScale"]
            assert other["laidOut"] == entry["laidOut"]
            for got, want in zip(other["absoluteRect"], entry["absoluteRect"]):
                assert got == pytest.approx(want, abs=1e-4)

    def test_rejects_plain_graph(self):
        with pytest.raises(GraphParseError, match="format"):
            parse_layout('{"id": "root"}')

    def test_six_decimal_rounding(self):
        g = self.graph()
        doc = json.loads(serialize_layout(g, top_down_layout(g)))
        for entry in doc["nodes"].values():
            for v in entry["rect"]:
                assert v == round(v, 6)

    def test_absolute_rects_embedded(self):
        g = self.graph()
        layout = top_down_layout(g)
        absolute = absolute_geometry(g, layout)
        doc = json.loads(serialize_layout(g, layout))
        for nid, entry in doc["nodes"].items():
            expect = absolute.nodes[nid].rect
            assert entry["absoluteRect"][0] == pytest.approx(expect.x, abs=1e-6)
            assert entry["cumulativeScale"] == pytest.approx(
                absolute.nodes[nid].cumulative_scale, abs=1e-6
            )


class TestSvg:
    def test_well_formed_and_deterministic(self):
        g = generate_random_graph(5, 3, 4, label_probability=0.8)
        layout = top_down_layout(g)
        a = render_svg(g, layout)
        b = render_svg(g, layout)
        assert a == b
        root = ET.fromstring(a)
        assert root.tag.endswith("svg")

    def test_scaled_groups_present(self):
        g = parse_graph(SAMPLE)
        layout = top_down_layout(g)
        svg = render_svg(g, layout)
        assert "scale(" in svg
        assert "Root" in svg

    def test_deferred_nodes_hatched(self):
        g = generate_random_graph(5, 3, 4)
        layout = top_down_layout(g, marked=lambda nid: g.depth_of(nid) < 1)
        svg = render_svg(g, layout)
        assert 'url(#deferred)' in svg

    def test_label_text_escaped(self):
        g = parse_graph('{"id": "r", "label": "a < b & c"}')
        svg = render_svg(g, top_down_layout(g))
        assert "a &lt; b &amp; c" in svg


class TestCsv:
    def test_metrics_rows(self):
        g = generate_random_graph(8, 3, 3, label_probability=1.0)
        absolute = absolute_geometry(g, top_down_layout(g))
        series = evaluate(absolute, g, samples=101)
        csv = write_metrics_csv(series)
        lines = csv.strip().split("\n")
        assert lines[0] == "z,s_d,v,r,R"
        assert len(lines) == 102
        assert lines[1].startswith("0.000000,")
        assert lines[-1].startswith("1.000000,")

    def test_discrepancy_csv_sorted(self):
        csv = write_discrepancy_csv({"b": 0.5, "a": 1.25})
        assert csv == "node_id,D\na,1.250000\nb,0.500000\n"

    def test_empty_discrepancies_header_only(self):
        assert write_discrepancy_csv({}) == "node_id,D\n"

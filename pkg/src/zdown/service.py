"""HTTP service powering the interactive viewer's incremental layout."""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Optional

from fastapi import FastAPI, HTTPException
from fastapi.responses import JSONResponse, PlainTextResponse

from .engine import (
    AbsoluteLayout,
    DEFAULT_CONFIG,
    Direction,
    Layout,
    LayoutConfig,
    absolute_geometry,
    apply_variant,
    bottom_up_layout,
    expand_marked,
    top_down_layout,
)
from .errors import LayoutError
from .formats import graph_to_obj, layout_to_obj, write_metrics_csv
from .metrics import Viewport, readability_curve
from .model import CompoundGraph


@dataclass
class Session:
    """One in-memory graph with its current, possibly partial, layout."""

    graph: CompoundGraph
    config: LayoutConfig = DEFAULT_CONFIG
    layout: Optional[Layout] = None
    absolute: Optional[AbsoluteLayout] = None
    effective_graph: Optional[CompoundGraph] = None
    lock: threading.Lock = field(default_factory=threading.Lock)

    def compute(self, direction: str, variant: str, defer: Optional[int]) -> None:
        graph = self.graph
        if direction == Direction.TOP_DOWN.value:
            graph = apply_variant(graph, variant)
            marked = None
            if defer is not None:
                marked = lambda nid: graph.depth_of(nid) < defer
            self.layout = top_down_layout(graph, marked=marked, config=self.config)
        elif direction == Direction.BOTTOM_UP.value:
            self.layout = bottom_up_layout(graph, config=self.config)
        else:
            raise ValueError(f"unknown direction '{direction}'")
        self.effective_graph = graph
        self.absolute = absolute_geometry(graph, self.layout, self.config)

    def ensure_layout(self) -> None:
        if self.layout is None:
            self.compute(Direction.TOP_DOWN.value, "flexible", None)


def create_app(graph: CompoundGraph, config: LayoutConfig = DEFAULT_CONFIG) -> FastAPI:
    app = FastAPI(title="zdown layout service")
    session = Session(graph=graph, config=config)
    app.state.session = session

    @app.get("/graph")
    def get_graph():
        return JSONResponse(graph_to_obj(session.graph))

    @app.post("/layout")
    def post_layout(body: Optional[dict] = None):
        body = body or {}
        direction = body.get("direction", Direction.TOP_DOWN.value)
        variant = body.get("variant", "flexible")
        defer = body.get("defer")
        if defer is not None and not isinstance(defer, int):
            raise HTTPException(status_code=400, detail="'defer' must be an integer")
        with session.lock:
            try:
                session.compute(direction, variant, defer)
            except ValueError as exc:
                raise HTTPException(status_code=400, detail=str(exc))
            return JSONResponse(
                layout_to_obj(
                    session.effective_graph,
                    session.layout,
                    session.absolute,
                    session.config,
                )
            )

    @app.post("/expand")
    def post_expand(body: Optional[dict] = None):
        if not isinstance(body, dict) or not isinstance(body.get("nodeId"), str):
            raise HTTPException(status_code=400, detail="body must carry 'nodeId'")
        node_id = body["nodeId"]
        with session.lock:
            session.ensure_layout()
            graph = session.effective_graph
            if node_id not in session.layout.nodes:
                raise HTTPException(status_code=404, detail=f"unknown node {node_id}")
            parent = graph.parent_of(node_id)
            if parent is not None and not session.layout.nodes[parent].laid_out:
                raise HTTPException(
                    status_code=409, detail=f"parent of {node_id} not laid out"
                )
            try:
                result = expand_marked(session.layout, graph, node_id, session.config)
            except LayoutError as exc:
                raise HTTPException(status_code=409, detail=str(exc))
            session.layout = result.layout
            session.absolute = absolute_geometry(graph, session.layout, session.config)
            full = layout_to_obj(graph, session.layout, session.absolute, session.config)
            fragment = {
                "expanded": node_id,
                "notice": result.notice,
                "size": full["size"],
                "nodes": {nid: full["nodes"][nid] for nid in result.changed_nodes},
                "edges": {key: full["edges"][key] for key in result.new_edges},
                "hierarchyEdges": full["hierarchyEdges"],
                "edgeNotes": full["edgeNotes"],
            }
            return JSONResponse(fragment)

    @app.get("/metrics")
    def get_metrics(viewport: str = "600x400", samples: int = 101):
        try:
            w, h = (float(part) for part in viewport.lower().split("x"))
        except ValueError:
            raise HTTPException(status_code=400, detail="viewport must look like 600x400")
        if samples < 2:
            raise HTTPException(status_code=400, detail="samples must be >= 2")
        with session.lock:
            session.ensure_layout()
            series = readability_curve(session.absolute, Viewport(w, h), samples)
        return PlainTextResponse(write_metrics_csv(series), media_type="text/csv")

    return app

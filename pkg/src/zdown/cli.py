"""Command-line entry points."""
from __future__ import annotations

import json
import pathlib
import sys

import click

from .engine import (
    DEFAULT_CONFIG,
    Direction,
    absolute_geometry,
    apply_variant,
    bottom_up_layout,
    top_down_layout,
)
from .errors import ZdownError
from .formats import (
    is_layout_doc,
    parse_graph,
    parse_layout,
    render_svg,
    serialize_graph,
    serialize_layout,
    write_discrepancy_csv,
    write_metrics_csv,
)
from .metrics import Viewport, discrepancy_histogram, evaluate
from .model import CompoundGraph, generate_random_graph, validate

SIZE_GROUPS = (("small", 50), ("medium", 500), ("large", None))


def _size_group(label_count: int) -> str:
    if label_count < 50:
        return "small"
    if label_count < 500:
        return "medium"
    return "large"


def _load_graph(path: pathlib.Path) -> CompoundGraph:
    graph = parse_graph(path.read_text())
    report = validate(graph)
    if not report.ok:
        raise ZdownError(
            "invalid graph: " + "; ".join(report.violations)
        )
    return graph


def _compute_layout(graph, direction, variant, defer):
    if direction == Direction.BOTTOM_UP.value:
        return graph, bottom_up_layout(graph, DEFAULT_CONFIG)
    effective = apply_variant(graph, variant)
    marked = None
    if defer is not None:
        marked = lambda nid: effective.depth_of(nid) < defer
    return effective, top_down_layout(effective, marked=marked, config=DEFAULT_CONFIG)


def _parse_viewport(text: str) -> Viewport:
    try:
        w, h = (float(part) for part in text.lower().split("x"))
    except ValueError:
        raise click.BadParameter("viewport must look like 600x400")
    return Viewport(w, h)


@click.group()
def main():
    """Compound-graph layout with top-down scaling and zoom metrics."""


@main.command("layout")
@click.argument("input_file", type=click.Path(exists=True, path_type=pathlib.Path))
@click.option(
    "--direction",
    "-d",
    type=click.Choice(["bottom-up", "top-down"]),
    default="top-down",
    show_default=True,
)
@click.option(
    "--variant",
    "-v",
    type=click.Choice(["flexible", "lookahead", "fixed"]),
    default="flexible",
    show_default=True,
)
@click.option("--defer", "defer_depth", type=int, default=None,
              help="Defer layout of nodes below this containment depth.")
@click.option("-o", "--output", type=click.Path(path_type=pathlib.Path), required=True)
def cmd_layout(input_file, direction, variant, defer_depth, output):
    """Lay out a graph document and write a layout document."""
    try:
        graph = _load_graph(input_file)
        effective, layout = _compute_layout(graph, direction, variant, defer_depth)
        output.write_text(serialize_layout(effective, layout))
    except ZdownError as exc:
        raise click.ClickException(str(exc))
    click.echo(f"wrote {output}")


@main.command("metrics")
@click.argument("input_path", type=click.Path(exists=True, path_type=pathlib.Path))
@click.option("--direction", "-d", type=click.Choice(["bottom-up", "top-down"]),
              default="top-down", show_default=True)
@click.option("--variant", "-v", type=click.Choice(["flexible", "lookahead", "fixed"]),
              default="flexible", show_default=True)
@click.option("--viewport", default="600x400", show_default=True)
@click.option("--samples", type=int, default=101, show_default=True)
@click.option("-o", "--output", type=click.Path(path_type=pathlib.Path), required=True)
def cmd_metrics(input_path, direction, variant, viewport, samples, output):
    """Readability and discrepancy CSVs for a graph, layout, or directory."""
    vp = _parse_viewport(viewport)
    try:
        if input_path.is_dir():
            _batch_metrics(input_path, direction, variant, vp, samples, output)
        else:
            text = input_path.read_text()
            doc = json.loads(text)
            if is_layout_doc(doc):
                graph, layout = parse_layout(text)
            else:
                graph = _load_graph(input_path)
                graph, layout = _compute_layout(graph, direction, variant, None)
            absolute = absolute_geometry(graph, layout)
            series = evaluate(absolute, graph, vp, samples)
            output.write_text(write_metrics_csv(series))
            disc_path = output.with_name(output.stem + "_discrepancy.csv")
            disc_path.write_text(write_discrepancy_csv(series.discrepancies))
            click.echo(f"wrote {output} and {disc_path}")
    except ZdownError as exc:
        raise click.ClickException(str(exc))


def _batch_metrics(directory, direction, variant, vp, samples, output):
    """Aggregate mean readability per z over all graphs, grouped by label count."""
    groups: dict[str, list] = {}
    histograms: dict[str, list] = {}
    for path in sorted(directory.glob("*.json")):
        graph = _load_graph(path)
        effective, layout = _compute_layout(graph, direction, variant, None)
        absolute = absolute_geometry(effective, layout)
        series = evaluate(absolute, effective, vp, samples)
        group = _size_group(effective.label_count())
        groups.setdefault(group, []).append(series)
        histograms.setdefault(group, []).append(
            discrepancy_histogram(absolute, effective)
        )
    if not groups:
        raise ZdownError(f"no .json graph documents in {directory}")
    lines = ["group,z,mean_R,graphs"]
    for group in ("small", "medium", "large"):
        if group not in groups:
            continue
        members = groups[group]
        for i in range(samples):
            z = members[0].rows[i].z
            mean_r = sum(s.rows[i].R for s in members) / len(members)
            lines.append(f"{group},{z:.6f},{mean_r:.6f},{len(members)}")
    output.write_text("\n".join(lines) + "\n")
    disc_path = output.with_name(output.stem + "_discrepancy.csv")
    disc_lines = ["group,bin_lo,bin_hi,count,outliers"]
    for group in ("small", "medium", "large"):
        if group not in histograms:
            continue
        hs = histograms[group]
        width = hs[0].bin_width
        for b in range(len(hs[0].counts)):
            total = sum(h.counts[b] for h in hs)
            disc_lines.append(
                f"{group},{b * width:.1f},{(b + 1) * width:.1f},{total},"
            )
        disc_lines.append(
            f"{group},,,," + str(sum(h.outliers for h in hs))
        )
    disc_path.write_text("\n".join(disc_lines) + "\n")
    click.echo(f"wrote {output} and {disc_path}")


@main.command("render")
@click.argument("input_file", type=click.Path(exists=True, path_type=pathlib.Path))
@click.option("-o", "--output", type=click.Path(path_type=pathlib.Path), required=True)
def cmd_render(input_file, output):
    """Render a layout document to SVG."""
    try:
        graph, layout = parse_layout(input_file.read_text())
        output.write_text(render_svg(graph, layout))
    except ZdownError as exc:
        raise click.ClickException(str(exc))
    click.echo(f"wrote {output}")


@main.command("generate")
@click.option("--seed", type=int, default=1, show_default=True)
@click.option("--depth", type=int, default=3, show_default=True)
@click.option("--children", type=int, default=4, show_default=True)
@click.option("--label-prob", type=float, default=0.5, show_default=True)
@click.option("--fixed-levels", is_flag=True, default=False)
@click.option("-o", "--output", type=click.Path(path_type=pathlib.Path), required=True)
def cmd_generate(seed, depth, children, label_prob, fixed_levels, output):
    """Write a synthetic random graph document."""
    graph = generate_random_graph(seed, depth, children, label_prob, fixed_levels)
    output.write_text(serialize_graph(graph))
    click.echo(f"wrote {output} ({len(graph.nodes)} nodes)")


@main.command("serve")
@click.argument("input_file", type=click.Path(exists=True, path_type=pathlib.Path))
@click.option("--port", type=int, default=8000, envvar="ZDOWN_PORT", show_default=True,
              help="Port to listen on; env var ZDOWN_PORT overrides.")
@click.option("--host", default="127.0.0.1", show_default=True)
def cmd_serve(input_file, port, host):
    """Serve a graph for the interactive viewer."""
    import uvicorn

    from .service import create_app

    try:
        graph = _load_graph(input_file)
    except ZdownError as exc:
        raise click.ClickException(str(exc))
    uvicorn.run(create_app(graph), host=host, port=port)


if __name__ == "__main__":
    sys.exit(main())

/** Retained scene built from a layout document.
 *
 * The scene keeps one item per node, using the engine's absolute geometry
 * verbatim so client and server agree on coordinates by construction.
 * Splicing an /expand fragment only ever adds items or flips an item's
 * deferred flag — geometry of existing items is taken from the fragment's
 * entries, which the engine guarantees to be unchanged.
 */

import type { ExpandFragment, GraphNodeDoc, LayoutDoc } from "./types.js";
import type { ViewState } from "./view.js";

export interface SceneItem {
  id: string;
  /** Absolute layout-space rectangle [x, y, w, h]. */
  rect: [number, number, number, number];
  cumulativeScale: number;
  laidOut: boolean;
  depth: number;
  title?: string;
  /** Unscaled label height; on-screen height is this × scale × zoom. */
  titleUnitHeight: number;
  isCore: boolean;
}

export interface DrawBox {
  id: string;
  x: number;
  y: number;
  width: number;
  height: number;
  deferred: boolean;
  isCore: boolean;
  /** Title to draw, or undefined when filtered out as illegible. */
  title?: string;
  titlePx: number;
}

export class Scene {
  private doc: LayoutDoc;
  private meta = new Map<
    string,
    { depth: number; title?: string; titleUnitHeight: number; isCore: boolean }
  >();

  constructor(doc: LayoutDoc) {
    this.doc = doc;
    this.indexGraph(doc.graph, 0);
  }

  private indexGraph(node: GraphNodeDoc, depth: number): void {
    this.meta.set(node.id, {
      depth,
      title: node.label?.text,
      titleUnitHeight: node.label?.height ?? 12,
      isCore: node.core ?? false,
    });
    for (const child of node.children ?? []) {
      this.indexGraph(child, depth + 1);
    }
  }

  get size(): [number, number] {
    return this.doc.size;
  }

  get direction(): string {
    return this.doc.direction;
  }

  nodeIds(): string[] {
    return Object.keys(this.doc.nodes);
  }

  item(id: string): SceneItem | undefined {
    const entry = this.doc.nodes[id];
    const meta = this.meta.get(id);
    if (!entry || !meta || !entry.absoluteRect) {
      return undefined;
    }
    return {
      id,
      rect: entry.absoluteRect,
      cumulativeScale: entry.cumulativeScale ?? 1,
      laidOut: entry.laidOut,
      depth: meta.depth,
      title: meta.title,
      titleUnitHeight: meta.titleUnitHeight,
      isCore: meta.isCore,
    };
  }

  /** All items, parents before children. */
  items(): SceneItem[] {
    const out: SceneItem[] = [];
    for (const id of this.nodeIds()) {
      const item = this.item(id);
      if (item) {
        out.push(item);
      }
    }
    out.sort((a, b) => a.depth - b.depth || a.id.localeCompare(b.id));
    return out;
  }

  deferredIds(): string[] {
    return this.nodeIds().filter((id) => !this.doc.nodes[id].laidOut);
  }

  cumulativeScales(): number[] {
    return this.items().map((it) => it.cumulativeScale);
  }

  /** Merge an /expand fragment into the document in place. */
  splice(fragment: ExpandFragment): void {
    for (const [id, entry] of Object.entries(fragment.nodes)) {
      this.doc.nodes[id] = entry;
    }
    for (const [key, edge] of Object.entries(fragment.edges)) {
      this.doc.edges[key] = edge;
    }
    this.doc.hierarchyEdges = fragment.hierarchyEdges;
    this.doc.edgeNotes = fragment.edgeNotes;
  }
}

/** Minimum on-screen text height before a label is drawn, in pixels. */
export const LABEL_MIN_PX = 4;

/** Project the scene through the view into screen-space draw commands. */
export function buildFrame(scene: Scene, view: ViewState): DrawBox[] {
  const boxes: DrawBox[] = [];
  for (const item of scene.items()) {
    const [x, y, w, h] = item.rect;
    const titlePx = item.titleUnitHeight * item.cumulativeScale * view.zoom;
    boxes.push({
      id: item.id,
      x: view.toScreenX(x),
      y: view.toScreenY(y),
      width: w * view.zoom,
      height: h * view.zoom,
      deferred: !item.laidOut,
      isCore: item.isCore,
      title: item.title !== undefined && titlePx >= LABEL_MIN_PX ? item.title : undefined,
      titlePx,
    });
  }
  return boxes;
}

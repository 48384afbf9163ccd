/** Pan/zoom state and the HUD's zoom-level readout.
 *
 * `zoom` is screen pixels per layout unit, i.e. the diagram's current
 * render scale. The z readout inverts the two-branch scale formula
 * (z=1 zoom-to-fit, z=0 smallest details at intended size).
 */

export interface ViewOptions {
  /** On-screen scale above which a deferred node is expanded. */
  expandThreshold?: number;
  minZoom?: number;
  maxZoom?: number;
}

export class ViewState {
  panX = 0;
  panY = 0;
  zoom = 1;
  readonly expandThreshold: number;
  readonly minZoom: number;
  readonly maxZoom: number;

  constructor(options: ViewOptions = {}) {
    this.expandThreshold = options.expandThreshold ?? 0.5;
    this.minZoom = options.minZoom ?? 1e-4;
    this.maxZoom = options.maxZoom ?? 1e4;
  }

  /** Multiply the zoom by `factor`, keeping the screen point fixed. */
  zoomAt(screenX: number, screenY: number, factor: number): void {
    const next = clamp(this.zoom * factor, this.minZoom, this.maxZoom);
    const applied = next / this.zoom;
    // the layout point under the cursor must stay under the cursor
    this.panX = screenX - (screenX - this.panX) * applied;
    this.panY = screenY - (screenY - this.panY) * applied;
    this.zoom = next;
  }

  panBy(dx: number, dy: number): void {
    this.panX += dx;
    this.panY += dy;
  }

  /** Pan/zoom so the whole diagram fits the viewport, centered. */
  fit(diagramW: number, diagramH: number, viewW: number, viewH: number): void {
    this.zoom = clamp(
      Math.min(viewW / diagramW, viewH / diagramH),
      this.minZoom,
      this.maxZoom,
    );
    this.panX = (viewW - diagramW * this.zoom) / 2;
    this.panY = (viewH - diagramH * this.zoom) / 2;
  }

  toScreenX(layoutX: number): number {
    return this.panX + layoutX * this.zoom;
  }

  toScreenY(layoutY: number): number {
    return this.panY + layoutY * this.zoom;
  }
}

function clamp(value: number, lo: number, hi: number): number {
  return Math.min(Math.max(value, lo), hi);
}

/** Diagram render scale at zoom level z for diagram constant a. */
export function diagramScale(a: number, z: number): number {
  if (a <= 1) {
    return z * (a - 1) + 1;
  }
  return (1 - z) * (a - 1) + 1;
}

/**
 * Zoom constant of a layout: 1 / smallest cumulative scale for top-down
 * documents, the capped zoom-to-fit scale for bottom-up ones.
 */
export function zoomConstant(
  direction: string,
  size: [number, number],
  cumulativeScales: number[],
  viewW: number,
  viewH: number,
): number {
  if (direction === "bottom-up") {
    return Math.min(viewW / size[0], viewH / size[1], 1);
  }
  const minScale = Math.min(...cumulativeScales);
  return minScale > 0 ? 1 / minScale : 1;
}

/** Invert the scale formula: current render scale -> z, clamped to [0, 1]. */
export function zLevel(a: number, renderScale: number): number {
  if (a === 1) {
    return 1;
  }
  const z = a <= 1 ? (renderScale - 1) / (a - 1) : 1 - (renderScale - 1) / (a - 1);
  return Math.min(Math.max(z, 0), 1);
}

/** Drives incremental layout: when a deferred node's on-screen scale
 * crosses the view's threshold, request its interior exactly once and
 * splice the response into the scene.
 */

import type { Scene } from "./scene.js";
import type { Transport } from "./types.js";
import type { ViewState } from "./view.js";

export class ExpansionController {
  /** Nodes requested this session; never re-requested, even after errors
   * resolve or the user zooms away before the response lands. */
  private requested = new Set<string>();
  private inFlight = new Set<string>();

  constructor(
    private scene: Scene,
    private transport: Transport,
    private onSplice?: () => void,
  ) {}

  /** Deferred nodes whose content would be legible at the current zoom. */
  crossedNodes(view: ViewState): string[] {
    const out: string[] = [];
    for (const id of this.scene.deferredIds()) {
      const item = this.scene.item(id);
      if (!item) {
        continue;
      }
      if (item.cumulativeScale * view.zoom > view.expandThreshold) {
        out.push(id);
      }
    }
    return out;
  }

  /** Issue at most one /expand per newly crossed node; returns the ids
   * actually requested this call. */
  update(view: ViewState): string[] {
    const issued: string[] = [];
    for (const id of this.crossedNodes(view)) {
      if (this.requested.has(id)) {
        continue;
      }
      this.requested.add(id);
      this.inFlight.add(id);
      issued.push(id);
      this.transport
        .expand(id)
        .then((fragment) => {
          this.scene.splice(fragment);
          this.onSplice?.();
        })
        .catch(() => {
          // allow a retry on the next update
          this.requested.delete(id);
        })
        .finally(() => {
          this.inFlight.delete(id);
        });
    }
    return issued;
  }

  pendingCount(): number {
    return this.inFlight.size;
  }

  requestedIds(): string[] {
    return [...this.requested];
  }
}

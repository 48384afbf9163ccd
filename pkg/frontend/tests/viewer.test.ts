import { readFileSync } from "node:fs";
import { join } from "node:path";
import { beforeEach, describe, expect, it } from "vitest";

import { ExpansionController } from "../src/expansion.js";
import { buildFrame, Scene } from "../src/scene.js";
import { diagramScale, ViewState, zLevel, zoomConstant } from "../src/view.js";
import type { ExpandFragment, LayoutDoc, Transport } from "../src/types.js";

const FIXTURES = join(__dirname, "fixtures");

function loadJson<T>(name: string): T {
  return JSON.parse(readFileSync(join(FIXTURES, name), "utf-8")) as T;
}

function deferredDoc(): LayoutDoc {
  return loadJson<LayoutDoc>("balloon-defer1.json");
}

const fullDoc = loadJson<LayoutDoc>("balloon-full.json");
const fragments = loadJson<Record<string, ExpandFragment>>(
  "balloon-fragments.json",
);

/** Serves canned fragments; counts requests and can hold responses. */
class StubTransport implements Transport {
  calls = new Map<string, number>();
  private holds = new Map<string, (frag: ExpandFragment) => void>();
  failOnce = new Set<string>();

  constructor(private manual = false) {}

  layout(): Promise<LayoutDoc> {
    return Promise.resolve(deferredDoc());
  }

  expand(nodeId: string): Promise<ExpandFragment> {
    this.calls.set(nodeId, (this.calls.get(nodeId) ?? 0) + 1);
    if (this.failOnce.delete(nodeId)) {
      return Promise.reject(new Error("boom"));
    }
    const fragment = structuredClone(fragments[nodeId]);
    if (!fragment) {
      return Promise.reject(new Error(`no fixture for ${nodeId}`));
    }
    if (this.manual) {
      return new Promise((resolve) => this.holds.set(nodeId, resolve));
    }
    return Promise.resolve(fragment);
  }

  release(nodeId: string): void {
    const resolve = this.holds.get(nodeId);
    if (!resolve) {
      throw new Error(`nothing held for ${nodeId}`);
    }
    this.holds.delete(nodeId);
    resolve(structuredClone(fragments[nodeId]));
  }

  totalCalls(): number {
    let n = 0;
    for (const c of this.calls.values()) {
      n += c;
    }
    return n;
  }
}

const flush = () => new Promise((resolve) => setTimeout(resolve, 0));

describe("incremental expansion", () => {
  let scene: Scene;
  let transport: StubTransport;
  let view: ViewState;
  let controller: ExpansionController;

  beforeEach(() => {
    scene = new Scene(deferredDoc());
    transport = new StubTransport();
    view = new ViewState();
    view.zoom = 0.4; // deferred nodes sit just under the 0.5 threshold
    controller = new ExpansionController(scene, transport);
  });

  it("issues exactly one request per crossed node when zooming in", async () => {
    expect(controller.update(view)).toEqual([]);
    // zoom into the first branch, doubling the on-screen scale
    view.zoomAt(450, 250, 2);
    const issued = controller.update(view);
    expect(issued.sort()).toEqual(scene.deferredIds().sort());
    await flush();
    for (const id of issued) {
      expect(transport.calls.get(id)).toBe(1);
    }
  });

  it("keeps previously rendered boxes at identical coordinates after splice", async () => {
    const before = new Map(
      buildFrame(scene, view).map((b) => [b.id, [b.x, b.y, b.width, b.height]]),
    );
    view.zoomAt(450, 250, 2);
    controller.update(view);
    await flush();
    const after = new Map(
      buildFrame(scene, view).map((b) => [b.id, [b.x, b.y, b.width, b.height]]),
    );
    expect(after.size).toBeGreaterThan(before.size);
    const zoomRatio = view.zoom / 0.4;
    for (const [id, [x, y, w, h]] of before) {
      const [x2, y2, w2, h2] = after.get(id)!;
      // same layout rect, projected through the new view
      expect(w2).toBeCloseTo(w * zoomRatio, 9);
      expect(h2).toBeCloseTo(h * zoomRatio, 9);
      expect(x2 - view.panX).toBeCloseTo((x - 0) * zoomRatio, 6);
      expect(y2 - view.panY).toBeCloseTo((y - 0) * zoomRatio, 6);
    }
  });

  it("leaves existing layout entries untouched by the splice", async () => {
    const snapshot = structuredClone(
      Object.fromEntries(
        scene.nodeIds().map((id) => [id, scene.item(id)!.rect]),
      ),
    );
    view.zoom = 1.2;
    controller.update(view);
    await flush();
    for (const [id, rect] of Object.entries(snapshot)) {
      expect(scene.item(id)!.rect).toEqual(rect);
    }
  });

  it("never sends a duplicate request for the same node", async () => {
    const held = new StubTransport(true);
    const ctl = new ExpansionController(scene, held);
    view.zoom = 1.2;
    ctl.update(view);
    ctl.update(view); // still in flight
    expect(held.totalCalls()).toBe(scene.deferredIds().length);
    for (const id of held.calls.keys()) {
      held.release(id);
    }
    await flush();
    ctl.update(view); // already expanded
    expect(held.totalCalls()).toBe(5);
  });

  it("splices a response that lands after zooming back out", async () => {
    const held = new StubTransport(true);
    const ctl = new ExpansionController(scene, held);
    view.zoom = 1.2;
    const [first] = ctl.update(view);
    view.zoom = 0.1; // user zooms away before the response arrives
    held.release(first);
    await flush();
    expect(scene.item(first)!.laidOut).toBe(true);
    ctl.update(view);
    expect(held.calls.get(first)).toBe(1);
  });

  it("retries after a failed request", async () => {
    transport.failOnce.add("t.0__group");
    view.zoom = 1.2;
    controller.update(view);
    await flush();
    expect(scene.item("t.0__group")!.laidOut).toBe(false);
    controller.update(view);
    await flush();
    expect(scene.item("t.0__group")!.laidOut).toBe(true);
    expect(transport.calls.get("t.0__group")).toBe(2);
  });

  it("expanding everything reproduces the one-shot layout document", async () => {
    view.zoom = 1.2;
    controller.update(view);
    await flush();
    // the balloon graph is fully laid out after one wave of expansions
    expect(scene.deferredIds()).toEqual([]);
    expect(scene.nodeIds().sort()).toEqual(Object.keys(fullDoc.nodes).sort());
    for (const id of scene.nodeIds()) {
      expect(scene.item(id)!.rect).toEqual(fullDoc.nodes[id].absoluteRect);
    }
  });
});

describe("scene rendering", () => {
  it("marks deferred nodes and doubles sizes under 2x zoom", () => {
    const scene = new Scene(deferredDoc());
    const view = new ViewState();
    view.zoom = 0.25;
    const small = buildFrame(scene, view);
    expect(small.some((b) => b.deferred)).toBe(true);
    view.zoomAt(0, 0, 2);
    const large = new Map(buildFrame(scene, view).map((b) => [b.id, b]));
    for (const box of small) {
      expect(large.get(box.id)!.width).toBeCloseTo(box.width * 2, 9);
      expect(large.get(box.id)!.height).toBeCloseTo(box.height * 2, 9);
    }
  });

  it("hides labels below the 4px legibility floor", () => {
    const scene = new Scene(deferredDoc());
    const view = new ViewState();
    view.zoom = 0.2; // 12-unit titles at scale 1 project to 2.4px
    for (const box of buildFrame(scene, view)) {
      expect(box.title).toBeUndefined();
    }
    view.zoom = 1;
    const titled = buildFrame(scene, view).filter((b) => b.title !== undefined);
    expect(titled.length).toBeGreaterThan(0);
  });
});

describe("zoom HUD", () => {
  const scene = new Scene(structuredClone(fullDoc));
  const a = zoomConstant(scene.direction, scene.size, scene.cumulativeScales(), 600, 400);

  it("reports z=1 at zoom-to-fit", () => {
    const view = new ViewState();
    view.fit(scene.size[0], scene.size[1], 600, 400);
    expect(zLevel(a, view.zoom)).toBe(1);
  });

  it("inverts the scale formula within 1e-3 across the z grid", () => {
    expect(a).toBeGreaterThan(1);
    for (let i = 0; i <= 100; i++) {
      const z = i / 100;
      expect(Math.abs(zLevel(a, diagramScale(a, z)) - z)).toBeLessThan(1e-3);
    }
  });

  it("handles the bottom-up branch", () => {
    const aSmall = zoomConstant("bottom-up", [1200, 800], [1, 1], 600, 400);
    expect(aSmall).toBeCloseTo(0.5, 9);
    expect(zLevel(aSmall, diagramScale(aSmall, 0.25))).toBeCloseTo(0.25, 9);
  });
});

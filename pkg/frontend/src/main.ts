/** Browser entry point: canvas rendering loop, wheel/drag handlers, HUD. */

import { HttpTransport } from "./client.js";
import { ExpansionController } from "./expansion.js";
import { buildFrame, Scene } from "./scene.js";
import { diagramScale, ViewState, zLevel, zoomConstant } from "./view.js";

const DEFER_DEPTH = 1;

async function start(): Promise<void> {
  const canvas = document.getElementById("stage") as HTMLCanvasElement;
  const hud = document.getElementById("hud") as HTMLElement;
  const ctx = canvas.getContext("2d")!;
  canvas.width = canvas.clientWidth;
  canvas.height = canvas.clientHeight;

  const transport = new HttpTransport();
  const doc = await transport.layout({ defer: DEFER_DEPTH });
  const scene = new Scene(doc);
  const view = new ViewState();
  view.fit(scene.size[0], scene.size[1], canvas.width, canvas.height);
  const controller = new ExpansionController(scene, transport, draw);
  const a = zoomConstant(
    scene.direction,
    scene.size,
    scene.cumulativeScales(),
    canvas.width,
    canvas.height,
  );

  function draw(): void {
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    for (const box of buildFrame(scene, view)) {
      ctx.fillStyle = box.isCore ? "#d04040" : box.deferred ? "#f4f4f4" : "#ffffff";
      ctx.globalAlpha = 0.9;
      ctx.fillRect(box.x, box.y, box.width, box.height);
      ctx.globalAlpha = 1;
      ctx.strokeStyle = box.deferred ? "#aaaaaa" : "#333333";
      ctx.strokeRect(box.x, box.y, box.width, box.height);
      if (box.title !== undefined) {
        ctx.fillStyle = "#111111";
        ctx.font = `${box.titlePx}px sans-serif`;
        ctx.fillText(box.title, box.x + 4, box.y + box.titlePx - 2);
      }
    }
    const z = zLevel(a, view.zoom);
    hud.textContent =
      `z=${z.toFixed(3)}  s_d=${diagramScale(a, z).toFixed(3)}` +
      (controller.pendingCount() ? `  loading ${controller.pendingCount()}…` : "");
  }

  canvas.addEventListener("wheel", (ev) => {
    ev.preventDefault();
    view.zoomAt(ev.offsetX, ev.offsetY, Math.pow(1.0015, -ev.deltaY));
    controller.update(view);
    draw();
  });

  let dragging = false;
  canvas.addEventListener("pointerdown", () => (dragging = true));
  canvas.addEventListener("pointerup", () => (dragging = false));
  canvas.addEventListener("pointermove", (ev) => {
    if (dragging) {
      view.panBy(ev.movementX, ev.movementY);
      draw();
    }
  });

  controller.update(view);
  draw();
}

start().catch((err) => {
  const hud = document.getElementById("hud");
  if (hud) {
    hud.textContent = `failed to load: ${err}`;
  }
});

/**
 * Browser entry: wires sliders, the target pad, and playback onto the
 * protocol client. Start the backend and the bridge first:
 *
 *   coulink serve --port 7710
 *   npm run bridge        # ws://localhost:7711 -> tcp 7710
 */

import { ProtocolClient, type ServerMessage } from "./protocol.js";
import {
  applyServer,
  initialState,
  pickTargetCommand,
  sliderCommand,
  type PanelState,
} from "./state.js";
import { isAdmissible, regionOutline } from "./region.js";
import { fitPoints, pathThrough, polygonPoints, project } from "./render.js";
import { WebSocketTransport } from "./transport.js";

const BRIDGE_URL = "ws://localhost:7711";
const VIEW = { width: 420, height: 360, pad: 24 };
const PAD_VIEW = { width: 260, height: 260, pad: 18 };
const DEFAULT_LINKAGE = [1.0, 0.9, 1.0, 0.85, 0.95];
const NAV_STEPS = 100;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function run(): void {
  let state: PanelState = initialState();
  const transport = new WebSocketTransport(BRIDGE_URL);
  const client = new ProtocolClient(transport);

  const pentagon = el<HTMLElement>("pentagon");
  const energyOut = el<HTMLElement>("energy");
  const statusOut = el<HTMLElement>("status");
  const sliderS = el<HTMLInputElement>("slider-s");
  const sliderT = el<HTMLInputElement>("slider-t");
  const outS = el<HTMLElement>("value-s");
  const outT = el<HTMLElement>("value-t");
  const padShade = el<HTMLElement>("pad-region");
  const padMarker = el<HTMLElement>("pad-marker");
  const padCurrent = el<HTMLElement>("pad-current");
  const pad = el<HTMLElement>("pad");
  const inset = el<HTMLElement>("charge-path");

  const chargeTrail: Array<[number, number]> = [];

  function render(): void {
    statusOut.textContent = state.lastError
      ? `error: ${state.lastError}`
      : state.navigating
        ? "navigating"
        : state.connection;
    if (state.rendered) {
      const fit = fitPoints(
        state.rendered.vertices.map(([x, y]) => [x, y] as [number, number]),
        VIEW,
      );
      pentagon.setAttribute("points", polygonPoints(state.rendered.vertices, fit));
      energyOut.textContent = `E = ${state.rendered.E.toFixed(6)}  s = ${state.rendered.s.toFixed(3)}  t = ${state.rendered.t.toFixed(3)}`;
      sliderS.value = String(state.sliders.s);
      sliderT.value = String(state.sliders.t);
      outS.textContent = state.sliders.s.toFixed(3);
      outT.textContent = state.sliders.t.toFixed(3);
      chargeTrail.push([state.rendered.s, state.rendered.t]);
      if (chargeTrail.length > 400) chargeTrail.shift();
      const cfit = fitPoints(chargeTrail, PAD_VIEW);
      inset.setAttribute(
        "d",
        chargeTrail
          .map(([s, t], i) => {
            const [px, py] = project(cfit, s, t);
            return `${i === 0 ? "M" : "L"}${px.toFixed(1)} ${py.toFixed(1)}`;
          })
          .join(" "),
      );
    }
    if (state.region) {
      const outline = regionOutline(state.region);
      const fit = padFit();
      padShade.setAttribute("d", pathThrough(outline, fit));
      if (state.rendered) {
        const b2 = Math.sqrt(sq(state.rendered.vertices, 0, 2));
        const b4 = Math.sqrt(sq(state.rendered.vertices, 2, 4));
        const [cx, cy] = project(fit, b2, b4);
        padCurrent.setAttribute("cx", cx.toFixed(1));
        padCurrent.setAttribute("cy", cy.toFixed(1));
      }
      if (state.target) {
        const [mx, my] = project(fit, state.target.b2, state.target.b4);
        padMarker.setAttribute("cx", mx.toFixed(1));
        padMarker.setAttribute("cy", my.toFixed(1));
        padMarker.setAttribute("visibility", "visible");
      } else {
        padMarker.setAttribute("visibility", "hidden");
      }
    }
  }

  function sq(vertices: number[][], i: number, j: number): number {
    const dx = vertices[i][0] - vertices[j][0];
    const dy = vertices[i][1] - vertices[j][1];
    return dx * dx + dy * dy;
  }

  function padFit() {
    return fitPoints(regionOutline(state.region!), PAD_VIEW);
  }

  client.onMessage((msg: ServerMessage) => {
    state = applyServer(state, msg);
    render();
  });

  function onSlider(): void {
    const { state: next, message } = sliderCommand(
      state,
      Number(sliderS.value),
      Number(sliderT.value),
    );
    state = next;
    if (message && message.type === "set_charges") {
      client.setCharges(message.s, message.t);
    }
    render();
  }
  sliderS.addEventListener("input", onSlider);
  sliderT.addEventListener("input", onSlider);

  pad.addEventListener("click", (ev: MouseEvent) => {
    if (!state.region) return;
    const rect = pad.getBoundingClientRect();
    const fit = padFit();
    const b2 = (ev.clientX - rect.left - fit.tx) / fit.scale;
    const b4 = (fit.ty - (ev.clientY - rect.top)) / fit.scale;
    const ok = isAdmissible(state.region, b2, b4);
    const { state: next, message } = pickTargetCommand(state, b2, b4, NAV_STEPS, ok);
    state = next;
    if (message) client.send(message);
    render();
  });

  client.send({ type: "hello" });
  client.send({ type: "set_linkage", sidelengths: DEFAULT_LINKAGE });
}

if (typeof document !== "undefined") {
  window.addEventListener("DOMContentLoaded", run);
}

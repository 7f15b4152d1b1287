/**
 * Panel state and its reducer.
 *
 * The panel performs no geometry of its own: the rendered configuration is
 * always exactly the vertex list of the last state or trajectory_frame
 * received, and the admissible-region shading comes verbatim from the
 * service's region grid. Slider values track the last server-confirmed
 * charges and revert to them when a request is rejected.
 */

import type {
  FixedCharges,
  Region,
  ServerMessage,
  ClientMessage,
} from "./protocol.js";

export const SLIDER_MIN = 1e-3;
export const SLIDER_MAX = 5.0;

export interface Rendered {
  vertices: number[][];
  E: number;
  s: number;
  t: number;
}

export interface PanelState {
  connection: "idle" | "ready";
  linkage: number[] | null;
  fixedCharges: FixedCharges;
  sliders: { s: number; t: number };
  rendered: Rendered | null;
  region: Region | null;
  playback: Rendered[];
  navigating: boolean;
  doneSteps: number | null;
  lastError: string | null;
  target: { b2: number; b4: number } | null;
}

export function initialState(): PanelState {
  return {
    connection: "idle",
    linkage: null,
    fixedCharges: { q1: 1, q2: 1, q4: 1 },
    sliders: { s: 1, t: 1 },
    rendered: null,
    region: null,
    playback: [],
    navigating: false,
    doneSteps: null,
    lastError: null,
    target: null,
  };
}

export function applyServer(state: PanelState, msg: ServerMessage): PanelState {
  switch (msg.type) {
    case "hello":
      return { ...state, connection: "ready" };
    case "state": {
      const rendered: Rendered = {
        vertices: msg.vertices,
        E: msg.E,
        s: msg.s,
        t: msg.t,
      };
      return {
        ...state,
        connection: "ready",
        linkage: msg.linkage,
        fixedCharges: msg.fixed_charges,
        sliders: { s: msg.s, t: msg.t },
        rendered,
        region: msg.region,
        lastError: null,
      };
    }
    case "trajectory_frame": {
      const rendered: Rendered = {
        vertices: msg.vertices,
        E: msg.E,
        s: msg.s,
        t: msg.t,
      };
      return {
        ...state,
        rendered,
        sliders: { s: msg.s, t: msg.t },
        navigating: true,
        playback: [...state.playback, rendered],
      };
    }
    case "done":
      return { ...state, navigating: false, doneSteps: msg.steps, target: null };
    case "error": {
      // non-modal: keep the last good render, snap sliders back to it
      const sliders = state.rendered
        ? { s: state.rendered.s, t: state.rendered.t }
        : state.sliders;
      return { ...state, lastError: msg.message, navigating: false, sliders };
    }
  }
}

/**
 * Slider handler: clamp into (0, SLIDER_MAX] and emit a set_charges
 * request, or nothing at all when a non-positive value was requested.
 */
export function sliderCommand(
  state: PanelState,
  s: number,
  t: number,
): { state: PanelState; message: ClientMessage | null } {
  if (s <= 0 || t <= 0) {
    return { state, message: null };
  }
  const cs = Math.min(s, SLIDER_MAX);
  const ct = Math.min(t, SLIDER_MAX);
  return {
    state: { ...state, sliders: { s: cs, t: ct } },
    message: { type: "set_charges", s: cs, t: ct },
  };
}

/**
 * Target picker: validate against the admissible region, then emit a
 * navigate request and reset the playback buffer.
 */
export function pickTargetCommand(
  state: PanelState,
  b2: number,
  b4: number,
  steps: number,
  admissible: boolean,
): { state: PanelState; message: ClientMessage | null } {
  if (!admissible) {
    return { state: { ...state, lastError: "target outside admissible region" }, message: null };
  }
  return {
    state: { ...state, target: { b2, b4 }, playback: [], doneSteps: null, navigating: true },
    message: { type: "navigate", target: { b2, b4 }, steps },
  };
}

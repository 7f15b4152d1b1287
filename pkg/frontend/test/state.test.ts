import { describe, expect, it } from "vitest";

import type { StateMsg } from "../src/protocol.js";
import {
  applyServer,
  initialState,
  pickTargetCommand,
  sliderCommand,
  SLIDER_MAX,
} from "../src/state.js";
import { loadTranscript } from "./replay.js";

const session = loadTranscript("session.ndjson");
const someState = session.find(
  (e) => e.dir === "recv" && (e.msg as { type?: string }).type === "state",
)!.msg as unknown as StateMsg;

describe("slider handling", () => {
  it("sends nothing for non-positive values", () => {
    const state = applyServer(initialState(), someState);
    const { message } = sliderCommand(state, 0, 1.0);
    expect(message).toBeNull();
    expect(sliderCommand(state, 1.0, -0.2).message).toBeNull();
  });

  it("clamps to the slider maximum", () => {
    const state = applyServer(initialState(), someState);
    const { message } = sliderCommand(state, 99, 1.0);
    expect(message).toEqual({ type: "set_charges", s: SLIDER_MAX, t: 1.0 });
  });

  it("reverts sliders to the last good render on an error frame", () => {
    let state = applyServer(initialState(), someState);
    const { state: moved } = sliderCommand(state, 2.5, 2.5);
    state = applyServer(moved, { type: "error", message: "nope" });
    expect(state.lastError).toBe("nope");
    expect(state.sliders).toEqual({ s: someState.s, t: someState.t });
    // rendering is untouched by the rejection
    expect(state.rendered!.vertices).toEqual(someState.vertices);
  });
});

describe("target picking", () => {
  it("rejects clicks outside the admissible region without sending", () => {
    const state = applyServer(initialState(), someState);
    const { state: next, message } = pickTargetCommand(state, 9.0, 9.0, 100, false);
    expect(message).toBeNull();
    expect(next.lastError).toContain("admissible");
  });

  it("emits navigate and resets playback for valid targets", () => {
    const state = applyServer(initialState(), someState);
    const { state: next, message } = pickTargetCommand(state, 1.5, 1.6, 100, true);
    expect(message).toEqual({
      type: "navigate",
      target: { b2: 1.5, b4: 1.6 },
      steps: 100,
    });
    expect(next.playback).toEqual([]);
    expect(next.navigating).toBe(true);
    expect(next.target).toEqual({ b2: 1.5, b4: 1.6 });
  });
});

import { describe, expect, it } from "vitest";

import type { DoneMsg, TrajectoryFrameMsg } from "../src/protocol.js";
import { loadTranscript, replay } from "./replay.js";

const transcript = loadTranscript("navigate.ndjson");
const frames = transcript
  .filter((e) => e.dir === "recv" && (e.msg as { type?: string }).type === "trajectory_frame")
  .map((e) => e.msg as unknown as TrajectoryFrameMsg);
const done = transcript
  .filter((e) => e.dir === "recv" && (e.msg as { type?: string }).type === "done")
  .map((e) => e.msg as unknown as DoneMsg)[0];

describe("recorded 100-step navigation", () => {
  it("has the expected golden shape", () => {
    expect(frames.length).toBe(101);
    expect(done.steps).toBe(100);
    expect(done.endpoint_error).toBeLessThan(1e-6);
  });

  it("plays every frame in arrival order and ends on the done payload", () => {
    const { state } = replay(transcript);
    expect(state.playback.length).toBe(frames.length);
    state.playback.forEach((rendered, i) => {
      expect(rendered.vertices).toEqual(frames[i].vertices);
      expect(rendered.s).toBe(frames[i].s);
      expect(rendered.t).toBe(frames[i].t);
    });
    expect(state.navigating).toBe(false);
    expect(state.doneSteps).toBe(done.steps);
    // final render is the last frame, which the trailing get_state confirms
    expect(state.rendered!.vertices).toEqual(frames[frames.length - 1].vertices);
  });

  it("holds the navigate request open across the frame stream", () => {
    const { client } = replay(transcript);
    expect(client.inFlight).toBe(0);
    const sendCount = transcript.filter((e) => e.dir === "send").length;
    const replyCount = transcript.filter(
      (e) => e.dir === "recv" && (e.msg as { type?: string }).type !== "trajectory_frame",
    ).length;
    expect(replyCount).toBe(sendCount);
  });
});

/** Golden-transcript replay harness shared by the protocol tests. */

import { readFileSync } from "node:fs";

import { ProtocolClient, type ClientMessage, type ServerMessage } from "../src/protocol.js";
import { applyServer, initialState, type PanelState } from "../src/state.js";
import { FakeTransport } from "../src/transport.js";

export interface TranscriptEntry {
  dir: "send" | "recv";
  msg: Record<string, unknown>;
}

export function loadTranscript(name: string): TranscriptEntry[] {
  const url = new URL(`./fixtures/${name}`, import.meta.url);
  return readFileSync(url, "utf-8")
    .trim()
    .split("\n")
    .map((line) => JSON.parse(line) as TranscriptEntry);
}

export function loadJson<T>(name: string): T {
  const url = new URL(`./fixtures/${name}`, import.meta.url);
  return JSON.parse(readFileSync(url, "utf-8")) as T;
}

export interface Replay {
  transport: FakeTransport;
  client: ProtocolClient;
  state: PanelState;
  received: ServerMessage[];
}

/**
 * Feed a transcript through a real client over a fake transport: send
 * entries are issued via the client, recv entries injected as server
 * lines, and every outgoing line must match the recorded one.
 */
export function replay(entries: TranscriptEntry[]): Replay {
  const transport = new FakeTransport();
  const client = new ProtocolClient(transport);
  const received: ServerMessage[] = [];
  const ctx: Replay = { transport, client, state: initialState(), received };
  client.onMessage((msg) => {
    ctx.state = applyServer(ctx.state, msg);
    received.push(msg);
  });
  let sent = 0;
  for (const entry of entries) {
    if (entry.dir === "send") {
      client.send(entry.msg as ClientMessage);
      if (transport.sent.length !== sent + 1) {
        throw new Error(`request ${JSON.stringify(entry.msg)} was not sent immediately`);
      }
      sent++;
      const wire = JSON.parse(transport.sent[transport.sent.length - 1]);
      if (JSON.stringify(wire) !== JSON.stringify(entry.msg)) {
        throw new Error(
          `outgoing mismatch: ${JSON.stringify(wire)} vs ${JSON.stringify(entry.msg)}`,
        );
      }
    } else {
      transport.reply(JSON.stringify(entry.msg));
    }
  }
  return ctx;
}

/**
 * Line-delimited JSON protocol client.
 *
 * One JSON object per line in each direction. The client serializes
 * requests: at most one is in flight, replies resolve in order, and a
 * navigate request stays open across its trajectory_frame stream until the
 * final done message. Charge updates collapse (latest wins) so a fast
 * slider drag never queues more than one pending set_charges.
 */

export interface Region {
  k: number[];
  x2_min: number[];
  x2_max: number[];
}

export interface FixedCharges {
  q1: number;
  q2: number;
  q4: number;
}

export interface HelloMsg {
  type: "hello";
  protocol: number;
  service: string;
}

export interface StateMsg {
  type: "state";
  linkage: number[];
  fixed_charges: FixedCharges;
  s: number;
  t: number;
  E: number;
  vertices: number[][];
  diagonals: number[];
  region: Region;
}

export interface TrajectoryFrameMsg {
  type: "trajectory_frame";
  step: number;
  s: number;
  t: number;
  E: number;
  vertices: number[][];
}

export interface DoneMsg {
  type: "done";
  steps: number;
  endpoint_error: number;
}

export interface ErrorMsg {
  type: "error";
  message: string;
}

export type ServerMessage = HelloMsg | StateMsg | TrajectoryFrameMsg | DoneMsg | ErrorMsg;

export interface Target {
  b2: number;
  b4: number;
}

export type ClientMessage =
  | { type: "hello" }
  | { type: "set_linkage"; sidelengths: number[] }
  | { type: "set_charges"; s: number; t: number }
  | { type: "set_fixed_charges"; q1: number; q2: number; q4: number }
  | { type: "stabilize_to"; target: Target }
  | { type: "navigate"; target: Target; steps: number }
  | { type: "get_state" };

/** Transport carrying whole lines; the client owns framing above it. */
export interface Transport {
  send(line: string): void;
  onLine(cb: (line: string) => void): void;
}

export function parseServerLine(line: string): ServerMessage {
  const msg = JSON.parse(line) as ServerMessage;
  if (!msg || typeof msg !== "object" || typeof (msg as { type?: unknown }).type !== "string") {
    throw new Error(`malformed server line: ${line}`);
  }
  return msg;
}

export class ProtocolClient {
  private transport: Transport;
  private queue: ClientMessage[] = [];
  private awaitingReply = false;
  private listeners: Array<(msg: ServerMessage) => void> = [];

  constructor(transport: Transport) {
    this.transport = transport;
    transport.onLine((line) => this.handleLine(line));
  }

  onMessage(cb: (msg: ServerMessage) => void): void {
    this.listeners.push(cb);
  }

  /** Number of requests sent but not yet answered (0 or 1). */
  get inFlight(): number {
    return this.awaitingReply ? 1 : 0;
  }

  get pendingQueue(): number {
    return this.queue.length;
  }

  send(msg: ClientMessage): void {
    this.queue.push(msg);
    this.pump();
  }

  /** Latest-wins charge update: replaces any queued set_charges. */
  setCharges(s: number, t: number): void {
    const idx = this.queue.findIndex((m) => m.type === "set_charges");
    const msg: ClientMessage = { type: "set_charges", s, t };
    if (idx >= 0) {
      this.queue[idx] = msg;
    } else {
      this.queue.push(msg);
    }
    this.pump();
  }

  private pump(): void {
    if (this.awaitingReply || this.queue.length === 0) return;
    const msg = this.queue.shift()!;
    this.awaitingReply = true;
    this.transport.send(JSON.stringify(msg));
  }

  private handleLine(line: string): void {
    const msg = parseServerLine(line);
    for (const cb of this.listeners) cb(msg);
    // trajectory frames stream inside a still-open navigate request
    if (msg.type !== "trajectory_frame") {
      this.awaitingReply = false;
      this.pump();
    }
  }
}

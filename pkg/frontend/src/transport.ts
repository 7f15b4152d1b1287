/**
 * Transports carrying the line protocol.
 *
 * Browsers cannot open raw TCP sockets, so the panel talks through a
 * one-line-per-message WebSocket bridge (bridge.mjs) that relays frames
 * verbatim to the service. Tests use the in-memory FakeTransport.
 */

import type { Transport } from "./protocol.js";

export class WebSocketTransport implements Transport {
  private ws: WebSocket;
  private cbs: Array<(line: string) => void> = [];
  private backlog: string[] = [];
  private open = false;

  constructor(url: string) {
    this.ws = new WebSocket(url);
    this.ws.onopen = () => {
      this.open = true;
      for (const line of this.backlog) this.ws.send(line);
      this.backlog = [];
    };
    this.ws.onmessage = (ev) => {
      for (const part of String(ev.data).split("\n")) {
        const line = part.trim();
        if (line) for (const cb of this.cbs) cb(line);
      }
    };
  }

  send(line: string): void {
    if (this.open) {
      this.ws.send(line);
    } else {
      this.backlog.push(line);
    }
  }

  onLine(cb: (line: string) => void): void {
    this.cbs.push(cb);
  }
}

/** In-memory transport for tests: scripts what the "server" says. */
export class FakeTransport implements Transport {
  sent: string[] = [];
  private cbs: Array<(line: string) => void> = [];

  send(line: string): void {
    this.sent.push(line);
  }

  onLine(cb: (line: string) => void): void {
    this.cbs.push(cb);
  }

  reply(line: string): void {
    for (const cb of this.cbs) cb(line);
  }

  replyJson(msg: unknown): void {
    this.reply(JSON.stringify(msg));
  }
}

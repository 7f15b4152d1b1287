"""Record golden protocol transcripts from a live service instance.

Runs the control service in-process, drives the scripted sessions below,
and writes newline-delimited JSON transcripts ({"dir": "send"|"recv",
"msg": ...}) plus admissible-region probe expectations for the frontend
test suite.  Rerun after any numerical or protocol change:

    python tools/record_fixtures.py
"""

import json
import math
import socket
from pathlib import Path

from coulink.moduli import Linkage, slice_range
from coulink.service import serve_background

FIXTURES = Path(__file__).resolve().parent.parent / "test" / "fixtures"


class Recorder:
    def __init__(self, addr):
        self.sock = socket.create_connection(addr, timeout=60)
        self.file = self.sock.makefile("rw", encoding="utf-8")
        self.lines = []

    def send(self, msg):
        self.file.write(json.dumps(msg) + "\n")
        self.file.flush()
        self.lines.append({"dir": "send", "msg": msg})

    def recv(self):
        line = self.file.readline()
        msg = json.loads(line)
        self.lines.append({"dir": "recv", "msg": msg})
        return msg

    def ask(self, msg):
        self.send(msg)
        return self.recv()

    def dump(self, name):
        path = FIXTURES / name
        path.write_text("".join(json.dumps(entry) + "\n" for entry in self.lines))
        print(f"wrote {path} ({len(self.lines)} lines)")
        self.lines = []

    def close(self):
        self.sock.close()


def record_slider_session(addr):
    rec = Recorder(addr)
    rec.ask({"type": "hello"})
    rec.ask({"type": "set_linkage", "sidelengths": [1, 1, 1, 1, 1]})
    rec.ask({"type": "set_charges", "s": 1.2, "t": 0.9})
    rec.ask({"type": "set_charges", "s": 1.5, "t": 1.1})
    rec.ask({"type": "set_charges", "s": 0.7, "t": 1.3})
    rec.ask({"type": "get_state"})
    rec.dump("session.ndjson")
    rec.close()


def record_navigation(addr):
    rec = Recorder(addr)
    rec.ask({"type": "set_linkage", "sidelengths": [1, 0.9, 1, 0.85, 0.95]})
    rec.send({"type": "navigate", "target": {"b2": 1.5, "b4": 1.35}, "steps": 100})
    while True:
        msg = rec.recv()
        if msg["type"] == "done":
            break
    rec.ask({"type": "get_state"})
    rec.dump("navigate.ndjson")
    rec.close()


def record_region_probes(addr):
    rec = Recorder(addr)
    state = rec.ask({"type": "set_linkage", "sidelengths": [1, 0.9, 1, 0.85, 0.95]})
    region = state["region"]
    rec.close()

    linkage = Linkage((1.0, 0.9, 1.0, 0.85, 0.95))
    probes = []
    ks = region["k"]
    for idx in (0, len(ks) // 4, len(ks) // 2, 3 * len(ks) // 4, len(ks) - 1):
        k = ks[idx]
        sl = slice_range(linkage.normalized(), k / linkage.scale)
        x2_min = sl.x2_min * linkage.scale**2
        x2_max = sl.x2_max * linkage.scale**2
        mid = 0.5 * (x2_min + x2_max)
        for x2, inside in (
            (mid, True),
            (x2_min * 0.9, False),
            (x2_max * 1.1, False),
            (x2_min + 0.02 * (x2_max - x2_min), True),
        ):
            probes.append({"b2": math.sqrt(x2), "b4": k, "inside": inside})
    probes.append({"b2": 1.0, "b4": ks[0] - 0.5, "inside": False})
    probes.append({"b2": 1.0, "b4": ks[-1] + 0.5, "inside": False})
    payload = {"region": region, "probes": probes}
    path = FIXTURES / "region_probes.json"
    path.write_text(json.dumps(payload, indent=1))
    print(f"wrote {path} ({len(probes)} probes)")


def main():
    server, addr = serve_background()
    try:
        record_slider_session(addr)
        record_navigation(addr)
        record_region_probes(addr)
    finally:
        server.shutdown()
        server.server_close()


if __name__ == "__main__":
    main()

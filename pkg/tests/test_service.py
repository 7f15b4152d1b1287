"""Wire protocol: session semantics over a real TCP connection."""

import json
import math
import socket

import numpy as np
import pytest

from coulink.service import serve_background
from coulink.verify import GOLDEN_RATIO


@pytest.fixture(scope="module")
def server():
    srv, addr = serve_background()
    yield addr
    srv.shutdown()
    srv.server_close()


class Client:
    def __init__(self, addr):
        self.sock = socket.create_connection(addr, timeout=30)
        self.file = self.sock.makefile("rw", encoding="utf-8")

    def send(self, msg: dict):
        self.file.write(json.dumps(msg) + "\n")
        self.file.flush()

    def recv(self) -> dict:
        line = self.file.readline()
        assert line, "connection closed unexpectedly"
        return json.loads(line)

    def ask(self, msg: dict) -> dict:
        self.send(msg)
        return self.recv()

    def close(self):
        self.sock.close()


@pytest.fixture
def client(server):
    c = Client(server)
    yield c
    c.close()


def test_hello(client):
    reply = client.ask({"type": "hello"})
    assert reply["type"] == "hello"
    assert reply["protocol"] == 1


def test_set_linkage_establishes_minimum(client):
    state = client.ask({"type": "set_linkage", "sidelengths": [1, 1, 1, 1, 1]})
    assert state["type"] == "state"
    assert state["s"] == 1.0 and state["t"] == 1.0
    assert state["E"] == pytest.approx(5.0 / GOLDEN_RATIO, abs=1e-9)
    assert np.allclose(state["diagonals"], GOLDEN_RATIO**2, atol=1e-8)
    region = state["region"]
    assert len(region["k"]) > 10
    assert all(lo <= hi for lo, hi in zip(region["x2_min"], region["x2_max"]))


def test_set_charges_keeps_invariant(client):
    client.ask({"type": "set_linkage", "sidelengths": [1, 1, 1, 1, 1]})
    state = client.ask({"type": "set_charges", "s": 1.6, "t": 0.8})
    assert state["type"] == "state"
    # invariant: held configuration minimizes the new charges; stabilizing
    # it must reproduce them
    from coulink.moduli import Configuration
    from coulink.stabilizer import stabilize_pentagon

    cfg = Configuration.from_vertices(np.asarray(state["vertices"]))
    sol = stabilize_pentagon(cfg, 1.0, 1.0, 1.0)
    assert sol.s == pytest.approx(1.6, abs=1e-6)
    assert sol.t == pytest.approx(0.8, abs=1e-6)


def test_stabilize_to_target(client):
    client.ask({"type": "set_linkage", "sidelengths": [1, 1, 1, 1, 1]})
    state = client.ask({"type": "stabilize_to", "target": {"b2": 1.55, "b4": 1.62}})
    assert state["type"] == "state"
    assert math.sqrt(state["diagonals"][1]) == pytest.approx(1.55, abs=1e-6)
    assert math.sqrt(state["diagonals"][3]) == pytest.approx(1.62, abs=1e-6)


def test_navigate_streams_frames(client):
    client.ask({"type": "set_linkage", "sidelengths": [1, 1, 1, 1, 1]})
    client.send({"type": "navigate", "target": {"b2": 1.5, "b4": 1.7}, "steps": 20})
    frames = []
    while True:
        msg = client.recv()
        if msg["type"] == "done":
            done = msg
            break
        assert msg["type"] == "trajectory_frame"
        frames.append(msg)
    assert len(frames) == 21
    assert [f["step"] for f in frames] == list(range(21))
    assert done["endpoint_error"] <= 1e-6
    state = client.ask({"type": "get_state"})
    assert state["vertices"] == frames[-1]["vertices"]


def test_malformed_message_keeps_session(client):
    client.ask({"type": "set_linkage", "sidelengths": [1, 1, 1, 1, 1]})
    err = client.ask({"type": "warp_drive"})
    assert err["type"] == "error"
    state = client.ask({"type": "get_state"})
    assert state["type"] == "state"


def test_malformed_json_line_keeps_connection(client):
    client.ask({"type": "set_linkage", "sidelengths": [1, 1, 1, 1, 1]})
    client.file.write("this is not json\n")
    client.file.flush()
    err = client.recv()
    assert err["type"] == "error"
    state = client.ask({"type": "get_state"})
    assert state["type"] == "state"


def test_state_before_linkage_is_error(server):
    c = Client(server)
    try:
        err = c.ask({"type": "get_state"})
        assert err["type"] == "error"
        assert "set_linkage" in err["message"]
    finally:
        c.close()


def test_sessions_are_independent(server):
    a, b = Client(server), Client(server)
    try:
        a.ask({"type": "set_linkage", "sidelengths": [1, 1, 1, 1, 1]})
        b.ask({"type": "set_linkage", "sidelengths": [1, 0.9, 1, 0.9, 1]})
        sa = a.ask({"type": "get_state"})
        sb = b.ask({"type": "get_state"})
        assert sa["linkage"] == [1, 1, 1, 1, 1]
        assert sb["linkage"] == [1, 0.9, 1, 0.9, 1]
    finally:
        a.close()
        b.close()

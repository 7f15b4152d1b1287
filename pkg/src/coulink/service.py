"""Line-delimited JSON control service.

One session per connection; every request line is a JSON object with a
``type`` field and every reply is one or more JSON lines.  The session
invariant is that the held configuration is always the unique convex
minimum for the current charges, so clients never see a stale shape.

Message types
  client: hello, set_linkage, set_charges, set_fixed_charges,
          stabilize_to, navigate, get_state
  server: hello, state, trajectory_frame, done, error

State replies carry the linkage, fixed charges, controlling charges,
energy, vertices, squared diagonals, and the admissible-region grid
(per-diagonal slice intervals) used by clients to shade valid targets.
"""

from __future__ import annotations

import json
import socketserver
import threading

import numpy as np

from .control import ChargePath, lift_path
from .errors import CoulinkError
from .moduli import (
    Configuration,
    Linkage,
    admissible_diagonal_range,
    diagonals,
    reconstruct_pentagon,
    slice_range,
)
from .potential import global_min_convex
from .stabilizer import stabilize_pentagon

__all__ = ["Session", "serve", "PROTOCOL_VERSION"]

PROTOCOL_VERSION = 1
REGION_GRID = 64


class Session:
    """Protocol state machine for one client connection."""

    def __init__(self):
        self.linkage: Linkage | None = None
        self.fixed = (1.0, 1.0, 1.0)
        self.s = 1.0
        self.t = 1.0
        self.config: Configuration | None = None
        self.energy: float | None = None
        self.region: dict | None = None

    # -- helpers ----------------------------------------------------------

    def _charges(self) -> tuple[float, float, float, float, float]:
        q1, q2, q4 = self.fixed
        return (q1, q2, self.t, q4, self.s)

    def _reminimize(self):
        assert self.linkage is not None
        self.config, self.energy = global_min_convex(self.linkage, self._charges())

    def _compute_region(self):
        assert self.linkage is not None
        ln = self.linkage.normalized()
        scale = self.linkage.scale
        k_lo, k_hi = admissible_diagonal_range(ln)
        span = k_hi - k_lo
        ks, x2_lo, x2_hi = [], [], []
        for k in np.linspace(k_lo + 1e-4 * span, k_hi - 1e-4 * span, REGION_GRID):
            try:
                sl = slice_range(ln, float(k))
            except CoulinkError:
                continue
            ks.append(float(k) * scale)
            x2_lo.append(sl.x2_min * scale**2)
            x2_hi.append(sl.x2_max * scale**2)
        self.region = {"k": ks, "x2_min": x2_lo, "x2_max": x2_hi}

    def _state(self) -> dict:
        if self.linkage is None or self.config is None:
            raise CoulinkError("no linkage set; send set_linkage first")
        return {
            "type": "state",
            "linkage": list(self.linkage.sides),
            "fixed_charges": {"q1": self.fixed[0], "q2": self.fixed[1], "q4": self.fixed[2]},
            "s": self.s,
            "t": self.t,
            "E": self.energy,
            "vertices": self.config.to_json(),
            "diagonals": [float(v) for v in diagonals(self.config)],
            "region": self.region,
        }

    def _target_config(self, target) -> Configuration:
        assert self.linkage is not None
        if isinstance(target, dict) and "vertices" in target:
            return Configuration.from_vertices(np.asarray(target["vertices"], dtype=float))
        if isinstance(target, dict) and "b2" in target and "b4" in target:
            return reconstruct_pentagon(self.linkage, float(target["b2"]), float(target["b4"]))
        raise CoulinkError("target needs 'vertices' or 'b2'/'b4'")

    # -- message handling ---------------------------------------------------

    def handle(self, msg: dict):
        """Yield reply messages for one request."""
        kind = msg.get("type")
        if kind == "hello":
            yield {"type": "hello", "protocol": PROTOCOL_VERSION, "service": "coulink"}
        elif kind == "set_linkage":
            self.linkage = Linkage(tuple(float(v) for v in msg["sidelengths"]))
            self.s = float(msg.get("s", 1.0))
            self.t = float(msg.get("t", 1.0))
            self._compute_region()
            self._reminimize()
            yield self._state()
        elif kind == "set_fixed_charges":
            self._require_linkage()
            self.fixed = (float(msg["q1"]), float(msg["q2"]), float(msg["q4"]))
            self._reminimize()
            yield self._state()
        elif kind == "set_charges":
            self._require_linkage()
            self.s = float(msg["s"])
            self.t = float(msg["t"])
            self._reminimize()
            yield self._state()
        elif kind == "stabilize_to":
            self._require_linkage()
            target = self._target_config(msg["target"])
            sol = stabilize_pentagon(target, *self.fixed)
            self.s, self.t = sol.s, sol.t
            self._reminimize()
            yield self._state()
        elif kind == "navigate":
            self._require_linkage()
            target = self._target_config(msg["target"])
            steps = int(msg.get("steps", 100))
            sol0 = stabilize_pentagon(self.config, *self.fixed)
            sol1 = stabilize_pentagon(target, *self.fixed)
            self.s, self.t = sol0.s, sol0.t
            path = ChargePath.segment((sol0.s, sol0.t), (sol1.s, sol1.t), steps)
            traj = lift_path(self.linkage, path, self.config, self.fixed)
            for i, step in enumerate(traj.steps):
                yield {
                    "type": "trajectory_frame",
                    "step": i,
                    "s": step.s,
                    "t": step.t,
                    "E": step.energy,
                    "vertices": step.configuration.to_json(),
                }
            self.s, self.t = sol1.s, sol1.t
            self.config = traj.final
            self.energy = traj.steps[-1].energy
            err = traj.final.max_vertex_distance(target)
            yield {"type": "done", "steps": steps, "endpoint_error": float(err)}
        elif kind == "get_state":
            yield self._state()
        else:
            raise CoulinkError(f"unknown message type {kind!r}")

    def _require_linkage(self):
        if self.linkage is None:
            raise CoulinkError("no linkage set; send set_linkage first")


class _Handler(socketserver.StreamRequestHandler):
    def handle(self):
        session = Session()
        for raw in self.rfile:
            line = raw.decode("utf-8").strip()
            if not line:
                continue
            try:
                msg = json.loads(line)
                replies = list(session.handle(msg))
            except (CoulinkError, ValueError, KeyError, TypeError) as exc:
                replies = [{"type": "error", "message": str(exc) or type(exc).__name__}]
            for reply in replies:
                self.wfile.write((json.dumps(reply) + "\n").encode("utf-8"))
            self.wfile.flush()


class _Server(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True


def serve(host: str = "127.0.0.1", port: int = 7710, ready_callback=None):
    """Run the control service until interrupted.

    ``ready_callback`` receives the bound (host, port) once listening,
    which also makes ephemeral ports (port=0) usable in tests.
    """
    with _Server((host, port), _Handler) as server:
        if ready_callback is not None:
            ready_callback(server.server_address)
        server.serve_forever()


def serve_background(host: str = "127.0.0.1", port: int = 0):
    """Start the service on a daemon thread; returns (server, (host, port))."""
    server = _Server((host, port), _Handler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return server, server.server_address

"""Command-line interface.

Subcommands: minimize (unique convex minimum for given charges), stabilize
(controlling charges for a target shape), navigate (charge-space steering
between two shapes), verify (numerical invariant suites), and serve (the
line-delimited JSON control service).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import serialize
from .control import navigate
from .errors import CoulinkError
from .potential import global_min_convex
from .service import serve
from .stabilizer import stabilize_pentagon, stabilize_quad
from .verify import SUITES, run_suites


def _write_output(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _parse_charges(text: str, expected: int) -> tuple[float, ...]:
    vals = json.loads(text)
    if not isinstance(vals, list) or len(vals) != expected:
        raise ValueError(f"expected a JSON list of {expected} charges, got {text!r}")
    return tuple(float(v) for v in vals)


def cmd_minimize(args) -> int:
    linkage = serialize.linkage_from_spec(args.linkage)
    charges = _parse_charges(args.charges, linkage.n)
    config, energy = global_min_convex(linkage, charges)
    if args.format == "csv":
        _write_output(serialize.minimize_result_csv(config, energy), args.out)
    else:
        _write_output(json.dumps(serialize.minimize_result_json(config, energy)), args.out)
    return 0


def cmd_stabilize(args) -> int:
    linkage = serialize.linkage_from_spec(args.linkage)
    if linkage.n == 4:
        if args.config is not None:
            config = serialize.configuration_from_spec(args.config, linkage)
        else:
            from .moduli import reconstruct_quad

            if args.b2 is None:
                raise ValueError("quadrilateral stabilization needs --config or --b2 (the d13 diagonal)")
            config = reconstruct_quad(linkage, args.b2)
        t = stabilize_quad(linkage, config)
        from .potential import stationarity_residual

        result = {"t": t, "residual": stationarity_residual(config, (1.0, 1.0, 1.0, t))}
    else:
        config = serialize.configuration_from_spec(args.config, linkage, args.b2, args.b4)
        q1, q2, q4 = _parse_charges(args.charges, 3) if args.charges else (1.0, 1.0, 1.0)
        sol = stabilize_pentagon(config, q1, q2, q4)
        result = {
            "s": sol.s,
            "t": sol.t,
            "residual": sol.residual,
            "coeffs": {"A": sol.coeffs.a, "B": sol.coeffs.b, "C": sol.coeffs.c},
        }
    if args.format == "csv":
        keys = [k for k in result if k != "coeffs"]
        text = ",".join(keys) + "\n" + ",".join(serialize.fmt(result[k]) for k in keys) + "\n"
        _write_output(text, args.out)
    else:
        _write_output(json.dumps(result), args.out)
    return 0


def cmd_navigate(args) -> int:
    linkage = serialize.linkage_from_spec(args.linkage)
    q1, q2, q4 = _parse_charges(args.charges, 3) if args.charges else (1.0, 1.0, 1.0)
    start = serialize.configuration_from_spec(args.config, linkage)
    if args.target is not None:
        target = serialize.configuration_from_spec(args.target, linkage)
    else:
        target = serialize.configuration_from_spec(None, linkage, args.b2, args.b4)
    if args.steps < 1:
        raise ValueError("--steps must be at least 1")
    traj = navigate(linkage, start, target, q1, q2, q4, args.steps)
    if args.format == "csv":
        _write_output(serialize.trajectory_to_csv(traj), args.out)
    else:
        payload = serialize.trajectory_to_json(traj, linkage, (q1, q2, q4), args.steps)
        _write_output(json.dumps(payload), args.out)
    summary = (
        f"navigated in {len(traj.steps) - 1} steps "
        f"(retries={traj.retries}), endpoint error {traj.endpoint_error:.3e}"
    )
    print(summary, file=sys.stderr)
    return 0


def cmd_verify(args) -> int:
    names = [args.suite] if args.suite else None
    results = run_suites(names, seed=args.seed, quick=args.quick, grid=args.grid)
    if args.format == "json":
        payload = [
            {"suite": r.name, "passed": r.passed, "detail": r.detail} for r in results
        ]
        _write_output(json.dumps(payload), args.out)
    else:
        _write_output("\n".join(r.line() for r in results), args.out)
    return 0


def cmd_serve(args) -> int:
    def announce(addr):
        print(f"coulink service listening on {addr[0]}:{addr[1]}", flush=True)

    try:
        serve(host=args.host, port=args.port, ready_callback=announce)
    except KeyboardInterrupt:
        pass
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coulink",
        description="Coulomb control of planar polygonal linkages",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("minimize", help="unique convex minimum for given charges")
    p.add_argument("--linkage", required=True, help="JSON list of sidelengths, or a file path")
    p.add_argument("--charges", required=True, help="JSON list of vertex charges")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_minimize)

    p = sub.add_parser("stabilize", help="stabilizing charges for a configuration")
    p.add_argument("--linkage", required=True)
    p.add_argument("--config", default=None, help="JSON vertices, {'b2':..,'b4':..}, or file path")
    p.add_argument("--b2", type=float, default=None)
    p.add_argument("--b4", type=float, default=None)
    p.add_argument("--charges", default=None, help="JSON list [q1,q2,q4] of fixed charges")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_stabilize)

    p = sub.add_parser("navigate", help="steer between two convex configurations")
    p.add_argument("--linkage", required=True)
    p.add_argument("--charges", default=None, help="JSON list [q1,q2,q4] of fixed charges")
    p.add_argument("--config", required=True, help="start configuration spec")
    p.add_argument("--target", default=None, help="target configuration spec")
    p.add_argument("--b2", type=float, default=None, help="target diagonal b2")
    p.add_argument("--b4", type=float, default=None, help="target diagonal b4")
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_navigate)

    p = sub.add_parser("verify", help="run numerical invariant suites")
    p.add_argument("--suite", choices=sorted(SUITES), default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--quick", action="store_true", help="reduced sample counts")
    p.add_argument("--grid", type=int, default=None, help="uniqueness scan cells per axis")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("serve", help="run the line-JSON control service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=7710)
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (CoulinkError, ValueError) as exc:
        error = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        print(json.dumps(error), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""JSON and CSV schemas shared by the CLI and the service.

Numbers are written with 17 significant digits so that every double round
trips exactly; JSON and CSV renderings of the same run therefore parse back
to identical values.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .control import Trajectory
from .moduli import Configuration, Linkage, diagonals, reconstruct_pentagon
from .potential import PolarCurve

__all__ = [
    "fmt",
    "linkage_to_json",
    "linkage_from_spec",
    "configuration_to_json",
    "configuration_from_spec",
    "trajectory_to_json",
    "trajectory_to_csv",
    "polar_curve_to_json",
    "polar_curve_to_csv",
    "energy_grid_to_json",
    "energy_grid_to_csv",
]


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def linkage_to_json(linkage: Linkage) -> list[float]:
    return [float(s) for s in linkage.sides]


def _load_spec(text: str):
    """Parse an inline JSON value or, failing that, read it from a file path."""
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        path = Path(text)
        if path.exists():
            return json.loads(path.read_text())
        raise ValueError(f"not valid JSON and not an existing file: {text!r}")


def linkage_from_spec(text: str) -> Linkage:
    data = _load_spec(text)
    if isinstance(data, dict) and "sidelengths" in data:
        data = data["sidelengths"]
    return Linkage(tuple(float(v) for v in data))


def configuration_to_json(config: Configuration) -> list[list[float]]:
    return config.to_json()


def configuration_from_spec(text: str | None, linkage: Linkage,
                            b2: float | None = None, b4: float | None = None) -> Configuration:
    """Configuration from explicit vertices or from a (b2, b4) diagonal pair."""
    if text is not None:
        data = _load_spec(text)
        if isinstance(data, dict):
            if "vertices" in data:
                return Configuration.from_vertices(np.asarray(data["vertices"], dtype=float))
            if "b2" in data and "b4" in data:
                return reconstruct_pentagon(linkage, float(data["b2"]), float(data["b4"]))
            raise ValueError("configuration object needs 'vertices' or 'b2'/'b4'")
        return Configuration.from_vertices(np.asarray(data, dtype=float))
    if b2 is None or b4 is None:
        raise ValueError("provide either --config or both --b2 and --b4")
    return reconstruct_pentagon(linkage, float(b2), float(b4))


def trajectory_to_json(traj: Trajectory, linkage: Linkage,
                       fixed_charges: tuple[float, float, float], steps: int) -> dict:
    return {
        "meta": {
            "linkage": linkage_to_json(linkage),
            "fixed_charges": [float(q) for q in fixed_charges],
            "steps": steps,
            "retries": traj.retries,
            "endpoint_error": traj.endpoint_error,
        },
        "steps": [
            {
                "s": step.s,
                "t": step.t,
                "E": step.energy,
                "vertices": step.configuration.to_json(),
            }
            for step in traj.steps
        ],
    }


def trajectory_to_csv(traj: Trajectory) -> str:
    n = traj.steps[0].configuration.n if traj.steps else 5
    coords = ",".join(f"x{i+1},y{i+1}" for i in range(n))
    lines = [f"step,s,t,E,{coords}"]
    for i, step in enumerate(traj.steps):
        vals = [str(i), fmt(step.s), fmt(step.t), fmt(step.energy)]
        for x, y in step.configuration.vertices:
            vals.append(fmt(x))
            vals.append(fmt(y))
        lines.append(",".join(vals))
    return "\n".join(lines) + "\n"


def polar_curve_to_json(curve: PolarCurve) -> list[dict]:
    return [
        {"k": p.k, "x2": p.x2, "E": p.energy, "on_boundary": p.on_boundary}
        for p in curve.points
    ]


def polar_curve_to_csv(curve: PolarCurve) -> str:
    lines = ["k,x2,E,on_boundary"]
    for p in curve.points:
        lines.append(
            ",".join([fmt(p.k), fmt(p.x2), fmt(p.energy), "1" if p.on_boundary else "0"])
        )
    return "\n".join(lines) + "\n"


def energy_grid_to_json(ks, x2, energy, mask) -> dict:
    """Energy landscape as row-per-slice arrays; masked-out cells are null."""
    rows = []
    for i in range(len(ks)):
        rows.append(
            {
                "k": float(ks[i]),
                "x2": [float(v) for v in x2[i]],
                "E": [float(e) if m else None for e, m in zip(energy[i], mask[i])],
            }
        )
    return {"rows": rows}


def energy_grid_to_csv(ks, x2, energy, mask) -> str:
    """Energy landscape as long-form rows over the convex cells."""
    lines = ["k,x2,E"]
    for i in range(len(ks)):
        for j in range(x2.shape[1]):
            if mask[i, j]:
                lines.append(",".join([fmt(ks[i]), fmt(x2[i, j]), fmt(energy[i, j])]))
    return "\n".join(lines) + "\n"


def minimize_result_json(config: Configuration, energy: float) -> dict:
    return {
        "configuration": configuration_to_json(config),
        "E": float(energy),
        "diagonals": [float(v) for v in diagonals(config)],
    }


def minimize_result_csv(config: Configuration, energy: float) -> str:
    xs = diagonals(config)
    header = ["E"] + [f"x{i+1}" for i in range(5)]
    for i in range(config.n):
        header += [f"vx{i+1}", f"vy{i+1}"]
    vals = [fmt(energy)] + [fmt(v) for v in xs]
    for x, y in config.vertices:
        vals += [fmt(x), fmt(y)]
    return ",".join(header) + "\n" + ",".join(vals) + "\n"

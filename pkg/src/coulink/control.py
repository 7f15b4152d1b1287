"""Charge-space continuation: steering a pentagon between convex shapes.

Because the effective potential has a unique convex minimum for every
positive charge vector, the map from controlling charges (s, t) to the
minimizing configuration is a well-defined section.  Navigation stabilizes
the start and target shapes, walks a path between the two charge pairs, and
tracks the minimum by warm-started Newton steps; no bifurcation can occur
inside the convex regime, so a large jump between consecutive steps signals
a numerical fault and triggers a retry with a finer path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ContinuationBreak,
    CoulinkError,
    NonPositiveCharge,
    NotConvex,
    NotRealizable,
)
from .moduli import (
    Configuration,
    Linkage,
    admissible_diagonal_range,
    convexity_status,
    diagonals,
    reconstruct_pentagon,
    slice_range,
)
from .potential import (
    GRAD_TOL,
    PentagonFrame,
    _check_control_inputs,
    _newton_polish,
    charge_products,
    global_min_convex,
    stationarity_residual,
)
from .stabilizer import stabilize_pentagon

__all__ = [
    "ChargePath",
    "TrajectoryStep",
    "Trajectory",
    "CriticalSurfaceSample",
    "critical_surface_samples",
    "lift_path",
    "navigate",
    "BoundaryScanReport",
    "boundary_criticality_scan",
]

JUMP_FACTOR = 50.0      # continuity bound: step displacement vs run median
MAX_DOUBLINGS = 4       # navigate retries before giving up
START_RESIDUAL_TOL = 1e-6


@dataclass(frozen=True)
class ChargePath:
    """Waypoints in the positive (s, t) quadrant."""

    waypoints: tuple[tuple[float, float], ...]

    def __post_init__(self):
        pts = tuple((float(s), float(t)) for s, t in self.waypoints)
        object.__setattr__(self, "waypoints", pts)
        if not pts:
            raise ValueError("a charge path needs at least one waypoint")
        for s, t in pts:
            if s <= 0.0 or t <= 0.0:
                raise NonPositiveCharge(
                    f"charge path leaves the positive quadrant at ({s}, {t})"
                )

    @classmethod
    def segment(cls, start: tuple[float, float], end: tuple[float, float], steps: int) -> "ChargePath":
        """Straight segment from start to end in ``steps`` increments."""
        if steps < 1:
            raise ValueError("steps must be at least 1")
        ts = np.linspace(0.0, 1.0, steps + 1)
        s0, t0 = start
        s1, t1 = end
        return cls(tuple((s0 + u * (s1 - s0), t0 + u * (t1 - t0)) for u in ts))

    def __len__(self) -> int:
        return len(self.waypoints)


@dataclass(frozen=True)
class TrajectoryStep:
    s: float
    t: float
    energy: float
    configuration: Configuration


@dataclass(frozen=True)
class Trajectory:
    """A navigation run: one minimizing configuration per charge waypoint."""

    steps: tuple[TrajectoryStep, ...]
    endpoint_error: float | None = None
    retries: int = 0

    @property
    def final(self) -> Configuration:
        return self.steps[-1].configuration

    def max_step_displacement(self) -> float:
        if len(self.steps) < 2:
            return 0.0
        return max(
            self.steps[i].configuration.max_vertex_distance(self.steps[i + 1].configuration)
            for i in range(len(self.steps) - 1)
        )


def lift_path(
    linkage: Linkage,
    charge_path: ChargePath,
    start: Configuration,
    fixed_charges: tuple[float, float, float],
) -> Trajectory:
    """Track the unique convex minimum along a path of controlling charges.

    ``start`` must already be the minimum for the first waypoint's charges
    (within tolerance); each subsequent waypoint re-minimizes warm-started
    from the previous configuration, falling back to a cold global solve if
    the Newton step fails.  Raises ContinuationBreak when a step moves the
    configuration by more than the continuity bound.
    """
    q1, q2, q4 = (float(v) for v in fixed_charges)
    probe = np.array([q1, q2, charge_path.waypoints[0][1], q4, charge_path.waypoints[0][0]])
    _check_control_inputs(linkage, probe)
    if convexity_status(start.vertices) != "strict":
        raise NotConvex("start configuration must be strictly convex")

    scale = linkage.scale
    ln = linkage.normalized()
    sn = start.scaled(1.0 / scale)
    if stationarity_residual(sn, probe) > START_RESIDUAL_TOL:
        raise CoulinkError(
            "start configuration is not stabilized by the first waypoint's charges"
        )
    k_bounds = admissible_diagonal_range(ln)

    xs = diagonals(sn)
    x2, x4 = float(xs[1]), float(xs[3])
    steps: list[TrajectoryStep] = []
    for s, t in charge_path.waypoints:
        q = np.array([q1, q2, t, q4, s])
        c = charge_products(q, 5)
        try:
            frame, gnorm = _newton_polish(ln.sides, c, x2, x4, k_bounds, GRAD_TOL)
            if gnorm > 1e-9:
                raise CoulinkError("warm-started polish stalled")
        except CoulinkError:
            cfg, _ = global_min_convex(ln, q)
            fx = diagonals(cfg)
            frame = PentagonFrame(ln.sides, float(fx[1]), float(fx[3]))
        x2, x4 = float(frame.xs[1]), float(frame.xs[3])
        cfg = Configuration.from_vertices(np.asarray(frame.verts) * scale)
        steps.append(TrajectoryStep(s=s, t=t, energy=frame.energy(c) / scale, configuration=cfg))
        if convexity_status(cfg.vertices) != "strict":
            raise ContinuationBreak("trajectory left the strictly convex region")

    if len(steps) > 1:
        disp = [
            steps[i].configuration.max_vertex_distance(steps[i + 1].configuration)
            for i in range(len(steps) - 1)
        ]
        med = float(np.median(disp))
        bound = JUMP_FACTOR * med + 1e-12 * scale
        if max(disp) > bound:
            raise ContinuationBreak(
                f"step displacement {max(disp):.3e} exceeds continuity bound {bound:.3e}"
            )
    return Trajectory(steps=tuple(steps))


def navigate(
    linkage: Linkage,
    start: Configuration,
    target: Configuration,
    q1: float,
    q2: float,
    q4: float,
    steps: int,
) -> Trajectory:
    """Steer the linkage from ``start`` to ``target`` through convex shapes.

    Computes the stabilizing charges of both endpoints, walks the straight
    segment between them in charge space, and lifts it to configuration
    space.  On a continuity break the step count doubles, up to
    ``MAX_DOUBLINGS`` times.
    """
    if steps < 1:
        raise ValueError("steps must be at least 1")
    for cfg, name in ((start, "start"), (target, "target")):
        if cfg.n != 5:
            raise NotRealizable(f"{name} configuration must be a pentagon")
        if convexity_status(cfg.vertices) != "strict":
            raise NotConvex(f"{name} configuration must be strictly convex")

    sol0 = stabilize_pentagon(start, q1, q2, q4)
    sol1 = stabilize_pentagon(target, q1, q2, q4)
    retries = 0
    n = steps
    while True:
        path = ChargePath.segment((sol0.s, sol0.t), (sol1.s, sol1.t), n)
        try:
            traj = lift_path(linkage, path, start, (q1, q2, q4))
            break
        except ContinuationBreak:
            if retries >= MAX_DOUBLINGS:
                raise
            retries += 1
            n *= 2
    err = traj.final.max_vertex_distance(target)
    return Trajectory(steps=traj.steps, endpoint_error=float(err), retries=retries)


@dataclass(frozen=True)
class CriticalSurfaceSample:
    """A (configuration, charges) pair on the critical surface.

    The charges stabilize the configuration; ``residual`` is the achieved
    shape-gradient norm, at most 1e-8 for valid samples.
    """

    configuration: Configuration
    charges: tuple[float, float, float, float, float]
    residual: float


def critical_surface_samples(
    configs, q1: float, q2: float, q4: float
) -> list[CriticalSurfaceSample]:
    """Sample the critical surface over the given convex configurations.

    Each configuration is paired with its unique stabilizing controlling
    charges under the fixed (q1, q2, q4).
    """
    samples = []
    for cfg in configs:
        sol = stabilize_pentagon(cfg, q1, q2, q4)
        samples.append(
            CriticalSurfaceSample(
                configuration=cfg,
                charges=(q1, q2, sol.t, q4, sol.s),
                residual=sol.residual,
            )
        )
    return samples


@dataclass(frozen=True)
class BoundaryScanReport:
    """Minimum stationarity residual over sampled boundary configurations."""

    n_samples: int
    min_residual: float
    threshold: float = 1e-6

    @property
    def passed(self) -> bool:
        return self.min_residual > self.threshold


def boundary_criticality_scan(linkage: Linkage, q, samples) -> BoundaryScanReport:
    """Check that the potential has no critical point on the convex boundary.

    ``samples`` is either a count (boundary configurations are generated by
    walking the slice endpoints across the admissible diagonal interval) or
    an explicit list of configurations, each of which must lie on the
    boundary (one aligned vertex triple).  The residual is the shape-space
    gradient norm, which stays meaningful at aligned configurations where
    diagonal charts degenerate.
    """
    vals = np.asarray(q, dtype=float)
    if np.any(vals <= 0):
        raise NonPositiveCharge("boundary scan assumes positive charges")
    scale = linkage.scale
    ln = linkage.normalized()

    configs: list[Configuration]
    if isinstance(samples, int):
        if samples < 2:
            raise ValueError("need at least 2 boundary samples")
        k_lo, k_hi = admissible_diagonal_range(ln)
        span = k_hi - k_lo
        nk = max(samples // 2, 1)
        configs = []
        for k in np.linspace(k_lo + 1e-4 * span, k_hi - 1e-4 * span, nk):
            try:
                sl = slice_range(ln, float(k))
            except CoulinkError:
                continue
            for x2 in (sl.x2_min, sl.x2_max):
                try:
                    cfg = reconstruct_pentagon(ln, math.sqrt(x2), float(k))
                except CoulinkError:
                    continue
                configs.append(cfg)
                if len(configs) >= samples:
                    break
            if len(configs) >= samples:
                break
    else:
        configs = []
        for cfg in samples:
            cn = cfg.scaled(1.0 / scale)
            if convexity_status(cn.vertices) != "boundary":
                raise NotConvex("sample is not a boundary configuration")
            configs.append(cn)
    if not configs:
        raise CoulinkError("no boundary samples could be generated")
    best = min(stationarity_residual(cfg, vals) for cfg in configs)
    return BoundaryScanReport(n_samples=len(configs), min_residual=float(best))

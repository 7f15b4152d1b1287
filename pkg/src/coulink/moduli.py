"""Linkages, canonical planar configurations, and the squared-diagonal chart.

A polygonal linkage is an ordered tuple of positive sidelengths; its moduli
space is the set of planar polygons realizing them, modulo isometries.  This
module provides the canonical representative of each isometry class,
convexity predicates, the squared-diagonal embedding of pentagon
configurations, reconstruction from two diagonals, slices of the convex
region at fixed diagonal ``b4``, and the Cayley-Menger constraint system
tying the five squared diagonals together.

Index conventions (0-based everywhere):
  vertices   V[0..n-1]
  sides      a[i] = |V[i] V[i+1]|          (indices mod n)
  diagonals  b[i] = |V[i-1] V[i+1]|,  x[i] = b[i]**2   (pentagons)
The local chart of the convex region is (x[1], x[3]), i.e. the squared
diagonals |V0 V2|**2 and |V2 V4|**2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (
    DegenerateInput,
    EmptyModuli,
    EmptySlice,
    NotConvex,
    NotRealizable,
)
from .geometry import cayley_menger, cm_entry_gradient, squared_distances

__all__ = [
    "Linkage",
    "Configuration",
    "Slice",
    "canonicalize",
    "convexity_status",
    "is_strictly_convex",
    "diagonals",
    "reconstruct_pentagon",
    "pentagon_vertices_grid",
    "cyclic_configuration",
    "slice_range",
    "admissible_diagonal_range",
    "sample_convex",
    "cm_constraints",
    "reconstruct_quad",
    "quad_psi",
    "quad_curve_residual",
    "quad_convex_range",
]

# Relative tolerances, in units of the squared length scale where relevant.
CONVEXITY_EPS = 1e-10     # strict convexity margin on oriented-triple areas
REALIZABILITY_TOL = 1e-12 # slack accepted on triangle inequalities


# ---------------------------------------------------------------------------
# linkage


def _generic_sides(sides: tuple[float, ...]) -> bool:
    # M(L) is singular exactly when some +-1 combination of the sidelengths
    # vanishes (a collinear configuration exists).
    scale = max(sides)
    n = len(sides)
    for mask in range(2 ** (n - 1)):
        total = sides[0]
        for i in range(1, n):
            total += sides[i] if (mask >> (i - 1)) & 1 else -sides[i]
        if abs(total) < 1e-9 * scale:
            return False
    return True


@dataclass(frozen=True)
class Linkage:
    """An n-bar linkage given by its cyclically ordered sidelengths, n in {4, 5}."""

    sides: tuple[float, ...]

    def __post_init__(self):
        sides = tuple(float(s) for s in self.sides)
        object.__setattr__(self, "sides", sides)
        if len(sides) not in (4, 5):
            raise NotRealizable(f"only 4- and 5-bar linkages are supported, got n={len(sides)}")
        if any(not math.isfinite(s) or s <= 0 for s in sides):
            raise NotRealizable("sidelengths must be positive and finite")
        total = sum(sides)
        for i, s in enumerate(sides):
            if s >= total - s:
                raise NotRealizable(
                    f"side {i} (length {s}) is at least the sum of the others; "
                    "the moduli space has empty interior"
                )

    @property
    def n(self) -> int:
        return len(self.sides)

    @property
    def scale(self) -> float:
        return max(self.sides)

    @property
    def is_generic(self) -> bool:
        return _generic_sides(self.sides)

    def normalized(self) -> "Linkage":
        s = self.scale
        return Linkage(tuple(a / s for a in self.sides))

    def to_json(self) -> list[float]:
        return list(self.sides)


# ---------------------------------------------------------------------------
# canonical placement and convexity


def _polygon_area(verts: np.ndarray) -> float:
    x, y = verts[:, 0], verts[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def canonicalize(vertices) -> np.ndarray:
    """Canonical representative of the isometry class of a vertex list.

    Translates the first vertex to the origin, rotates the second onto the
    positive x-axis, and reflects across it if the signed polygon area is
    negative, so equal shapes compare vertexwise.
    """
    v = np.asarray(vertices, dtype=float).copy()
    if v.ndim != 2 or v.shape[1] != 2:
        raise DegenerateInput(f"expected an (n, 2) vertex array, got shape {v.shape}")
    v -= v[0]
    r = math.hypot(v[1, 0], v[1, 1])
    span = float(np.max(np.abs(v))) if v.size else 0.0
    if r <= 1e-14 * max(span, 1.0):
        raise DegenerateInput("first two vertices coincide; orientation is undefined")
    c, s = v[1, 0] / r, v[1, 1] / r
    rot = np.array([[c, s], [-s, c]])
    v = v @ rot.T
    if _polygon_area(v) < 0.0:
        v[:, 1] = -v[:, 1]
    v[0] = 0.0
    v[1, 1] = 0.0
    return v


_TRIPLES = {
    4: ((0, 1, 2), (1, 2, 3), (2, 3, 0), (3, 0, 1)),
    5: (
        (0, 1, 2), (0, 1, 3), (0, 1, 4), (0, 2, 3), (0, 2, 4),
        (0, 3, 4), (1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4),
    ),
}


def _triple_range(verts) -> tuple[float, float]:
    """(min, max) of the doubled signed areas of all index-ordered triples.

    A polygon is strictly convex exactly when its vertices are in convex
    position in traversal order, i.e. all index-ordered triples have the
    same strict orientation.  Turning cross products alone do not suffice
    for pentagons: a pentagram turns the same way at every corner.
    """
    if len(verts) == 5:
        (x0, y0), (x1, y1), (x2, y2), (x3, y3), (x4, y4) = verts
        vals = (
            (x1 - x0) * (y2 - y1) - (y1 - y0) * (x2 - x1),
            (x1 - x0) * (y3 - y1) - (y1 - y0) * (x3 - x1),
            (x1 - x0) * (y4 - y1) - (y1 - y0) * (x4 - x1),
            (x2 - x0) * (y3 - y2) - (y2 - y0) * (x3 - x2),
            (x2 - x0) * (y4 - y2) - (y2 - y0) * (x4 - x2),
            (x3 - x0) * (y4 - y3) - (y3 - y0) * (x4 - x3),
            (x2 - x1) * (y3 - y2) - (y2 - y1) * (x3 - x2),
            (x2 - x1) * (y4 - y2) - (y2 - y1) * (x4 - x2),
            (x3 - x1) * (y4 - y3) - (y3 - y1) * (x4 - x3),
            (x3 - x2) * (y4 - y3) - (y3 - y2) * (x4 - x3),
        )
        return min(vals), max(vals)
    tmin, tmax = math.inf, -math.inf
    for i, j, k in _TRIPLES[len(verts)]:
        ax, ay = verts[i]
        bx, by = verts[j]
        cx, cy = verts[k]
        cr = (bx - ax) * (cy - by) - (by - ay) * (cx - bx)
        if cr < tmin:
            tmin = cr
        if cr > tmax:
            tmax = cr
    return tmin, tmax


def convexity_status(vertices, eps: float | None = None) -> str:
    """Classify a polygon as 'strict', 'boundary', or 'nonconvex'.

    Strict convexity demands every index-ordered vertex triple oriented the
    same way, clear of zero by ``eps`` (default CONVEXITY_EPS times the
    squared size); 'boundary' admits triples at zero within the tolerance,
    which is where a polygon angle reaches pi.
    """
    v = np.asarray(vertices, dtype=float)
    if eps is None:
        scale = float(np.max(squared_distances(v)))
        eps = CONVEXITY_EPS * max(scale, 1e-300)
    tmin, tmax = _triple_range(v)
    if tmin > eps or tmax < -eps:
        return "strict"
    if tmin > -eps or tmax < eps:
        return "boundary"
    return "nonconvex"


def is_strictly_convex(config) -> bool:
    """True when all turning cross products share a strict sign and, beyond
    that, every index-ordered vertex triple does (pentagrams turn uniformly
    but are not convex)."""
    verts = config.vertices if isinstance(config, Configuration) else config
    return convexity_status(verts) == "strict"


@dataclass(frozen=True)
class Configuration:
    """A canonical planar placement of the linkage vertices.

    The first vertex sits at the origin, the second on the positive x-axis,
    and the signed area is non-negative; comparing two configurations of the
    same linkage is then a vertexwise distance.
    """

    vertices: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    @classmethod
    def from_vertices(cls, vertices) -> "Configuration":
        return cls(canonicalize(vertices))

    @property
    def n(self) -> int:
        return len(self.vertices)

    def sidelengths(self) -> np.ndarray:
        v = self.vertices
        return np.linalg.norm(np.roll(v, -1, axis=0) - v, axis=1)

    def linkage(self) -> Linkage:
        return Linkage(tuple(self.sidelengths()))

    def max_vertex_distance(self, other: "Configuration") -> float:
        return float(np.max(np.linalg.norm(self.vertices - other.vertices, axis=1)))

    def scaled(self, factor: float) -> "Configuration":
        return Configuration(self.vertices * float(factor))

    def to_json(self) -> list[list[float]]:
        return [[float(x), float(y)] for x, y in self.vertices]


def diagonals(config: Configuration) -> np.ndarray:
    """Squared diagonals x[i] = |V[i-1] V[i+1]|**2 of a pentagon configuration."""
    v = config.vertices if isinstance(config, Configuration) else np.asarray(config, float)
    if len(v) != 5:
        raise ValueError("diagonal coordinates are defined for pentagons")
    d = v[(np.arange(5) + 1) % 5] - v[(np.arange(5) - 1) % 5]
    return np.einsum("ij,ij->i", d, d)


# ---------------------------------------------------------------------------
# pentagon reconstruction from (b2, b4)


def _pentagon_scalar(a, b2: float, b4: float):
    """Vertices of the convex-branch pentagon with diagonals (b2, b4).

    Places V0 at the origin and V2 at (b2, 0); V1 goes below the axis, V4
    above, and V3 on the far side of the segment V2 V4, which is the only
    branch assignment compatible with a counterclockwise convex pentagon.
    Returns None when a triangle inequality fails.
    """
    a0, a1, a2, a3, a4 = a
    if b2 <= 0.0 or b4 <= 0.0:
        return None
    tol = REALIZABILITY_TOL * (a0 * a0 + a1 * a1 + a2 * a2 + a3 * a3 + a4 * a4)
    p1 = (b2 * b2 + a0 * a0 - a1 * a1) / (2.0 * b2)
    h1sq = a0 * a0 - p1 * p1
    p4 = (b2 * b2 + a4 * a4 - b4 * b4) / (2.0 * b2)
    h4sq = a4 * a4 - p4 * p4
    u3 = (b4 * b4 + a2 * a2 - a3 * a3) / (2.0 * b4)
    v3sq = a2 * a2 - u3 * u3
    if h1sq < -tol or h4sq < -tol or v3sq < -tol:
        return None
    h1 = math.sqrt(max(h1sq, 0.0))
    h4 = math.sqrt(max(h4sq, 0.0))
    v3 = math.sqrt(max(v3sq, 0.0))
    ex, ey = (p4 - b2) / b4, h4 / b4
    x3 = b2 + u3 * ex + v3 * ey
    y3 = u3 * ey - v3 * ex
    return ((0.0, 0.0), (p1, -h1), (b2, 0.0), (x3, y3), (p4, h4))


def reconstruct_pentagon(linkage: Linkage, b2: float, b4: float) -> Configuration:
    """The unique convex pentagon of ``linkage`` with diagonals |V0 V2| = b2
    and |V2 V4| = b4, in canonical placement.

    Raises NotRealizable when a construction triangle violates its triangle
    inequality and NotConvex when the branch assembly is not (weakly)
    convex.  Boundary configurations (an angle of pi) are returned; use
    ``convexity_status`` to distinguish them from strictly convex ones.
    """
    if linkage.n != 5:
        raise NotRealizable("pentagon reconstruction requires a 5-bar linkage")
    verts = _pentagon_scalar(linkage.sides, float(b2), float(b4))
    if verts is None:
        raise NotRealizable(
            f"diagonals (b2={b2}, b4={b4}) violate a triangle inequality of {linkage.sides}"
        )
    if convexity_status(np.asarray(verts)) == "nonconvex":
        raise NotConvex(f"no convex configuration with (b2={b2}, b4={b4})")
    return Configuration.from_vertices(verts)


def pentagon_vertices_grid(sides, b2, b4) -> np.ndarray:
    """Vectorized pentagon construction over broadcast arrays of (b2, b4).

    Returns vertices of shape broadcast(b2, b4) + (5, 2), with NaN rows
    where a triangle inequality fails.  Same branch rules as the scalar
    reconstruction.
    """
    a0, a1, a2, a3, a4 = (float(s) for s in sides)
    b2 = np.asarray(b2, dtype=float)
    b4 = np.asarray(b4, dtype=float)
    b2, b4 = np.broadcast_arrays(b2, b4)
    with np.errstate(invalid="ignore", divide="ignore"):
        p1 = (b2 * b2 + a0 * a0 - a1 * a1) / (2.0 * b2)
        h1 = np.sqrt(a0 * a0 - p1 * p1)
        p4 = (b2 * b2 + a4 * a4 - b4 * b4) / (2.0 * b2)
        h4 = np.sqrt(a4 * a4 - p4 * p4)
        u3 = (b4 * b4 + a2 * a2 - a3 * a3) / (2.0 * b4)
        v3 = np.sqrt(a2 * a2 - u3 * u3)
        ex, ey = (p4 - b2) / b4, h4 / b4
    out = np.empty(b2.shape + (5, 2))
    out[..., 0, 0] = 0.0
    out[..., 0, 1] = 0.0
    out[..., 1, 0] = p1
    out[..., 1, 1] = -h1
    out[..., 2, 0] = b2
    out[..., 2, 1] = 0.0
    out[..., 3, 0] = b2 + u3 * ex + v3 * ey
    out[..., 3, 1] = u3 * ey - v3 * ex
    out[..., 4, 0] = p4
    out[..., 4, 1] = h4
    return out


def strict_mask_grid(verts: np.ndarray, eps: float) -> np.ndarray:
    """Strict-convexity mask for a batch of polygons from the grid builder."""
    n = verts.shape[-2]
    ok = np.all(np.isfinite(verts), axis=(-1, -2))
    for i, j, k in _TRIPLES[n]:
        cr = (verts[..., j, 0] - verts[..., i, 0]) * (verts[..., k, 1] - verts[..., j, 1]) - (
            verts[..., j, 1] - verts[..., i, 1]
        ) * (verts[..., k, 0] - verts[..., j, 0])
        ok &= cr > eps
    return ok


# ---------------------------------------------------------------------------
# cyclic configurations (convex anchor for any admissible linkage)


@lru_cache(maxsize=4096)
def cyclic_configuration(linkage: Linkage) -> Configuration:
    """The configuration inscribed in a circle; always strictly convex.

    The circumradius solves a monotone one-dimensional equation in the
    central angles, split into the usual two cases by whether the center
    falls inside the polygon or beyond its longest side.
    """
    a = np.asarray(linkage.sides, dtype=float)
    amax = float(np.max(a))
    m = int(np.argmax(a))
    rmin = amax / 2.0

    def total_angle(r):
        return float(np.sum(2.0 * np.arcsin(np.clip(a / (2.0 * r), -1.0, 1.0))))

    if total_angle(rmin * (1.0 + 1e-14)) >= 2.0 * math.pi:
        # center inside: solve sum of central angles == 2*pi, decreasing in r
        lo, hi = rmin, rmin
        for _ in range(200):
            hi *= 2.0
            if total_angle(hi) < 2.0 * math.pi:
                break
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if total_angle(mid) >= 2.0 * math.pi:
                lo = mid
            else:
                hi = mid
        r = 0.5 * (lo + hi)
        steps = 2.0 * np.arcsin(np.clip(a / (2.0 * r), -1.0, 1.0))
    else:
        # center beyond the longest side: its arc runs backwards
        def excess(r):
            th = 2.0 * np.arcsin(np.clip(a / (2.0 * r), -1.0, 1.0))
            return float(np.sum(th) - 2.0 * th[m])

        lo, hi = rmin, rmin
        for _ in range(200):
            hi *= 2.0
            if excess(hi) > 0.0:
                break
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if excess(mid) <= 0.0:
                lo = mid
            else:
                hi = mid
        r = 0.5 * (lo + hi)
        steps = 2.0 * np.arcsin(np.clip(a / (2.0 * r), -1.0, 1.0))
        steps[m] = -steps[m]

    phi = np.concatenate([[0.0], np.cumsum(steps)])[: linkage.n]
    verts = r * np.stack([np.cos(phi), np.sin(phi)], axis=1)
    config = Configuration.from_vertices(verts)
    if convexity_status(config.vertices) != "strict":
        raise EmptyModuli(f"no strictly convex configuration found for {linkage.sides}")
    return config


# ---------------------------------------------------------------------------
# slices of the convex region at fixed b4


@dataclass(frozen=True)
class Slice:
    """Closed x2-interval of convex configurations with diagonal b4 = k."""

    k: float
    x2_min: float
    x2_max: float

    @property
    def is_terminal(self) -> bool:
        # the interval collapses to a point at the extreme admissible diagonals;
        # 1e-6 relative is the practical chart resolution of that collapse
        return self.x2_max - self.x2_min <= 1e-6 * max(self.x2_max, 1e-300)

    def grid(self, count: int, margin: float = 0.0) -> np.ndarray:
        lo = self.x2_min + margin * (self.x2_max - self.x2_min)
        hi = self.x2_max - margin * (self.x2_max - self.x2_min)
        return np.linspace(lo, hi, count)


def _b2_bounds(sides, k: float) -> tuple[float, float]:
    a0, a1, a2, a3, a4 = sides
    if not (abs(a2 - a3) - REALIZABILITY_TOL <= k <= a2 + a3 + REALIZABILITY_TOL):
        return 1.0, 0.0
    lo = max(abs(a0 - a1), abs(k - a4))
    hi = min(a0 + a1, k + a4)
    return lo, hi


def _strict_scalar(a, b2, k, eps) -> bool:
    verts = _pentagon_scalar(a, b2, k)
    if verts is None:
        return False
    tmin, _ = _triple_range(verts)
    return tmin > eps


def _scan_convex(a, lo: float, hi: float, k: float, eps: float, counts=(33, 129)):
    """First and last convex b2 samples inside (lo, hi), or None.

    Retries on a finer grid before giving up, since slices near the
    admissible extremes can occupy a thin sliver of the triangle bounds.
    """
    span = hi - lo
    for count in counts:
        good = [
            b
            for b in np.linspace(lo + 1e-12 * span, hi - 1e-12 * span, count)
            if _strict_scalar(a, b, k, eps)
        ]
        if good:
            return good[0], good[-1]
    return None


def slice_range(linkage: Linkage, k: float) -> Slice:
    """Interval of x2 = b2**2 over which (b2, k) reconstructs convex pentagons.

    The interval is closed; its endpoints are boundary configurations where
    one polygon angle reaches pi.  Raises EmptySlice when no convex
    configuration has |V2 V4| = k.
    """
    a = linkage.sides
    eps = CONVEXITY_EPS * linkage.scale**2
    lo, hi = _b2_bounds(a, float(k))
    if not (hi - lo > 0.0):
        raise EmptySlice(f"diagonal k={k} is not realizable for sides {a}")
    found = _scan_convex(a, lo, hi, k, eps)
    if found is None:
        raise EmptySlice(f"no convex configuration with diagonal k={k} for sides {a}")
    b_lo, b_hi = found

    def bisect(inside: float, outside: float) -> float:
        for _ in range(55):
            mid = 0.5 * (inside + outside)
            if mid == inside or mid == outside:
                break
            if _strict_scalar(a, mid, k, eps):
                inside = mid
            else:
                outside = mid
        return inside

    b_lo = bisect(b_lo, lo)
    b_hi = bisect(b_hi, hi)
    return Slice(k=float(k), x2_min=b_lo * b_lo, x2_max=b_hi * b_hi)


def _slice_nonempty(linkage: Linkage, k: float, eps: float) -> bool:
    lo, hi = _b2_bounds(linkage.sides, k)
    if not (hi - lo > 0.0):
        return False
    span = hi - lo
    for count in (33, 129):
        b2 = np.linspace(lo + 1e-12 * span, hi - 1e-12 * span, count)
        verts = pentagon_vertices_grid(linkage.sides, b2, float(k))
        if bool(strict_mask_grid(verts, eps).any()):
            return True
    return False


@lru_cache(maxsize=4096)
def admissible_diagonal_range(linkage: Linkage) -> tuple[float, float]:
    """Closure of the b4 values attained by strictly convex configurations."""
    if linkage.n != 5:
        raise NotRealizable("admissible_diagonal_range requires a 5-bar linkage")
    a = linkage.sides
    eps = CONVEXITY_EPS * linkage.scale**2
    chain = (a[4], a[0], a[1])
    lo0 = max(abs(a[2] - a[3]), 2.0 * max(chain) - sum(chain), 0.0)
    hi0 = min(a[2] + a[3], sum(chain))
    anchor = math.sqrt(diagonals(cyclic_configuration(linkage))[3])

    # coarse vectorized sweep narrows both transitions before bisecting
    ks = np.linspace(lo0, hi0, 65)
    lo_b, hi_b = _b2_bounds_vec(a, ks)
    t = np.linspace(1e-9, 1.0 - 1e-9, 25)
    b2 = lo_b[:, None] + t[None, :] * (hi_b - lo_b)[:, None]
    verts = pentagon_vertices_grid(a, b2, ks[:, None])
    nonempty = strict_mask_grid(verts, eps).any(axis=1) & (hi_b > lo_b)
    ai = int(np.argmin(np.abs(ks - anchor)))

    def bisect(inside: float, outside: float) -> float:
        for _ in range(44):
            mid = 0.5 * (inside + outside)
            if _slice_nonempty(linkage, mid, eps):
                inside = mid
            else:
                outside = mid
        return inside

    i = ai
    while i > 0 and nonempty[i - 1]:
        i -= 1
    k_lo = bisect(anchor if i == ai else float(ks[i]), float(ks[i - 1]) if i > 0 else lo0)
    i = ai
    while i < len(ks) - 1 and nonempty[i + 1]:
        i += 1
    k_hi = bisect(anchor if i == ai else float(ks[i]), float(ks[i + 1]) if i < len(ks) - 1 else hi0)
    return k_lo, k_hi


def _b2_bounds_vec(sides, ks: np.ndarray):
    a0, a1, a2, a3, a4 = sides
    lo = np.maximum(abs(a0 - a1), np.abs(ks - a4))
    hi = np.minimum(a0 + a1, ks + a4)
    bad = (ks < abs(a2 - a3) - REALIZABILITY_TOL) | (ks > a2 + a3 + REALIZABILITY_TOL)
    hi = np.where(bad, lo - 1.0, hi)
    return lo, hi


def sample_convex(linkage: Linkage, counts: tuple[int, int]) -> list[Configuration]:
    """Grid of strictly convex configurations covering the convex region.

    Samples ``counts[0]`` admissible diagonal values and ``counts[1]``
    positions across each slice, skipping slice endpoints.
    """
    nk, nx = counts
    if nk < 1 or nx < 1:
        raise ValueError("counts must be positive")
    k_lo, k_hi = admissible_diagonal_range(linkage)
    if not (k_hi > k_lo):
        raise EmptyModuli(f"no admissible diagonal interval for {linkage.sides}")
    ks = np.linspace(k_lo, k_hi, nk + 2)[1:-1] if nk > 1 else [0.5 * (k_lo + k_hi)]
    configs: list[Configuration] = []
    for k in ks:
        try:
            sl = slice_range(linkage, float(k))
        except EmptySlice:
            continue
        for x2 in sl.grid(nx + 2)[1:-1] if nx > 1 else [0.5 * (sl.x2_min + sl.x2_max)]:
            try:
                cfg = reconstruct_pentagon(linkage, math.sqrt(x2), float(k))
            except (NotRealizable, NotConvex):
                continue
            if is_strictly_convex(cfg):
                configs.append(cfg)
    if not configs:
        raise EmptyModuli(f"sampling produced no convex configurations for {linkage.sides}")
    return configs


# ---------------------------------------------------------------------------
# Cayley-Menger constraint system in the squared-diagonal chart


def _pair_kind(u: int, v: int) -> tuple[str, int]:
    """Classify the vertex pair {u, v} of a pentagon as a side or diagonal."""
    d = (v - u) % 5
    if d == 1:
        return "side", u
    if d == 4:
        return "side", v
    if d == 2:
        return "diag", (u + 1) % 5
    return "diag", (v + 1) % 5


@lru_cache(maxsize=None)
def _constraint_layout(i: int):
    quad = tuple(v for v in range(5) if v != i)
    entries = []
    for p in range(4):
        for q in range(p + 1, 4):
            kind, idx = _pair_kind(quad[p], quad[q])
            entries.append((p, q, kind, idx))
    return quad, tuple(entries)


def constraint_matrix(i: int, sides, x) -> np.ndarray:
    """4x4 squared-distance matrix of the quadruple omitting vertex i."""
    _, entries = _constraint_layout(i)
    m = np.zeros((4, 4))
    for p, q, kind, idx in entries:
        val = sides[idx] ** 2 if kind == "side" else x[idx]
        m[p, q] = m[q, p] = val
    return m


def constraint_active_vars(i: int) -> tuple[int, ...]:
    """Indices of the squared diagonals the i-th constraint depends on."""
    return (i, (i + 2) % 5, (i + 3) % 5)


def cm_constraints(x, linkage: Linkage) -> tuple[np.ndarray, np.ndarray]:
    """Values and gradients of the five Cayley-Menger constraints.

    The i-th constraint is the determinant of the quadruple omitting vertex
    i, a polynomial in three of the squared diagonals; realizable diagonal
    tuples are exactly its common zeros.  Gradients are exact cofactor
    derivatives, with structural zeros where a constraint does not involve
    a diagonal.
    """
    x = np.asarray(x, dtype=float)
    sides = linkage.sides
    values = np.empty(5)
    grads = np.zeros((5, 5))
    for i in range(5):
        m = constraint_matrix(i, sides, x)
        values[i] = cayley_menger(m)
        _, entries = _constraint_layout(i)
        for p, q, kind, idx in entries:
            if kind == "diag":
                grads[i, idx] = cm_entry_gradient(m, p, q)
    return values, grads


# ---------------------------------------------------------------------------
# quadrilaterals: the diagonal curve D(x, y) = 0


def _quad_scalar(sides, d13: float):
    a0, a1, a2, a3 = sides
    if d13 <= 0.0:
        return None
    tol = REALIZABILITY_TOL * max(sides) ** 2
    p1 = (d13 * d13 + a0 * a0 - a1 * a1) / (2.0 * d13)
    h1sq = a0 * a0 - p1 * p1
    p3 = (d13 * d13 + a3 * a3 - a2 * a2) / (2.0 * d13)
    h3sq = a3 * a3 - p3 * p3
    if h1sq < -tol or h3sq < -tol:
        return None
    h1 = math.sqrt(max(h1sq, 0.0))
    h3 = math.sqrt(max(h3sq, 0.0))
    return ((0.0, 0.0), (p1, -h1), (d13, 0.0), (p3, h3))


def reconstruct_quad(linkage: Linkage, d13: float) -> Configuration:
    """The convex quadrilateral of ``linkage`` with diagonal |V0 V2| = d13."""
    if linkage.n != 4:
        raise NotRealizable("quad reconstruction requires a 4-bar linkage")
    verts = _quad_scalar(linkage.sides, float(d13))
    if verts is None:
        raise NotRealizable(f"diagonal d13={d13} violates a triangle inequality")
    if convexity_status(np.asarray(verts)) == "nonconvex":
        raise NotConvex(f"no convex configuration with d13={d13}")
    return Configuration.from_vertices(verts)


def quad_psi(config: Configuration) -> tuple[float, float]:
    """Squared diagonals (|V0 V2|**2, |V1 V3|**2) of a quadrilateral."""
    v = config.vertices
    if len(v) != 4:
        raise ValueError("quad_psi is defined for quadrilaterals")
    x = float(np.sum((v[2] - v[0]) ** 2))
    y = float(np.sum((v[3] - v[1]) ** 2))
    return x, y


def quad_constraint_matrix(sides, x: float, y: float) -> np.ndarray:
    a0, a1, a2, a3 = sides
    m = np.zeros((4, 4))
    m[0, 1] = m[1, 0] = a0 * a0
    m[1, 2] = m[2, 1] = a1 * a1
    m[2, 3] = m[3, 2] = a2 * a2
    m[0, 3] = m[3, 0] = a3 * a3
    m[0, 2] = m[2, 0] = x
    m[1, 3] = m[3, 1] = y
    return m


def quad_curve_residual(linkage: Linkage, x: float, y: float) -> float:
    """Cayley-Menger determinant of the quad with squared diagonals (x, y).

    Vanishes exactly on the cubic curve of realizable diagonal pairs.
    """
    if linkage.n != 4:
        raise NotRealizable("quad_curve_residual requires a 4-bar linkage")
    return cayley_menger(quad_constraint_matrix(linkage.sides, float(x), float(y)))


def quad_convex_range(linkage: Linkage) -> tuple[float, float]:
    """Closed d13-interval over which the quadrilateral is convex."""
    a = linkage.sides
    eps = CONVEXITY_EPS * linkage.scale**2
    lo = max(abs(a[0] - a[1]), abs(a[2] - a[3]))
    hi = min(a[0] + a[1], a[2] + a[3])
    if not (hi - lo > 0.0):
        raise EmptyModuli(f"no realizable diagonal interval for {a}")

    def strict(d13: float) -> bool:
        verts = _quad_scalar(a, d13)
        if verts is None:
            return False
        tmin, _ = _triple_range(verts)
        return tmin > eps

    span = hi - lo
    samples = np.linspace(lo + 1e-12 * span, hi - 1e-12 * span, 97)
    good = [d for d in samples if strict(d)]
    if not good:
        raise EmptyModuli(f"no convex configuration for sides {a}")

    def bisect(inside: float, outside: float) -> float:
        for _ in range(80):
            mid = 0.5 * (inside + outside)
            if mid == inside or mid == outside:
                break
            if strict(mid):
                inside = mid
            else:
                outside = mid
        return inside

    return bisect(good[0], lo), bisect(good[-1], hi)

"""Random generation of linkages and convex configurations for tests and
verification suites.  All draws are driven by a caller-supplied numpy
generator so every run is reproducible from its seed.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import CoulinkError
from .moduli import (
    Configuration,
    Linkage,
    admissible_diagonal_range,
    quad_convex_range,
    reconstruct_pentagon,
    reconstruct_quad,
    slice_range,
)

__all__ = [
    "random_linkage",
    "random_convex_pentagon",
    "random_convex_quad",
    "random_positive_charges",
]


def random_linkage(rng: np.random.Generator, n: int = 5, lo: float = 0.4, hi: float = 1.0) -> Linkage:
    """A generic normalized linkage with sides drawn uniformly from [lo, hi]."""
    for _ in range(1000):
        sides = rng.uniform(lo, hi, n)
        sides /= sides.max()
        try:
            linkage = Linkage(tuple(sides))
        except CoulinkError:
            continue
        if linkage.is_generic:
            return linkage
    raise CoulinkError("failed to sample a generic linkage")


def random_convex_pentagon(
    rng: np.random.Generator,
    linkage: Linkage | None = None,
    margin: float = 0.05,
) -> tuple[Linkage, Configuration]:
    """A strictly convex pentagon, uniform over a margin-trimmed chart box.

    ``margin`` keeps the sample away from the boundary of the admissible
    diagonal interval and of its slice, as a fraction of each range.
    """
    for _ in range(200):
        lk = linkage if linkage is not None else random_linkage(rng, 5)
        try:
            k_lo, k_hi = admissible_diagonal_range(lk.normalized())
            span = k_hi - k_lo
            k = rng.uniform(k_lo + margin * span, k_hi - margin * span)
            sl = slice_range(lk.normalized(), float(k))
            width = sl.x2_max - sl.x2_min
            x2 = rng.uniform(sl.x2_min + margin * width, sl.x2_max - margin * width)
            cfg = reconstruct_pentagon(lk.normalized(), math.sqrt(x2), float(k))
        except CoulinkError:
            if linkage is not None:
                raise
            continue
        return lk.normalized(), cfg
    raise CoulinkError("failed to sample a convex pentagon")


def random_convex_quad(
    rng: np.random.Generator,
    linkage: Linkage | None = None,
    margin: float = 0.05,
) -> tuple[Linkage, Configuration]:
    """A strictly convex quadrilateral of a random (or given) 4-bar linkage."""
    for _ in range(200):
        lk = linkage if linkage is not None else random_linkage(rng, 4)
        try:
            d_lo, d_hi = quad_convex_range(lk.normalized())
            span = d_hi - d_lo
            d13 = rng.uniform(d_lo + margin * span, d_hi - margin * span)
            cfg = reconstruct_quad(lk.normalized(), float(d13))
        except CoulinkError:
            if linkage is not None:
                raise
            continue
        return lk.normalized(), cfg
    raise CoulinkError("failed to sample a convex quadrilateral")


def random_positive_charges(
    rng: np.random.Generator, n: int = 5, lo: float = 0.5, hi: float = 2.0
) -> np.ndarray:
    return rng.uniform(lo, hi, n)

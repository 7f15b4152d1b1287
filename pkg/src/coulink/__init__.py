"""Coulomb control of planar polygonal linkages.

Critical points of the Coulomb potential of vertex charges on 4- and 5-bar
linkages, stabilizing charges for convex configurations, and navigation
between convex shapes by continuously varying two controlling charges.
"""

from .errors import (
    BoundaryConfiguration,
    BoundarySlicePoint,
    ContinuationBreak,
    CoulinkError,
    DegenerateDistance,
    DegenerateInput,
    EmptyModuli,
    EmptySlice,
    NonPositiveCharge,
    NongenericLinkage,
    NotConvex,
    NotRealizable,
    NumericalConditioning,
)
from .geometry import (
    area_vector,
    cayley_menger,
    cayley_menger_points,
    cm_partial_x13,
    signed_area,
    squared_distances,
    tetrahedron_volume,
)
from .moduli import (
    Configuration,
    Linkage,
    Slice,
    admissible_diagonal_range,
    canonicalize,
    cm_constraints,
    convexity_status,
    cyclic_configuration,
    diagonals,
    is_strictly_convex,
    quad_convex_range,
    quad_curve_residual,
    quad_psi,
    reconstruct_pentagon,
    reconstruct_quad,
    sample_convex,
    slice_range,
)
from .potential import (
    ChargeVector,
    EnergyReport,
    PolarCurve,
    SliceMinimizer,
    UniqueMinReport,
    effective_potential,
    energy_grid,
    full_potential,
    global_min_convex,
    shape_gradient,
    slice_derivatives,
    slice_minimize,
    stationarity_residual,
    trace_polar_curve,
    verify_unique_min,
)
from .stabilizer import (
    JacobianEntries,
    QuadraticCoeffs,
    RankSystem,
    StabilizingSolution,
    bezout_bound,
    mixed_sign_noncritical,
    pentagon_jacobian,
    rank_system,
    stabilize_pentagon,
    stabilize_quad,
)
from .control import (
    BoundaryScanReport,
    ChargePath,
    CriticalSurfaceSample,
    Trajectory,
    TrajectoryStep,
    boundary_criticality_scan,
    critical_surface_samples,
    lift_path,
    navigate,
)

__version__ = "0.1.0"

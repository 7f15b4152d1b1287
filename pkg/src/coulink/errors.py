"""Exception types shared across the package."""


class CoulinkError(Exception):
    """Base class for all package-specific errors."""


class DegenerateInput(CoulinkError):
    """Input geometry is degenerate (coincident points, zero-length frame edge)."""


class NotRealizable(CoulinkError):
    """Requested lengths violate a triangle or polygon inequality."""


class NotConvex(CoulinkError):
    """A convex configuration was required but not supplied or not achievable."""


class BoundaryConfiguration(CoulinkError):
    """Configuration has an aligned vertex triple, so a required derivative degenerates."""


class BoundarySlicePoint(CoulinkError):
    """Slice-derivative formulas are undefined at an aligned configuration."""


class EmptySlice(CoulinkError):
    """No convex configuration exists for the requested diagonal value."""


class EmptyModuli(CoulinkError):
    """The linkage admits no convex configurations."""


class DegenerateDistance(CoulinkError):
    """A squared distance is non-positive where a positive one is required."""


class NonPositiveCharge(CoulinkError):
    """Operation requires strictly positive charges."""


class NongenericLinkage(CoulinkError):
    """Linkage is flagged non-generic; control operations refuse it."""


class NumericalConditioning(CoulinkError):
    """A coefficient is too close to zero to divide by reliably."""


class ContinuationBreak(CoulinkError):
    """A continuation step jumped by more than the continuity bound."""

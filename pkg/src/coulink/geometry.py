"""Distance-geometry primitives.

Cayley-Menger determinants of point quadruples, their partial derivatives
with respect to squared distances, and signed triangle areas.  Everything
downstream (constraint gradients, implicit differentiation of diagonals)
reduces to these operations, so both the determinant route and the
signed-area route are exposed; each serves as an oracle for the other.

Orientation conventions are right-handed; planar configurations embed at
z = 0 so that planar signed areas agree with the 3-d area vectors.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "signed_area",
    "area_vector",
    "squared_distances",
    "bordered_matrix",
    "cayley_menger",
    "cayley_menger_points",
    "cm_entry_gradient",
    "cm_partial_x13",
    "tetrahedron_volume",
]


def _as3d(p: np.ndarray) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.shape[-1] == 3:
        return p
    if p.shape[-1] == 2:
        out = np.zeros(p.shape[:-1] + (3,))
        out[..., :2] = p
        return out
    raise ValueError(f"points must be 2-d or 3-d, got shape {p.shape}")


def signed_area(pi, pj, pk) -> float:
    """Oriented area of the planar triangle (pi, pj, pk).

    Equals half the cross product of the edge vectors pj-pi and pk-pj;
    evaluated with both vectors anchored at pi (the same value) so that
    swapping the last two arguments negates the result exactly, bit for
    bit.  Positive for a counterclockwise triple.
    """
    pi = np.asarray(pi, dtype=float)
    pj = np.asarray(pj, dtype=float)
    pk = np.asarray(pk, dtype=float)
    ux, uy = pj[0] - pi[0], pj[1] - pi[1]
    vx, vy = pk[0] - pi[0], pk[1] - pi[1]
    return 0.5 * (ux * vy - uy * vx)


def area_vector(pi, pj, pk) -> np.ndarray:
    """Area vector of the triangle (pi, pj, pk) in 3-space.

    Half the cross product of the edge vectors pj-pi and pk-pj (equal to
    the anchored form used here); its norm is the unsigned triangle area.
    2-d inputs are embedded at z = 0, in which case only the z component
    is nonzero and equals ``signed_area``.
    """
    pi, pj, pk = _as3d(pi), _as3d(pj), _as3d(pk)
    return 0.5 * np.cross(pj - pi, pk - pi)


def squared_distances(points) -> np.ndarray:
    """Symmetric matrix of pairwise squared distances."""
    p = np.asarray(points, dtype=float)
    diff = p[:, None, :] - p[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def bordered_matrix(d2) -> np.ndarray:
    """Bordered (m+1)x(m+1) Cayley-Menger matrix for squared distances d2."""
    d2 = np.asarray(d2, dtype=float)
    m = d2.shape[-1]
    out = np.zeros(d2.shape[:-2] + (m + 1, m + 1))
    out[..., 0, 1:] = 1.0
    out[..., 1:, 0] = 1.0
    out[..., 1:, 1:] = d2
    return out


def cayley_menger(d2):
    """Cayley-Menger determinant of a squared-distance matrix.

    For four points the result equals 288 times the squared volume of the
    tetrahedron they span, and vanishes exactly when the points are
    coplanar.  Accepts batched input of shape (..., 4, 4); evaluation is a
    pivoted LU determinant in double precision.
    """
    det = np.linalg.det(bordered_matrix(d2))
    return float(det) if np.ndim(det) == 0 else det


def cayley_menger_points(points) -> float:
    """Cayley-Menger determinant of a quadruple given by coordinates."""
    return float(cayley_menger(squared_distances(points)))


def cm_entry_gradient(d2, p: int, q: int) -> float:
    """Exact partial derivative of ``cayley_menger`` in the entry d2[p, q].

    The squared distance appears at the two symmetric positions of the
    bordered matrix, so the derivative is twice the corresponding cofactor.
    """
    if p == q:
        raise ValueError("diagonal entries of a squared-distance matrix are fixed at 0")
    m = bordered_matrix(np.asarray(d2, dtype=float))
    minor = np.delete(np.delete(m, p + 1, axis=0), q + 1, axis=1)
    sign = -1.0 if (p + q) % 2 else 1.0
    return 2.0 * sign * float(np.linalg.det(minor))


def cm_partial_x13(points) -> float:
    """Derivative of the 4-point Cayley-Menger determinant in d13 squared.

    Equals -32 <S124, S234>, the scalar product of the area vectors of the
    triangles (1,2,4) and (2,3,4).  For coplanar points this reduces to
    -32 * S124 * S234 with scalar signed areas.
    """
    p = _as3d(np.asarray(points, dtype=float))
    s124 = area_vector(p[0], p[1], p[3])
    s234 = area_vector(p[1], p[2], p[3])
    return -32.0 * float(np.dot(s124, s234))


def tetrahedron_volume(points) -> float:
    """Signed tetrahedron volume from the scalar triple product."""
    p = _as3d(np.asarray(points, dtype=float))
    return float(np.dot(p[1] - p[0], np.cross(p[2] - p[0], p[3] - p[0]))) / 6.0

"""Mobius transformations as projective linear actions on point pairs.

Everything works on (a, b) pairs rather than plane coordinates, so the point
at infinity needs no branching anywhere; plane formulas appear only in
documentation.  Maps are kept determinant-one and identity testing is modulo
the sign, matching the projective group the maps represent.
"""

from __future__ import annotations

import numpy as np

from .model import (
    TOL_IDENTITY,
    TOL_POINT,
    DegenerateInputError,
    MobiusMap,
    ProjectivePoint,
    canonicalize_point,
    mobius_map,
    points_coincide,
)


def _frame_matrix(p1: ProjectivePoint, p2: ProjectivePoint, p3: ProjectivePoint) -> np.ndarray:
    """Matrix sending the standard frame e1, e2, e1+e2 to p1, p2, p3."""
    det = p1.a * p2.b - p2.a * p1.b
    if abs(det) <= 1e-13:
        raise DegenerateInputError("coincident points do not determine a map")
    alpha = (p3.a * p2.b - p2.a * p3.b) / det
    beta = (p1.a * p3.b - p3.a * p1.b) / det
    if abs(alpha) <= 1e-13 or abs(beta) <= 1e-13:
        raise DegenerateInputError("coincident points do not determine a map")
    return np.array(
        [[alpha * p1.a, beta * p2.a], [alpha * p1.b, beta * p2.b]], dtype=complex
    )


def from_three_points(sources, targets, tol: float = TOL_POINT) -> MobiusMap:
    """The unique map sending three pairwise-distinct points to three others.

    Built projectively through the standard frame, so sources or targets at
    infinity need no special case.
    """
    if len(sources) != 3 or len(targets) != 3:
        raise ValueError("need exactly three source and three target points")
    for trio in (sources, targets):
        for i in range(3):
            for j in range(i + 1, 3):
                if points_coincide(trio[i], trio[j], tol):
                    raise DegenerateInputError("three-point interpolation needs distinct points")
    m_src = _frame_matrix(*sources)
    m_dst = _frame_matrix(*targets)
    return mobius_map(m_dst @ np.linalg.inv(m_src))


def apply(f: MobiusMap, point: ProjectivePoint) -> ProjectivePoint:
    """Image of a point under the linear action, canonicalized."""
    return canonicalize_point(
        f.a * point.a + f.b * point.b, f.c * point.a + f.d * point.b
    )


def compose(f: MobiusMap, g: MobiusMap) -> MobiusMap:
    """The map applying g first, then f."""
    return mobius_map(f.matrix() @ g.matrix())


def inverse(f: MobiusMap) -> MobiusMap:
    """Group inverse (adjugate of the coefficient array)."""
    return mobius_map(np.array([[f.d, -f.b], [-f.c, f.a]], dtype=complex))


def identity_map() -> MobiusMap:
    return MobiusMap(1.0 + 0.0j, 0.0j, 0.0j, 1.0 + 0.0j)


def is_identity(f: MobiusMap, tol: float = TOL_IDENTITY) -> bool:
    """True iff f = +-I entrywise within tol (identity of the projective group)."""
    m = f.matrix()
    eye = np.eye(2)
    return bool(
        np.max(np.abs(m - eye)) <= tol or np.max(np.abs(m + eye)) <= tol
    )


def fixed_points(f: MobiusMap, gap_tol: float = 1e-9) -> list[ProjectivePoint] | None:
    """Fixed points as eigenvector directions; None means every point is fixed.

    Non-identity maps have one fixed point (eigenvalue gap below gap_tol,
    the parabolic case) or two.
    """
    if is_identity(f):
        return None
    trace = f.a + f.d
    disc = np.sqrt(complex(trace * trace - 4.0))
    eigenvalues = [(trace + disc) / 2.0, (trace - disc) / 2.0]
    if abs(eigenvalues[0] - eigenvalues[1]) < gap_tol:
        eigenvalues = eigenvalues[:1]
    points = []
    for lam in eigenvalues:
        u = (f.b, lam - f.a)
        v = (lam - f.d, f.c)
        cand = u if abs(u[0]) + abs(u[1]) >= abs(v[0]) + abs(v[1]) else v
        points.append(canonicalize_point(*cand))
    if len(points) == 2 and points_coincide(points[0], points[1]):
        points = points[:1]
    return points


def cross_ratio(p1: ProjectivePoint, p2: ProjectivePoint,
                p3: ProjectivePoint, p4: ProjectivePoint) -> complex:
    """Mobius-invariant cross ratio of four points, computed projectively.

    Equals (z1-z3)(z2-z4) / ((z1-z4)(z2-z3)) in plane coordinates.
    """

    def det(p: ProjectivePoint, q: ProjectivePoint) -> complex:
        return p.a * q.b - q.a * p.b

    denom = det(p1, p4) * det(p2, p3)
    if denom == 0:
        raise DegenerateInputError("cross ratio undefined for coincident points")
    return det(p1, p3) * det(p2, p4) / denom

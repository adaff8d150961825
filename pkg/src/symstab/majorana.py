"""Conversion between Dicke amplitudes and Majorana points.

The bridge is the root polynomial P(z) = sum_k (-1)^k x_k sqrt(C(n,k)) z^k:
its finite roots are the plane coordinates z = a/b of the Majorana points,
and the degree deficiency counts points at infinity, i.e. copies of |0>.
Roots are found by simultaneous (Aberth-Ehrlich) iteration and merged into
multiplicity clusters under the point-coincidence tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from ._kernels import aberth_refine
from .model import (
    EPS_DEGREE,
    TOL_POINT,
    DegeneracyConfiguration,
    MajoranaSet,
    ProjectivePoint,
    RootFindingError,
    SymmetricState,
    canonicalize_point,
    degeneracy_configuration_from_multiplicities,
    points_coincide,
)

_ROOT_TOL = 1e-12       # update tolerance of the simultaneous iteration
_ROOT_MAX_ITER = 200
_RESIDUAL_BOUND = 1e-9  # |P(root)| <= bound * max|c_k| for every finite root


@dataclass(frozen=True)
class RootPolynomial:
    """Coefficients c_0..c_n of the root polynomial and its effective degree."""

    coefficients: np.ndarray
    degree: int

    @property
    def n(self) -> int:
        return self.coefficients.shape[0] - 1

    def __call__(self, z: complex) -> complex:
        return complex(np.polyval(self.coefficients[::-1], z))


def dicke_to_polynomial(state: SymmetricState) -> RootPolynomial:
    """Root polynomial of a state; binomials are exact integers before float."""
    n = state.n
    coeffs = np.array(
        [(-1) ** k * state.amplitudes[k] * np.sqrt(comb(n, k)) for k in range(n + 1)],
        dtype=complex,
    )
    scale = np.max(np.abs(coeffs))
    degree = 0
    for k in range(n, -1, -1):
        if abs(coeffs[k]) > EPS_DEGREE * scale:
            degree = k
            break
    coeffs.setflags(write=False)
    return RootPolynomial(coeffs, degree)


def _initial_guesses(coeffs: np.ndarray) -> np.ndarray:
    """Deterministically perturbed circle of radius (|c_0/c_d|)^(1/d)."""
    d = coeffs.shape[0] - 1
    radius = (abs(coeffs[0]) / abs(coeffs[-1])) ** (1.0 / d)
    if radius == 0 or not np.isfinite(radius):
        radius = 1.0
    k = np.arange(d)
    angles = 2.0 * np.pi * k / d + 0.7
    wobble = 1.0 + 0.05 * ((k * 0.6180339887498949) % 1.0)
    return radius * wobble * np.exp(1j * angles)


def _polynomial_roots(coeffs: np.ndarray) -> np.ndarray:
    """All finite roots (with exact zeros split off) of sum c_k z^k."""
    scale = np.max(np.abs(coeffs))
    low = 0
    while low < coeffs.shape[0] - 1 and coeffs[low] == 0:
        low += 1
    work = np.ascontiguousarray(coeffs[low:], dtype=complex)
    degree = work.shape[0] - 1
    zeros = np.zeros(low, dtype=complex)
    if degree == 0:
        return zeros
    if degree == 1:
        return np.concatenate([zeros, [-work[0] / work[1]]])
    roots = np.ascontiguousarray(_initial_guesses(work))
    sweeps = aberth_refine(work, roots, _ROOT_TOL, _ROOT_MAX_ITER)
    if sweeps < 0:
        # A limit cycle around a multiple root still yields usable values;
        # accept on small backward error, reject otherwise.
        values = np.abs(np.polyval(work[::-1], roots))
        scales = np.polyval(np.abs(work[::-1]), np.abs(roots))
        backward = float(np.max(values / scales))
        if backward > 1e-10:
            raise RootFindingError(
                f"root iteration did not converge (backward error {backward:.3e})",
                backward,
            )
    return np.concatenate([zeros, roots])


def _cluster_points(raw_points, tol: float):
    """Merge coincident points; representative = dominant eigenvector of sum pp+."""
    groups: list[list[ProjectivePoint]] = []
    for point in raw_points:
        for group in groups:
            if points_coincide(point, group[0], tol):
                group.append(point)
                break
        else:
            groups.append([point])
    # second pass: merge groups whose members drifted pairwise into tolerance
    merged = True
    while merged:
        merged = False
        for i in range(len(groups)):
            for j in range(i + 1, len(groups)):
                if any(
                    points_coincide(p, q, tol) for p in groups[i] for q in groups[j]
                ):
                    groups[i].extend(groups[j])
                    del groups[j]
                    merged = True
                    break
            if merged:
                break
    clusters = []
    for group in groups:
        if len(group) == 1:
            rep = group[0]
        else:
            gram = np.zeros((2, 2), dtype=complex)
            for p in group:
                col = p.column()
                gram += np.outer(col, col.conj())
            _, vecs = np.linalg.eigh(gram)
            rep = canonicalize_point(vecs[0, -1], vecs[1, -1])
        clusters.append((rep, len(group)))
    return clusters


def majorana_decompose(state: SymmetricState, tol: float = TOL_POINT) -> MajoranaSet:
    """Majorana points of a state: finite roots of P plus points at infinity."""
    poly = dicke_to_polynomial(state)
    n = state.n
    degree = poly.degree
    coeffs = poly.coefficients[: degree + 1]
    raw: list[ProjectivePoint] = []
    if degree > 0:
        for z in _polynomial_roots(coeffs):
            raw.append(canonicalize_point(z, 1.0))
    raw.extend(ProjectivePoint(1.0 + 0.0j, 0.0j) for _ in range(n - degree))
    clusters = _cluster_points(raw, tol)

    scale = float(np.max(np.abs(poly.coefficients)))
    worst = 0.0
    for rep, _ in clusters:
        if rep.b == 0:
            continue
        z = rep.a / rep.b
        if abs(z) <= 1e4:
            residual = abs(poly(z))
        else:
            # Near infinity |P(z)| overflows its own rounding noise; the
            # homogenized value b^d * P(a/b) carries the same information.
            hom = sum(
                coeffs[k] * rep.a**k * rep.b ** (degree - k) for k in range(degree + 1)
            )
            residual = abs(hom)
        worst = max(worst, residual)
    if worst > _RESIDUAL_BOUND * scale:
        raise RootFindingError(
            f"root residual {worst:.3e} exceeds {_RESIDUAL_BOUND:.0e} * max|c|", worst
        )
    return MajoranaSet(n, tuple(clusters))


def majorana_compose(points: MajoranaSet) -> SymmetricState:
    """The normalized symmetric state whose Majorana points are ``points``.

    Expands prod_i (b_i z - a_i)^(mult_i) projectively, so points at infinity
    just lower the degree; the global phase is fixed by making the first
    nonzero Dicke amplitude real and positive.
    """
    n = points.n
    poly = np.ones(1, dtype=complex)
    for point, mult in points.clusters:
        factor = np.array([-point.a, point.b], dtype=complex)
        if point.b == 0:
            poly = poly * (-point.a) ** mult
        else:
            for _ in range(mult):
                poly = np.convolve(poly, factor)
    coeffs = np.zeros(n + 1, dtype=complex)
    coeffs[: poly.shape[0]] = poly
    amps = np.array(
        [(-1) ** k * coeffs[k] / np.sqrt(comb(n, k)) for k in range(n + 1)],
        dtype=complex,
    )
    first = np.flatnonzero(np.abs(amps) > 1e-14 * np.max(np.abs(amps)))[0]
    phase = amps[first] / abs(amps[first])
    return SymmetricState(n, amps / phase)


def degeneracy_configuration(points: MajoranaSet) -> DegeneracyConfiguration:
    """Multiplicities sorted descending, diversity degree, group-size multiset."""
    return degeneracy_configuration_from_multiplicities(points.multiplicities())


def reduced_density_matrix(state: SymmetricState) -> np.ndarray:
    """Single-party reduced density matrix, closed form in Dicke amplitudes.

    Validated against the dense partial-trace oracle (see tests); symmetric
    states have identical single-party marginals, so one matrix suffices.
    """
    n = state.n
    x = state.amplitudes
    diag0 = sum(abs(x[k]) ** 2 * (n - k) / n for k in range(n + 1))
    off = sum(
        x[k] * np.conj(x[k + 1]) * np.sqrt((k + 1) * (n - k)) / n for k in range(n)
    )
    rho = np.array([[diag0, off], [np.conj(off), 1.0 - diag0]], dtype=complex)
    return rho

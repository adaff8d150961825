"""Triviality decisions and certificates for symmetric-state stabilizers.

The decision dispatches on the diversity degree m of the Majorana set:
m = 1 and m = 2 admit direct eigenbasis constructions, while m >= 3 reduces
to an exhaustive search for a non-identity Mobius map permuting the points
(three anchor clusters determine every candidate, so enumerating ordered
triples of multiplicity-matching targets is exhaustive).  Every nontrivial
verdict carries a certificate that is re-verified against the dense oracle
whenever the state fits it.

Also home to the degree-2 and degree-4 SL-invariant polynomials and the
criticality test used to screen states before conversion questions.
"""

from __future__ import annotations

from itertools import permutations
from math import prod

import numpy as np

from . import mobius, oracle
from .majorana import degeneracy_configuration, majorana_decompose, reduced_density_matrix
from .model import (
    DENSE_LIMIT,
    TOL_CERTIFICATE,
    TOL_POINT,
    CertificateError,
    DegeneracyConfiguration,
    LocalOperator,
    MajoranaSet,
    MobiusMap,
    StabilizerCertificate,
    StabilizerVerdict,
    SymmetricState,
    is_scalar_operator,
)

TRIVIAL = "trivial"
NONTRIVIAL = "nontrivial"
UNKNOWN = "unknown"

_SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])


def map_cluster_bijection(
    f: MobiusMap,
    source: MajoranaSet,
    target: MajoranaSet,
    tol: float = TOL_POINT,
) -> tuple[int, ...] | None:
    """Cluster bijection induced by f, or None if f does not carry source onto target.

    Requires every source cluster image to coincide (within tol) with a
    distinct target cluster of equal multiplicity.
    """
    src_a = np.array([p.a for p in source.points()])
    src_b = np.array([p.b for p in source.points()])
    dst_a = np.array([p.a for p in target.points()])
    dst_b = np.array([p.b for p in target.points()])
    img_a = f.a * src_a + f.b * src_b
    img_b = f.c * src_a + f.d * src_b
    norms = np.sqrt(np.abs(img_a) ** 2 + np.abs(img_b) ** 2)
    img_a /= norms
    img_b /= norms
    cross = np.abs(img_a[:, None] * dst_b[None, :] - img_b[:, None] * dst_a[None, :])
    src_mult = source.multiplicities()
    dst_mult = target.multiplicities()
    assignment = []
    for i in range(source.diversity):
        j = int(np.argmin(cross[i]))
        if cross[i, j] > tol or src_mult[i] != dst_mult[j]:
            return None
        assignment.append(j)
    if len(set(assignment)) != len(assignment):
        return None
    return tuple(assignment)


def find_permuting_map(
    points: MajoranaSet, tol: float = TOL_POINT
) -> tuple[MobiusMap, tuple[int, ...]] | None:
    """A non-identity Mobius map permuting the clusters, or None.

    Anchors are the three clusters of smallest canonical key (the cluster
    order), making the search deterministic; candidates are all ordered
    triples of distinct clusters whose multiplicities match the anchors'.
    The first acceptance in enumeration order wins.
    """
    m = points.diversity
    if m < 3:
        raise ValueError("the triple search requires diversity >= 3")
    anchor_points = [points.clusters[i][0] for i in range(3)]
    anchor_mults = [points.clusters[i][1] for i in range(3)]
    mults = points.multiplicities()
    for triple in permutations(range(m), 3):
        if any(mults[triple[j]] != anchor_mults[j] for j in range(3)):
            continue
        targets = [points.clusters[t][0] for t in triple]
        f = mobius.from_three_points(anchor_points, targets, tol)
        if mobius.is_identity(f):
            continue
        sigma = map_cluster_bijection(f, points, points, tol)
        if sigma is not None:
            return f, sigma
    return None


def _extract_scalars(
    matrix: np.ndarray, points: MajoranaSet, sigma: tuple[int, ...]
) -> list[complex]:
    """Per-cluster factors lambda with g p_i = lambda_i p_sigma(i).

    Divides by the larger-magnitude component of each target pair.
    """
    scalars = []
    for i, (point, _) in enumerate(points.clusters):
        image = matrix @ point.column()
        target = points.clusters[sigma[i]][0].column()
        c = 0 if abs(target[0]) >= abs(target[1]) else 1
        scalars.append(complex(image[c] / target[c]))
    return scalars


def certificate_from_mobius(
    state: SymmetricState,
    points: MajoranaSet,
    f: MobiusMap,
    sigma: tuple[int, ...],
    tol: float = TOL_POINT,
) -> StabilizerCertificate:
    """Rescale the map's coefficient array into a verified certificate.

    The determinant-one array picks up per-point factors lambda_i; dividing
    by the principal n-th root of their product makes the product exactly
    one, so the operator fixes the state.  Dense verification failure raises
    (it signals a tolerance misconfiguration, never a silent result).
    """
    n = points.n
    matrix = f.matrix()
    cluster_scalars = _extract_scalars(matrix, points, sigma)
    total = prod(
        lam ** mult for lam, (_, mult) in zip(cluster_scalars, points.clusters)
    )
    matrix = matrix / np.exp(np.log(complex(total)) / n)
    cluster_scalars = _extract_scalars(matrix, points, sigma)

    scalars: list[complex] = []
    for lam, (_, mult) in zip(cluster_scalars, points.clusters):
        scalars.extend([lam] * mult)
    if abs(prod(scalars) - 1.0) > TOL_CERTIFICATE:
        raise CertificateError("scalar product drifted away from one")
    if is_scalar_operator(matrix):
        raise CertificateError("permuting map degenerated to a scalar operator")
    if n <= DENSE_LIMIT:
        residual = oracle.verify_certificate(state, matrix)
        if residual > TOL_CERTIFICATE:
            raise CertificateError(
                f"dense residual {residual:.3e} exceeds {TOL_CERTIFICATE:.0e}"
            )
    return StabilizerCertificate(LocalOperator(matrix), sigma, tuple(scalars))


def single_point_certificate(points: MajoranaSet) -> StabilizerCertificate:
    """Certificate for a product state |eps>^n: eigenvalue one on |eps>."""
    if points.diversity != 1:
        raise ValueError("single-point construction requires diversity 1")
    point, n = points.clusters[0]
    basis_change = np.array(
        [[np.conj(point.a), np.conj(point.b)], [-point.b, point.a]], dtype=complex
    )
    matrix = basis_change.conj().T @ np.diag([1.0, 2.0]) @ basis_change
    return StabilizerCertificate(LocalOperator(matrix), (0,), (1.0 + 0.0j,) * n)


def two_point_certificate(points: MajoranaSet) -> StabilizerCertificate:
    """Certificate for diversity two: diagonal phases, or a swap on equal halves."""
    if points.diversity != 2:
        raise ValueError("two-point construction requires diversity 2")
    (p0, k0), (p1, k1) = points.clusters
    columns = np.array([[p0.a, p1.a], [p0.b, p1.b]], dtype=complex)
    inv_columns = np.linalg.inv(columns)
    if k0 == k1:
        core = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
        matrix = columns @ core @ inv_columns
        sigma = (1, 0)
        lams = (1.0 + 0.0j, 1.0 + 0.0j)
    else:
        big = 0 if k0 > k1 else 1
        lam_big = np.exp(2j * np.pi / points.clusters[big][1])
        lams = (lam_big, 1.0 + 0.0j) if big == 0 else (1.0 + 0.0j, lam_big)
        matrix = columns @ np.diag(lams) @ inv_columns
        sigma = (0, 1)
    scalars = tuple(lams[0] for _ in range(k0)) + tuple(lams[1] for _ in range(k1))
    return StabilizerCertificate(LocalOperator(matrix), sigma, scalars)


def decide_stabilizer(state: SymmetricState, tol: float = TOL_POINT) -> StabilizerVerdict:
    """Decide stabilizer triviality and produce a verified certificate.

    Dispatch on diversity: direct constructions for m <= 2, the exhaustive
    triple search for m >= 3.  Certificates are re-verified densely up to
    n = DENSE_LIMIT; beyond it only the point-level conditions are checked
    and the verdict is flagged as not dense-verified.
    """
    points = majorana_decompose(state, tol)
    m = points.diversity
    if m == 1:
        certificate = single_point_certificate(points)
        method = "m1-construction"
    elif m == 2:
        certificate = two_point_certificate(points)
        method = "m2-construction"
    else:
        found = find_permuting_map(points, tol)
        if found is None:
            return StabilizerVerdict(trivial=True, method="mobius-search")
        certificate = certificate_from_mobius(state, points, found[0], found[1], tol)
        method = "mobius-search"

    if state.n <= DENSE_LIMIT:
        residual = oracle.verify_certificate(state, certificate.operator)
        if residual > TOL_CERTIFICATE:
            raise CertificateError(
                f"certificate residual {residual:.3e} exceeds {TOL_CERTIFICATE:.0e}"
            )
        return StabilizerVerdict(
            trivial=False,
            method=method,
            certificate=certificate,
            residual=residual,
            dense_verified=True,
        )
    return StabilizerVerdict(
        trivial=False,
        method=method,
        certificate=certificate,
        residual=None,
        dense_verified=False,
    )


def configuration_precheck(config: DegeneracyConfiguration) -> str:
    """Cheap verdict from the multiplicity list alone.

    "trivial" when three clusters have multiplicities unique in the list
    (any permuting map must fix all three points and hence is the identity);
    "nontrivial" for m <= 2 and for m = 3 with a repeated multiplicity (the
    permuting map always exists there); "unknown" otherwise - in particular
    the m = 4 double-pair pattern depends on the point geometry and is left
    to the full search.  Never contradicts decide_stabilizer.
    """
    m = config.diversity
    if m <= 2:
        return NONTRIVIAL
    counts: dict[int, int] = {}
    for value in config.multiplicities:
        counts[value] = counts.get(value, 0) + 1
    unique_values = sum(1 for c in counts.values() if c == 1)
    if unique_values >= 3:
        return TRIVIAL
    if m == 3:
        return NONTRIVIAL
    return UNKNOWN


def two_qubit_stabilizer_pair(state: SymmetricState) -> StabilizerVerdict:
    """Nontrivial (A, B) with (A (x) B)|psi> = |psi> for any 2-qubit symmetric state.

    Writing |psi> as the 2x2 array X, the fixing condition is the linear
    system A X = X C in the eight entries of (A, C) with C = (B^T)^-1; four
    equations in eight unknowns always leave a solution independent of the
    identity pair.  det B = 1 is imposed after solving.
    """
    if state.n != 2:
        raise ValueError("the linear-system solver handles exactly n = 2")
    vector = oracle.dense_from_symmetric(state)
    x = vector.reshape(2, 2)

    system = np.zeros((4, 8), dtype=complex)
    for eq, (r, s) in enumerate([(0, 0), (0, 1), (1, 0), (1, 1)]):
        for t in range(2):
            system[eq, 2 * r + t] += x[t, s]        # A[r, t]
            system[eq, 4 + 2 * t + s] -= x[r, t]    # C[t, s]
    _, singular, vh = np.linalg.svd(system)
    null_dim = int(np.sum(singular <= 1e-12 * singular[0])) + (8 - system.shape[0] - 4)
    basis = vh[4:].conj()  # right null space of the 4x8 system (dim >= 4)
    identity_pair = np.array([1, 0, 0, 1, 1, 0, 0, 1], dtype=complex) / 2.0
    residues = basis - np.outer(basis @ identity_pair.conj() * 2.0, identity_pair)
    lengths = np.linalg.norm(residues, axis=1)
    vector8 = residues[int(np.argmax(lengths))]
    vector8 = vector8 / np.linalg.norm(vector8)

    a0 = vector8[:4].reshape(2, 2)
    c0 = vector8[4:].reshape(2, 2)
    shift = 1.0 + max(
        float(np.max(np.abs(np.linalg.eigvals(a0)))),
        float(np.max(np.abs(np.linalg.eigvals(c0)))),
    )
    a_op = a0 + shift * np.eye(2)
    c_op = c0 + shift * np.eye(2)
    b_op = np.linalg.inv(c_op).T
    scale = np.sqrt(np.linalg.det(b_op))
    b_op = b_op / scale
    a_op = a_op * scale

    moved = oracle.apply_local([a_op, b_op], vector)
    residual = float(np.linalg.norm(moved - vector))
    if residual > TOL_CERTIFICATE:
        raise CertificateError(f"two-qubit pair residual {residual:.3e}")
    if np.max(np.abs(np.kron(a_op, b_op) - np.eye(4))) <= 1e-8:
        raise CertificateError("two-qubit solver produced the identity operator")
    return StabilizerVerdict(
        trivial=False,
        method="two-qubit-linear-system",
        pair=(LocalOperator(a_op), LocalOperator(b_op)),
        residual=residual,
        dense_verified=True,
    )


# ---------------------------------------------------------------------------
# SL-invariant polynomials and criticality
# ---------------------------------------------------------------------------

def _bilinear_dicke(left: np.ndarray, right: np.ndarray) -> complex:
    """<phi*| sigma_y^(x)m |chi> for symmetric states given by Dicke amplitudes."""
    m = left.shape[0] - 1
    total = sum((-1) ** k * left[k] * right[m - k] for k in range(m + 1))
    return complex(1j**m * total)


def invariant_deg2(state: SymmetricState) -> complex:
    """The degree-2 SL-invariant <psi*| sigma_y^(x)n |psi>.

    Dense evaluation inside the oracle limit; the Dicke closed form (equal
    to the dense value, see tests) takes over beyond it.  Vanishes
    identically for odd n.
    """
    if state.n <= DENSE_LIMIT:
        vector = oracle.dense_from_symmetric(state)
        return invariant_deg2_dense(vector)
    return _bilinear_dicke(state.amplitudes, state.amplitudes)


def invariant_deg2_dense(vector: np.ndarray) -> complex:
    """Dense bilinear form of a 2**n vector with itself (no conjugation)."""
    n = int(round(np.log2(vector.shape[0])))
    moved = oracle.apply_local([_SIGMA_Y] * n, vector)
    return complex(vector @ moved)


def invariant_deg4(state: SymmetricState) -> complex:
    """The degree-4 SL-invariant: determinant of the first-qubit split forms.

    With |psi> = |0>|psi_0> + |1>|psi_1>, the entries are the sigma_y
    bilinear forms (psi_i, psi_j) on the remaining n - 1 qubits.
    """
    if state.n < 2:
        raise ValueError("the degree-4 invariant requires n >= 2")
    if state.n <= DENSE_LIMIT:
        vector = oracle.dense_from_symmetric(state)
        return invariant_deg4_dense(vector)
    n = state.n
    x = state.amplitudes
    k = np.arange(n)
    top = x[:-1] * np.sqrt((n - k) / n)       # |psi_0> in D(n-1, k)
    bottom = x[1:] * np.sqrt((k + 1) / n)     # |psi_1> in D(n-1, k)
    gram = np.array(
        [
            [_bilinear_dicke(top, top), _bilinear_dicke(top, bottom)],
            [_bilinear_dicke(bottom, top), _bilinear_dicke(bottom, bottom)],
        ]
    )
    return complex(np.linalg.det(gram))


def invariant_deg4_dense(vector: np.ndarray) -> complex:
    """Dense evaluation of the degree-4 invariant on a 2**n vector."""
    n = int(round(np.log2(vector.shape[0])))
    if n < 2:
        raise ValueError("the degree-4 invariant requires n >= 2")
    half = vector.shape[0] // 2
    parts = [vector[:half], vector[half:]]
    moved = [oracle.apply_local([_SIGMA_Y] * (n - 1), part) for part in parts]
    gram = np.array(
        [[parts[i] @ moved[j] for j in range(2)] for i in range(2)]
    )
    return complex(np.linalg.det(gram))


def is_critical(state: SymmetricState, tol: float = 1e-9) -> bool:
    """True iff the single-party marginal is maximally mixed within tol."""
    rho = reduced_density_matrix(state)
    return bool(np.max(np.abs(rho - np.eye(2) / 2.0)) <= tol)


def analyze_configuration(state: SymmetricState, tol: float = TOL_POINT):
    """Convenience: (points, configuration, precheck) for reporting layers."""
    points = majorana_decompose(state, tol)
    config = degeneracy_configuration(points)
    return points, config, configuration_precheck(config)

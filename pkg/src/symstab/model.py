"""Shared value types, numeric tolerances, and equality semantics.

All values are immutable after construction and every operation here is a
pure function, so they can be shared freely between threads.

Conventions fixed in this module and relied on everywhere else:

* A single-qubit state ``a|0> + b|1>`` is stored as the projective pair
  ``(a, b)``; the extended-plane coordinate is ``z = a/b``, with ``b = 0``
  meaning the point at infinity.
* Canonical form of a pair: unit norm, and the component of magnitude
  >= 1/sqrt(2) (the first one on ties) is real and positive.
* Two points coincide iff ``|a_p*b_q - a_q*b_p| <= tol`` with the default
  ``TOL_POINT``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

# Default tolerances; CLI flags override the point tolerance.
TOL_POINT = 1e-8          # coincidence threshold on the cross-determinant
TOL_NORM = 1e-12          # normalization / trace checks
TOL_CERTIFICATE = 1e-9    # dense residual accepted for a certificate
TOL_IDENTITY = 1e-9       # entrywise identity test for det-1 operators
EPS_DEGREE = 1e-10        # relative cutoff for the effective poly degree
DENSE_LIMIT = 20          # max n for dense 2**n passes
SYMMETRIZE_LIMIT = 12     # max n for the permutation-sum oracle


class DegenerateInputError(ValueError):
    """Raised when geometrically degenerate input makes a map ill-defined."""


class RootFindingError(RuntimeError):
    """Root iteration failed; carries the worst residual observed."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


class CertificateError(RuntimeError):
    """A constructed certificate failed its verification pass."""


class DenseLimitError(RuntimeError):
    """A dense-oracle operation was requested above its size limit."""


@dataclass(frozen=True)
class ProjectivePoint:
    """A point of the extended complex plane as a canonical pair (a, b)."""

    a: complex
    b: complex

    def plane(self) -> complex | None:
        """Extended-plane coordinate ``z = a/b``; None for infinity."""
        if self.b == 0:
            return None
        return self.a / self.b

    def column(self) -> np.ndarray:
        return np.array([self.a, self.b], dtype=complex)

    def sort_key(self) -> tuple[float, float, float, float]:
        return (self.a.real, self.a.imag, self.b.real, self.b.imag)


def canonicalize_point(a: complex, b: complex) -> ProjectivePoint:
    """Return the canonical representative of the projective pair (a, b).

    Idempotent: re-canonicalizing a canonical point returns it bit-for-bit.
    Raises ValueError on the zero pair.
    """
    a = complex(a)
    b = complex(b)
    norm_sq = a.real * a.real + a.imag * a.imag + b.real * b.real + b.imag * b.imag
    if norm_sq == 0.0:
        raise ValueError("projective point requires (a, b) != (0, 0)")
    if abs(norm_sq - 1.0) > 4e-16:
        s = np.sqrt(norm_sq)
        a /= s
        b /= s
    ref = a if abs(a) >= abs(b) else b
    if not (ref.imag == 0.0 and ref.real > 0.0):
        phase = ref.conjugate() / abs(ref)
        a *= phase
        b *= phase
    return ProjectivePoint(a, b)


def point_from_plane(z: complex | None) -> ProjectivePoint:
    """Point for a plane coordinate; ``None`` (or inf) maps to (1, 0)."""
    if z is None or z == np.inf:
        return ProjectivePoint(1.0 + 0.0j, 0.0j)
    return canonicalize_point(complex(z), 1.0)


def cross_determinant(p: ProjectivePoint, q: ProjectivePoint) -> float:
    return abs(p.a * q.b - q.a * p.b)


def points_coincide(p: ProjectivePoint, q: ProjectivePoint, tol: float = TOL_POINT) -> bool:
    """True iff p and q are the same projective point within tol."""
    return cross_determinant(p, q) <= tol


@dataclass(frozen=True)
class SymmetricState:
    """An n-qubit symmetric pure state by its Dicke amplitudes x_0..x_n.

    The constructor normalizes; the stored amplitude array is read-only.
    """

    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("qubit count must be >= 1")
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.shape != (self.n + 1,):
            raise ValueError(f"expected {self.n + 1} Dicke amplitudes, got {amps.shape[0]}")
        norm = np.linalg.norm(amps)
        if norm <= TOL_NORM or not np.isfinite(norm):
            raise ValueError("state must have at least one nonzero amplitude")
        amps = amps / norm
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    def fidelity(self, other: "SymmetricState") -> float:
        """|<self|other>| in the Dicke basis (an isometry to the dense space)."""
        if self.n != other.n:
            raise ValueError("states must have equal qubit count")
        return abs(np.vdot(self.amplitudes, other.amplitudes))


def symmetric_state(amplitudes) -> SymmetricState:
    """Build a SymmetricState from a length-(n+1) amplitude sequence."""
    amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
    return SymmetricState(amps.shape[0] - 1, amps)


def dicke_state(n: int, k: int) -> SymmetricState:
    """The Dicke state with k excitations among n qubits."""
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    amps = np.zeros(n + 1, dtype=complex)
    amps[k] = 1.0
    return SymmetricState(n, amps)


@dataclass(frozen=True)
class MajoranaSet:
    """Clustered Majorana points: ((point, multiplicity), ...), summing to n.

    Clusters are sorted by the canonical point key and pairwise distinct
    under the coincidence tolerance used to build them.
    """

    n: int
    clusters: tuple[tuple[ProjectivePoint, int], ...]

    def __post_init__(self):
        if not self.clusters:
            raise ValueError("a Majorana set needs at least one cluster")
        total = sum(mult for _, mult in self.clusters)
        if total != self.n:
            raise ValueError(f"multiplicities sum to {total}, expected {self.n}")
        if any(mult < 1 for _, mult in self.clusters):
            raise ValueError("multiplicities must be positive")
        ordered = tuple(sorted(self.clusters, key=lambda c: c[0].sort_key()))
        object.__setattr__(self, "clusters", ordered)

    @property
    def diversity(self) -> int:
        return len(self.clusters)

    def points(self) -> tuple[ProjectivePoint, ...]:
        return tuple(point for point, _ in self.clusters)

    def multiplicities(self) -> tuple[int, ...]:
        return tuple(mult for _, mult in self.clusters)


def majorana_set(clusters, n: int | None = None, tol: float = TOL_POINT) -> MajoranaSet:
    """Build a MajoranaSet from (point, multiplicity) pairs, checking distinctness."""
    clusters = tuple((point, int(mult)) for point, mult in clusters)
    for i, (p, _) in enumerate(clusters):
        for q, _ in clusters[i + 1:]:
            if points_coincide(p, q, tol):
                raise ValueError("cluster points must be pairwise non-coincident")
    if n is None:
        n = sum(mult for _, mult in clusters)
    return MajoranaSet(n, clusters)


@dataclass(frozen=True)
class DegeneracyConfiguration:
    """Sorted multiplicity list, diversity degree, and the group-size multiset.

    ``partition`` collects the sizes of the groups of equal multiplicities,
    stored sorted descending as the canonical multiset representative.
    """

    multiplicities: tuple[int, ...]
    diversity: int
    partition: tuple[int, ...]

    @property
    def n(self) -> int:
        return sum(self.multiplicities)


def degeneracy_configuration_from_multiplicities(mults) -> DegeneracyConfiguration:
    mults = tuple(sorted((int(m) for m in mults), reverse=True))
    groups: dict[int, int] = {}
    for m in mults:
        groups[m] = groups.get(m, 0) + 1
    partition = tuple(sorted(groups.values(), reverse=True))
    return DegeneracyConfiguration(mults, len(mults), partition)


@dataclass(frozen=True)
class MobiusMap:
    """An invertible fractional-linear map, stored det-normalized.

    Acts on pairs by the linear action ``(a*pa + b*pb, c*pa + d*pb)``; on
    plane coordinates this is ``f(z) = (a z + b) / (c z + d)``.
    """

    a: complex
    b: complex
    c: complex
    d: complex

    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)


def mobius_map(matrix) -> MobiusMap:
    """Normalize a 2x2 array to determinant one and wrap it."""
    m = np.asarray(matrix, dtype=complex)
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    if abs(det) <= 1e-12:
        raise ValueError("Mobius map requires |ad - bc| > 1e-12")
    m = m / np.sqrt(det)
    return MobiusMap(complex(m[0, 0]), complex(m[0, 1]), complex(m[1, 0]), complex(m[1, 1]))


@dataclass(frozen=True)
class LocalOperator:
    """An invertible single-qubit operator (2x2 complex array)."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError("local operator must be 2x2")
        if abs(np.linalg.det(m)) <= 1e-12:
            raise ValueError("local operator must be invertible (|det| > 1e-12)")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def invertible(self) -> bool:
        return True

    def det(self) -> complex:
        m = self.matrix
        return m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]


def is_scalar_operator(matrix, tol: float = TOL_IDENTITY) -> bool:
    """True iff the operator equals mu*I (mu = +-1 after det-1 normalization)."""
    m = np.asarray(matrix, dtype=complex)
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    if abs(det) <= 1e-12:
        return False
    m = m / np.sqrt(det)
    return bool(
        np.max(np.abs(m - np.eye(2))) <= tol or np.max(np.abs(m + np.eye(2))) <= tol
    )


@dataclass(frozen=True)
class StabilizerCertificate:
    """A verified non-scalar g with g^(x)n |psi> = |psi>.

    ``permutation`` maps cluster index i to the cluster its point lands on;
    ``scalars`` holds the per-point eigen-factors (cluster value repeated by
    multiplicity, n entries in all) whose product is one.
    """

    operator: LocalOperator
    permutation: tuple[int, ...]
    scalars: tuple[complex, ...]


@dataclass(frozen=True)
class StabilizerVerdict:
    """Outcome of a stabilizer-triviality decision."""

    trivial: bool
    method: str
    certificate: StabilizerCertificate | None = None
    pair: tuple[LocalOperator, LocalOperator] | None = None
    residual: float | None = None
    dense_verified: bool = True


@dataclass(frozen=True)
class ConversionReport:
    """Connecting operator, its Mobius witness, and the LOCC probability."""

    operator: LocalOperator
    witness: MobiusMap
    p_max: float
    phase: complex = field(default=1.0 + 0.0j)


# ---------------------------------------------------------------------------
# State-file format (JSON)
# ---------------------------------------------------------------------------

def _pair(value) -> complex:
    re, im = value
    return complex(float(re), float(im))


def load_state_dict(data: dict, tol: float = TOL_POINT):
    """Decode the JSON state format into a SymmetricState.

    Exactly one of "dicke" / "majorana" must be present.  Returns
    ``(state, was_normalized)``; a majorana file is composed via the root
    polynomial, so it is always reported as normalized.
    """
    from . import majorana as _majorana

    if not isinstance(data, dict):
        raise ValueError("state file must contain a JSON object")
    if "n" not in data:
        raise ValueError('state file is missing "n"')
    n = int(data["n"])
    has_dicke = "dicke" in data
    has_majorana = "majorana" in data
    if has_dicke == has_majorana:
        raise ValueError('state file must contain exactly one of "dicke" / "majorana"')
    if has_dicke:
        entries = data["dicke"]
        if len(entries) != n + 1:
            raise ValueError(f'"dicke" must have n + 1 = {n + 1} entries')
        amps = np.array([_pair(e) for e in entries], dtype=complex)
        norm = np.linalg.norm(amps)
        state = SymmetricState(n, amps)
        return state, bool(abs(norm - 1.0) > 1e-9)
    clusters = []
    for entry in data["majorana"]:
        point = canonicalize_point(_pair(entry["a"]), _pair(entry["b"]))
        clusters.append((point, int(entry["mult"])))
    points = majorana_set(clusters, n=n, tol=tol)
    return _majorana.majorana_compose(points), False


def load_state_file(path: str, tol: float = TOL_POINT):
    with open(path, encoding="utf-8") as handle:
        data = json.load(handle)
    return load_state_dict(data, tol=tol)


def state_to_dict(state: SymmetricState) -> dict:
    """Encode a state in the on-disk JSON format (round-trips through load)."""
    return {
        "n": state.n,
        "dicke": [[float(x.real), float(x.imag)] for x in state.amplitudes],
    }

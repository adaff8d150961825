"""Brute-force dense 2**n state-vector engine.

Independent ground truth for the algebraic claims at small n: conversion to
and from the symmetric subspace, tensor application of local operators,
certificate residuals, and partial traces.  Bit order is fixed package-wide:
qubit 0 is the most significant bit of the amplitude index.
"""

from __future__ import annotations

from functools import lru_cache
from math import comb

import numpy as np

from ._kernels import apply_one_qubit
from .model import (
    DENSE_LIMIT,
    SYMMETRIZE_LIMIT,
    DenseLimitError,
    LocalOperator,
    MajoranaSet,
    SymmetricState,
)


@lru_cache(maxsize=32)
def _popcounts(n: int) -> np.ndarray:
    counts = np.zeros(1 << n, dtype=np.int64)
    idx = np.arange(1 << n, dtype=np.int64)
    for bit in range(n):
        counts += (idx >> bit) & 1
    counts.setflags(write=False)
    return counts


def _check_limit(n: int, limit: int, what: str) -> None:
    if n > limit:
        raise DenseLimitError(f"{what} supports n <= {limit}, got n = {n}")


def dense_from_symmetric(state: SymmetricState) -> np.ndarray:
    """Expand Dicke amplitudes into the full 2**n vector.

    Every bitstring with k ones carries amplitude x_k / sqrt(C(n, k)).
    """
    n = state.n
    _check_limit(n, DENSE_LIMIT, "dense expansion")
    k = _popcounts(n)
    weights = np.array([1.0 / np.sqrt(comb(n, j)) for j in range(n + 1)])
    return state.amplitudes[k] * weights[k]


def symmetric_from_dense(vector: np.ndarray, tol: float = 1e-8) -> SymmetricState:
    """Project a dense vector known to be symmetric back to Dicke amplitudes.

    Raises ValueError if amplitudes within one excitation sector deviate by
    more than tol (the vector is not permutation symmetric).
    """
    vector = np.asarray(vector, dtype=complex).reshape(-1)
    n = int(round(np.log2(vector.shape[0])))
    if 1 << n != vector.shape[0]:
        raise ValueError("dense vector length must be a power of two")
    k = _popcounts(n)
    amps = np.zeros(n + 1, dtype=complex)
    for j in range(n + 1):
        sector = vector[k == j]
        mean = sector.mean()
        if np.max(np.abs(sector - mean)) > tol * max(1.0, np.max(np.abs(sector))):
            raise ValueError("dense vector is not permutation symmetric")
        amps[j] = mean * np.sqrt(comb(n, j))
    return SymmetricState(n, amps)


def dense_symmetrize(points: MajoranaSet) -> np.ndarray:
    """Normalized sum over distinct permutations of the point product.

    Settles the root convention independently of the polynomial route.  The
    recursion keys on the remaining multiplicity vector, so each distinct
    arrangement of the point multiset is counted exactly once.
    """
    n = points.n
    _check_limit(n, SYMMETRIZE_LIMIT, "dense symmetrization")
    pairs = [(complex(p.a), complex(p.b)) for p in points.points()]
    mults = list(points.multiplicities())

    cache: dict[tuple[int, ...], np.ndarray] = {}

    def build(counts: tuple[int, ...]) -> np.ndarray:
        if counts in cache:
            return cache[counts]
        r = sum(counts)
        if r == 0:
            out = np.ones(1, dtype=complex)
        else:
            out = np.zeros(1 << r, dtype=complex)
            half = 1 << (r - 1)
            for c, count in enumerate(counts):
                if count == 0:
                    continue
                rest = list(counts)
                rest[c] -= 1
                sub = build(tuple(rest))
                a, b = pairs[c]
                out[:half] += a * sub
                out[half:] += b * sub
        cache[counts] = out
        return out

    vector = build(tuple(mults))
    norm = np.linalg.norm(vector)
    if norm == 0:
        raise ValueError("point set symmetrized to the zero vector")
    return vector / norm


def apply_local(ops, vector: np.ndarray) -> np.ndarray:
    """Apply ops[0] (x) ops[1] (x) ... to a dense vector (qubit-by-qubit)."""
    vector = np.array(vector, dtype=complex)
    n = int(round(np.log2(vector.shape[0])))
    if 1 << n != vector.shape[0]:
        raise ValueError("dense vector length must be a power of two")
    if len(ops) != n:
        raise ValueError(f"expected {n} operators, got {len(ops)}")
    for qubit, op in enumerate(ops):
        mat = op.matrix if isinstance(op, LocalOperator) else np.asarray(op, dtype=complex)
        mat = np.ascontiguousarray(mat, dtype=complex)
        apply_one_qubit(mat, vector, qubit, n)
    return vector


def apply_uniform(op, state_or_vector) -> np.ndarray:
    """Apply the same single-qubit operator to every qubit."""
    if isinstance(state_or_vector, SymmetricState):
        vector = dense_from_symmetric(state_or_vector)
        n = state_or_vector.n
    else:
        vector = np.asarray(state_or_vector, dtype=complex)
        n = int(round(np.log2(vector.shape[0])))
    return apply_local([op] * n, vector)


def verify_certificate(state: SymmetricState, operator) -> float:
    """Dense residual || g^(x)n |psi> - |psi> ||_2."""
    vector = dense_from_symmetric(state)
    moved = apply_uniform(operator, vector)
    return float(np.linalg.norm(moved - vector))


def dense_partial_trace(vector: np.ndarray, qubit: int) -> np.ndarray:
    """Single-qubit reduced density matrix of a dense pure state."""
    vector = np.asarray(vector, dtype=complex)
    n = int(round(np.log2(vector.shape[0])))
    if not 0 <= qubit < n:
        raise ValueError("qubit index out of range")
    t = vector.reshape(1 << qubit, 2, -1)
    return np.einsum("iaj,ibj->ab", t, t.conj())

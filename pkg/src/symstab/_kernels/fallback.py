"""Pure-Python versions of the compiled kernels.

Same update order as the C versions in ``_native.pyx`` so that both backends
produce matching results up to rounding.
"""

import numpy as np


def aberth_refine(coeffs, roots, tol, max_iter):
    """Refine all roots of the polynomial sum(coeffs[k] * z**k) in place.

    Sequential (Gauss-Seidel) simultaneous iteration; returns the number of
    sweeps performed, or -1 if the update tolerance was never reached.
    """
    d = roots.shape[0]
    nc = coeffs.shape[0]
    cs = [complex(c) for c in coeffs]
    zs = [complex(z) for z in roots]

    for it in range(max_iter):
        change = 0.0
        for i in range(d):
            z = zs[i]
            p = cs[nc - 1]
            dp = 0j
            for k in range(nc - 2, -1, -1):
                dp = dp * z + p
                p = p * z + cs[k]
            if p == 0:
                continue
            if dp == 0:
                zs[i] = z * 1.000001 + 1e-6
                change = 1.0
                continue
            w = p / dp
            s = 0j
            for j in range(d):
                if j != i:
                    denom = z - zs[j]
                    if denom != 0:
                        s = s + 1.0 / denom
            denom = 1.0 - w * s
            delta = w if denom == 0 else w / denom
            zs[i] = z - delta
            rel = abs(delta) / (1.0 + abs(z))
            if rel > change:
                change = rel
        if change <= tol:
            roots[:] = zs
            return it + 1
    roots[:] = zs
    return -1


def apply_one_qubit(op, state, qubit, n):
    """Apply a 2x2 operator to one qubit of a 2**n state vector, in place.

    Qubit 0 is the most significant bit of the amplitude index.
    """
    t = state.reshape(1 << qubit, 2, 1 << (n - 1 - qubit))
    state.reshape(t.shape)[:] = np.einsum("ab,xby->xay", op, t)

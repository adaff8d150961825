# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops: simultaneous root refinement and dense qubit updates.

Mirrors symstab._kernels.fallback; both must keep identical update order so
results agree to rounding.
"""


def aberth_refine(double complex[::1] coeffs, double complex[::1] roots,
                  double tol, int max_iter):
    """Refine all roots of the polynomial sum(coeffs[k] * z**k) in place.

    Sequential (Gauss-Seidel) simultaneous iteration; returns the number of
    sweeps performed, or -1 if the update tolerance was never reached.
    """
    cdef Py_ssize_t d = roots.shape[0]
    cdef Py_ssize_t nc = coeffs.shape[0]
    cdef Py_ssize_t i, j, k, it
    cdef double complex p, dp, z, w, s, denom, delta
    cdef double change, scale

    for it in range(max_iter):
        change = 0.0
        for i in range(d):
            z = roots[i]
            # Horner for p(z) and p'(z)
            p = coeffs[nc - 1]
            dp = 0
            for k in range(nc - 2, -1, -1):
                dp = dp * z + p
                p = p * z + coeffs[k]
            if p == 0:
                continue
            if dp == 0:
                roots[i] = z * 1.000001 + 1e-6
                change = 1.0
                continue
            w = p / dp
            s = 0
            for j in range(d):
                if j != i:
                    denom = z - roots[j]
                    if denom != 0:
                        s = s + 1.0 / denom
            denom = 1.0 - w * s
            if denom == 0:
                delta = w
            else:
                delta = w / denom
            roots[i] = z - delta
            scale = 1.0 + abs(z)
            if abs(delta) / scale > change:
                change = abs(delta) / scale
        if change <= tol:
            return it + 1
    return -1


def apply_one_qubit(double complex[:, ::1] op, double complex[::1] state,
                    int qubit, int n):
    """Apply a 2x2 operator to one qubit of a 2**n state vector, in place.

    Qubit 0 is the most significant bit of the amplitude index.
    """
    cdef Py_ssize_t dim = state.shape[0]
    cdef Py_ssize_t stride = 1 << (n - 1 - qubit)
    cdef Py_ssize_t base, off, i0, i1
    cdef double complex a = op[0, 0], b = op[0, 1], c = op[1, 0], d = op[1, 1]
    cdef double complex v0, v1

    base = 0
    while base < dim:
        for off in range(stride):
            i0 = base + off
            i1 = i0 + stride
            v0 = state[i0]
            v1 = state[i1]
            state[i0] = a * v0 + b * v1
            state[i1] = c * v0 + d * v1
        base += 2 * stride

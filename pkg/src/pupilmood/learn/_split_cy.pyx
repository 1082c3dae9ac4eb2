# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled split-scan kernel.

Bit-compatible with _split_np.best_split_scan: sequential prefix sums and
an identically ordered gain expression (the build disables FP contraction).
"""

import numpy as np

BACKEND = "cython"


def best_split_scan(double[::1] x_sorted, double[::1] g_sorted, double[::1] h_sorted,
                    double lam, double gamma, long min_leaf):
    """Best split position of one feature, samples pre-sorted by value."""
    cdef Py_ssize_t n = x_sorted.shape[0]
    cdef Py_ssize_t i, best_pos = -1
    cdef double gt = 0.0, ht = 0.0, gl = 0.0, hl = 0.0
    cdef double gr, hr, gain, best_gain = -np.inf
    cdef double neg_inf = best_gain

    if n < 2 * min_leaf:
        return neg_inf, -1
    for i in range(n):
        gt = gt + g_sorted[i]
        ht = ht + h_sorted[i]
    for i in range(n - 1):
        gl = gl + g_sorted[i]
        hl = hl + h_sorted[i]
        if x_sorted[i] == x_sorted[i + 1]:
            continue
        if i + 1 < min_leaf or n - i - 1 < min_leaf:
            continue
        gr = gt - gl
        hr = ht - hl
        gain = 0.5 * (gl * gl / (hl + lam) + gr * gr / (hr + lam) - gt * gt / (ht + lam)) - gamma
        if gain > best_gain:
            best_gain = gain
            best_pos = i
    if best_pos == -1:
        return neg_inf, -1
    return best_gain, best_pos

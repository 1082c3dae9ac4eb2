"""Pure-numpy split-scan kernel (fallback backend).

Must stay bit-identical to the compiled kernel in _split_cy.pyx: prefix
sums are sequential (np.cumsum accumulates left to right, exactly like the
C loop) and the gain expression is written with the same operation order.
"""

from __future__ import annotations

import numpy as np

BACKEND = "numpy"


def best_split_scan(x_sorted, g_sorted, h_sorted, lam, gamma, min_leaf):
    """Best split position of one feature, samples pre-sorted by value.

    Position i splits between x_sorted[i] and x_sorted[i+1] (left gets
    indices 0..i). Returns (gain, pos); pos == -1 when no valid split.
    """
    n = x_sorted.shape[0]
    if n < 2 * min_leaf:
        return -np.inf, -1
    gc = np.cumsum(g_sorted)
    hc = np.cumsum(h_sorted)
    gt = gc[-1]
    ht = hc[-1]
    gl = gc[:-1]
    hl = hc[:-1]
    gr = gt - gl
    hr = ht - hl
    gains = 0.5 * (gl * gl / (hl + lam) + gr * gr / (hr + lam) - gt * gt / (ht + lam)) - gamma
    valid = x_sorted[:-1] != x_sorted[1:]
    if min_leaf > 1:
        valid = valid.copy()
        valid[: min_leaf - 1] = False
    valid[n - min_leaf :] = False
    gains = np.where(valid, gains, -np.inf)
    pos = int(np.argmax(gains))
    best = float(gains[pos])
    if best == -np.inf:
        return -np.inf, -1
    return best, pos

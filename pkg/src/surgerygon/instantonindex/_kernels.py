"""Hot loops of the decomposition search, compiled with numba when available."""

from __future__ import annotations

import numpy as np

from .._accel import njit

__all__ = ["search_kernel"]


@njit(cache=True)
def search_kernel(cands, offsets, counts, v, window, N, k):
    """Minimise the integer energy numerator over all admissible tuples.

    ``cands[offsets[p] : offsets[p] + counts[p]]`` are the candidate vectors
    of position ``p`` in lexicographic order.  Positions ``0..k-2`` run
    through an odometer; the last vector is ``v + m·1 - partial``.  Ties in
    energy go to the smaller index, then the smaller ``|m|`` (``m >= 0``
    first), then the lexicographically first tuple.

    Returns ``(best_q, best_ind, best_idx, best_m, found)``; both ``q`` and
    ``ind`` use ordered-pair sums.
    """
    nfree = k - 1
    idx = np.zeros(max(nfree, 1), dtype=np.int64)
    best_idx = np.zeros(max(nfree, 1), dtype=np.int64)
    best_q = np.int64(0)
    best_m = np.int64(0)
    best_mkey = np.int64(0)
    best_ind = np.int64(0)
    found = False
    W = np.zeros((k, N), dtype=np.int64)
    partial = np.zeros(N, dtype=np.int64)
    brk = np.zeros(k, dtype=np.int64)
    while True:
        for c in range(N):
            partial[c] = 0
        for p in range(nfree):
            row = offsets[p] + idx[p]
            for c in range(N):
                W[p, c] = cands[row, c]
                partial[c] += cands[row, c]
        lo = -(1 << 40)
        hi = 1 << 40
        for c in range(N):
            a = -window - v[c] + partial[c]
            b = window - v[c] + partial[c]
            if a > lo:
                lo = a
            if b < hi:
                hi = b
        for m in range(lo, hi + 1):
            for c in range(N):
                W[k - 1, c] = v[c] + m - partial[c]
            for p in range(k):
                s = 0
                for c in range(N):
                    s += W[p, c]
                brk[p] = s
            sq = 0
            sqb = 0
            l1b = 0
            same = 0
            for i in range(k):
                for j in range(i + 1, k):
                    for c in range(N):
                        d = W[i, c] - W[j, c]
                        sq += d * d
                    db = brk[i] - brk[j]
                    sqb += db * db
                    l1b += abs(db)
                    if db % N == 0:
                        same += 1
            q = 2 * (N * sq - sqb)
            # sq - |brackets| - h0 with h0 = Σ(multiplicity²) - 1 = k - 1 + 2·same
            ind = 2 * sq - 2 * l1b - (k - 1 + 2 * same)
            mkey = 2 * abs(m) + (1 if m < 0 else 0)
            better = (not found) or q < best_q
            if not better and q == best_q:
                better = ind < best_ind or (ind == best_ind and mkey < best_mkey)
            if better:
                found = True
                best_q = q
                best_ind = ind
                best_m = m
                best_mkey = mkey
                for p in range(nfree):
                    best_idx[p] = idx[p]
        # odometer step, last free position fastest
        p = nfree - 1
        while p >= 0:
            idx[p] += 1
            if idx[p] < counts[p]:
                break
            idx[p] = 0
            p -= 1
        if p < 0:
            break
    return best_q, best_ind, best_idx, best_m, found

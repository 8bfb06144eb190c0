"""Exhaustive search for minimal-energy decompositions of a charge vector."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Optional, Sequence, Tuple

import numpy as np

from .._accel import use_numba
from ..weightlattice import format_rational
from ._kernels import search_kernel
from .formulas import ChargeEnsemble, energy, index_Xbar

__all__ = ["DecompRow", "SearchError", "nice_decomposition_search", "candidate_vectors", "DEFAULT_WINDOW"]

DEFAULT_WINDOW = 2


class SearchError(ValueError):
    """Infeasible search request."""


@dataclass(frozen=True)
class DecompRow:
    N: int
    v: Tuple[int, ...]
    s: Tuple[int, ...]
    ensemble: ChargeEnsemble
    kappa: Fraction
    ind_plus_h0: int
    shift: int  # Σw = v + shift·(1, …, 1)

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "v": list(self.v),
            "s": list(self.s),
            "w": self.ensemble.to_json(),
            "kappa": format_rational(self.kappa),
            "ind_plus_h0": self.ind_plus_h0,
            "shift": self.shift,
        }


@lru_cache(maxsize=None)
def candidate_vectors(N: int, window: int, residue: int) -> np.ndarray:
    """Vectors in ``[-window, window]^N`` whose entry sum is ``residue`` mod N, lexicographic."""
    rng = range(-window, window + 1)
    rows = [c for c in product(rng, repeat=N) if sum(c) % N == residue % N]
    arr = np.array(rows, dtype=np.int64).reshape(len(rows), N)
    arr.setflags(write=False)
    return arr


def _shift_key(m: int) -> int:
    return 2 * abs(m) + (m < 0)


def _numpy_search(cands, v, window, N, k):
    """Vectorised fallback with the same lexicographic tie-break as the kernel."""
    free = [c for c in cands[:-1]]
    if k == 1:
        grids = np.zeros((1, 0, N), dtype=np.int64)
    else:
        mesh = np.meshgrid(*[np.arange(len(c)) for c in free], indexing="ij")
        idx = np.stack([m.ravel() for m in mesh], axis=1)  # lexicographic order
        grids = np.stack([free[p][idx[:, p]] for p in range(k - 1)], axis=1)
    partial = grids.sum(axis=1) if k > 1 else np.zeros((1, N), dtype=np.int64)
    lo = (-window - v[None, :] + partial).max(axis=1)
    hi = (window - v[None, :] + partial).min(axis=1)
    best = None
    for m in range(int(lo.min()), int(hi.max()) + 1):
        ok = (lo <= m) & (m <= hi)
        if not ok.any():
            continue
        last = v[None, :] + m - partial[ok]
        W = np.concatenate([grids[ok], last[:, None, :]], axis=1) if k > 1 else last[:, None, :]
        diff = W[:, :, None, :] - W[:, None, :, :]
        sq = (diff ** 2).sum(axis=(1, 2, 3))
        b = W.sum(axis=2)
        sqb = ((b[:, :, None] - b[:, None, :]) ** 2).sum(axis=(1, 2))
        q = N * sq - sqb
        db = b[:, :, None] - b[:, None, :]
        counts = (db % N == 0).sum(axis=(1, 2))  # Σ multiplicity²
        ind = sq - np.abs(db).sum(axis=(1, 2)) - (counts - 1)
        rows = np.nonzero(ok)[0]
        j = int(np.lexsort((rows, ind, q))[0])
        cand = (int(q[j]), int(ind[j]), _shift_key(m), int(rows[j]), m)
        if best is None or cand < best:
            best = cand
    if best is None:
        return None
    q, _, _, row, m = best
    ws = [tuple(int(x) for x in grids[row, p]) for p in range(k - 1)]
    ws.append(tuple(int(x) for x in (v + m - partial[row])))
    return q, ws, m


def nice_decomposition_search(
    v: Sequence[int],
    s: Sequence[int],
    k: Optional[int] = None,
    window: int = DEFAULT_WINDOW,
    accelerate: Optional[bool] = None,
) -> DecompRow:
    """Minimal-energy ``w_1..w_k`` in ``[-window, window]^N`` with ``[w_i] ≡ s_i`` and ``Σw ∈ v + Z(1,…,1)``.

    The common shift by ``(1, …, 1)`` is allowed because that vector is the
    trivial class.  Shifting a single ``w_i`` by a multiple of ``(1, …, 1)``
    keeps both its residue and the energy, but not the index, so ties in
    energy are broken by the smallest index first.  Remaining ties go to
    the smallest shift (non-negative first) and then to the lexicographically
    first tuple; vectors sharing a target exponent are finally put in
    lexicographic order.  ``accelerate`` picks the compiled kernel
    (default: whenever numba is available).
    """
    v_arr = np.array([int(x) for x in v], dtype=np.int64)
    s = tuple(int(x) for x in s)
    if k is not None and k != len(s):
        raise SearchError(f"expected {k} target exponents, got {len(s)}")
    N, k = len(v_arr), len(s)
    if N < 1 or k < 1:
        raise SearchError("need N >= 1 and k >= 1")
    if window < 0:
        raise SearchError("window must be non-negative")
    if (int(v_arr.sum()) - sum(s)) % N:
        raise SearchError(f"[v] = {int(v_arr.sum())} is not congruent to Σs = {sum(s)} mod {N}")
    cands = [candidate_vectors(N, window, si % N) for si in s]
    use_kernel = use_numba() if accelerate is None else (accelerate and use_numba())
    if use_kernel:
        flat = np.ascontiguousarray(np.concatenate(cands[:-1], axis=0)) if k > 1 else np.zeros((1, N), dtype=np.int64)
        counts = np.array([len(c) for c in cands[:-1]] or [1], dtype=np.int64)
        offsets = np.concatenate([[0], np.cumsum(counts)[:-1]]).astype(np.int64)
        q, _, idx, m, found = search_kernel(flat, offsets, counts, v_arr, window, N, k)
        if not found:
            raise SearchError("no decomposition inside the window")
        ws = [tuple(int(x) for x in cands[p][idx[p]]) for p in range(k - 1)]
        partial = np.sum([np.array(w) for w in ws], axis=0) if ws else np.zeros(N, dtype=np.int64)
        ws.append(tuple(int(x) for x in v_arr + int(m) - partial))
        m = int(m)
    else:
        res = _numpy_search(cands, v_arr, window, N, k)
        if res is None:
            raise SearchError("no decomposition inside the window")
        _, ws, m = res
    for si in set(s):
        pos = [p for p in range(k) if s[p] == si]
        for p, w in zip(pos, sorted(ws[p] for p in pos)):
            ws[p] = w
    E = ChargeEnsemble(tuple(ws))
    return DecompRow(N, tuple(int(x) for x in v_arr), s, E, energy(E), index_Xbar(E), m)

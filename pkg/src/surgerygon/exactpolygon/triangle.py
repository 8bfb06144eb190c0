"""Triangle detection for three complexes with maps f, g, h."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Sequence

from ..f2chain import (
    ChainComplexF2,
    ChainMapF2,
    F2Error,
    MatrixF2,
    Subspace,
    induced_rank,
    is_quasi_iso,
    kernel,
)

__all__ = ["TriangleReport", "triangle_detect", "triangle_from_ngon"]


@dataclass(frozen=True)
class TriangleReport:
    identities: Dict[int, List[bool]]  # identity index -> per-corner verdicts
    quasi_iso: List[bool]
    exact: List[bool]

    @property
    def ok(self) -> bool:
        return all(all(v) for v in self.identities.values()) and all(self.quasi_iso) and all(self.exact)

    def first_failure(self):
        for idx in sorted(self.identities):
            for i, v in enumerate(self.identities[idx]):
                if not v:
                    return idx, i
        return None

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "identities": {str(k): v for k, v in self.identities.items()},
            "quasi_iso": self.quasi_iso,
            "exact": self.exact,
        }


def _cone_map(d: Sequence[MatrixF2], f: Sequence[MatrixF2], g: Sequence[MatrixF2], i: int):
    """The map ``(f_i, g_i): C_i -> Cone(f_{i+1})`` on doubled complexes."""
    a, b, c = i % 3, (i + 1) % 3, (i + 2) % 3
    nb, nc = d[b].nrows, d[c].nrows
    cone_d = MatrixF2.block([[d[b], MatrixF2.zeros(nb, nc)], [f[b], d[c]]])
    stacked = MatrixF2(nb + nc, d[a].nrows, f[a].rows + g[a].rows)
    src = ChainComplexF2.ungraded(d[a])
    tgt = ChainComplexF2.ungraded(cone_d)
    return ChainMapF2.ungraded(src, tgt, stacked)


def triangle_detect(
    complexes: Sequence[ChainComplexF2],
    f: Sequence[MatrixF2],
    g: Sequence[MatrixF2],
    h: Sequence[MatrixF2],
) -> TriangleReport:
    """Check the four triangle identities and their homological consequences.

    ``f[i]: C_i -> C_{i+1}``, ``g[i]: C_i -> C_{i+2}``, ``h[i]: C_i -> C_i``,
    all as total matrices, indices mod 3.  Identity 0 is ``d² = 0``.
    Quasi-isomorphism and exactness are evaluated only when all identities
    hold (otherwise the map to the cone is not a chain map).
    """
    if len(complexes) != 3 or len(f) != 3 or len(g) != 3 or len(h) != 3:
        raise F2Error("a triangle has exactly three corners")
    d = [C.total_differential() for C in complexes]
    dims = [m.nrows for m in d]
    for i in range(3):
        for name, m, t in (("f", f[i], (i + 1) % 3), ("g", g[i], (i + 2) % 3), ("h", h[i], i)):
            if m.shape != (dims[t], dims[i]):
                raise F2Error(f"{name}_{i} has shape {m.shape}, expected {(dims[t], dims[i])}")
    ids: Dict[int, List[bool]] = {0: [], 1: [], 2: [], 3: []}
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        ids[0].append((d[i] @ d[i]).is_zero())
        ids[1].append((d[j] @ f[i] + f[i] @ d[i]).is_zero())
        ids[2].append((d[k] @ g[i] + f[j] @ f[i] + g[i] @ d[i]).is_zero())
        four = d[i] @ h[i] + f[k] @ g[i] + g[j] @ f[i] + h[i] @ d[i] + MatrixF2.identity(dims[i])
        ids[3].append(four.is_zero())
    if not all(all(v) for v in ids.values()):
        return TriangleReport(ids, [False] * 3, [False] * 3)
    qi = [is_quasi_iso(_cone_map(d, f, g, i)) for i in range(3)]
    exact = []
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        # im (f_i)_* = ker (f_j)_*: composite vanishes and ranks add up
        B = Subspace.whole(d[k].ncols).image(d[k])
        comp_zero = B.contains_space(kernel(d[i]).image(f[j] @ f[i]))
        hj = dims[j] - 2 * d[j].rank()
        ranks = induced_rank(f[i], d[i], d[j]) + induced_rank(f[j], d[j], d[k])
        exact.append(comp_zero and ranks == hj)
    return TriangleReport(ids, qi, exact)


def triangle_from_ngon(G) -> tuple:
    """Read ``(complexes, f, g, h)`` off an exact 3-gon."""
    if G.n != 3:
        raise F2Error("triangle data needs a 3-gon")
    cs = list(G.complexes)
    f = [G.f(i, i + 1) for i in range(3)]
    g = [G.f(i, i + 2) for i in range(3)]
    h = [G.f(i, i + 3) for i in range(3)]
    return cs, f, g, h

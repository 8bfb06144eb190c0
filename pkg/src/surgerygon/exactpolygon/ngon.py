"""Exact n-gons: identity checking, total and side complexes, spectral sequences."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from ..f2chain import (
    ChainComplexF2,
    ChainMapF2,
    F2Error,
    FilteredComplexF2,
    MatrixF2,
    SpectralPage,
    associated_graded_homology,
    induced_rank,
    layout,
    scatter,
    spectral_sequence,
)

__all__ = [
    "ExactNGon",
    "IdentityCheck",
    "NGonReport",
    "SideComplex",
    "verify_ngon",
    "total_complex",
    "side_complex",
    "polygon_spectral_sequence",
    "side_spectral_sequence",
    "euler_check",
]


@dataclass(frozen=True, eq=False)
class ExactNGon:
    """Complexes ``C_0..C_{n-1}`` and maps ``f^j_k`` for ``0 <= j < n``, ``j < k <= j+n``.

    ``maps[(j, k)]`` is a matrix on total coordinates from ``C_j`` to
    ``C_{k mod n}``; absent keys are zero.  ``twist`` holds the integers
    ``ε_0..ε_{n-1}`` of the grading convention (extended by
    ``ε(m+n) = ε(m) + n``); it only matters to :func:`euler_check`.
    """

    complexes: Tuple[ChainComplexF2, ...]
    maps: Mapping[Tuple[int, int], MatrixF2] = field(default_factory=dict)
    twist: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        cs = tuple(self.complexes)
        n = len(cs)
        if n < 1:
            raise F2Error("a polygon needs at least one complex")
        object.__setattr__(self, "complexes", cs)
        maps = {}
        for (j, k), m in self.maps.items():
            if not (0 <= j < n and j < k <= j + n):
                raise F2Error(f"map index {(j, k)} outside 0 <= j < n, j < k <= j+n")
            want = (cs[k % n].total_dim, cs[j].total_dim)
            if m.shape != want:
                raise F2Error(f"map f^{j}_{k} has shape {m.shape}, expected {want}")
            if not m.is_zero():
                maps[(j, k)] = m
        object.__setattr__(self, "maps", maps)
        tw = tuple(self.twist) if self.twist is not None else (0,) * n
        if len(tw) != n:
            raise F2Error("twist needs one entry per complex")
        object.__setattr__(self, "twist", tw)

    @property
    def n(self) -> int:
        return len(self.complexes)

    def C(self, j: int) -> ChainComplexF2:
        return self.complexes[j % self.n]

    def d(self, j: int) -> MatrixF2:
        return self.C(j).total_differential()

    def f(self, j: int, k: int) -> MatrixF2:
        """``f^j_k`` for any integers ``j < k <= j+n`` (periodic in both)."""
        n = self.n
        if not (j < k <= j + n):
            raise F2Error(f"f^{j}_{k} is not part of the polygon data")
        shift = (j // n) * n
        m = self.maps.get((j - shift, k - shift))
        if m is None:
            return MatrixF2.zeros(self.C(k).total_dim, self.C(j).total_dim)
        return m

    def eps(self, m: int) -> int:
        q, r = divmod(m, self.n)
        return self.twist[r] + q * self.n

    def direct_sum(self, other: "ExactNGon") -> "ExactNGon":
        """Summand-wise direct sum (twists must agree)."""
        if self.n != other.n or self.twist != other.twist:
            raise F2Error("polygons differ in size or twist")
        sums, idx = [], []
        for a, b in zip(self.complexes, other.complexes):
            dims, (ia, ib) = layout([(a, 0), (b, 0)])
            sums.append(a.direct_sum(b))
            idx.append((ia, ib))
        maps = {}
        keys = set(self.maps) | set(other.maps)
        for j, k in keys:
            t = k % self.n
            nr, nc = sums[t].total_dim, sums[j].total_dim
            rows = scatter(self.f(j, k), idx[t][0], idx[j][0], nr, nc)
            scatter(other.f(j, k), idx[t][1], idx[j][1], nr, nc, into=rows)
            maps[(j, k)] = MatrixF2(nr, nc, tuple(rows))
        return ExactNGon(tuple(sums), maps, self.twist)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "twist": list(self.twist),
            "complexes": [c.to_json() for c in self.complexes],
            "maps": [
                {"from": j, "to": k, "matrix": m.to_strings()} for (j, k), m in sorted(self.maps.items())
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ExactNGon":
        cs = tuple(ChainComplexF2.from_json(c) for c in obj["complexes"])
        n = len(cs)
        if "n" in obj and obj["n"] != n:
            raise F2Error("declared n disagrees with the number of complexes")
        maps = {}
        for ent in obj.get("maps", []):
            j, k = int(ent["from"]), int(ent["to"])
            ncols = cs[j % n].total_dim
            rows = ent["matrix"]
            maps[(j, k)] = MatrixF2.from_strings(rows, ncols) if rows else MatrixF2.zeros(cs[k % n].total_dim, ncols)
        return cls(cs, maps, tuple(obj["twist"]) if "twist" in obj else None)


@dataclass(frozen=True)
class IdentityCheck:
    j: int
    l: int
    holds: bool
    wraps: bool


@dataclass(frozen=True)
class NGonReport:
    ok: bool
    checks: Tuple[IdentityCheck, ...]
    differentials_ok: bool

    @property
    def failures(self) -> List[IdentityCheck]:
        return [c for c in self.checks if not c.holds]

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "differentials_ok": self.differentials_ok,
            "failures": [[c.j, c.l] for c in self.failures],
            "checked": len(self.checks),
        }


def verify_ngon(G: ExactNGon) -> NGonReport:
    """Evaluate every polygon identity ``Σ f^k_l f^j_k = d f^j_l + f^j_l d (+1)``.

    One instance per ``0 <= j < n`` and ``j < l <= j+n``; the identity term
    appears exactly when ``l - j = n`` and is compared as an exact matrix.
    """
    n = G.n
    checks = []
    for j in range(n):
        dj = G.d(j)
        for l in range(j + 1, j + n + 1):
            dl = G.d(l)
            fjl = G.f(j, l)
            lhs = dl @ fjl + fjl @ dj
            for k in range(j + 1, l):
                lhs = lhs + G.f(k, l) @ G.f(j, k)
            wraps = l - j == n
            if wraps:
                lhs = lhs + MatrixF2.identity(dj.nrows)
            checks.append(IdentityCheck(j, l, lhs.is_zero(), wraps))
    # the complexes validated d∘d = 0 on construction
    ok = all(c.holds for c in checks)
    return NGonReport(ok, tuple(checks), True)


def _require(G: ExactNGon) -> None:
    rep = verify_ngon(G)
    if not rep.ok:
        bad = ", ".join(f"(j={c.j}, l={c.l})" for c in rep.failures[:5])
        raise F2Error(f"polygon identities fail at {bad}")


def _offsets(sizes: Sequence[int]) -> List[int]:
    out, acc = [], 0
    for s in sizes:
        out.append(acc)
        acc += s
    return out


def _assemble(blocks: Dict[Tuple[int, int], MatrixF2], sizes: Sequence[int]) -> MatrixF2:
    """Square block matrix with ``blocks[(row, col)]`` placed at the given slots."""
    off = _offsets(sizes)
    n = sum(sizes)
    rows = [0] * n
    for (a, b), m in blocks.items():
        ridx = range(off[a], off[a] + sizes[a])
        cidx = list(range(off[b], off[b] + sizes[b]))
        scatter(m, ridx, cidx, n, n, into=rows)
    return MatrixF2(n, n, tuple(rows))


@dataclass(frozen=True, eq=False)
class TotalComplex:
    complex: ChainComplexF2
    D: MatrixF2
    K: MatrixF2
    sizes: Tuple[int, ...]

    @property
    def nilpotent_defect(self) -> MatrixF2:
        """``DK + KD + 1``; nilpotent for every exact polygon."""
        return self.D @ self.K + self.K @ self.D + MatrixF2.identity(self.D.nrows)


def total_complex(G: ExactNGon) -> TotalComplex:
    """``(⊕C_j, D)`` with ``D = Σ d_j + Σ_{j<k<n} f^j_k`` and the contraction data ``K``.

    The total space mixes gradings, so the complex is returned in the
    doubled ungraded form (see ``ChainComplexF2.ungraded``).
    """
    _require(G)
    n = G.n
    sizes = tuple(G.C(j).total_dim for j in range(n))
    dblocks = {(j, j): G.d(j) for j in range(n)}
    for j in range(n):
        for k in range(j + 1, n):
            dblocks[(k, j)] = G.f(j, k)
    kblocks = {}
    for j in range(n):
        for k in range(j, n):
            kblocks[(j, k)] = G.f(k, n + j)
    D = _assemble(dblocks, sizes)
    K = _assemble(kblocks, sizes)
    if not (D @ D).is_zero():
        raise F2Error("total differential does not square to zero")
    tc = TotalComplex(ChainComplexF2.ungraded(D), D, K, sizes)
    if not tc.nilpotent_defect.is_nilpotent():
        raise F2Error("DK + KD + 1 is not nilpotent")
    return tc


@dataclass(frozen=True, eq=False)
class SideComplex:
    """``C_i' = C_{i+1} ⊕ … ⊕ C_{i+n-1}`` and its comparison data with ``C_i``.

    ``F: C_i -> C_i'`` and ``G: C_i' -> C_i`` are chain maps with
    ``GF + 1 = d h + h d`` (``h = f^i_{i+n}``) and
    ``FG + D'K' + K'D' = Φ`` an automorphism of ``C_i'``.
    """

    index: int
    complex: ChainComplexF2
    D: MatrixF2
    F: MatrixF2
    G: MatrixF2
    h: MatrixF2
    K: MatrixF2
    sizes: Tuple[int, ...]
    base: ChainComplexF2

    @property
    def automorphism(self) -> MatrixF2:
        return self.F @ self.G + self.D @ self.K + self.K @ self.D

    def map_F(self) -> ChainMapF2:
        return ChainMapF2.ungraded(self.base, self.complex, self.F)

    def map_G(self) -> ChainMapF2:
        return ChainMapF2.ungraded(self.complex, self.base, self.G)

    def checks(self) -> Dict[str, bool]:
        d = self.base.diffs.get(0, MatrixF2.zeros(self.h.nrows, self.h.ncols))
        one = MatrixF2.identity(d.nrows)
        return {
            "D_squared_zero": (self.D @ self.D).is_zero(),
            "F_chain_map": (self.D @ self.F + self.F @ d).is_zero(),
            "G_chain_map": (d @ self.G + self.G @ self.D).is_zero(),
            "GF_homotopic_to_identity": (self.G @ self.F + one + d @ self.h + self.h @ d).is_zero(),
            "FG_homotopic_to_automorphism": self.automorphism.is_invertible(),
            "automorphism_unipotent": (self.automorphism + MatrixF2.identity(self.D.nrows)).is_nilpotent(),
        }


def side_complex(G: ExactNGon, i: int) -> SideComplex:
    _require(G)
    n = G.n
    idx = list(range(i + 1, i + n))
    sizes = tuple(G.C(j).total_dim for j in idx)
    pos = {j: a for a, j in enumerate(idx)}
    dblocks = {(pos[j], pos[j]): G.d(j) for j in idx}
    for j in idx:
        for k in idx:
            if j < k:
                dblocks[(pos[k], pos[j])] = G.f(j, k)
    kblocks = {}
    for j in idx:
        for k in idx:
            if j <= k:
                kblocks[(pos[j], pos[k])] = G.f(k, n + j)
    D = _assemble(dblocks, sizes)
    K = _assemble(kblocks, sizes)
    ci = G.C(i).total_dim
    off = _offsets(sizes)
    total = sum(sizes)
    Frows = [0] * total
    Grows = [0] * ci
    for j in idx:
        a = pos[j]
        scatter(G.f(i, j), range(off[a], off[a] + sizes[a]), list(range(ci)), total, ci, into=Frows)
        scatter(G.f(j, n + i), list(range(ci)), list(range(off[a], off[a] + sizes[a])), ci, total, into=Grows)
    F = MatrixF2(total, ci, tuple(Frows))
    Gm = MatrixF2(ci, total, tuple(Grows))
    return SideComplex(
        index=i % n,
        complex=ChainComplexF2.ungraded(D),
        D=D,
        F=F,
        G=Gm,
        h=G.f(i, i + n),
        K=K,
        sizes=sizes,
        base=ChainComplexF2.ungraded(G.d(i)),
    )


def _block_filtration(C: ChainComplexF2, sizes: Sequence[int]) -> FilteredComplexF2:
    """Filtration ``F_p = blocks p..end`` of a doubled ungraded complex."""
    off = _offsets(sizes)
    n = sum(sizes)
    levels = []
    for p in range(len(sizes)):
        coords = list(range(off[p], n))
        levels.append(coords + [n + c for c in coords])
    return FilteredComplexF2.from_blocks(C, levels)


@dataclass(frozen=True)
class PolygonSpectralData:
    pages: Tuple[SpectralPage, ...]
    limit: Dict[Tuple[int, int], int]
    first_page_expected: Dict[int, int]
    first_page_differential_ranks: Dict[int, int]
    first_page_differential_expected: Dict[int, int]

    @property
    def first_page_matches(self) -> bool:
        got = {}
        for (p, q), v in self.pages[0].terms.items():
            if q == 0:
                got[p] = v
        same_terms = got == self.first_page_expected
        return same_terms and self.first_page_differential_ranks == self.first_page_differential_expected

    @property
    def limit_total(self) -> int:
        # both degrees of the doubled form carry the same data; count one
        return sum(v for (p, q), v in self.limit.items() if q == 0)

    @property
    def last_page_total(self) -> int:
        return sum(v for (p, q), v in self.pages[-1].terms.items() if q == 0)


def _ss_data(C, sizes, ds, fs, max_page) -> PolygonSpectralData:
    F = _block_filtration(C, sizes)
    pages = tuple(spectral_sequence(F, max_page))
    limit = associated_graded_homology(F)
    expected = {p: d.nrows - 2 * d.rank() for p, d in enumerate(ds)}
    ranks = {p: pages[0].rank((p, 0)) for p in range(len(sizes) - 1)}
    want = {p: induced_rank(fs[p], ds[p], ds[p + 1]) for p in range(len(sizes) - 1)}
    return PolygonSpectralData(pages, limit, expected, ranks, want)


def polygon_spectral_sequence(G: ExactNGon, max_page: Optional[int] = None) -> PolygonSpectralData:
    """Spectral sequence of the filtration ``F_p = C_p ⊕ … ⊕ C_{n-1}`` of the total complex.

    The first computed page is ``⊕ H(C_j)`` with differential ``Σ (f^j_{j+1})_*``
    and the limit vanishes.
    """
    tc = total_complex(G)
    n = G.n
    ds = [G.d(j) for j in range(n)]
    fs = [G.f(j, j + 1) for j in range(n - 1)]
    return _ss_data(tc.complex, tc.sizes, ds, fs, max_page or n + 1)


def side_spectral_sequence(G: ExactNGon, i: int, max_page: Optional[int] = None) -> PolygonSpectralData:
    """Same filtration on ``C_i'``; the limit has the size of ``H(C_i)``."""
    sc = side_complex(G, i)
    n = G.n
    idx = list(range(i + 1, i + n))
    ds = [G.d(j) for j in idx]
    fs = [G.f(j, j + 1) for j in idx[:-1]]
    return _ss_data(sc.complex, sc.sizes, ds, fs, max_page or n + 1)


# ---------------------------------------------------------------------------
# grading bookkeeping


def _parities(C: ChainComplexF2) -> List[int]:
    return C.parities()


def map_degree_violations(G: ExactNGon) -> List[Tuple[int, int]]:
    """Maps ``f^j_k`` with a nonzero entry of the wrong mod-2 degree.

    ``f^j_k`` must have degree ``k - j - 1 + ε(k) - ε(j)``; the differentials
    must be odd.
    """
    n = G.n
    bad = []
    for j in range(n):
        pj = _parities(G.C(j))
        for k in range(j + 1, j + n + 1):
            m = G.f(j, k)
            if m.is_zero():
                continue
            pk = _parities(G.C(k))
            want = (k - j - 1 + G.eps(k) - G.eps(j)) % 2
            if any(((r >> c) & 1) and (pk[i] - pj[c]) % 2 != want
                   for i, r in enumerate(m.rows) for c in range(m.ncols)):
                bad.append((j, k))
    return bad


def euler_check(G: ExactNGon) -> bool:
    """``Σ_j (-1)^{j+ε_j} χ(C_j) = 0`` after checking the map degrees.

    With all ``ε_j = 0`` this is the plain alternating sum.  Raises if some
    map has the wrong mod-2 degree.
    """
    bad = map_degree_violations(G)
    if bad:
        raise F2Error(f"maps with wrong mod-2 degree: {bad}")
    total = sum((-1) ** ((j + G.eps(j)) % 2) * G.C(j).euler_characteristic() for j in range(G.n))
    return total == 0

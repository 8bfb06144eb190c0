"""Exact n-cubes over the path graph on subsets of ``{0..n-1}``."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Dict, FrozenSet, List, Mapping, Optional, Tuple

from ..f2chain import ChainComplexF2, F2Error, MatrixF2, layout, scatter
from .ngon import ExactNGon

__all__ = [
    "GnPath",
    "ExactNCube",
    "CubeReport",
    "enumerate_paths",
    "all_paths",
    "verify_cube",
    "cube_to_polygon",
    "subsets",
]

Subset = FrozenSet[int]


def subsets(n: int, size: Optional[int] = None) -> List[Subset]:
    """Subsets of ``{0..n-1}`` ordered by size, then lexicographically."""
    sizes = range(n + 1) if size is None else [size]
    return [frozenset(c) for s in sizes for c in combinations(range(n), s)]


@dataclass(frozen=True)
class GnPath:
    """A path in the cube graph.

    ``kind == "edge"``: start at ``start`` and add ``sigma[0], sigma[1], …``.
    ``kind == "through"``: start at the complement of ``sigma``, add the
    ``sigma`` elements up to the full set, take the connecting edge to the
    empty set, then add the ``tau`` elements.
    """

    n: int
    kind: str
    sigma: Tuple[int, ...]
    tau: Tuple[int, ...] = ()
    start: Subset = frozenset()

    def __post_init__(self):
        full = set(range(self.n))
        if self.kind not in ("edge", "through"):
            raise F2Error(f"unknown path kind {self.kind!r}")
        if len(set(self.sigma)) != len(self.sigma) or len(set(self.tau)) != len(self.tau):
            raise F2Error("path labels must be injective")
        if not set(self.sigma) <= full or not set(self.tau) <= full:
            raise F2Error("path labels outside the index set")
        if self.kind == "edge":
            object.__setattr__(self, "start", frozenset(self.start))
            if not self.sigma:
                raise F2Error("edge paths have positive length")
            if set(self.sigma) & self.start:
                raise F2Error("edge path adds an element already present")
            if self.tau:
                raise F2Error("edge paths carry no second injection")
        else:
            if set(self.sigma) & set(self.tau):
                raise F2Error("the two injections must have disjoint images")
            object.__setattr__(self, "start", frozenset(full - set(self.sigma)))

    @property
    def source(self) -> Subset:
        return self.start

    @property
    def target(self) -> Subset:
        if self.kind == "edge":
            return self.start | frozenset(self.sigma)
        return frozenset(self.tau)

    @property
    def length(self) -> int:
        if self.kind == "edge":
            return len(self.sigma)
        return len(self.sigma) + 1 + len(self.tau)

    def to_json(self) -> dict:
        if self.kind == "edge":
            return {"kind": "edge", "start": sorted(self.start), "sigma": list(self.sigma)}
        return {"kind": "through", "sigma": list(self.sigma), "tau": list(self.tau)}

    @classmethod
    def from_json(cls, n: int, obj: dict) -> "GnPath":
        if obj["kind"] == "edge":
            return cls(n, "edge", tuple(obj["sigma"]), (), frozenset(obj["start"]))
        return cls(n, "through", tuple(obj["sigma"]), tuple(obj.get("tau", ())))


def enumerate_paths(n: int, S, T, max_len: Optional[int] = None) -> List[GnPath]:
    """All paths from ``S`` to ``T`` of length at most ``max_len`` (default ``n+1``)."""
    S, T = frozenset(S), frozenset(T)
    full = frozenset(range(n))
    if not (S <= full and T <= full):
        raise F2Error("subsets must lie in {0..n-1}")
    cap = n + 1 if max_len is None else max_len
    out = []
    if S < T and len(T - S) <= cap:
        for sig in permutations(sorted(T - S)):
            out.append(GnPath(n, "edge", sig, (), S))
    # through-connecting paths need T inside S (images disjoint)
    if T <= S and n - len(S) + 1 + len(T) <= cap:
        for sig in permutations(sorted(full - S)):
            for tau in permutations(sorted(T)):
                out.append(GnPath(n, "through", sig, tau))
    return out


def all_paths(n: int) -> List[GnPath]:
    return [p for S in subsets(n) for T in subsets(n) for p in enumerate_paths(n, S, T)]


@dataclass(frozen=True, eq=False)
class ExactNCube:
    """Complexes at every subset plus a total matrix ``f_q`` for each path ``q``."""

    n: int
    complexes: Mapping[Subset, ChainComplexF2]
    path_maps: Mapping[GnPath, MatrixF2] = field(default_factory=dict)

    def __post_init__(self):
        cs = {frozenset(k): v for k, v in self.complexes.items()}
        missing = [S for S in subsets(self.n) if S not in cs]
        grading = next(iter(cs.values())).grading if cs else "integer"
        for S in missing:
            cs[S] = ChainComplexF2.zero(grading)
        object.__setattr__(self, "complexes", cs)
        maps = {}
        for q, m in self.path_maps.items():
            if q.n != self.n:
                raise F2Error("path belongs to a different cube")
            if q.length > self.n + 1:
                raise F2Error("paths longer than n+1 are not part of a cube")
            want = (cs[q.target].total_dim, cs[q.source].total_dim)
            if m.shape != want:
                raise F2Error(f"map on {q} has shape {m.shape}, expected {want}")
            if not m.is_zero():
                maps[q] = m
        object.__setattr__(self, "path_maps", maps)

    def d(self, S) -> MatrixF2:
        return self.complexes[frozenset(S)].total_differential()

    def summed(self, S, T) -> MatrixF2:
        """``f^S_T``: the sum over all paths from ``S`` to ``T`` (zero when none)."""
        S, T = frozenset(S), frozenset(T)
        out = MatrixF2.zeros(self.complexes[T].total_dim, self.complexes[S].total_dim)
        for q in enumerate_paths(self.n, S, T):
            m = self.path_maps.get(q)
            if m is not None:
                out = out + m
        return out

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "complexes": [
                {"subset": sorted(S), "complex": C.to_json()} for S, C in sorted(
                    self.complexes.items(), key=lambda kv: (len(kv[0]), sorted(kv[0])))
            ],
            "paths": [dict(q.to_json(), matrix=m.to_strings()) for q, m in self.path_maps.items()],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ExactNCube":
        n = int(obj["n"])
        cs = {frozenset(e["subset"]): ChainComplexF2.from_json(e["complex"]) for e in obj["complexes"]}
        maps = {}
        for e in obj.get("paths", []):
            q = GnPath.from_json(n, e)
            ncols = cs.get(q.source, ChainComplexF2.zero()).total_dim
            maps[q] = MatrixF2.from_strings(e["matrix"], ncols) if e["matrix"] else MatrixF2.zeros(
                cs.get(q.target, ChainComplexF2.zero()).total_dim, ncols)
        return cls(n, cs, maps)


@dataclass(frozen=True)
class CubeReport:
    ok: bool
    failures: Tuple[Tuple[Tuple[int, ...], Tuple[int, ...], str], ...]
    checked: int

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "checked": self.checked,
            "failures": [{"from": list(s), "to": list(t), "equation": e} for s, t, e in self.failures],
        }


def verify_cube(Q: ExactNCube) -> CubeReport:
    """Evaluate the three cube equations for every relevant pair ``(S, T)``.

    * ``S ⊊ T``: ``d f + f d = Σ_{S ⊊ R ⊊ T} f^R_T f^S_R``
    * ``|T| <= |S|, S != T``: same left side against ``Σ_{S ⊊ R or R ⊊ T}``
    * ``S = T``: as the previous one plus the identity.
    """
    subs = subsets(Q.n)
    cache: Dict[Tuple[Subset, Subset], MatrixF2] = {}

    def f(a, b):
        key = (a, b)
        if key not in cache:
            cache[key] = Q.summed(a, b)
        return cache[key]

    fails = []
    checked = 0
    for S in subs:
        dS = Q.d(S)
        for T in subs:
            if S < T:
                eq = "strict-inclusion"
                Rs = [R for R in subs if S < R < T]
            elif len(T) <= len(S):
                eq = "loop" if S == T else "through"
                Rs = [R for R in subs if S < R or R < T]
            else:
                continue
            checked += 1
            fST = f(S, T)
            lhs = Q.d(T) @ fST + fST @ dS
            for R in Rs:
                lhs = lhs + f(R, T) @ f(S, R)
            if eq == "loop":
                lhs = lhs + MatrixF2.identity(dS.nrows)
            if not lhs.is_zero():
                fails.append((tuple(sorted(S)), tuple(sorted(T)), eq))
    return CubeReport(not fails, tuple(fails), checked)


def cube_to_polygon(Q: ExactNCube, check: bool = True) -> ExactNGon:
    """The ``(n+1)``-gon with ``C_j = ⊕_{|S|=j} C_S`` and ``f^j_k = Σ f^S_T``.

    For ``k > n`` the target ``C_k`` is ``C_{k-n-1}`` and only paths
    through the connecting edge contribute.
    """
    if check:
        rep = verify_cube(Q)
        if not rep.ok:
            raise F2Error(f"cube equations fail: {rep.failures[:3]}")
    n = Q.n
    m = n + 1
    levels = [subsets(n, j) for j in range(m)]
    grading = next(iter(Q.complexes.values())).grading
    sums, index = [], []
    for lvl in levels:
        parts = [(Q.complexes[S], 0) for S in lvl]
        dims, idx = layout(parts)
        C = ChainComplexF2.zero(grading)
        for S in lvl:
            C = C.direct_sum(Q.complexes[S])
        sums.append(C)
        index.append({S: ix for S, ix in zip(lvl, idx)})
    maps = {}
    for j in range(m):
        for k in range(j + 1, j + m + 1):
            t = k % m
            nr, nc = sums[t].total_dim, sums[j].total_dim
            rows = [0] * nr
            for S in levels[j]:
                for T in levels[t]:
                    if k <= n and not S < T:
                        continue
                    if k > n and not T <= S:
                        continue
                    fST = Q.summed(S, T)
                    if not fST.is_zero():
                        scatter(fST, index[t][T], index[j][S], nr, nc, into=rows)
            maps[(j, k)] = MatrixF2(nr, nc, tuple(rows))
    return ExactNGon(tuple(sums), maps)

"""Ribbon trees, cyclic bisections and the face lattice of the associahedron.

A ribbon tree is stored as a nested tuple.  Leaves are the integers
``1..n`` read left to right, every interior vertex is a tuple of at least two
children in ribbon order, and the root leaf sits implicitly above the outer
tuple.  ``(1, (2, 3, 4), (5, 6))`` is a 6-leaf tree with three interior
vertices.

Interior vertices and interior edges are numbered in pre-order: vertex 0 is
the one adjacent to the root and edge ``i`` is the edge entering vertex
``i + 1``.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Tuple, Union

__all__ = [
    "TreeError",
    "CyclicBisection",
    "RibbonTree",
    "InteriorEdge",
    "crossed",
    "pairwise_uncrossed",
    "tree_from_bisections",
    "shrink_edge",
    "all_trees",
    "corolla",
    "left_comb",
    "FaceLattice",
    "face_lattice",
    "catalan",
]

Nested = Union[int, tuple]


class TreeError(ValueError):
    pass


def catalan(m: int) -> int:
    return comb(2 * m, m) // (m + 1)


@dataclass(frozen=True, order=True)
class CyclicBisection:
    """The leaf interval ``{lo, …, hi}`` of ``[n]`` with ``2 <= hi - lo + 1 <= n - 1``."""

    n: int
    lo: int
    hi: int

    def __post_init__(self):
        size = self.hi - self.lo + 1
        if not (1 <= self.lo <= self.hi <= self.n):
            raise TreeError(f"[{self.lo}, {self.hi}] is not an interval of [1, {self.n}]")
        if size < 2 or size > self.n - 1:
            raise TreeError(f"bisection size {size} outside 2..{self.n - 1}")

    @property
    def members(self) -> FrozenSet[int]:
        return frozenset(range(self.lo, self.hi + 1))

    def __len__(self) -> int:
        return self.hi - self.lo + 1

    def contains(self, other: "CyclicBisection") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def to_json(self) -> List[int]:
        return [self.lo, self.hi]


def crossed(a: CyclicBisection, b: CyclicBisection) -> bool:
    """Overlap without containment."""
    overlap = a.lo <= b.hi and b.lo <= a.hi
    return overlap and not a.contains(b) and not b.contains(a)


def pairwise_uncrossed(bs: Iterable[CyclicBisection]) -> bool:
    bs = list(bs)
    return not any(crossed(a, b) for i, a in enumerate(bs) for b in bs[i + 1:])


@dataclass(frozen=True)
class InteriorEdge:
    index: int
    source: int  # interior vertex index
    target: int
    slot: int  # 0-based position among the outgoing edges of the source


def _validate(node: Nested, expect: List[int]) -> None:
    if isinstance(node, int):
        if node != expect[0]:
            raise TreeError(f"leaves must read 1..n left to right, found {node} where {expect[0]} was due")
        expect[0] += 1
        return
    if not isinstance(node, tuple) or len(node) < 2:
        raise TreeError("every interior vertex needs at least two children")
    for c in node:
        _validate(c, expect)


def _normalize(node) -> Nested:
    if isinstance(node, (list, tuple)):
        return tuple(_normalize(c) for c in node)
    if isinstance(node, bool) or not isinstance(node, int):
        raise TreeError(f"unexpected tree entry {node!r}")
    return node


class RibbonTree:
    """An ``n``-ribbon tree.  Immutable and hashable; equality is structural."""

    __slots__ = ("shape", "n", "_vertices", "_parent", "_slot")

    def __init__(self, shape):
        shape = _normalize(shape)
        if isinstance(shape, int):
            raise TreeError("a tree needs an interior vertex")
        counter = [1]
        _validate(shape, counter)
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "n", counter[0] - 1)
        verts: List[tuple] = []
        parent: List[int] = []
        slot: List[int] = []

        def walk(node, par, s):
            if isinstance(node, int):
                return
            me = len(verts)
            verts.append(node)
            parent.append(par)
            slot.append(s)
            for j, c in enumerate(node):
                walk(c, me, j)

        walk(shape, -1, -1)
        object.__setattr__(self, "_vertices", tuple(verts))
        object.__setattr__(self, "_parent", tuple(parent))
        object.__setattr__(self, "_slot", tuple(slot))

    def __setattr__(self, key, value):
        raise AttributeError("RibbonTree is immutable")

    def __eq__(self, other) -> bool:
        return isinstance(other, RibbonTree) and self.shape == other.shape

    def __hash__(self) -> int:
        return hash(self.shape)

    def __repr__(self) -> str:
        return f"RibbonTree({self.shape!r})"

    # structure -----------------------------------------------------------
    @property
    def vertices(self) -> Tuple[tuple, ...]:
        """Interior vertices in pre-order (as subtrees)."""
        return self._vertices

    def degree(self, v: int) -> int:
        """``d(v)``: the number of outgoing edges; the valence is ``d(v) + 1``."""
        return len(self._vertices[v])

    @property
    def degrees(self) -> Tuple[int, ...]:
        return tuple(len(v) for v in self._vertices)

    @property
    def edges(self) -> Tuple[InteriorEdge, ...]:
        return tuple(
            InteriorEdge(t - 1, self._parent[t], t, self._slot[t]) for t in range(1, len(self._vertices))
        )

    def children(self, v: int) -> List[Union[int, Tuple[str, int]]]:
        """Outgoing edges of ``v``: a leaf label, or ``("v", w)`` for interior vertex ``w``."""
        out = []
        for t in range(v + 1, len(self._vertices)):
            if self._parent[t] == v:
                out.append((self._slot[t], ("v", t)))
        kids = dict(out)
        return [kids.get(j, c) for j, c in enumerate(self._vertices[v])]

    def child_vertex(self, v: int, slot: int) -> Optional[int]:
        for t in range(v + 1, len(self._vertices)):
            if self._parent[t] == v and self._slot[t] == slot:
                return t
        return None

    def parent(self, v: int) -> int:
        return self._parent[v]

    def leaf_span(self, v: int) -> Tuple[int, int]:
        leaves = _leaves(self._vertices[v])
        return leaves[0], leaves[-1]

    def leaf_counts(self, v: int) -> Tuple[int, ...]:
        """Number of leaves reached through each outgoing edge of ``v``."""
        return tuple(1 if isinstance(c, int) else len(_leaves(c)) for c in self._vertices[v])

    @property
    def codim(self) -> int:
        return len(self._vertices) - 1

    @property
    def dim(self) -> int:
        return self.n - 2 - self.codim

    def bisections(self) -> Tuple[CyclicBisection, ...]:
        """One bisection per interior edge, in edge order."""
        return tuple(CyclicBisection(self.n, *self.leaf_span(e.target)) for e in self.edges)

    def bisection_set(self) -> FrozenSet[CyclicBisection]:
        return frozenset(self.bisections())

    def face_factors(self) -> Tuple[int, ...]:
        """The closed face is the product of ``K_{d(v)}`` over interior vertices."""
        return self.degrees

    def to_json(self):
        def enc(node):
            return node if isinstance(node, int) else [enc(c) for c in node]

        return enc(self.shape)

    @classmethod
    def from_json(cls, data) -> "RibbonTree":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(data)


def _leaves(node: Nested) -> List[int]:
    if isinstance(node, int):
        return [node]
    out: List[int] = []
    for c in node:
        out.extend(_leaves(c))
    return out


def corolla(n: int) -> RibbonTree:
    if n < 2:
        raise TreeError("need at least two leaves")
    return RibbonTree(tuple(range(1, n + 1)))


def left_comb(n: int) -> RibbonTree:
    """The binary caterpillar ``((((1, 2), 3), …), n)``."""
    if n < 2:
        raise TreeError("need at least two leaves")
    node: Nested = (1, 2)
    for i in range(3, n + 1):
        node = (node, i)
    return RibbonTree(node)


def shrink_edge(T: RibbonTree, e: Union[int, InteriorEdge]) -> RibbonTree:
    """Contract an interior edge; the target's children are spliced into the source's slot."""
    idx = e.index if isinstance(e, InteriorEdge) else int(e)
    if not 0 <= idx < T.codim:
        raise TreeError(f"tree has no interior edge {idx} (leaf edges cannot be shrunk)")
    target = idx + 1
    counter = [0]

    def rebuild(node):
        if isinstance(node, int):
            return node
        counter[0] += 1
        out = []
        for c in node:
            if isinstance(c, tuple) and counter[0] == target:
                counter[0] += 1
                out.extend(rebuild(g) for g in c)
            else:
                out.append(rebuild(c))
        return tuple(out)

    return RibbonTree(rebuild(T.shape))


def tree_from_bisections(n: int, bisections: Iterable) -> RibbonTree:
    """The unique tree whose interior edges realise the given pairwise uncrossed bisections."""
    bs = set()
    for b in bisections:
        if not isinstance(b, CyclicBisection):
            lo, hi = b
            b = CyclicBisection(n, int(lo), int(hi))
        if b.n != n:
            raise TreeError("bisection belongs to a different leaf count")
        bs.add(b)
    bl = sorted(bs)
    for i, a in enumerate(bl):
        for b in bl[i + 1:]:
            if crossed(a, b):
                raise TreeError(f"bisections [{a.lo},{a.hi}] and [{b.lo},{b.hi}] are crossed")
    by_start: Dict[int, List[int]] = {}
    for b in bl:
        by_start.setdefault(b.lo, []).append(b.hi)

    def build(lo: int, hi: int) -> Nested:
        kids = []
        p = lo
        while p <= hi:
            ends = [h for h in by_start.get(p, []) if h <= hi and (p, h) != (lo, hi)]
            if ends:
                h = max(ends)
                kids.append(build(p, h))
                p = h + 1
            else:
                kids.append(p)
                p += 1
        return tuple(kids)

    return RibbonTree(build(1, n))


@lru_cache(maxsize=None)
def _shapes(lo: int, hi: int) -> Tuple[Nested, ...]:
    if lo == hi:
        return (lo,)
    out: List[Nested] = []

    def compositions(start: int, acc: List[Tuple[int, int]]):
        if start > hi:
            if len(acc) >= 2:
                yield list(acc)
            return
        for end in range(start, hi + 1):
            if start == lo and end == hi:
                continue
            acc.append((start, end))
            yield from compositions(end + 1, acc)
            acc.pop()

    for blocks in compositions(lo, []):
        options = [_shapes(a, b) for a, b in blocks]
        for combo in _product(options):
            out.append(tuple(combo))
    return tuple(out)


def _product(options):
    if not options:
        yield ()
        return
    for head in options[0]:
        for tail in _product(options[1:]):
            yield (head,) + tail


def all_trees(n: int) -> Iterator[RibbonTree]:
    if n < 2:
        raise TreeError("need at least two leaves")
    for s in _shapes(1, n):
        yield RibbonTree(s)


class FaceLattice:
    """Faces of ``K_n`` indexed by ribbon trees; ``T' <= T`` when ``T'`` refines ``T``."""

    def __init__(self, n: int):
        self.n = n
        self.faces: Tuple[RibbonTree, ...] = tuple(all_trees(n))
        self._bis = {T: T.bisection_set() for T in self.faces}

    def __len__(self) -> int:
        return len(self.faces)

    @property
    def dimension(self) -> int:
        return self.n - 2

    def f_vector(self) -> Tuple[int, ...]:
        c = Counter(T.dim for T in self.faces)
        return tuple(c.get(d, 0) for d in range(self.dimension + 1))

    def vertices(self) -> List[RibbonTree]:
        return [T for T in self.faces if T.dim == 0]

    def facets(self) -> List[RibbonTree]:
        return [T for T in self.faces if T.codim == 1]

    def euler_characteristic(self) -> int:
        """``Σ (-1)^dim`` over all faces; a ball gives 1."""
        return sum((-1) ** T.dim for T in self.faces)

    def leq(self, a: RibbonTree, b: RibbonTree) -> bool:
        """Is ``a`` a face of the closure of ``b``?"""
        return self._bis[a] >= self._bis[b]

    def closure(self, T: RibbonTree) -> List[RibbonTree]:
        return [S for S in self.faces if self._bis[S] >= self._bis[T]]

    def covers(self, T: RibbonTree) -> List[RibbonTree]:
        """Faces one dimension up whose closure contains ``T``."""
        return sorted({shrink_edge(T, e) for e in T.edges}, key=lambda S: S.to_json().__repr__())

    def neighbourhoods_meet(self, a: RibbonTree, b: RibbonTree) -> bool:
        """Do the standard open neighbourhoods of two faces intersect (a common refinement exists)?"""
        return pairwise_uncrossed(self._bis[a] | self._bis[b])

    def common_refinement(self, a: RibbonTree, b: RibbonTree) -> Optional[RibbonTree]:
        u = self._bis[a] | self._bis[b]
        return tree_from_bisections(self.n, u) if pairwise_uncrossed(u) else None

    def to_json(self, list_faces: bool = False) -> dict:
        out = {
            "n": self.n,
            "dimension": self.dimension,
            "faces": len(self.faces),
            "f_vector": list(self.f_vector()),
            "vertices": len(self.vertices()),
            "facets": len(self.facets()),
            "euler_characteristic": self.euler_characteristic(),
        }
        if list_faces:
            out["trees"] = [
                {"tree": T.to_json(), "dim": T.dim, "product": list(T.face_factors())} for T in self.faces
            ]
        return out


def face_lattice(n: int) -> FaceLattice:
    if not 2 <= n <= 10:
        raise TreeError("face lattice is available for 2 <= n <= 10")
    return FaceLattice(n)

"""Point arrangements on a line, territory balls, gluing and annular decompositions.

Neck parameters are stored as a rational scale ``rho`` standing for
``exp(-s)``; ``None`` means ``s = ∞``.  All positions and radii stay exact.
Only the partition functions, which involve logarithms and smooth bumps,
are evaluated in floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from ..weightlattice import format_rational, parse_rational
from .trees import RibbonTree, TreeError

__all__ = [
    "RHO0",
    "Arrangement",
    "TerritoryBalls",
    "territory_section",
    "territory_condition",
    "KPoint",
    "glue_arrangements",
    "glued_maps",
    "Neck",
    "End",
    "FatRegion",
    "AnnularDecomposition",
    "annular_decomposition",
    "bump",
    "gamma",
    "gammas",
    "WeightedArrangement",
    "forgetful",
]

# exp(-M_0): neck scales must lie in (0, RHO0)
RHO0 = Fraction(1, 16)
# sqrt(RHO0): necks keep the part of each territory ball within this fraction of its radius
_NECK = Fraction(1, 4)


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else parse_rational(x)


@dataclass(frozen=True)
class Arrangement:
    """Strictly increasing points, compared up to affine equivalence via :meth:`canonical`."""

    points: Tuple[Fraction, ...]

    def __post_init__(self):
        pts = tuple(_frac(x) for x in self.points)
        if not pts:
            raise ValueError("an arrangement needs at least one point")
        if any(b <= a for a, b in zip(pts, pts[1:])):
            raise ValueError("points must be strictly increasing")
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return len(self.points)

    def canonical(self) -> "Arrangement":
        """First point at 0, last at 1 (a single point goes to 0)."""
        p = self.points
        if len(p) == 1:
            return Arrangement((Fraction(0),))
        a, w = p[0], p[-1] - p[0]
        return Arrangement(tuple((x - a) / w for x in p))

    def affinely_equal(self, other: "Arrangement") -> bool:
        return len(self) == len(other) and self.canonical() == other.canonical()

    def to_json(self) -> List[str]:
        return [format_rational(x) for x in self.points]

    @classmethod
    def from_json(cls, data) -> "Arrangement":
        return cls(tuple(parse_rational(x) for x in data))


@dataclass(frozen=True)
class TerritoryBalls:
    radii: Tuple[Fraction, ...]
    center: Fraction  # parent ball
    R: Fraction


def territory_section(x: Arrangement) -> TerritoryBalls:
    """``r_j`` is an eighth of the nearest-neighbour distance; the parent ball is centred at the
    midpoint of the extremes with radius eight times the largest offset from it."""
    p = x.points
    if len(p) == 1:
        return TerritoryBalls((Fraction(1, 8),), p[0], Fraction(1))
    radii = tuple(min(abs(p[i] - p[j]) for i in range(len(p)) if i != j) / 8 for j in range(len(p)))
    c = (p[0] + p[-1]) / 2
    R = 8 * max(abs(q - c) for q in p)
    return TerritoryBalls(radii, c, R)


def territory_condition(x: Arrangement, D: TerritoryBalls) -> bool:
    """No other point within ``4 r_j`` of ``x_j``, and every territory ball inside ``B_{R/4}``."""
    p = x.points
    for j, r in enumerate(D.radii):
        if r <= 0:
            return False
        if any(abs(p[i] - p[j]) < 4 * r for i in range(len(p)) if i != j):
            return False
        if abs(p[j] - D.center) + r > D.R / 4:
            return False
    return True


@dataclass(frozen=True)
class KPoint:
    """A point near the face ``F_T``: one arrangement per interior vertex and a scale per interior edge."""

    tree: RibbonTree
    arrangements: Tuple[Arrangement, ...]
    rhos: Tuple[Optional[Fraction], ...]

    def __post_init__(self):
        arrs = tuple(a if isinstance(a, Arrangement) else Arrangement(tuple(a)) for a in self.arrangements)
        rhos = tuple(None if r is None else _frac(r) for r in self.rhos)
        object.__setattr__(self, "arrangements", arrs)
        object.__setattr__(self, "rhos", rhos)
        T = self.tree
        if len(arrs) != len(T.vertices):
            raise TreeError("one arrangement per interior vertex is required")
        for v, a in enumerate(arrs):
            if len(a) != T.degree(v):
                raise TreeError(f"vertex {v} has {T.degree(v)} outgoing edges but {len(a)} points")
        if len(rhos) != T.codim:
            raise TreeError("one scale per interior edge is required")
        for r in rhos:
            if r is not None and not 0 < r < RHO0:
                raise ValueError(f"neck scale {r} must lie in (0, {RHO0})")

    @property
    def n(self) -> int:
        return self.tree.n

    @property
    def is_interior(self) -> bool:
        return all(r is not None for r in self.rhos)

    def to_json(self) -> dict:
        return {
            "tree": self.tree.to_json(),
            "arrangements": [a.to_json() for a in self.arrangements],
            "rhos": [None if r is None else format_rational(r) for r in self.rhos],
        }

    @classmethod
    def from_json(cls, data: dict) -> "KPoint":
        return cls(
            RibbonTree.from_json(data["tree"]),
            tuple(Arrangement.from_json(a) for a in data["arrangements"]),
            tuple(None if r is None else parse_rational(r) for r in data["rhos"]),
        )


Affine = Tuple[Fraction, Fraction]  # y -> a*y + b


def glued_maps(p: KPoint) -> Tuple[List[int], List[Affine]]:
    """Component tops and the affine map from each vertex frame into its component frame.

    A finite edge from slot ``j`` of ``v`` to ``w`` sends the parent ball of
    ``w`` onto ``B_{rho r_j}(x_j)``.  The territory balls of the glued
    arrangement are the ones induced from its pieces, so the result does not
    depend on the order in which edges are glued.
    """
    T = p.tree
    top = [0] * len(T.vertices)
    maps: List[Affine] = [(Fraction(1), Fraction(0))] * len(T.vertices)
    for e in T.edges:  # pre-order: the source is always handled first
        v, w = e.source, e.target
        rho = p.rhos[e.index]
        if rho is None:
            top[w] = w
            maps[w] = (Fraction(1), Fraction(0))
            continue
        Dv = territory_section(p.arrangements[v])
        Dw = territory_section(p.arrangements[w])
        xj = p.arrangements[v].points[e.slot]
        s = rho * Dv.radii[e.slot] / Dw.R
        a, b = maps[v]
        # w-frame -> v-frame: y -> xj + s (y - c_w); then v-frame -> component frame
        maps[w] = (a * s, a * (xj - s * Dw.center) + b)
        top[w] = top[v]
    return top, maps


def glue_arrangements(
    p: KPoint, section: str = "induced", order: Optional[Sequence[int]] = None
) -> Union[Arrangement, KPoint]:
    """Glue every finite neck, one edge at a time.

    With all scales finite the result is an arrangement of ``n`` points.
    Otherwise the finite necks are contracted and the face representative on
    the coarser tree is returned.

    ``order`` lists interior edge indices; the default glues the
    lowest-numbered finite edge first.  With ``section="induced"`` each merged
    arrangement keeps the territory balls carried over from its pieces, which
    makes the result independent of the order.  ``section="formula"``
    recomputes the balls of every merged arrangement from scratch; that
    choice is only approximately compatible with gluing.
    """
    if section not in ("induced", "formula"):
        raise ValueError("section must be 'induced' or 'formula'")
    from .trees import shrink_edge

    finite = [e.index for e in p.tree.edges if p.rhos[e.index] is not None]
    if order is None:
        order = finite
    elif sorted(order) != finite:
        raise ValueError("order must list every finite edge exactly once")
    T = p.tree
    arrs = list(p.arrangements)
    balls = [territory_section(a) for a in arrs]
    rhos = list(p.rhos)
    ids = [e.index for e in T.edges]  # original id of each current edge
    for eid in order:
        idx = ids.index(eid)
        e = T.edges[idx]
        v, w = e.source, e.target
        X, Y = arrs[v], arrs[w]
        Dv, Dw = balls[v], balls[w]
        xj = X.points[e.slot]
        s = rhos[idx] * Dv.radii[e.slot] / Dw.R
        merged = X.points[: e.slot] + tuple(xj + s * (y - Dw.center) for y in Y.points) + X.points[e.slot + 1:]
        arrs[v] = Arrangement(merged)
        if section == "induced":
            radii = Dv.radii[: e.slot] + tuple(s * r for r in Dw.radii) + Dv.radii[e.slot + 1:]
            balls[v] = TerritoryBalls(radii, Dv.center, Dv.R)
        else:
            balls[v] = territory_section(arrs[v])
        T = shrink_edge(T, idx)
        del arrs[w], balls[w], rhos[idx], ids[idx]
    if T.codim == 0:
        return arrs[0]
    return KPoint(T, tuple(arrs), tuple(rhos))


# annular decomposition -----------------------------------------------------


@dataclass(frozen=True)
class Neck:
    edge: int
    source: int
    target: int
    component: int
    center: Fraction
    inner: Fraction  # 0 for an infinite neck (then the piece near the centre is punctured)
    outer: Fraction
    child_component: int
    child_center: Fraction  # where the far piece of an infinite neck lives
    child_radius: Fraction

    @property
    def infinite(self) -> bool:
        return self.inner == 0


@dataclass(frozen=True)
class End:
    leaf: int  # 0 is the root
    vertex: int
    component: int
    center: Fraction
    radius: Fraction  # leaves: punctured ball of this radius; root: complement of the ball


@dataclass(frozen=True)
class FatRegion:
    vertex: int
    component: int
    center: Fraction
    radius: Fraction  # closed ball, minus the open balls listed below
    holes: Tuple[Tuple[Fraction, Fraction], ...]  # (centre, radius)


@dataclass(frozen=True)
class AnnularDecomposition:
    kpoint: KPoint
    necks: Tuple[Neck, ...]
    ends: Tuple[End, ...]
    fat: Tuple[FatRegion, ...]
    components: Tuple[int, ...]

    def locate(self, y, component: int = 0) -> Tuple[str, int, float]:
        """``(kind, index, t)`` for a point of the given component.

        ``kind`` is ``"fat"``, ``"end"`` or ``"neck"``; ``t`` in ``[0, 1]`` is the
        log-radial position inside a finite neck (0 at the inner sphere).
        """
        return _locate(self, _as_point(y), component)

    def to_json(self) -> dict:
        f = format_rational
        return {
            "components": list(self.components),
            "necks": [
                {"edge": n.edge, "source": n.source, "target": n.target, "component": n.component,
                 "center": f(n.center), "inner": f(n.inner), "outer": f(n.outer), "infinite": n.infinite}
                for n in self.necks
            ],
            "ends": [
                {"leaf": e.leaf, "vertex": e.vertex, "component": e.component, "center": f(e.center),
                 "radius": f(e.radius)}
                for e in self.ends
            ],
            "fat": [
                {"vertex": r.vertex, "component": r.component, "center": f(r.center), "radius": f(r.radius),
                 "holes": [[f(c), f(s)] for c, s in r.holes]}
                for r in self.fat
            ],
        }


def annular_decomposition(p: KPoint) -> AnnularDecomposition:
    """Necks for interior edges, ends for leaves and the root, fat regions for interior vertices.

    A finite neck is the annulus ``4 rho r <= |y - x_j| < r / 4`` around the
    glued point, so its radius ratio is ``RHO0 / rho``.  Leaf ends are the
    punctured balls ``|y - x_j| < r_j / 4``, the root end is ``|y - c| > 4R``.
    """
    T = p.tree
    top, maps = glued_maps(p)
    secs = [territory_section(a) for a in p.arrangements]
    necks, ends, fat = [], [], []
    for v in range(len(T.vertices)):
        a, b = maps[v]
        D = secs[v]
        holes = []
        for j, c in enumerate(T.children(v)):
            cj = a * p.arrangements[v].points[j] + b
            rj = a * D.radii[j]
            holes.append((cj, rj * _NECK))
            if isinstance(c, int):
                ends.append(End(c, v, top[v], cj, rj * _NECK))
            else:
                w = c[1]
                idx = w - 1
                rho = p.rhos[idx]
                aw, bw = maps[w]
                Dw = secs[w]
                inner = Fraction(0) if rho is None else 4 * rho * rj
                necks.append(Neck(idx, v, w, top[v], cj, inner, rj * _NECK, top[w],
                                  aw * Dw.center + bw, 4 * aw * Dw.R))
        fat.append(FatRegion(v, top[v], a * D.center + b, 4 * a * D.R, tuple(holes)))
        if v == 0:
            ends.append(End(0, 0, 0, a * D.center + b, 4 * a * D.R))
    return AnnularDecomposition(p, tuple(necks), tuple(ends), tuple(fat), tuple(sorted(set(top))))


def _as_point(y) -> Tuple[float, float, float]:
    if isinstance(y, (int, float, Fraction)):
        return (float(y), 0.0, 0.0)
    y = tuple(float(c) for c in y)
    if len(y) == 1:
        return (y[0], 0.0, 0.0)
    if len(y) != 3:
        raise ValueError("points are scalars on the line or 3-vectors")
    return y


def _dist(y, c: Fraction) -> float:
    return math.sqrt((y[0] - float(c)) ** 2 + y[1] ** 2 + y[2] ** 2)


def _locate(A: AnnularDecomposition, y, component: int):
    T = A.kpoint.tree
    if component not in A.components:
        raise ValueError(f"no component with top vertex {component}")
    v = component
    fat = {r.vertex: r for r in A.fat}
    if _dist(y, fat[v].center) > float(fat[v].radius):
        if v == 0:
            return ("end", 0, 0.0)
        # far piece of the infinite neck entering this component
        return ("neck", v - 1, 1.0)
    neck_of = {(n.source, T.edges[n.edge].slot): n for n in A.necks}
    while True:
        moved = False
        for j, c in enumerate(T.children(v)):
            cj, hole = fat[v].holes[j]
            d = _dist(y, cj)
            if d >= float(hole):
                continue
            if d == 0.0:
                raise ValueError("point coincides with a puncture")
            if isinstance(c, int):
                return ("end", c, 0.0)
            n = neck_of[(v, j)]
            if n.infinite:
                return ("neck", n.edge, 0.0)
            if d > float(n.inner):
                t = math.log(d / float(n.inner)) / math.log(float(n.outer / n.inner))
                return ("neck", n.edge, min(max(t, 0.0), 1.0))
            v = n.target
            moved = True
            break
        if not moved:
            return ("fat", v, 0.0)


def bump(x: float) -> float:
    """Smooth ``φ_1``: 1 on ``[0, 1/3]``, 0 on ``[2/3, 1]``; its complement is ``φ_2``."""
    if x <= 1 / 3:
        return 1.0
    if x >= 2 / 3:
        return 0.0
    u = 3 * x - 1  # 0..1

    def h(s):
        return math.exp(-1.0 / s) if s > 0 else 0.0

    return h(1 - u) / (h(1 - u) + h(u))


def gammas(p: KPoint, y, component: int = 0, decomposition: Optional[AnnularDecomposition] = None) -> List[float]:
    """All partition functions at ``y``; they sum to 1."""
    A = decomposition or annular_decomposition(p)
    kind, idx, t = A.locate(y, component)
    T = p.tree
    out = [0.0] * len(T.vertices)
    if kind == "fat":
        out[idx] = 1.0
    elif kind == "end":
        v = 0 if idx == 0 else next(e.vertex for e in A.ends if e.leaf == idx)
        out[v] = 1.0
    else:
        e = T.edges[idx]
        if p.rhos[idx] is None:
            # near piece belongs to the source, far piece to the target
            out[e.source if t == 0.0 else e.target] = 1.0
        else:
            out[e.target] = bump(t)
            out[e.source] = 1.0 - out[e.target]
    return out


def gamma(p: KPoint, i: int, y, component: int = 0) -> float:
    """Partition function of interior vertex ``i`` at ``y``."""
    return gammas(p, y, component)[i]


@dataclass(frozen=True)
class WeightedArrangement:
    points: Tuple[Fraction, ...]
    multiplicities: Tuple[int, ...]

    def expanded(self) -> Tuple[Fraction, ...]:
        return tuple(x for x, m in zip(self.points, self.multiplicities) for _ in range(m))

    def canonical(self) -> "WeightedArrangement":
        c = Arrangement(self.points).canonical()
        return WeightedArrangement(c.points, self.multiplicities)

    def to_json(self) -> dict:
        return {"points": [format_rational(x) for x in self.points], "multiplicities": list(self.multiplicities)}


def forgetful(p: KPoint) -> WeightedArrangement:
    """Glue the finite necks, then keep the root vertex arrangement with leaf-count multiplicities."""
    q = glue_arrangements(p)
    if isinstance(q, Arrangement):
        return WeightedArrangement(q.canonical().points, (1,) * len(q))
    root = q.arrangements[0].canonical()
    return WeightedArrangement(root.points, q.tree.leaf_counts(0))

"""Vertex holonomies of bi-permutations, bi-barycentric subdivisions and mod-2 degrees.

Points of the source simplex are exact vectors ``(r_1..r_{N-l}, s_1..s_l)``
with non-negative entries summing to one.  Targets live in the Cartan
algebra (zero-sum vectors); the fundamental simplex is the one of
:mod:`surgerygon.weightlattice`.

Inside a cell the ``q`` points of the moduli picture are ordered
``q_{g(0)} <= … <= q_{g(l-1)}``, so the ``s`` coordinates increase along
``g``.  The vertex ``u_k`` of a cell is the configuration whose first
``N - k`` points coincide.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Dict, List, Optional, Sequence, Tuple

from .instantonindex.formulas import BiPermutation, act_bipermutation, compose_perm
from .weightlattice import (
    Reduction,
    format_rational,
    from_r_coords,
    lambda_bar,
    lambda_vec,
    r_coords,
    reduce_to_fundamental_domain,
)

__all__ = [
    "HolonomyError",
    "BiPermutation",
    "act_bipermutation",
    "VertexImage",
    "vertex_image",
    "vertex_report",
    "barycenter_discrepancy",
    "BiBaryCell",
    "bibary_subdivision",
    "simplex_volume",
    "PiecewiseAffineMap",
    "base_bipermutation",
    "hol_surrogate",
    "build_H",
    "collapse_map",
    "DegreeReport",
    "degree_mod2",
    "default_target",
]

Vec = Tuple[Fraction, ...]
Matrix = List[List[Fraction]]


class HolonomyError(ValueError):
    pass


# exact linear algebra ------------------------------------------------------


def _solve(A: Matrix, b: Sequence[Fraction]) -> Optional[List[Fraction]]:
    """Solve a square system exactly; ``None`` when singular."""
    n = len(A)
    M = [list(row) + [b[i]] for i, row in enumerate(A)]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            return None
        M[c], M[piv] = M[piv], M[c]
        inv = 1 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [M[r][n] for r in range(n)]


def _det(A: Matrix) -> Fraction:
    n = len(A)
    M = [list(r) for r in A]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det *= M[c][c]
        for r in range(c + 1, n):
            f = M[r][c] / M[c][c]
            if f:
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return det


def _avg(vectors: Sequence[Sequence[Fraction]]) -> Vec:
    m = len(vectors)
    return tuple(sum(col, Fraction(0)) / m for col in zip(*vectors))


# vertex formulas -----------------------------------------------------------


@dataclass(frozen=True)
class VertexImage:
    k: int
    theta: Vec  # average of the unnormalised λ vectors
    hol: Vec  # average of the normalised ones, a point of the Cartan algebra
    reduction: Reduction

    @property
    def r(self) -> Vec:
        return r_coords(self.reduction.point)

    @property
    def is_vertex(self) -> bool:
        """Does the reduced image sit at a vertex of the fundamental simplex?"""
        return sorted(self.r) == [0] * (len(self.r) - 1) + [1]

    def to_json(self) -> dict:
        f = format_rational
        return {
            "k": self.k,
            "theta": [f(x) for x in self.theta],
            "hol": [f(x) for x in self.hol],
            "reduced": [f(x) for x in self.reduction.point],
            "r": [f(x) for x in self.r],
            "is_vertex": self.is_vertex,
        }


def vertex_image(b: BiPermutation, k: int) -> VertexImage:
    """Image of the cell vertex ``u_k``.

    For ``k >= l`` it is the average of ``λ̄_{σ(0)}, …, λ̄_{σ(N-k-1)}``; for
    ``k < l`` the average of ``λ̄_{τ(l-1-k)}, …, λ̄_{τ(l-1)}``.
    """
    N, l = b.N, b.l
    if not 0 <= k <= N - 1:
        raise HolonomyError(f"vertex index {k} outside 0..{N - 1}")
    idx = b.sigma[: N - k] if k >= l else b.tau[l - 1 - k: l]
    theta = _avg([tuple(Fraction(x) for x in lambda_vec(N, i)) for i in idx])
    hol = _avg([lambda_bar(N, i) for i in idx])
    return VertexImage(k, theta, hol, reduce_to_fundamental_domain(hol))


def vertex_report(b: BiPermutation) -> List[VertexImage]:
    return [vertex_image(b, k) for k in range(b.N)]


def barycenter_discrepancy(N: int = 2, l: int = 0, k: int = 0) -> dict:
    """Check whether the vertex formula sends ``u_k`` to a vertex of the fundamental simplex.

    At ``(N, l, k) = (2, 0, 0)`` the formula gives the midpoint of the
    fundamental interval, not an endpoint.  The output records the computed
    value next to the claim that was tested.
    """
    b = BiPermutation(N, tuple(range(N - l)), tuple(range(N - l, N)))
    v = vertex_image(b, k)
    return {
        "N": N,
        "l": l,
        "k": k,
        "claim": "vertices of the source simplex map to vertices of the fundamental simplex",
        "formula_value": [format_rational(x) for x in v.hol],
        "r": [format_rational(x) for x in v.r],
        "is_vertex": v.is_vertex,
        "consistent": v.is_vertex,
    }


# subdivisions --------------------------------------------------------------


def _unit(N: int, i: int) -> Vec:
    return tuple(Fraction(int(a == i)) for a in range(N))


@dataclass(frozen=True)
class BiBaryCell:
    """Cell ``(f, g)`` of the type-``l`` subdivision; ``vertices[k]`` is its ``u_k``."""

    N: int
    l: int
    f: Tuple[int, ...]
    g: Tuple[int, ...]
    vertices: Tuple[Vec, ...]

    def contains(self, x: Sequence) -> bool:
        """``r_{f(0)} >= … >= r_{f(N-l-1)}`` and ``s_{g(0)} <= … <= s_{g(l-1)}``."""
        x = tuple(Fraction(c) for c in x)
        r, s = x[: self.N - self.l], x[self.N - self.l:]
        ok_r = all(r[self.f[i]] >= r[self.f[i + 1]] for i in range(len(self.f) - 1))
        ok_s = all(s[self.g[j]] <= s[self.g[j + 1]] for j in range(len(self.g) - 1))
        return ok_r and ok_s and all(c >= 0 for c in x) and sum(x) == 1

    def barycentric(self, x: Sequence) -> Optional[List[Fraction]]:
        B = [[v[i] for v in self.vertices] for i in range(self.N)]
        return _solve(B, [Fraction(c) for c in x])

    @property
    def volume(self) -> Fraction:
        return simplex_volume(self.vertices)


def simplex_volume(vertices: Sequence[Vec]) -> Fraction:
    """Volume in the coordinates ``(x_1, …, x_{N-1})`` of the plane ``Σx = 1``."""
    v0 = vertices[0]
    n = len(vertices) - 1
    M = [[v[i] - v0[i] for i in range(n)] for v in vertices[1:]]
    return abs(_det(M)) / math.factorial(n) if n else Fraction(1)


def bibary_subdivision(N: int, l: int) -> List[BiBaryCell]:
    if N < 1 or not 0 <= l <= N:
        raise HolonomyError("need N >= 1 and 0 <= l <= N")
    cells = []
    for f in permutations(range(N - l)):
        for g in permutations(range(l)):
            verts = []
            for k in range(N):
                if k >= l:
                    pts = [_unit(N, f[i]) for i in range(N - k)]
                else:
                    pts = [_unit(N, N - l + g[j]) for j in range(l - 1 - k, l)]
                verts.append(_avg(pts))
            cells.append(BiBaryCell(N, l, f, g, tuple(verts)))
    return cells


# piecewise affine maps ------------------------------------------------------


@dataclass
class PiecewiseAffineMap:
    """Per-cell affine maps given by vertex images; ``x -> matrix·x + offset`` on ``Σx = 1``."""

    N: int
    cells: List[BiBaryCell]
    images: List[Tuple[Vec, ...]]  # images[c][k] is the image of cells[c].vertices[k]
    label: str = ""
    matrices: List[Optional[Matrix]] = field(default_factory=list)
    offsets: List[Vec] = field(default_factory=list)

    def __post_init__(self):
        if not self.matrices:
            for cell, img in zip(self.cells, self.images):
                self.matrices.append(_linear_from_vertices(cell.vertices, img))
                self.offsets.append(tuple(Fraction(0) for _ in range(self.N)))

    def cell_of(self, x: Sequence) -> int:
        for i, c in enumerate(self.cells):
            if c.contains(x):
                return i
        raise HolonomyError("point is outside the simplex")

    def __call__(self, x: Sequence, project: bool = True) -> Vec:
        x = tuple(Fraction(c) for c in x)
        i = self.cell_of(x)
        beta = self.cells[i].barycentric(x)
        y = tuple(sum(b * img[a] for b, img in zip(beta, self.images[i])) for a in range(self.N))
        return reduce_to_fundamental_domain(y).point if project else y

    def shared_face_mismatches(self) -> List[dict]:
        """Subdivision vertices that different cells send to different points."""
        seen: Dict[Vec, Dict[Vec, List[int]]] = {}
        for c, (cell, img) in enumerate(zip(self.cells, self.images)):
            for v, w in zip(cell.vertices, img):
                seen.setdefault(v, {}).setdefault(w, []).append(c)
        out = []
        for v, imgs in seen.items():
            if len(imgs) > 1:
                out.append({
                    "vertex": [format_rational(x) for x in v],
                    "images": [[format_rational(x) for x in w] for w in imgs],
                    "cells": [cs for cs in imgs.values()],
                })
        return out

    @property
    def well_defined(self) -> bool:
        return not self.shared_face_mismatches()

    def combine(self, other: "PiecewiseAffineMap", t: Fraction) -> "PiecewiseAffineMap":
        """``t·self + (1 - t)·other`` cell by cell (same subdivision required)."""
        if [c.vertices for c in self.cells] != [c.vertices for c in other.cells]:
            raise HolonomyError("maps live on different subdivisions")
        t = Fraction(t)
        imgs = [
            tuple(tuple(t * a + (1 - t) * b for a, b in zip(p, q)) for p, q in zip(I, J))
            for I, J in zip(self.images, other.images)
        ]
        return PiecewiseAffineMap(self.N, self.cells, imgs, label=f"{t}*{self.label}+{1 - t}*{other.label}")


def _linear_from_vertices(verts: Sequence[Vec], imgs: Sequence[Vec]) -> Optional[Matrix]:
    """``A`` with ``A·v_k = w_k``; affine on the plane ``Σx = 1`` because the ``v_k`` span it."""
    N = len(verts)
    B = [[v[i] for v in verts] for i in range(N)]
    if _det(B) == 0:
        return None
    # A = W B^{-1}: solve B^T A^T = W^T one row of A at a time
    Bt = [[B[j][i] for j in range(N)] for i in range(N)]
    A = []
    for a in range(N):
        row = _solve(Bt, [w[a] for w in imgs])
        A.append(row)
    return A


def base_bipermutation(N: int, S: Sequence[int]) -> BiPermutation:
    """``σ_0`` lists ``S`` increasingly, ``τ_0`` the complement."""
    S = sorted(set(int(x) for x in S))
    if any(not 0 <= x < N for x in S):
        raise HolonomyError("S must be a subset of 0..N-1")
    rest = [x for x in range(N) if x not in S]
    return BiPermutation(N, tuple(S), tuple(rest))


def _cell_bipermutation(b0: BiPermutation, f, g, convention: str) -> BiPermutation:
    if convention == "compose":
        return BiPermutation(b0.N, compose_perm(b0.sigma, f), compose_perm(b0.tau, g))
    if convention == "inverse":
        return act_bipermutation(b0, f, g)
    raise HolonomyError("convention must be 'compose' or 'inverse'")


def hol_surrogate(N: int, S: Sequence[int], convention: str = "compose") -> PiecewiseAffineMap:
    """On cell ``(f, g)`` interpolate the vertex formula of the cell's bi-permutation.

    ``convention="compose"`` uses ``(σ_0∘f, τ_0∘g)``; ``"inverse"`` uses the
    group action ``(σ_0∘f⁻¹, τ_0∘g⁻¹)``.  Only the first is guaranteed to agree on
    shared faces; :meth:`PiecewiseAffineMap.shared_face_mismatches` reports
    the disagreements of the second.
    """
    b0 = base_bipermutation(N, S)
    cells = bibary_subdivision(N, b0.l)
    imgs = []
    for c in cells:
        b = _cell_bipermutation(b0, c.f, c.g, convention)
        imgs.append(tuple(vertex_image(b, k).hol for k in range(N)))
    return PiecewiseAffineMap(N, cells, imgs, label=f"hol[{convention}]")


def _h0_images(N: int, b0: BiPermutation) -> List[Vec]:
    """Images of the corners of the source simplex: ``λ̄_{σ_0(i)}``, then ``λ̄_{τ_0(j)}``."""
    return [lambda_bar(N, i) for i in b0.sigma] + [lambda_bar(N, j) for j in b0.tau]


def build_H(
    N: int, S: Sequence[int], mode: str = "H0", t: Fraction = Fraction(0), convention: str = "compose"
) -> PiecewiseAffineMap:
    """``H0`` (the affine map fixed by the corner images) or ``Ht = t·hol + (1-t)·H0``.

    Both are returned on the bi-barycentric subdivision so they can be
    combined cell by cell.  A degenerate ``H0`` raises.
    """
    b0 = base_bipermutation(N, S)
    cells = bibary_subdivision(N, b0.l)
    corners = _h0_images(N, b0)
    diffs = [[a - b for a, b in zip(c, corners[0])] for c in corners[1:]]
    if N > 1 and _rank(diffs) < N - 1:
        raise HolonomyError("corner images are affinely dependent; H0 is degenerate")
    imgs = []
    for c in cells:
        # a cell vertex is a convex combination of corners; H0 is affine
        imgs.append(tuple(tuple(sum(v[i] * corners[i][a] for i in range(N)) for a in range(N)) for v in c.vertices))
    H0 = PiecewiseAffineMap(N, cells, imgs, label="H0")
    if mode == "H0":
        return H0
    if mode != "Ht":
        raise HolonomyError("mode must be 'H0' or 'Ht'")
    return hol_surrogate(N, S, convention).combine(H0, Fraction(t))


def _rank(rows: List[List[Fraction]]) -> int:
    M = [list(r) for r in rows]
    rank = 0
    ncols = len(M[0]) if M else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(M)) if M[r][c] != 0), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        for r in range(len(M)):
            if r != rank and M[r][c] != 0:
                f = M[r][c] / M[rank][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[rank])]
        rank += 1
    return rank


def collapse_map(N: int, l: int = 0, face: Sequence[int] = (0,)) -> PiecewiseAffineMap:
    """Every subdivision vertex goes to the barycentre of the given target face."""
    cells = bibary_subdivision(N, l)
    w = _avg([lambda_bar(N, i) for i in face])
    return PiecewiseAffineMap(N, cells, [tuple(w for _ in range(N)) for _ in cells], label="collapse")


# degree -----------------------------------------------------------------------


@dataclass
class DegreeReport:
    degree: int
    target: Vec
    covering_cells: List[int]
    degenerate_cells: List[int]
    perturbations: int

    def to_json(self) -> dict:
        return {
            "degree_mod2": self.degree,
            "target": [format_rational(x) for x in self.target],
            "covering_cells": self.covering_cells,
            "degenerate_cells": self.degenerate_cells,
            "perturbations": self.perturbations,
        }


def default_target(N: int) -> Vec:
    """A rational interior point of the fundamental simplex with distinct coordinates."""
    weights = [2 * i + 3 for i in range(N)]
    tot = sum(weights)
    return from_r_coords([Fraction(w, tot) for w in weights])


def _cell_preimage(images: Sequence[Vec], target: Vec) -> Optional[List[Fraction]]:
    """Barycentric coordinates of ``target`` w.r.t. the image simplex (None if degenerate)."""
    N = len(target)
    # drop the first coordinate (zero-sum) and add Σβ = 1
    A = [[w[a] for w in images] for a in range(1, N)] + [[Fraction(1)] * len(images)]
    return _solve(A, list(target[1:]) + [Fraction(1)])


def degree_mod2(m: PiecewiseAffineMap, target: Optional[Sequence] = None, max_perturb: int = 8) -> DegreeReport:
    """Parity of the number of cells whose image simplex contains the target.

    Targets on the image of a codimension-one face are nudged along a fixed
    sequence of small rational directions.  Cells with degenerate images
    are skipped and listed (with a warning).
    """
    N = m.N
    tgt = tuple(Fraction(x) for x in (target if target is not None else default_target(N)))
    if sum(tgt) != 0:
        raise HolonomyError("targets live in the zero-sum plane")
    degenerate = []
    for tries in range(max_perturb + 1):
        covering, on_face = [], False
        degenerate = []
        for c, img in enumerate(m.images):
            beta = _cell_preimage(img, tgt)
            if beta is None:
                degenerate.append(c)
                continue
            if all(b > 0 for b in beta):
                covering.append(c)
            elif all(b >= 0 for b in beta):
                on_face = True
                break
        if not on_face:
            if degenerate:
                warnings.warn(f"{len(degenerate)} degenerate cells skipped in {m.label or 'map'}", RuntimeWarning)
            return DegreeReport(len(covering) % 2, tgt, covering, degenerate, tries)
        step = Fraction(1, 1000 * (tries + 1))
        direction = [Fraction((7 * (a + 1) * (tries + 3)) % 11 - 5) for a in range(N)]
        mean = sum(direction) / N
        tgt = tuple(x + step * (d - mean) for x, d in zip(tgt, direction))
    raise HolonomyError("could not move the target off the image of the walls")

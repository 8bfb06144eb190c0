"""Verified instances: cone triangles, the small 4-gon, contractible padding, small cubes."""

from __future__ import annotations

from typing import Optional, Tuple

from ..f2chain import (
    ChainComplexF2,
    ChainMapF2,
    MatrixF2,
    cone,
    layout,
    random_chain_map,
    random_complex,
    random_contractible,
    scatter,
)
from .cube import ExactNCube, GnPath
from .ngon import ExactNGon

__all__ = [
    "zero_ngon",
    "four_gon",
    "cone_triangle",
    "contractible_ngon",
    "random_cone_triangle",
    "random_four_gon",
    "cube_one",
    "cube_two",
    "zero_cube",
]


def _embed(n_big: int, idx, n_small: int) -> MatrixF2:
    """Inclusion of a summand whose coordinates sit at ``idx``."""
    return MatrixF2(n_big, n_small, tuple(scatter(MatrixF2.identity(n_small), idx, list(range(n_small)), n_big, n_small)))


def _project(n_big: int, idx, n_small: int) -> MatrixF2:
    return _embed(n_big, idx, n_small).transpose()


def zero_ngon(n: int) -> ExactNGon:
    return ExactNGon(tuple(ChainComplexF2.zero() for _ in range(n)))


def four_gon(rotate: int = 0, drop: Optional[Tuple[int, int]] = None) -> ExactNGon:
    """Two copies of F2 two steps apart (degrees 0 and 1), joined by identity maps.

    ``rotate=1`` places them at positions 1 and 3.  ``drop`` names one map
    ``(j, k)`` to replace by zero (for failure injection).
    """
    one = MatrixF2.identity(1)
    lo, hi = ChainComplexF2({0: 1}), ChainComplexF2({1: 1})
    cs = [ChainComplexF2.zero()] * 4
    a = rotate % 2
    cs[a], cs[a + 2] = lo, hi
    maps = {(a, a + 2): one, (a + 2, a + 4): one}
    if drop is not None:
        maps.pop(tuple(drop), None)
    return ExactNGon(tuple(cs), maps)


def cone_triangle(phi: ChainMapF2) -> ExactNGon:
    """Exact triangle ``A -> B -> Cone(φ) -> A`` with its canonical higher maps.

    Cone coordinates put ``B`` before ``A[1]`` in each degree.  Besides
    ``φ``, the inclusion ``ι`` and projection ``π`` it carries
    ``A -> Cone, a ↦ (0, a)`` and the projection ``Cone -> B``; every
    length-three map vanishes.
    """
    A, B = phi.source, phi.target
    Cn = cone(phi)
    _, (ib, ia) = layout([(B, 0), (A, 1)])
    na, nb, nc = A.total_dim, B.total_dim, Cn.total_dim
    iota = _embed(nc, ib, nb)
    lift = _embed(nc, ia, na)
    pi = _project(nc, ia, na)
    pb = _project(nc, ib, nb)
    maps = {(0, 1): phi.total(), (1, 2): iota, (2, 3): pi, (0, 2): lift, (2, 4): pb}
    return ExactNGon((A, B, Cn), maps)


def contractible_ngon(n: int, position: int, E: ChainComplexF2, h: MatrixF2) -> ExactNGon:
    """A contractible complex at one corner with its contraction as the long map."""
    cs = [ChainComplexF2.zero(E.grading)] * n
    cs[position] = E
    return ExactNGon(tuple(cs), {(position, position + n): h})


def random_cone_triangle(rng, max_dim: int = 3, degrees=(0, 1, 2)) -> ExactNGon:
    A = random_complex(rng, max_dim, degrees)
    B = random_complex(rng, max_dim, degrees)
    return cone_triangle(random_chain_map(rng, A, B))


def random_four_gon(rng, max_pairs: int = 1) -> ExactNGon:
    """Direct sums of rotated 4-gon fixtures with contractible padding."""
    G = four_gon(rng.randint(0, 1))
    for _ in range(rng.randint(0, 2)):
        G = G.direct_sum(four_gon(rng.randint(0, 1)))
    for pos in range(4):
        if rng.random() < 0.5:
            E, h = random_contractible(rng, max_pairs, (0, 1, 2))
            G = G.direct_sum(contractible_ngon(4, pos, E, h))
    return G


def zero_cube(n: int) -> ExactNCube:
    return ExactNCube(n, {})


def cube_one(A: ChainComplexF2, E: ChainComplexF2, h: MatrixF2) -> ExactNCube:
    """1-cube ``A -> A ⊕ E -> A`` (inclusion, then the connecting edge as projection).

    The loop at ``{0}`` carries the contraction of ``E``.
    """
    big = A.direct_sum(E)
    _, (ia, ie) = layout([(A, 0), (E, 0)])
    nb = big.total_dim
    inc = _embed(nb, ia, A.total_dim)
    proj = inc.transpose()
    loop = MatrixF2(nb, nb, tuple(scatter(h, ie, ie, nb, nb)))
    paths = {
        GnPath(1, "edge", (0,), (), frozenset()): inc,
        GnPath(1, "through", (), ()): proj,
        GnPath(1, "through", (), (0,)): loop,
    }
    return ExactNCube(1, {frozenset(): A, frozenset({0}): big}, paths)


def cube_two(phi: ChainMapF2, E: Optional[ChainComplexF2] = None, h: Optional[MatrixF2] = None) -> ExactNCube:
    """2-cube whose assembled triangle is the cone triangle of ``φ``.

    ``∅ -> {0} -> {0,1}`` carries ``A -> B -> Cone(φ)``; the vertex ``{1}``
    holds an optional contractible ``E`` whose contraction sits on the loop
    through the connecting edge.
    """
    T = cone_triangle(phi)
    A, B, Cn = T.complexes
    E = E if E is not None else ChainComplexF2.zero(A.grading)
    paths = {
        GnPath(2, "edge", (0,), (), frozenset()): T.f(0, 1),
        GnPath(2, "edge", (1,), (), frozenset({0})): T.f(1, 2),
        GnPath(2, "edge", (0, 1), (), frozenset()): T.f(0, 2),
        GnPath(2, "through", (), ()): T.f(2, 3),
        GnPath(2, "through", (), (0,)): T.f(2, 4),
    }
    if h is not None:
        paths[GnPath(2, "through", (0,), (1,))] = h
    cs = {frozenset(): A, frozenset({0}): B, frozenset({1}): E, frozenset({0, 1}): Cn}
    return ExactNCube(2, cs, paths)

"""Cartan algebra of su(N): simplex coordinates, reduction modulo W ⋉ L, and h⁰ counts.

Points are tuples of :class:`fractions.Fraction` summing to zero.  The
fundamental domain is the simplex ``r_i >= 0`` where
``r_i = t_{i+1} - t_i`` for ``i < N`` and ``r_N = t_1 - t_N + 1``.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product
from typing import Iterable, List, Sequence, Tuple

__all__ = [
    "WeightVector",
    "LensFlatConnection",
    "TorusFlatConnection",
    "Reduction",
    "as_fractions",
    "parse_rational",
    "format_rational",
    "normalize",
    "r_coords",
    "from_r_coords",
    "in_domain",
    "lambda_vec",
    "lambda_bar",
    "apply_affine_weyl",
    "reduce_to_fundamental_domain",
    "brute_force_reduce",
    "h0_lens",
    "h0_s1s2",
]

Vec = Tuple[Fraction, ...]


def parse_rational(s) -> Fraction:
    return Fraction(str(s).strip())


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def as_fractions(v: Iterable) -> Vec:
    return tuple(Fraction(x) for x in v)


@dataclass(frozen=True)
class WeightVector:
    """A point of the Cartan algebra: exact entries with zero sum."""

    t: Vec

    def __post_init__(self):
        t = as_fractions(self.t)
        if sum(t) != 0:
            raise ValueError("weight vectors have zero sum")
        object.__setattr__(self, "t", t)

    @property
    def N(self) -> int:
        return len(self.t)

    @property
    def r(self) -> Vec:
        return r_coords(self.t)

    def to_json(self) -> List[str]:
        return [format_rational(x) for x in self.t]


@dataclass(frozen=True)
class LensFlatConnection:
    """Sum of powers ``ζ^{s_j}`` of the basic flat U(1) connection on a lens space of order ``p``."""

    p: int
    exponents: Tuple[int, ...]

    def __post_init__(self):
        if self.p < 1:
            raise ValueError("order must be positive")
        object.__setattr__(self, "exponents", tuple(int(s) % self.p for s in self.exponents))

    @property
    def rank(self) -> int:
        return len(self.exponents)


@dataclass(frozen=True)
class TorusFlatConnection:
    """Holonomy ``exp(2πi t)`` along the circle factor, ``t`` a domain point."""

    point: WeightVector

    def __post_init__(self):
        if not in_domain(self.point.t):
            raise ValueError("point is not in the fundamental simplex")


def normalize(v: Sequence) -> Vec:
    """``v - (Σv / N)(1, …, 1)``."""
    v = as_fractions(v)
    if not v:
        return v
    mean = sum(v) / len(v)
    return tuple(x - mean for x in v)


def r_coords(t: Sequence) -> Vec:
    t = as_fractions(t)
    N = len(t)
    return tuple(t[i + 1] - t[i] for i in range(N - 1)) + (t[0] - t[N - 1] + 1,)


def from_r_coords(r: Sequence) -> Vec:
    """Inverse of :func:`r_coords` on the zero-sum plane (requires ``Σr = 1``)."""
    r = as_fractions(r)
    if sum(r) != 1:
        raise ValueError("simplex coordinates must sum to 1")
    partial = [Fraction(0)]
    for x in r[:-1]:
        partial.append(partial[-1] + x)
    return normalize(partial)


def in_domain(t: Sequence) -> bool:
    return all(x >= 0 for x in r_coords(t))


def lambda_vec(N: int, i: int) -> Tuple[int, ...]:
    """``(0, …, 0, 1, …, 1)`` with ``i`` trailing ones."""
    if not 0 <= i <= N:
        raise ValueError("index out of range")
    return (0,) * (N - i) + (1,) * i


def lambda_bar(N: int, i: int) -> Vec:
    return normalize(lambda_vec(N, i % N))


def apply_affine_weyl(t: Sequence, tau: Sequence[int], k: Sequence[int]) -> Vec:
    """``τ(t - k)``: entry ``a`` of the result is ``(t - k)[τ[a]]``."""
    t = as_fractions(t)
    return tuple(t[tau[a]] - k[tau[a]] for a in range(len(t)))


@dataclass(frozen=True)
class Reduction:
    point: Vec
    tau: Tuple[int, ...]
    k: Tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "point": [format_rational(x) for x in self.point],
            "r": [format_rational(x) for x in r_coords(self.point)],
            "tau": list(self.tau),
            "k": list(self.k),
        }


def reduce_to_fundamental_domain(t: Sequence) -> Reduction:
    """Move ``t`` into the simplex ``r_i >= 0`` by a permutation and a root-lattice shift.

    Ceilings give an integer vector whose entries sum to ``d = Σ⌈t_i⌉``;
    lowering the ceilings of the ``d`` entries with the most negative
    ``t_i - ⌈t_i⌉`` yields ``k`` with ``Σk = 0`` and all of ``t - k``
    inside an interval of length one.  Sorting then finishes the job.
    Ties go to the larger index, which makes every domain point its own
    reduction with ``k = 0`` and ``τ`` the identity.
    """
    t = as_fractions(t)
    if sum(t) != 0:
        raise ValueError("input must have zero sum")
    ceil = [math.ceil(x) for x in t]
    d = sum(ceil)
    order = sorted(range(len(t)), key=lambda i: (t[i] - ceil[i], -i))
    k = list(ceil)
    for i in order[:d]:
        k[i] -= 1
    shifted = [t[i] - k[i] for i in range(len(t))]
    tau = tuple(sorted(range(len(t)), key=lambda i: shifted[i]))
    point = tuple(shifted[i] for i in tau)
    return Reduction(point, tau, tuple(k))


def brute_force_reduce(t: Sequence, bound: int) -> List[Reduction]:
    """Every ``(τ, k)`` with ``|k|_∞ <= bound`` and ``Σk = 0`` landing in the simplex.

    Works on integers scaled by the common denominator, so the inner loop
    is plain integer comparison.
    """
    t = as_fractions(t)
    N = len(t)
    den = math.lcm(*(x.denominator for x in t)) if t else 1
    ti = [int(x * den) for x in t]
    found = []
    rng = range(-bound, bound + 1)
    for k in product(rng, repeat=N):
        if sum(k) != 0:
            continue
        s = [ti[i] - k[i] * den for i in range(N)]
        if max(s) - min(s) > den:
            continue
        for tau in permutations(range(N)):
            p = [s[a] for a in tau]
            if all(p[i + 1] >= p[i] for i in range(N - 1)) and p[0] - p[-1] + den >= 0:
                found.append(Reduction(tuple(Fraction(x, den) for x in p), tuple(tau), tuple(k)))
    return found


def _centralizer_dim(mults: Iterable[int]) -> int:
    return sum(m * m for m in mults) - 1


def h0_lens(chi: LensFlatConnection) -> int:
    """``Σ m_a² - 1`` over the multiplicities of equal exponents mod ``p``."""
    return _centralizer_dim(Counter(chi.exponents).values())


def h0_s1s2(beta) -> int:
    """Centralizer dimension of ``exp(2πi t)``: entries coincide when they differ by an integer.

    Accepts a :class:`TorusFlatConnection`, a :class:`WeightVector` or a
    plain sequence.
    """
    if isinstance(beta, TorusFlatConnection):
        t = beta.point.t
    elif isinstance(beta, WeightVector):
        t = beta.t
    else:
        t = as_fractions(beta)
    return _centralizer_dim(Counter(x - math.floor(x) for x in t).values())

"""Energy and index of completely reducible connections from integer charge data."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Dict, List, Sequence, Tuple

from ..weightlattice import LensFlatConnection, h0_lens

__all__ = [
    "ChargeEnsemble",
    "BiPermutation",
    "bracket",
    "pair_sums",
    "energy_numerator",
    "energy",
    "index_Xbar",
    "index_X",
    "is_minimal",
    "rho_plus_h0",
    "sharp_decomposition",
    "bipermutation_cycle",
    "is_admissible_cycle",
    "act_bipermutation",
    "compose_perm",
    "orbit",
    "intersection_form",
    "gamma_cycle",
    "lens_connection",
]

Vector = Tuple[int, ...]


def bracket(v: Sequence[int]) -> int:
    """``[v]_+``: the sum of the entries."""
    return int(sum(v))


@dataclass(frozen=True)
class ChargeEnsemble:
    """``k`` integer vectors of a common length ``N``."""

    vectors: Tuple[Vector, ...]

    def __post_init__(self):
        vs = tuple(tuple(int(x) for x in v) for v in self.vectors)
        if not vs:
            raise ValueError("an ensemble needs at least one vector")
        if len({len(v) for v in vs}) != 1:
            raise ValueError("all vectors must have the same length")
        object.__setattr__(self, "vectors", vs)

    @property
    def N(self) -> int:
        return len(self.vectors[0])

    @property
    def k(self) -> int:
        return len(self.vectors)

    def total(self) -> Vector:
        return tuple(sum(col) for col in zip(*self.vectors))

    def brackets(self) -> Tuple[int, ...]:
        return tuple(bracket(v) for v in self.vectors)

    def to_json(self) -> List[List[int]]:
        return [list(v) for v in self.vectors]


def _ens(E) -> ChargeEnsemble:
    return E if isinstance(E, ChargeEnsemble) else ChargeEnsemble(tuple(E))


def pair_sums(E) -> Dict[str, int]:
    """Ordered-pair sums shared by the energy and index formulas."""
    E = _ens(E)
    vs, bs = E.vectors, E.brackets()
    sq = l1b = sqb = 0
    for i in range(E.k):
        for j in range(E.k):
            sq += sum((a - b) ** 2 for a, b in zip(vs[i], vs[j]))
            l1b += abs(bs[i] - bs[j])
            sqb += (bs[i] - bs[j]) ** 2
    return {"sq": sq, "abs_bracket": l1b, "sq_bracket": sqb}


def energy_numerator(E) -> int:
    """``4kN·κ``, an integer."""
    E = _ens(E)
    s = pair_sums(E)
    return E.N * s["sq"] - s["sq_bracket"]


def energy(E) -> Fraction:
    """κ = (Σ|v_i - v_j|² - (1/N) Σ([v_i] - [v_j])²) / 4k over ordered pairs."""
    E = _ens(E)
    return Fraction(energy_numerator(E), 4 * E.k * E.N)


def lens_connection(E) -> LensFlatConnection:
    """Limiting flat connection on the lens space: exponents ``[v_i]`` mod N."""
    E = _ens(E)
    return LensFlatConnection(E.N, E.brackets())


def index_Xbar(E) -> int:
    """Index on the manifold with the circle-times-sphere end capped off."""
    E = _ens(E)
    s = pair_sums(E)
    return s["sq"] - s["abs_bracket"] - h0_lens(lens_connection(E))


def index_X(E, h0_beta: int) -> int:
    """Index with the circle-times-sphere end kept; ``h0_beta`` depends on the metric."""
    return index_Xbar(E) - h0_beta


def is_minimal(E) -> bool:
    """Can the vectors be ordered to decrease componentwise with pairwise sup-distance <= 1?"""
    E = _ens(E)
    vs = sorted(E.vectors, key=lambda v: (sum(v), v), reverse=True)
    for a, b in zip(vs, vs[1:]):
        if any(x < y for x, y in zip(a, b)):
            return False
    for c in range(E.N):
        col = [v[c] for v in vs]
        if max(col) - min(col) > 1:
            return False
    return True


def rho_plus_h0(j: int, N: int) -> Fraction:
    """``h⁰ + ρ`` of the U(1) flat connection ``ζ^j`` (``|j| <= N``): ``2 - 4|j| + 4j²/N``."""
    if abs(j) > N:
        raise ValueError("|j| must not exceed N")
    return 2 - 4 * abs(j) + Fraction(4 * j * j, N)


def sharp_decomposition(s: Sequence[int], N: int, k: int) -> ChargeEnsemble:
    """The unique 0/1 staircase ensemble with ``Σ v_l = s``.

    ``v_l`` (``l = 1..k``) has entry 1 in coordinate ``j`` iff ``l <= s_j``.
    """
    s = tuple(int(x) for x in s)
    if len(s) != N:
        raise ValueError("exponent vector must have length N")
    if any(x < 0 or x > k - 1 for x in s):
        raise ValueError("entries must lie in 0..k-1")
    return ChargeEnsemble(tuple(tuple(1 if l <= x else 0 for x in s) for l in range(1, k + 1)))


@dataclass(frozen=True)
class BiPermutation:
    """Injections ``σ: [N-l] -> [N]`` and ``τ: [l] -> [N]``.

    ``check=False`` skips the disjoint-image requirement, which lets tests
    build the inadmissible pairs on purpose.
    """

    N: int
    sigma: Tuple[int, ...]
    tau: Tuple[int, ...]
    check: bool = True

    def __post_init__(self):
        sg, tu = tuple(self.sigma), tuple(self.tau)
        object.__setattr__(self, "sigma", sg)
        object.__setattr__(self, "tau", tu)
        if len(sg) + len(tu) != self.N:
            raise ValueError("sizes must add up to N")
        for m in (sg, tu):
            if len(set(m)) != len(m) or any(not 0 <= x < self.N for x in m):
                raise ValueError("maps must be injective into 0..N-1")
        if self.check and set(sg) & set(tu):
            raise ValueError("images must be disjoint")

    @property
    def l(self) -> int:
        return len(self.tau)


def bipermutation_cycle(b: BiPermutation) -> Vector:
    """Coefficient vector ``(σ(0), …, σ(N-l-1), τ(0), …, τ(l-1))``."""
    return b.sigma + b.tau


def is_admissible_cycle(w: Sequence[int], N: int) -> bool:
    """Does the class admit a minimal ensemble whose lens-space limit is ``1 ⊕ ζ ⊕ … ⊕ ζ^{N-1}``?

    The minimal ensemble with total ``w`` is the staircase of
    :func:`sharp_decomposition`; its exponents must be distinct mod ``N``.
    """
    w = tuple(int(x) for x in w)
    if any(x < 0 or x > N - 1 for x in w):
        return False
    E = sharp_decomposition(w, N, N)
    if not is_minimal(E):
        return False
    return sorted(x % N for x in E.brackets()) == list(range(N))


def compose_perm(f: Sequence[int], g: Sequence[int]) -> Tuple[int, ...]:
    """``f ∘ g`` for 0-based permutations stored as image tuples."""
    return tuple(f[g[i]] for i in range(len(g)))


def _inverse(f: Sequence[int]) -> Tuple[int, ...]:
    inv = [0] * len(f)
    for i, x in enumerate(f):
        inv[x] = i
    return tuple(inv)


def act_bipermutation(b0: BiPermutation, f: Sequence[int], g: Sequence[int]) -> BiPermutation:
    """``σ_f = σ_0 ∘ f⁻¹`` and ``τ_g = τ_0 ∘ g⁻¹`` (0-based form of the 1-based rule)."""
    if sorted(f) != list(range(len(b0.sigma))) or sorted(g) != list(range(len(b0.tau))):
        raise ValueError("f and g must be permutations of the right sizes")
    fi, gi = _inverse(f), _inverse(g)
    return BiPermutation(b0.N, tuple(b0.sigma[fi[i]] for i in range(len(fi))),
                         tuple(b0.tau[gi[j]] for j in range(len(gi))), b0.check)


def orbit(b0: BiPermutation) -> List[BiPermutation]:
    out = []
    for f in permutations(range(len(b0.sigma))):
        for g in permutations(range(len(b0.tau))):
            out.append(act_bipermutation(b0, f, g))
    return out


def intersection_form(N: int) -> List[List[Fraction]]:
    """Pairing of the classes ``e_i`` computed from ``e_i ↦ E_i - (1/N)ΣE_m`` in a negative-definite lattice."""
    if N < 1:
        raise ValueError("N must be positive")
    emb = [[Fraction(int(a == i)) - Fraction(1, N) for a in range(N)] for i in range(N)]
    return [[-sum(x * y for x, y in zip(emb[i], emb[j])) for j in range(N)] for i in range(N)]


def gamma_cycle(S, w_class: int, i: int) -> Tuple[int, int, int]:
    """``(w, Σ_{s∈S} s, i)``: the class ``w`` shifted by ``ΣS`` times the i-th core."""
    S = sorted(set(int(x) for x in S))
    if any(x < 0 for x in S):
        raise ValueError("subset entries must be non-negative")
    return (int(w_class), sum(S), int(i))

"""Mod-2 grading shifts of the surgery polygon from boundary-torus homology data."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Tuple

__all__ = ["SurgerySignData", "SignResult", "epsilon_signs", "STANDARD_PAIRING"]

STANDARD_PAIRING = ((0, 1), (-1, 0))


def _sign(x: int) -> int:
    return (x > 0) - (x < 0)


@dataclass(frozen=True)
class SurgerySignData:
    """Three classes on the boundary torus and the intersection pairing ``a·b = aᵀ J b``."""

    lam: Tuple[int, int]
    mu: Tuple[int, int]
    nu: Tuple[int, int]
    pairing: Tuple[Tuple[int, int], Tuple[int, int]] = STANDARD_PAIRING

    def __post_init__(self):
        J = self.pairing
        if J[0][0] != 0 or J[1][1] != 0 or J[0][1] != -J[1][0]:
            raise ValueError("pairing must be skew-symmetric")
        if J[0][0] * J[1][1] - J[0][1] * J[1][0] != 1:
            raise ValueError("pairing must have determinant 1")

    def dot(self, a, b) -> int:
        J = self.pairing
        return sum(a[i] * J[i][j] * b[j] for i in range(2) for j in range(2))

    def slope_pairing(self, j: int) -> int:
        """``(λ + jμ)·ν``."""
        v = (self.lam[0] + j * self.mu[0], self.lam[1] + j * self.mu[1])
        return self.dot(v, self.nu)


@dataclass(frozen=True)
class SignResult:
    pairings: Tuple[int, ...]  # (λ+jμ)·ν for j = 0..N
    eps_prime: Tuple[int, ...]  # ε'_1..ε'_N (as computed, also for odd N)
    eps: Tuple[int, ...]  # ε_0..ε_N actually used
    degrees: Dict[Tuple[int, int], int]  # (start size j, length k) -> degree mod 2

    def path_degree(self, start_size: int, length: int) -> int:
        return self.degrees[(start_size, length)]

    def to_json(self) -> dict:
        return {
            "pairings": list(self.pairings),
            "eps_prime": list(self.eps_prime),
            "eps": list(self.eps),
            "degrees": [{"start_size": j, "length": k, "degree": v} for (j, k), v in sorted(self.degrees.items())],
        }


def _eps_prime(prev: int, cur: int) -> int:
    if prev == 0 and cur == 0:
        raise ValueError("degenerate sign data: consecutive slopes both pair to zero with ν")
    if prev == 0:
        return 0
    if cur == 0:
        return 1
    return 0 if _sign(cur) == _sign(prev) else 1


def epsilon_signs(data: SurgerySignData, N: int) -> SignResult:
    """Sign changes ``ε'_j`` of ``(λ+jμ)·ν``, their partial sums, and path degrees.

    For odd ``N`` every ``ε_i`` is zero and an edge path of length ``k``
    has degree ``k-1``; for even ``N`` the degree of a path from a level
    ``j`` subset of length ``k`` is ``k - 1 + Σ_{m=j+1}^{j+k} ε'_m`` mod 2.
    """
    if N < 1:
        raise ValueError("N must be positive")
    pairings = tuple(data.slope_pairing(j) for j in range(N + 1))
    eps_p = tuple(_eps_prime(pairings[j - 1], pairings[j]) for j in range(1, N + 1))
    if N % 2:
        eps = (0,) * (N + 1)
    else:
        acc, out = 0, [0]
        for e in eps_p:
            acc += e
            out.append(acc)
        eps = tuple(out)
    degrees = {}
    for j in range(N):
        for k in range(1, N - j + 1):
            extra = 0 if N % 2 else sum(eps_p[m - 1] for m in range(j + 1, j + k + 1))
            degrees[(j, k)] = (k - 1 + extra) % 2
    return SignResult(pairings, eps_p, eps, degrees)


def hand_rule(prev: int, cur: int) -> int:
    """Case table written out literally; used to cross-check ``epsilon_signs``."""
    cases = []
    if prev != 0 and cur != 0 and (prev > 0) == (cur > 0):
        cases.append(0)
    if prev != 0 and cur != 0 and (prev > 0) != (cur > 0):
        cases.append(1)
    if prev == 0:
        cases.append(0)
    if cur == 0:
        cases.append(1)
    if len(set(cases)) != 1:
        raise ValueError("ambiguous case")
    return cases[0]


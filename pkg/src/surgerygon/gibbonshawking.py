"""Multi-center Gibbons-Hawking data on the x-axis, evaluated pointwise in binary64.

Points are arrays of shape ``(..., 3)``.  Two-forms are stored by their
``(dy∧dz, dz∧dx, dx∧dy)`` components, so ``*du`` has the components of
``∇u`` and ``d`` of a one-form is its curl.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

__all__ = [
    "GHError",
    "MonopoleConfig",
    "FieldSample",
    "potential",
    "monopole_form",
    "dirac_potential",
    "scalar_curvature",
    "sample",
    "sphere_flux",
    "gauge_period",
    "cylinder_model_compare",
    "fd_laplacian",
    "fd_curl",
    "fd_divergence",
    "convergence_order",
    "random_config",
    "random_off_center_points",
    "check_report",
]

_MIN_DIST = 1e-12


class GHError(ValueError):
    pass


@dataclass(frozen=True)
class MonopoleConfig:
    m: Tuple[int, ...]
    centers: Tuple[float, ...]

    def __post_init__(self):
        m = tuple(int(x) for x in self.m)
        c = tuple(float(x) for x in self.centers)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "centers", c)
        if len(m) != len(c) + 1 or not c:
            raise GHError("need n >= 1 centers and n + 1 integers m_0..m_n")
        if any(b < a for a, b in zip(m, m[1:])):
            raise GHError("m must be non-decreasing")
        if any(b <= a for a, b in zip(c, c[1:])):
            raise GHError("centers must be strictly increasing")

    @property
    def charges(self) -> np.ndarray:
        return np.diff(np.array(self.m, dtype=float))

    @property
    def points(self) -> np.ndarray:
        X = np.zeros((len(self.centers), 3))
        X[:, 0] = self.centers
        return X

    @property
    def total_charge(self) -> float:
        return float(self.m[-1] - self.m[0])

    @property
    def diameter(self) -> float:
        return self.centers[-1] - self.centers[0]

    @classmethod
    def from_json(cls, d: dict) -> "MonopoleConfig":
        return cls(tuple(d["m"]), tuple(d["centers"]))

    def to_json(self) -> dict:
        return {"m": list(self.m), "centers": list(self.centers)}


@dataclass(frozen=True)
class FieldSample:
    q: np.ndarray
    u: np.ndarray
    grad_u: np.ndarray
    alpha: np.ndarray
    R: np.ndarray


def _offsets(cfg: MonopoleConfig, q) -> Tuple[np.ndarray, np.ndarray]:
    q = np.asarray(q, dtype=float)
    if q.shape[-1] != 3:
        raise GHError("points must have 3 coordinates")
    d = q[..., None, :] - cfg.points  # (..., n, 3)
    r = np.linalg.norm(d, axis=-1)
    if np.any(r < _MIN_DIST):
        raise GHError("evaluation at a center")
    return d, r


def potential(cfg: MonopoleConfig, q) -> Tuple[np.ndarray, np.ndarray]:
    """``u = Σ charge_i / |q - x_i|`` and its gradient."""
    d, r = _offsets(cfg, q)
    c = cfg.charges
    u = (c / r).sum(axis=-1)
    grad = -(c[:, None] * d / r[..., None] ** 3).sum(axis=-2)
    return u, grad


def monopole_form(cfg: MonopoleConfig, q) -> np.ndarray:
    """``α = *du = Σ (m_{k-1} - m_k)((x - x_k)dy∧dz + y dz∧dx + z dx∧dy)/|q - x_k|³``."""
    d, r = _offsets(cfg, q)
    return ((-cfg.charges)[:, None] * d / r[..., None] ** 3).sum(axis=-2)


def dirac_potential(cfg: MonopoleConfig, q, string_dir=None, min_angle: float = 1e-6) -> np.ndarray:
    """A one-form ``a`` with ``da = α`` away from the Dirac strings (Cartesian components).

    Each center contributes ``-charge·(1 - s·cos φ)·s dψ``, where ``φ`` is the
    polar angle from ``+z``, ``ψ`` the azimuth about the vertical line through
    the center and ``s = +1`` for a string along ``-z`` (``s = -1`` puts it
    along ``+z``).  ``string_dir`` is one sign for all centers or a sequence.
    """
    d, r = _offsets(cfg, q)
    n = len(cfg.centers)
    s = np.broadcast_to(np.asarray(1.0 if string_dir is None else string_dir, dtype=float), (n,))
    if np.any(np.abs(s) != 1):
        raise GHError("string directions must be +1 or -1")
    x, y, z = d[..., 0], d[..., 1], d[..., 2]
    rho2 = x * x + y * y
    cos = z / r
    # distance to the string ray measured by the angle from it
    if np.any((1 + s * cos) < 0.5 * min_angle ** 2):
        raise GHError("point too close to a Dirac string")
    # (s - cos)/rho² without cancellation: (1 - s cos)/rho² = 1/(r²(1 + s cos))
    coef = -cfg.charges * s / (r * r * (1 + s * cos))
    a = np.stack([-(coef * y).sum(axis=-1), (coef * x).sum(axis=-1), np.zeros(rho2.shape[:-1])], axis=-1)
    return a


def scalar_curvature(cfg: MonopoleConfig, q) -> np.ndarray:
    """``R = (3/2) u⁻⁴ |∇u|²``."""
    u, g = potential(cfg, q)
    return 1.5 * (g * g).sum(axis=-1) / u ** 4


def sample(cfg: MonopoleConfig, q) -> FieldSample:
    u, g = potential(cfg, q)
    return FieldSample(np.asarray(q, float), u, g, monopole_form(cfg, q), 1.5 * (g * g).sum(axis=-1) / u ** 4)


# finite differences -------------------------------------------------------------

_E = np.eye(3)


def fd_laplacian(f, q, h: float) -> np.ndarray:
    """Seven-point Laplacian of a scalar field ``f(points)``."""
    q = np.asarray(q, float)
    acc = -6.0 * f(q)
    for e in _E:
        acc = acc + f(q + h * e) + f(q - h * e)
    return acc / (h * h)


def _partial(F, q, h, i):
    return (F(q + h * _E[i]) - F(q - h * _E[i])) / (2 * h)


def fd_curl(F, q, h: float) -> np.ndarray:
    """Central-difference curl of a vector field: ``d`` of a one-form in ``(yz, zx, xy)`` order."""
    D = [_partial(F, q, h, i) for i in range(3)]  # D[i][..., j] = ∂_i F_j
    return np.stack([D[1][..., 2] - D[2][..., 1], D[2][..., 0] - D[0][..., 2], D[0][..., 1] - D[1][..., 0]], axis=-1)


def fd_divergence(F, q, h: float) -> np.ndarray:
    """Central-difference divergence; for a two-form this is its exterior derivative."""
    return sum(_partial(F, q, h, i)[..., i] for i in range(3))


def convergence_order(err_h: float, err_h2: float) -> float:
    if err_h2 == 0:
        return math.inf
    return math.log2(err_h / err_h2)


# global checks ------------------------------------------------------------------


def sphere_flux(cfg: MonopoleConfig, i: int, radius: Optional[float] = None, n_theta: int = 48, n_phi: int = 96) -> float:
    """Integral of ``α`` over a small sphere about center ``i`` with the inward orientation.

    Gauss-Legendre in ``cos θ`` times the trapezoid rule in azimuth.  With
    this orientation the result is ``4π·charge_i``.
    """
    X = cfg.points[i]
    if radius is None:
        gaps = [abs(cfg.centers[i] - c) for j, c in enumerate(cfg.centers) if j != i]
        radius = 0.5 * min(gaps) if gaps else 1.0
    t, w = np.polynomial.legendre.leggauss(n_theta)
    phi = 2 * np.pi * np.arange(n_phi) / n_phi
    T, P = np.meshgrid(t, phi, indexing="ij")
    st = np.sqrt(1 - T * T)
    n = np.stack([st * np.cos(P), st * np.sin(P), T], axis=-1)
    a = monopole_form(cfg, X + radius * n)
    integrand = -(a * n).sum(axis=-1) * radius ** 2
    return float((integrand * w[:, None]).sum() * (2 * np.pi / n_phi))


def gauge_period(cfg: MonopoleConfig, i: int, radius: float = 0.25, height: float = 0.1, n: int = 256) -> float:
    """Loop integral of ``a(-z strings) - a(+z string at center i)`` around the vertical line through center ``i``.

    The difference is closed and its period is ``-4π·charge_i``; only the
    gauge at center ``i`` is flipped.
    """
    s_minus = np.ones(len(cfg.centers))
    s_plus = s_minus.copy()
    s_plus[i] = -1
    t = 2 * np.pi * np.arange(n) / n
    X = cfg.points[i]
    pts = X + np.stack([radius * np.cos(t), radius * np.sin(t), np.full(n, height)], axis=-1)
    tangent = np.stack([-radius * np.sin(t), radius * np.cos(t), np.zeros(n)], axis=-1)
    diff = dirac_potential(cfg, pts, s_minus) - dirac_potential(cfg, pts, s_plus)
    return float((diff * tangent).sum() * 2 * np.pi / n)


def cylinder_model_compare(cfg: MonopoleConfig, i: int, r: float, n_points: int = 2000) -> dict:
    """Sup over a sphere of radius ``r`` about center ``i`` of ``|u·|q - x_i| - charge_i|``."""
    gaps = [abs(cfg.centers[i] - c) for j, c in enumerate(cfg.centers) if j != i]
    if gaps and r >= 0.5 * min(gaps):
        raise GHError("radius must be below half the distance to the nearest other center")
    k = np.arange(n_points) + 0.5
    z = 1 - 2 * k / n_points
    ang = np.pi * (1 + 5 ** 0.5) * k
    dirs = np.stack([np.sqrt(1 - z * z) * np.cos(ang), np.sqrt(1 - z * z) * np.sin(ang), z], axis=-1)
    dirs = np.concatenate([dirs, [[1.0, 0, 0], [-1.0, 0, 0]]])  # the axis points attain the sup
    u, _ = potential(cfg, cfg.points[i] + r * dirs)
    dev = np.abs(u * r - cfg.charges[i])
    return {"center": i, "radius": r, "deviation": float(dev.max()), "charge": float(cfg.charges[i])}


def random_config(rng: np.random.Generator, n: Optional[int] = None, max_charge: int = 3) -> MonopoleConfig:
    """Positive integer charges and well-separated centers in ``[-5, 5]``."""
    n = int(rng.integers(1, 5)) if n is None else n
    charges = rng.integers(1, max_charge + 1, size=n)
    m0 = int(rng.integers(-3, 4))
    m = np.concatenate([[m0], m0 + np.cumsum(charges)])
    while True:
        c = np.sort(rng.uniform(-5, 5, size=n))
        if n == 1 or np.diff(c).min() > 0.5:
            return MonopoleConfig(tuple(int(x) for x in m), tuple(float(x) for x in c))


def random_off_center_points(rng: np.random.Generator, cfg: MonopoleConfig, k: int, min_dist: float = 0.5,
                             box: float = 8.0, off_strings: bool = False) -> np.ndarray:
    """Uniform points in a box, at least ``min_dist`` from every center (and from the ``-z`` strings)."""
    out = []
    while sum(len(o) for o in out) < k:
        q = rng.uniform(-box, box, size=(4 * k, 3))
        d = q[:, None, :] - cfg.points
        ok = np.linalg.norm(d, axis=-1).min(axis=1) > min_dist
        if off_strings:
            ok &= np.hypot(d[..., 0], d[..., 1]).min(axis=1) > min_dist
        out.append(q[ok])
    return np.concatenate(out)[:k]


def _rms(x) -> float:
    return float(np.sqrt(np.mean(np.square(x))))


def check_report(cfg: MonopoleConfig, samples: int = 100, h: float = 0.04, seed: int = 0) -> dict:
    """Residual norms at ``h`` and ``h/2`` and the observed orders for the defining identities."""
    rng = np.random.default_rng(seed)
    q = random_off_center_points(rng, cfg, samples, off_strings=True)
    u = lambda p: potential(cfg, p)[0]
    alpha = lambda p: monopole_form(cfg, p)
    a = lambda p: dirac_potential(cfg, p)
    out = {"config": cfg.to_json(), "samples": samples, "h": h}
    checks = {
        "laplacian": lambda hh: _rms(fd_laplacian(u, q, hh)),
        "monopole_equation": lambda hh: _rms(fd_curl(a, q, hh) - alpha(q)),
        "closed_alpha": lambda hh: _rms(fd_divergence(alpha, q, hh)),
        "alpha_is_star_du": lambda hh: _rms(alpha(q) - _fd_grad(u, q, hh)),
    }
    for name, f in checks.items():
        e1, e2 = f(h), f(h / 2)
        out[name] = {"residual_h": e1, "residual_h2": e2, "order": convergence_order(e1, e2)}
    R = scalar_curvature(cfg, q)
    out["R_min"] = float(R.min())
    out["flux"] = [
        {"center": i, "flux": sphere_flux(cfg, i), "expected": 4 * math.pi * float(c)}
        for i, c in enumerate(cfg.charges)
    ]
    out["ok"] = bool(
        all(out[n]["order"] >= 1.9 for n in checks)
        and out["R_min"] > 0
        and all(abs(f["flux"] - f["expected"]) <= 1e-6 * abs(f["expected"]) for f in out["flux"])
    )
    return out


def _fd_grad(f, q, h):
    return np.stack([(f(q + h * e) - f(q - h * e)) / (2 * h) for e in _E], axis=-1)


def load_config(path: str) -> MonopoleConfig:
    with open(path) as fh:
        return MonopoleConfig.from_json(json.load(fh))

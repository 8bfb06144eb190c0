import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from surgerygon.gibbonshawking import (
    GHError,
    MonopoleConfig,
    check_report,
    convergence_order,
    cylinder_model_compare,
    dirac_potential,
    fd_curl,
    fd_divergence,
    fd_laplacian,
    gauge_period,
    monopole_form,
    potential,
    random_config,
    random_off_center_points,
    sample,
    scalar_curvature,
    sphere_flux,
)


def _u_naive(cfg, q):
    return sum((b - a) / math.dist(q, (x, 0.0, 0.0)) for a, b, x in zip(cfg.m, cfg.m[1:], cfg.centers))


def _grad_naive(cfg, q, h=1e-5):
    # fourth-order central differences of the scalar oracle
    g = []
    for i in range(3):
        e = [0.0, 0.0, 0.0]
        e[i] = h
        p = lambda s: [qq + s * ee for qq, ee in zip(q, e)]
        g.append((-_u_naive(cfg, p(2)) + 8 * _u_naive(cfg, p(1)) - 8 * _u_naive(cfg, p(-1)) + _u_naive(cfg, p(-2)))
                 / (12 * h))
    return g


@pytest.fixture(scope="module")
def configs():
    rng = np.random.default_rng(2024)
    return [random_config(rng) for _ in range(20)]


# --- configs ------------------------------------------------------------------------------


def test_config_validation():
    with pytest.raises(GHError):
        MonopoleConfig((0, 1), (0.0, 1.0))
    with pytest.raises(GHError):
        MonopoleConfig((1, 0), (0.0,))
    with pytest.raises(GHError):
        MonopoleConfig((0, 1, 2), (1.0, 1.0))
    cfg = MonopoleConfig((0, 2, 3), (-1.0, 1.0))
    assert list(cfg.charges) == [2, 1] and cfg.total_charge == 3 and cfg.diameter == 2
    assert MonopoleConfig.from_json(cfg.to_json()) == cfg


def test_evaluation_at_center_rejected():
    cfg = MonopoleConfig((0, 1), (0.0,))
    with pytest.raises(GHError):
        potential(cfg, [0.0, 0.0, 0.0])
    with pytest.raises(GHError):
        potential(cfg, [0.0, 0.0])


# --- potential and forms -----------------------------------------------------------------------


def test_single_center_values():
    cfg = MonopoleConfig((0, 1), (0.0,))
    u, g = potential(cfg, [0.0, 0.0, 2.0])
    assert u == pytest.approx(0.5) and g == pytest.approx([0, 0, -0.25])


def test_two_equal_charges_midplane_symmetry():
    cfg = MonopoleConfig((0, 1, 2), (-1.0, 1.0))
    rng = np.random.default_rng(0)
    q = np.column_stack([np.zeros(50), rng.normal(size=(50, 2))])
    _, g = potential(cfg, q)
    assert np.abs(g[:, 0]).max() < 1e-15


def test_potential_matches_oracle(configs):
    rng = np.random.default_rng(1)
    for cfg in configs:
        for q in random_off_center_points(rng, cfg, 5):
            u, g = potential(cfg, q)
            assert u == pytest.approx(_u_naive(cfg, q), rel=1e-13)
            assert g == pytest.approx(_grad_naive(cfg, list(q)), rel=1e-7, abs=1e-9)


def test_alpha_is_star_du(configs):
    rng = np.random.default_rng(2)
    for cfg in configs:
        q = random_off_center_points(rng, cfg, 50)
        _, g = potential(cfg, q)
        assert np.allclose(monopole_form(cfg, q), g, rtol=1e-14, atol=0)


def test_field_sample_fields(configs):
    cfg = configs[0]
    q = random_off_center_points(np.random.default_rng(3), cfg, 10)
    s = sample(cfg, q)
    assert np.allclose(s.R, scalar_curvature(cfg, q))
    assert np.all(s.u > 0)


# --- finite-difference convergence -------------------------------------------------------------


def _orders(err_h, err_h2):
    return np.log2(err_h / err_h2)


def test_laplacian_and_monopole_equation_second_order(configs):
    rng = np.random.default_rng(4)
    h = 0.04
    for cfg in configs[:5]:
        q = random_off_center_points(rng, cfg, 100, off_strings=True)
        u = lambda p: potential(cfg, p)[0]
        a = lambda p: dirac_potential(cfg, p)
        alpha = monopole_form(cfg, q)
        lap = [np.abs(fd_laplacian(u, q, hh)) for hh in (h, h / 2)]
        mono = [np.linalg.norm(fd_curl(a, q, hh) - alpha, axis=-1) for hh in (h, h / 2)]
        for e1, e2 in (lap, mono):
            assert convergence_order(float(np.sqrt(np.mean(e1 ** 2))), float(np.sqrt(np.mean(e2 ** 2)))) >= 1.9
            assert np.all(_orders(e1, e2) >= 1.9)


def test_alpha_closed_second_order(configs):
    cfg = configs[1]
    q = random_off_center_points(np.random.default_rng(5), cfg, 100)
    alpha = lambda p: monopole_form(cfg, p)
    e1, e2 = (np.abs(fd_divergence(alpha, q, hh)) for hh in (0.04, 0.02))
    assert np.all(_orders(e1, e2) >= 1.9)


def test_check_report_passes(configs):
    for cfg in configs[:3]:
        rep = check_report(cfg, samples=100)
        assert rep["ok"], rep
        assert rep["laplacian"]["order"] >= 1.9 and rep["monopole_equation"]["order"] >= 1.9


def test_convergence_order_edge_cases():
    assert convergence_order(4.0, 1.0) == 2.0
    assert convergence_order(1.0, 0.0) == math.inf


# --- curvature ---------------------------------------------------------------------------------------


def test_single_center_curvature_is_constant():
    rng = np.random.default_rng(6)
    for c in (1, 2, 5):
        cfg = MonopoleConfig((0, c), (0.7,))
        q = rng.normal(size=(1000, 3)) * 3
        R = scalar_curvature(cfg, q)
        assert np.abs(R - 1.5 / c ** 2).max() < 1e-9


def test_curvature_positive_everywhere_sampled(configs):
    rng = np.random.default_rng(7)
    for cfg in configs:
        q = random_off_center_points(rng, cfg, 10_000, min_dist=1e-3, box=20.0)
        assert np.all(scalar_curvature(cfg, q) > 0)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_curvature_positive_property(seed):
    rng = np.random.default_rng(seed)
    cfg = random_config(rng)
    q = random_off_center_points(rng, cfg, 200, min_dist=1e-2)
    assert np.all(scalar_curvature(cfg, q) > 0)


def test_far_field_matches_single_center(configs):
    rng = np.random.default_rng(8)
    for cfg in configs:
        if len(cfg.centers) < 2:
            continue
        d = rng.normal(size=(50, 3))
        d /= np.linalg.norm(d, axis=-1, keepdims=True)
        q = d * 1e3 * cfg.diameter
        R = scalar_curvature(cfg, q)
        assert np.allclose(R, 1.5 / cfg.total_charge ** 2, rtol=1e-2)


# --- flux and gauge ----------------------------------------------------------------------------------


def test_sphere_flux_quantised(configs):
    for cfg in configs:
        for i, c in enumerate(cfg.charges):
            assert sphere_flux(cfg, i) == pytest.approx(4 * math.pi * c, rel=1e-6)


def test_flux_around_empty_region_vanishes():
    cfg = MonopoleConfig((0, 1, 3), (-2.0, 2.0))
    # a zero-charge center between the charges: the sphere around it encloses nothing
    shifted = MonopoleConfig((0, 1, 1, 3), (-2.0, 0.0, 2.0))
    assert abs(sphere_flux(shifted, 1, radius=1.0)) < 1e-9
    assert sphere_flux(cfg, 1) == pytest.approx(8 * math.pi, rel=1e-6)


def test_dirac_potential_equator_value():
    cfg = MonopoleConfig((0, 3), (0.0,))
    # a_ψ = -charge (1 - cos φ) with cos φ = 0; dψ has length 1/ρ along the azimuth
    q = np.array([2.0, 0.0, 0.0])
    a = dirac_potential(cfg, q)
    assert a == pytest.approx([0.0, -3.0 / 2.0, 0.0])


def test_dirac_potential_rejects_string_points():
    cfg = MonopoleConfig((0, 1), (0.0,))
    with pytest.raises(GHError):
        dirac_potential(cfg, [0.0, 0.0, -1.0])
    with pytest.raises(GHError):
        dirac_potential(cfg, [0.0, 0.0, 1.0], string_dir=-1)
    with pytest.raises(GHError):
        dirac_potential(cfg, [1.0, 0.0, 0.0], string_dir=2)


def test_gauge_difference_period(configs):
    for cfg in configs[:10]:
        for i, c in enumerate(cfg.charges):
            assert gauge_period(cfg, i) == pytest.approx(-4 * math.pi * c, rel=1e-9)


def test_gauge_difference_is_closed():
    cfg = MonopoleConfig((0, 2, 3), (-1.0, 1.0))
    rng = np.random.default_rng(9)
    q = rng.uniform(-3, 3, size=(200, 3))
    q = q[np.hypot(q[:, 0] + 1.0, q[:, 1]) > 0.3]
    diff = lambda p: dirac_potential(cfg, p, [1, 1]) - dirac_potential(cfg, p, [-1, 1])
    # the difference is a multiple of dψ about the vertical line through the first center
    assert np.abs(fd_curl(diff, q, 1e-4)).max() < 1e-5


# --- cylindrical model ---------------------------------------------------------------------------------


def test_cylinder_single_center_exact():
    cfg = MonopoleConfig((0, 2), (0.0,))
    assert cylinder_model_compare(cfg, 0, 0.5)["deviation"] < 1e-14


def test_cylinder_deviation_linear_in_radius():
    cfg = MonopoleConfig((0, 1, 3), (0.0, 1.0))
    d1 = cylinder_model_compare(cfg, 0, 0.02)["deviation"]
    d2 = cylinder_model_compare(cfg, 0, 0.01)["deviation"]
    assert d2 / d1 == pytest.approx(0.5, rel=0.02)
    with pytest.raises(GHError):
        cylinder_model_compare(cfg, 0, 0.6)


@pytest.mark.xfail(strict=True, reason="the deviation is about r times the neighbouring charge over the separation, "
                                       "so at r = 1e-3 x separation it sits at or above 1e-3 for integer charges")
def test_cylinder_deviation_below_tolerance_at_small_radius():
    cfg = MonopoleConfig((0, 1, 3), (0.0, 1.0))
    assert cylinder_model_compare(cfg, 0, 1e-3 * cfg.diameter)["deviation"] < 1e-3

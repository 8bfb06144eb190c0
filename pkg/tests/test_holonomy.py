import math
import random
import warnings
from fractions import Fraction
from itertools import combinations, permutations

import pytest

from surgerygon.holonomy import (
    HolonomyError,
    barycenter_discrepancy,
    base_bipermutation,
    bibary_subdivision,
    build_H,
    collapse_map,
    degree_mod2,
    default_target,
    hol_surrogate,
    vertex_image,
    vertex_report,
)
from surgerygon.instantonindex import BiPermutation
from surgerygon.weightlattice import in_domain, lambda_bar, r_coords, reduce_to_fundamental_domain

from oracles import reduce_bruteforce, simplex_volume_naive


def _all_bipermutations(N):
    for l in range(N + 1):
        for sg in permutations(range(N), N - l):
            rest = [x for x in range(N) if x not in sg]
            for tu in permutations(rest):
                yield BiPermutation(N, sg, tu)


def _subsets(N):
    for m in range(N + 1):
        yield from combinations(range(N), m)


def _random_simplex_point(rng, N, den=12):
    cuts = sorted(rng.randint(0, den) for _ in range(N - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [den])]
    return tuple(Fraction(p, den) for p in parts)


# --- vertex images ------------------------------------------------------------------------


@pytest.mark.parametrize("N", [1, 2, 3, 4])
def test_vertex_images_are_exact_and_reduce_into_simplex(N):
    count = 0
    for b in _all_bipermutations(N):
        for v in vertex_report(b):
            assert all(isinstance(x, Fraction) for x in v.hol)
            assert sum(v.hol) == 0
            assert in_domain(v.reduction.point)
            assert all(x >= 0 for x in v.r) and sum(v.r) == 1
            count += 1
    assert count == N * sum(math.perm(N, N - l) * math.factorial(l) for l in range(N + 1))


def test_vertex_reduction_matches_bruteforce_oracle():
    for N in (2, 3):
        for b in _all_bipermutations(N):
            for v in vertex_report(b):
                assert reduce_bruteforce(list(v.hol), bound=3) == {v.reduction.point}


@pytest.mark.parametrize("N", [2, 3, 4])
def test_vertex_formula_cases(N):
    for b in _all_bipermutations(N):
        l = b.l
        for k in range(N):
            v = vertex_image(b, k)
            if k >= l:
                idx = b.sigma[: N - k]
            else:
                idx = b.tau[l - 1 - k:]
            # average of the listed normalised weights, so it lies in their affine hull
            want = tuple(sum(lambda_bar(N, i)[a] for i in idx) / len(idx) for a in range(N))
            assert v.hol == want
        if N - 1 >= l:
            assert vertex_image(b, N - 1).hol == lambda_bar(N, b.sigma[0])
            assert vertex_image(b, N - 1).is_vertex
        if l == N:
            assert vertex_image(b, 0).hol == lambda_bar(N, b.tau[-1])


def test_vertex_index_checked():
    b = BiPermutation(2, (0, 1), ())
    with pytest.raises(HolonomyError):
        vertex_image(b, 2)
    with pytest.raises(HolonomyError):
        vertex_image(b, -1)


def test_barycenter_discrepancy_record():
    rep = barycenter_discrepancy(2, 0, 0)
    assert rep["formula_value"] == ["-1/4", "1/4"]
    assert rep["r"] == ["1/2", "1/2"]
    assert rep["is_vertex"] is False and rep["consistent"] is False
    assert barycenter_discrepancy(2, 0, 1)["is_vertex"] is True


# --- subdivisions ------------------------------------------------------------------------------


@pytest.mark.parametrize("N,l,count", [(3, 0, 6), (3, 1, 2), (2, 0, 2), (2, 1, 1), (2, 2, 2), (4, 2, 4), (1, 0, 1)])
def test_cell_counts(N, l, count):
    assert len(bibary_subdivision(N, l)) == count


@pytest.mark.parametrize("N", [1, 2, 3, 4, 5])
def test_cell_volumes_sum_to_simplex_volume(N):
    full = Fraction(1, math.factorial(N - 1))
    for l in range(N + 1):
        cells = bibary_subdivision(N, l)
        vols = [c.volume for c in cells]
        assert vols == [simplex_volume_naive(c.vertices) for c in cells]
        assert all(v > 0 for v in vols)
        assert sum(vols) == full


@pytest.mark.parametrize("N", [2, 3, 4])
def test_cells_cover_with_disjoint_interiors(N):
    rng = random.Random(N)
    for l in range(N + 1):
        cells = bibary_subdivision(N, l)
        for _ in range(150):
            x = _random_simplex_point(rng, N)
            inside = [c for c in cells if c.contains(x)]
            assert inside
            interior = [c for c in cells if (beta := c.barycentric(x)) is not None and all(b > 0 for b in beta)]
            assert len(interior) <= 1
            for c in inside:
                beta = c.barycentric(x)
                assert all(b >= 0 for b in beta) and sum(beta) == 1


def test_subdivision_rejects_bad_type():
    with pytest.raises(HolonomyError):
        bibary_subdivision(3, 4)
    with pytest.raises(HolonomyError):
        bibary_subdivision(0, 0)


# --- piecewise maps ------------------------------------------------------------------------------


@pytest.mark.parametrize("N", [2, 3, 4])
def test_compose_surrogate_agrees_on_shared_faces(N):
    for S in _subsets(N):
        assert hol_surrogate(N, S, "compose").well_defined


def test_inverse_convention_mismatch_is_reported():
    assert not hol_surrogate(3, (0, 1, 2), "inverse").well_defined
    assert hol_surrogate(3, (0, 1), "inverse").well_defined
    with pytest.raises(HolonomyError):
        hol_surrogate(3, (0,), "other")


@pytest.mark.parametrize("N", [2, 3, 4])
def test_H0_interpolates_corner_images(N):
    for S in _subsets(N):
        b0 = base_bipermutation(N, S)
        corners = [lambda_bar(N, i) for i in b0.sigma + b0.tau]
        H0 = build_H(N, S)
        for i in range(N):
            e = tuple(Fraction(int(a == i)) for a in range(N))
            assert H0(e, project=False) == corners[i]


@pytest.mark.parametrize("N", [2, 3])
def test_Ht_endpoints(N):
    for S in _subsets(N):
        H0 = build_H(N, S)
        assert build_H(N, S, "Ht", Fraction(0)).images == H0.images
        assert build_H(N, S, "Ht", Fraction(1)).images == hol_surrogate(N, S).images


def test_Ht_projects_into_fundamental_domain():
    rng = random.Random(4)
    m = build_H(3, (0,), "Ht", Fraction(1, 3))
    for _ in range(50):
        y = m(_random_simplex_point(rng, 3))
        assert in_domain(y)
        assert reduce_to_fundamental_domain(y).point == y


def test_build_H_rejects_bad_input():
    with pytest.raises(HolonomyError):
        build_H(3, (0,), mode="bogus")
    with pytest.raises(HolonomyError):
        base_bipermutation(3, (5,))


def test_point_outside_simplex_rejected():
    with pytest.raises(HolonomyError):
        build_H(2, (0,))((Fraction(2), Fraction(-1)))


# --- degrees ---------------------------------------------------------------------------------------


@pytest.mark.parametrize("N", [1, 2, 3, 4])
def test_H0_has_degree_one(N):
    for S in _subsets(N):
        try:
            H0 = build_H(N, S)
        except HolonomyError:
            continue
        rep = degree_mod2(H0)
        assert rep.degree == 1
        assert len(rep.covering_cells) == 1 and not rep.degenerate_cells


@pytest.mark.parametrize("N", [2, 3])
def test_Ht_degree_samples(N):
    for S in _subsets(N):
        for t in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1)):
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", RuntimeWarning)
                rep = degree_mod2(build_H(N, S, "Ht", t))
            if not rep.degenerate_cells:
                assert rep.degree == 1


def test_collapse_map_has_degree_zero():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        rep = degree_mod2(collapse_map(3, 0, (0, 1)))
    assert rep.degree == 0
    assert len(rep.degenerate_cells) == 6
    assert any(issubclass(w.category, RuntimeWarning) for w in caught)


def test_target_on_a_wall_is_perturbed():
    H0 = build_H(2, (0, 1))
    # the image of the middle subdivision vertex
    wall = H0((Fraction(1, 2), Fraction(1, 2)), project=False)
    rep = degree_mod2(H0, wall)
    assert rep.perturbations >= 1 and rep.degree == 1


def test_default_target_is_interior():
    for N in range(2, 7):
        r = r_coords(default_target(N))
        assert all(x > 0 for x in r) and len(set(r)) == N


def test_target_must_have_zero_sum():
    with pytest.raises(HolonomyError):
        degree_mod2(build_H(2, (0,)), (Fraction(1), Fraction(0)))

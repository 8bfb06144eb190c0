import random
from fractions import Fraction
from itertools import permutations, product

import pytest
from hypothesis import given, strategies as st

from surgerygon.weightlattice import (
    LensFlatConnection,
    TorusFlatConnection,
    WeightVector,
    apply_affine_weyl,
    brute_force_reduce,
    format_rational,
    from_r_coords,
    h0_lens,
    h0_s1s2,
    in_domain,
    lambda_bar,
    lambda_vec,
    normalize,
    parse_rational,
    r_coords,
    reduce_to_fundamental_domain,
)

from oracles import r_naive, reduce_bruteforce


def _random_zero_sum(rng, N, span=2, max_den=6):
    """Every entry in [-span, span], so shifts with |k| <= span + 1 reach the simplex."""
    while True:
        den = rng.randint(1, max_den)
        v = [Fraction(rng.randint(-span * den, span * den), den) for _ in range(N - 1)]
        if abs(sum(v)) <= span:
            return tuple(v + [-sum(v)])


@st.composite
def zero_sum_vectors(draw, min_N=2, max_N=5):
    N = draw(st.integers(min_N, max_N))
    head = draw(st.lists(st.fractions(-4, 4, max_denominator=12), min_size=N - 1, max_size=N - 1))
    return tuple(head) + (-sum(head, Fraction(0)),)


# --- basics ----------------------------------------------------------------------------


def test_rational_formatting():
    assert format_rational(Fraction(-3, 6)) == "-1/2"
    assert format_rational(Fraction(4)) == "4"
    assert parse_rational(" 7/21 ") == Fraction(1, 3)


def test_weight_vector_zero_sum():
    assert WeightVector((Fraction(1, 2), Fraction(-1, 2))).N == 2
    with pytest.raises(ValueError):
        WeightVector((1, 0))


def test_normalize():
    assert normalize((0, 0, 0)) == (0, 0, 0)
    assert normalize(lambda_vec(2, 1)) == (Fraction(-1, 2), Fraction(1, 2))


@pytest.mark.parametrize("N", range(2, 7))
def test_lambda_bar_closed_form(N):
    for i in range(N + 1):
        lb = lambda_bar(N, i)
        j = i % N
        want = tuple(Fraction(-j, N) if a < N - j else Fraction(N - j, N) for a in range(N))
        assert lb == want


@pytest.mark.parametrize("N", range(2, 7))
def test_lambda_bar_is_simplex_vertex(N):
    for i in range(N):
        r = r_coords(lambda_bar(N, i))
        e = [0] * N
        e[N - i - 1] = 1
        assert list(r) == e
        red = reduce_to_fundamental_domain(lambda_bar(N, i))
        assert red.point == lambda_bar(N, i)
        assert red.tau == tuple(range(N)) and red.k == (0,) * N


@given(zero_sum_vectors())
def test_r_coords_match_naive_and_invert(t):
    r = r_coords(t)
    assert list(r) == r_naive(list(t))
    assert sum(r) == 1
    assert from_r_coords(r) == t


def test_from_r_coords_needs_unit_sum():
    with pytest.raises(ValueError):
        from_r_coords((1, 1))


# --- reduction -------------------------------------------------------------------------


def test_zero_reduces_to_itself():
    red = reduce_to_fundamental_domain((0, 0, 0))
    assert red.point == (0, 0, 0) and red.tau == (0, 1, 2) and red.k == (0, 0, 0)


def test_reduction_agrees_with_bruteforce_oracle_1000_vectors():
    rng = random.Random(31337)
    for trial in range(1000):
        N = (2, 3, 4)[trial % 3]
        t = _random_zero_sum(rng, N)
        red = reduce_to_fundamental_domain(t)
        oracle = reduce_bruteforce(list(t), bound=3)
        assert oracle == {red.point}, (t, red, oracle)


def test_library_bruteforce_agrees_with_reduction():
    rng = random.Random(99)
    for _ in range(100):
        t = _random_zero_sum(rng, rng.choice((2, 3, 4)))
        red = reduce_to_fundamental_domain(t)
        assert {r.point for r in brute_force_reduce(t, 3)} == {red.point}


@given(zero_sum_vectors())
def test_reduction_is_idempotent_and_in_domain(t):
    red = reduce_to_fundamental_domain(t)
    assert all(x >= 0 for x in r_coords(red.point))
    assert sum(red.k) == 0
    assert apply_affine_weyl(t, red.tau, red.k) == red.point
    again = reduce_to_fundamental_domain(red.point)
    assert again.point == red.point
    assert again.k == (0,) * len(t) and again.tau == tuple(range(len(t)))


def test_reduction_rejects_nonzero_sum():
    with pytest.raises(ValueError):
        reduce_to_fundamental_domain((1, 1))


@pytest.mark.parametrize("N", [2, 3])
def test_no_two_domain_points_are_related(N):
    # lattice sample of the simplex: r with denominators 6
    den = 6
    pts = []

    def comps(total, parts):
        if parts == 1:
            yield (total,)
            return
        for a in range(total + 1):
            for rest in comps(total - a, parts - 1):
                yield (a,) + rest

    for c in comps(den, N):
        pts.append(from_r_coords([Fraction(x, den) for x in c]))
    shifts = [k for k in product(range(-2, 3), repeat=N) if sum(k) == 0]
    for t in pts:
        for tau in permutations(range(N)):
            for k in shifts:
                s = apply_affine_weyl(t, tau, k)
                if in_domain(s):
                    assert s == t


# --- h0 -------------------------------------------------------------------------------------


@pytest.mark.parametrize("N", range(2, 8))
def test_h0_lens_distinct_and_trivial(N):
    assert h0_lens(LensFlatConnection(N, tuple(range(N)))) == N - 1
    assert h0_lens(LensFlatConnection(N, (0,) * N)) == N * N - 1


def test_h0_lens_mixed():
    assert h0_lens(LensFlatConnection(4, (1, 1, 2))) == 4


@given(st.integers(1, 7), st.lists(st.integers(-20, 20), min_size=1, max_size=6), st.randoms(use_true_random=False),
       st.integers(-3, 3))
def test_h0_lens_invariances(p, exps, rnd, m):
    base = h0_lens(LensFlatConnection(p, tuple(exps)))
    shuffled = list(exps)
    rnd.shuffle(shuffled)
    assert h0_lens(LensFlatConnection(p, tuple(shuffled))) == base
    assert h0_lens(LensFlatConnection(p, tuple(e + m * p for e in exps))) == base


@pytest.mark.parametrize("N", range(2, 7))
def test_h0_s1s2_cases(N):
    interior = from_r_coords([Fraction(1, N)] * N)
    assert h0_s1s2(TorusFlatConnection(WeightVector(interior))) == N - 1
    assert h0_s1s2((0,) * N) == N * N - 1
    if N >= 3:
        r = [Fraction(0)] + [Fraction(1, N - 1)] * (N - 1)
        face = from_r_coords(r)
        assert h0_s1s2(WeightVector(face)) == N - 1 + 2


def test_h0_s1s2_wraparound_coincidence():
    # r_N = 0 means t_1 and t_N differ by exactly one
    t = from_r_coords([Fraction(1, 2), Fraction(1, 2), 0])
    assert h0_s1s2(t) == 4


def test_torus_connection_must_be_in_domain():
    with pytest.raises(ValueError):
        TorusFlatConnection(WeightVector((Fraction(1), Fraction(-1))))

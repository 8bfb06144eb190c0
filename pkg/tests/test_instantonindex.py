from fractions import Fraction
from itertools import combinations, combinations_with_replacement, permutations, product

import pytest
from hypothesis import given, settings, strategies as st

from surgerygon._accel import NUMBA_AVAILABLE
from surgerygon.instantonindex import (
    REFERENCE_TABLES,
    BiPermutation,
    ChargeEnsemble,
    SearchError,
    act_bipermutation,
    bipermutation_cycle,
    check_examples,
    compose_perm,
    energy,
    gamma_cycle,
    index_X,
    index_Xbar,
    intersection_form,
    is_admissible_cycle,
    is_minimal,
    nice_decomposition_search,
    orbit,
    pair_sums,
    regenerate,
    rho_plus_h0,
    sharp_decomposition,
)
from surgerygon.weightlattice import LensFlatConnection, h0_lens

from oracles import energy_naive, h0_lens_naive, index_naive, minimal_naive


@st.composite
def ensembles(draw, max_N=4, max_k=4, lo=-2, hi=2):
    N = draw(st.integers(1, max_N))
    k = draw(st.integers(1, max_k))
    vec = st.tuples(*[st.integers(lo, hi)] * N)
    return tuple(draw(st.lists(vec, min_size=k, max_size=k)))


# --- spot values -----------------------------------------------------------------------


def test_energy_spot_values():
    assert energy(((0, 0), (0, 1))) == Fraction(1, 8)
    assert energy(((0, 0, 1), (0, 1, 0), (1, 0, 1))) == Fraction(8, 9)
    assert energy(((1, 2, 3),) * 4) == 0


def test_index_spot_values():
    assert index_Xbar(((0, 0, 0, 0),) * 3) == -8
    assert index_Xbar(((0, 0, 0, 1), (0, 0, 1, 0), (0, 0, -1, -1))) == 8
    assert index_X(((0, 0, 0, 0),) * 3, 3) == -11


@settings(max_examples=300)
@given(ensembles())
def test_formulas_match_naive_oracles(E):
    assert energy(E) == energy_naive(E)
    assert index_Xbar(E) == index_naive(E)
    assert is_minimal(E) == minimal_naive(E)


def test_shared_pair_sum_enters_both_formulas():
    E = ((0, 1, 2), (1, 1, 0), (-1, 0, 0))
    s = pair_sums(E)
    N, k = 3, 3
    assert energy(E) * 4 * k == s["sq"] - Fraction(s["sq_bracket"], N)
    assert index_Xbar(E) == s["sq"] - s["abs_bracket"] - h0_lens(LensFlatConnection(N, (3, 2, -1)))


@settings(max_examples=200)
@given(ensembles(), st.randoms(use_true_random=False), st.integers(-3, 3))
def test_energy_and_index_invariances(E, rnd, m):
    shuffled = list(E)
    rnd.shuffle(shuffled)
    shifted = [tuple(x + m for x in v) for v in E]
    for F in (shuffled, shifted):
        assert energy(F) == energy(E)
        assert index_Xbar(F) == index_Xbar(E)


def test_ensemble_validation():
    with pytest.raises(ValueError):
        ChargeEnsemble(())
    with pytest.raises(ValueError):
        ChargeEnsemble(((0, 1), (0, 1, 2)))


# --- minimality law -----------------------------------------------------------------------


def test_minimality_law_exhaustive():
    checked = 0
    for N in (1, 2, 3):
        vecs = list(product((-1, 0, 1, 2), repeat=N))
        for k in (1, 2, 3):
            # both sides are symmetric in the vectors, so multisets suffice
            for E in combinations_with_replacement(vecs, k):
                floor = -h0_lens_naive([sum(v) for v in E], N)
                ind = index_Xbar(E)
                assert ind >= floor
                assert (ind == floor) == minimal_naive(E), E
                checked += 1
    assert checked > 45000


def test_minimal_examples():
    assert is_minimal(sharp_decomposition((0, 1, 2, 3), 4, 4).vectors)
    assert not is_minimal(((0, 0), (2, 0)))
    assert is_minimal(((1, -1, 0),) * 3)


# --- sharp decompositions -------------------------------------------------------------------


def test_sharp_zero_and_staircase():
    assert sharp_decomposition((0, 0, 0), 3, 2).vectors == ((0, 0, 0), (0, 0, 0))
    N = 4
    st_ = sharp_decomposition(tuple(range(N)), N, N).vectors
    assert st_ == ((0, 1, 1, 1), (0, 0, 1, 1), (0, 0, 0, 1), (0, 0, 0, 0))


@pytest.mark.parametrize("N,k", [(2, 2), (2, 3), (3, 2), (3, 3), (4, 3)])
def test_sharp_decomposition_properties(N, k):
    for s in product(range(k), repeat=N):
        E = sharp_decomposition(s, N, k)
        assert E.total() == s
        for l, v in enumerate(E.vectors, start=1):
            assert sum(v) == sum(1 for x in s if x >= l)
        assert index_Xbar(E) == -h0_lens(LensFlatConnection(N, E.brackets()))
        # every sub-ensemble is minimal too
        for m in range(1, k + 1):
            for idx in combinations(range(k), m):
                sub = [E.vectors[i] for i in idx]
                assert index_Xbar(sub) == -h0_lens_naive([sum(v) for v in sub], N)


def test_sharp_range_checked():
    with pytest.raises(ValueError):
        sharp_decomposition((0, 3), 2, 3)
    with pytest.raises(ValueError):
        sharp_decomposition((0, 1), 3, 2)


# --- bi-permutations -----------------------------------------------------------------------------


def _injections(N, size):
    return permutations(range(N), size)


def test_identity_cycle_is_admissible():
    for N in range(1, 6):
        b = BiPermutation(N, tuple(range(N)), ())
        assert bipermutation_cycle(b) == tuple(range(N))
        assert is_admissible_cycle(bipermutation_cycle(b), N)


@pytest.mark.parametrize("N", [1, 2, 3, 4])
def test_admissible_iff_images_disjoint(N):
    for l in range(N + 1):
        for sg in _injections(N, N - l):
            for tu in _injections(N, l):
                b = BiPermutation(N, sg, tu, check=False)
                disjoint = not (set(sg) & set(tu))
                assert is_admissible_cycle(bipermutation_cycle(b), N) == disjoint


def test_bipermutation_validation():
    with pytest.raises(ValueError):
        BiPermutation(3, (0, 1), (1,))
    with pytest.raises(ValueError):
        BiPermutation(3, (0, 0), (1,))
    with pytest.raises(ValueError):
        BiPermutation(3, (0,), (1,))


@pytest.mark.parametrize("N", [1, 2, 3, 4])
def test_action_composition_law(N):
    for l in range(N + 1):
        b = BiPermutation(N, tuple(range(N - l)), tuple(range(N - l, N)))
        Sf = list(permutations(range(N - l)))
        Sg = list(permutations(range(l)))
        for f1, f2 in product(Sf, Sf):
            for g1, g2 in product(Sg, Sg):
                lhs = act_bipermutation(act_bipermutation(b, f1, g1), f2, g2)
                rhs = act_bipermutation(b, compose_perm(f2, f1), compose_perm(g2, g1))
                assert lhs == rhs
        ident = act_bipermutation(b, tuple(range(N - l)), tuple(range(l)))
        assert ident == b


@pytest.mark.parametrize("N", [2, 3, 4])
def test_action_transitive_and_faithful(N):
    from math import factorial

    for l in range(N + 1):
        for A in combinations(range(N), N - l):
            rest = tuple(x for x in range(N) if x not in A)
            b = BiPermutation(N, A, rest)
            orb = orbit(b)
            # faithful: distinct group elements give distinct results
            assert len(set(orb)) == len(orb) == factorial(N - l) * factorial(l)
            # transitive: every bi-permutation with the same images is reached
            same = {BiPermutation(N, sg, tu) for sg in permutations(A) for tu in permutations(rest)}
            assert set(orb) == same


def test_action_rejects_wrong_sizes():
    b = BiPermutation(3, (0, 1), (2,))
    with pytest.raises(ValueError):
        act_bipermutation(b, (0,), (0,))


# --- intersection form, cycles, rho -----------------------------------------------------------------


def test_intersection_form_two():
    assert intersection_form(2) == [[Fraction(-1, 2), Fraction(1, 2)], [Fraction(1, 2), Fraction(-1, 2)]]


@pytest.mark.parametrize("N", range(1, 11))
def test_intersection_form_entries(N):
    Q = intersection_form(N)
    for i in range(N):
        for j in range(N):
            assert Q[i][j] == Fraction(1, N) - (i == j)
        # e_1 + ... + e_N pairs to zero with everything
        assert sum(Q[a][i] for a in range(N)) == 0


def test_gamma_cycle():
    assert gamma_cycle([], 3, 1) == (3, 0, 1)
    for N in range(1, 8):
        assert gamma_cycle(range(N), 0, N)[1] == N * (N - 1) // 2
    with pytest.raises(ValueError):
        gamma_cycle([-1], 0, 0)


def test_rho_plus_h0():
    assert rho_plus_h0(0, 3) == 2
    assert rho_plus_h0(3, 3) == 2 - 12 + 12
    assert rho_plus_h0(-1, 2) == 2 - 4 + 2
    with pytest.raises(ValueError):
        rho_plus_h0(4, 3)


# --- decomposition search ------------------------------------------------------------------------


def test_search_zero():
    row = nice_decomposition_search((0, 0, 0), (0, 0))
    assert row.kappa == 0 and row.shift == 0
    assert row.ensemble.vectors == ((0, 0, 0), (0, 0, 0))


def test_search_errors():
    with pytest.raises(SearchError):
        nice_decomposition_search((0, 1), (0, 0))
    with pytest.raises(SearchError):
        nice_decomposition_search((0, 0), (0, 0), k=3)
    with pytest.raises(SearchError):
        nice_decomposition_search((9, -9, 0), (0, 0), window=0)


def _brute_min_energy(v, s, window):
    N = len(v)
    best = None
    cands = [c for c in product(range(-window, window + 1), repeat=N)]
    for ws in product(*[[c for c in cands if (sum(c) - si) % N == 0] for si in s]):
        tot = [sum(col) for col in zip(*ws)]
        diff = [a - b for a, b in zip(tot, v)]
        if len(set(diff)) != 1:
            continue
        e = energy_naive(ws)
        best = e if best is None or e < best else best
    return best


@pytest.mark.parametrize("v,s", [((0, 0), (1, 1)), ((0, 1), (0, 1)), ((1, 0), (1, 0)), ((0, 0, 1), (0, 1)),
                                 ((0, 1, 2), (1, 2)), ((0, 0), (0, 1, 1))])
def test_search_minimum_matches_brute_force(v, s):
    row = nice_decomposition_search(v, s, window=2)
    assert row.kappa == _brute_min_energy(v, s, 2)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 3), st.data())
def test_search_output_is_valid(N, data):
    k = data.draw(st.integers(1, 3))
    v = tuple(data.draw(st.lists(st.integers(-1, 2), min_size=N, max_size=N)))
    s = list(data.draw(st.lists(st.integers(0, N - 1), min_size=k - 1, max_size=k - 1)))
    s.append((sum(v) - sum(s)) % N)
    row = nice_decomposition_search(v, s)
    ws = row.ensemble.vectors
    assert tuple(sum(col) for col in zip(*ws)) == tuple(x + row.shift for x in v)
    assert all((sum(w) - si) % N == 0 for w, si in zip(ws, s))
    for si in set(s):
        group = [w for w, t in zip(ws, s) if t == si]
        assert group == sorted(group)
    assert nice_decomposition_search(v, s) == row


# --- tables -----------------------------------------------------------------------------------------


def test_reference_examples_are_self_consistent():
    assert all(ok for _, _, ok in check_examples())


def test_reference_table_shapes():
    assert [t.number for t in REFERENCE_TABLES] == [1, 2, 3, 4, 5, 6, 7]
    assert sum(len(t.rows) for t in REFERENCE_TABLES) == 44


def test_tables_regenerate_exactly():
    results, seconds = regenerate(window=2)
    bad = [(r.table, r.reference.v, r.reference.s) for r in results if not r.ok]
    assert not bad
    assert len(results) == 44
    assert seconds < 60


@pytest.mark.slow
def test_wider_window_does_not_improve_any_row():
    narrow, _ = regenerate(window=2)
    wide, _ = regenerate(window=3)
    for a, b in zip(narrow, wide):
        assert b.found.kappa == a.found.kappa
        assert b.found.ind_plus_h0 == a.found.ind_plus_h0


@pytest.mark.skipif(not NUMBA_AVAILABLE, reason="numba not installed")
def test_compiled_and_numpy_searches_agree():
    fast, _ = regenerate(window=2, accelerate=True)
    slow, _ = regenerate(window=2, accelerate=False)
    for a, b in zip(fast, slow):
        assert a.found == b.found

import random

import pytest
from hypothesis import given, settings, strategies as st

from surgerygon.f2chain import (
    ChainComplexF2,
    ChainMapF2,
    F2Error,
    FilteredComplexF2,
    MatrixF2,
    associated_graded_homology,
    cone,
    homology,
    is_quasi_iso,
    layout,
    random_chain_map,
    random_complex,
    spectral_sequence,
)

from oracles import dense, homology_dims, induced_rank2, matmul2, rank2


def _nz(h):
    return {q: v for q, v in h.items() if v}


def _dense_diffs(C):
    return {q: dense(C.d(q)) for q in C.degrees()}


def _oracle_homology(C):
    return homology_dims({q: C.dim(q) for q in C.degrees()}, _dense_diffs(C))


def _f_star_rank(f, q):
    S, T = f.source, f.target
    return induced_rank2(dense(f.block(q)), dense(S.d(q)), dense(S.d(q + 1)), dense(T.d(q + 1)), S.dim(q), T.dim(q))


# --- matrices ------------------------------------------------------------------------


@given(st.integers(0, 7), st.integers(0, 7), st.randoms(use_true_random=False))
def test_rank_matches_naive_elimination(nr, nc, rnd):
    M = MatrixF2(nr, nc, tuple(rnd.getrandbits(nc) if nc else 0 for _ in range(nr)))
    assert M.rank() == rank2(dense(M))
    assert M.rank() <= min(nr, nc)


@given(st.integers(1, 6), st.integers(1, 6), st.integers(1, 6), st.randoms(use_true_random=False))
def test_matmul_matches_naive(a, b, c, rnd):
    A = MatrixF2(a, b, tuple(rnd.getrandbits(b) for _ in range(a)))
    B = MatrixF2(b, c, tuple(rnd.getrandbits(c) for _ in range(b)))
    assert dense(A @ B) == matmul2(dense(A), dense(B))


def test_string_round_trip():
    M = MatrixF2.from_strings(["0110", "1001"])
    assert M.to_strings() == ["0110", "1001"]
    assert M[0, 1] == 1 and M[1, 1] == 0


# --- complexes and homology ---------------------------------------------------------


def test_zero_complex_has_no_homology():
    assert _nz(homology(ChainComplexF2.zero())) == {}
    assert ChainComplexF2.zero().is_acyclic()


def test_identity_two_term_complex_is_acyclic():
    C = ChainComplexF2({0: 1, 1: 1}, {1: MatrixF2.identity(1)})
    assert _nz(homology(C)) == {}


def test_d_squared_nonzero_rejected():
    one = MatrixF2.identity(1)
    with pytest.raises(F2Error):
        ChainComplexF2({0: 1, 1: 1, 2: 1}, {1: one, 2: one})


def test_shape_mismatch_rejected():
    with pytest.raises(F2Error):
        ChainComplexF2({0: 2, 1: 1}, {1: MatrixF2.identity(1)})


def test_homology_matches_rank_nullity_oracle_on_1000_complexes():
    rng = random.Random(20240)
    for _ in range(1000):
        C = random_complex(rng, max_dim=8, degrees=(0, 1, 2))
        assert _nz(homology(C)) == _oracle_homology(C)


def test_mod2_complex_homology():
    C = ChainComplexF2({0: 1, 1: 1}, {1: MatrixF2.identity(1), 0: MatrixF2.zeros(1, 1)}, "mod2")
    assert C.is_acyclic()
    U = ChainComplexF2.ungraded(MatrixF2.from_strings(["01", "00"], 2))
    assert _nz(U.homology()) == {}
    U = ChainComplexF2.ungraded(MatrixF2.from_strings(["001", "000", "000"], 3))
    assert U.homology() == {0: 1, 1: 1}


def test_json_round_trip_complex():
    rng = random.Random(3)
    C = random_complex(rng, 4)
    C2 = ChainComplexF2.from_json(C.to_json())
    assert C2.dims == C.dims
    assert {q: m.rows for q, m in C2.diffs.items()} == {q: m.rows for q, m in C.diffs.items()}


# --- cones and quasi-isomorphisms -----------------------------------------------------------


def test_cone_of_identity_is_acyclic():
    C = random_complex(random.Random(5), 4)
    assert cone(ChainMapF2.identity(C)).is_acyclic()
    assert is_quasi_iso(ChainMapF2.identity(C))


def test_cone_of_zero_map_is_direct_sum():
    rng = random.Random(11)
    A, B = random_complex(rng, 4), random_complex(rng, 4)
    H = _nz(homology(cone(ChainMapF2.zero(A, B))))
    HA, HB = _oracle_homology(A), _oracle_homology(B)
    want = {}
    for q, v in HB.items():
        want[q] = want.get(q, 0) + v
    for q, v in HA.items():
        want[q + 1] = want.get(q + 1, 0) + v
    assert H == {q: v for q, v in want.items() if v}


def test_zero_map_between_nonzero_homology_is_not_quasi_iso():
    C = ChainComplexF2({0: 1})
    assert not is_quasi_iso(ChainMapF2.zero(C, C))


def test_non_chain_map_rejected():
    C = ChainComplexF2({0: 1, 1: 1}, {1: MatrixF2.identity(1)})
    D = ChainComplexF2({0: 1, 1: 1})
    f = ChainMapF2(C, D, {0: MatrixF2.identity(1)})
    assert not f.is_chain_map()
    with pytest.raises(F2Error):
        cone(f)


def test_cone_homology_follows_long_exact_sequence():
    rng = random.Random(77)
    for _ in range(300):
        A = random_complex(rng, 8, (0, 1, 2))
        B = random_complex(rng, 8, (0, 1, 2))
        f = random_chain_map(rng, A, B)
        H = homology(cone(f))
        HA, HB = _oracle_homology(A), _oracle_homology(B)
        for q in range(0, 4):
            coker = HB.get(q, 0) - (_f_star_rank(f, q) if q <= 2 else 0)
            ker = HA.get(q - 1, 0) - (_f_star_rank(f, q - 1) if 0 <= q - 1 <= 2 else 0)
            assert H.get(q, 0) == coker + ker
        assert (sum(H.values()) == 0) == is_quasi_iso(f)


@settings(max_examples=60, deadline=None)
@given(st.randoms(use_true_random=False))
def test_cone_squares_to_zero(rnd):
    A = random_complex(rnd, 5)
    B = random_complex(rnd, 5)
    Cn = cone(random_chain_map(rnd, A, B))
    D = Cn.total_differential()
    assert (D @ D).is_zero()


# --- spectral sequences -------------------------------------------------------------------


def test_trivial_filtration_first_page_is_homology():
    C = random_complex(random.Random(8), 5)
    n = C.total_dim
    F = FilteredComplexF2.from_blocks(C, [range(n)])
    pages = spectral_sequence(F, 3)
    H = homology(C)
    for page in pages:
        assert {q: v for (p, q), v in page.terms.items() if v} == _nz(H)


def test_two_step_cone_filtration_reproduces_connecting_rank():
    rng = random.Random(99)
    for _ in range(100):
        A, B = random_complex(rng, 5), random_complex(rng, 5)
        f = random_chain_map(rng, A, B)
        Cn = cone(f)
        _, (ib, ia) = layout([(B, 0), (A, 1)])
        F = FilteredComplexF2.from_blocks(Cn, [range(Cn.total_dim), ib])
        E1, E2 = spectral_sequence(F, 2)
        HA, HB = _oracle_homology(A), _oracle_homology(B)
        for q in range(0, 4):
            assert E1.terms.get((0, q), 0) == HA.get(q - 1, 0)
            assert E1.terms.get((1, q), 0) == HB.get(q, 0)
            want = _f_star_rank(f, q - 1) if 0 <= q - 1 <= 2 else 0
            assert E1.rank((0, q)) == want
        # the sequence has degenerated by the second page
        assert E2.total() == sum(homology(Cn).values())
        assert {k: v for k, v in E2.terms.items() if v} == {
            k: v for k, v in associated_graded_homology(F).items() if v}


@settings(max_examples=40, deadline=None)
@given(st.randoms(use_true_random=False))
def test_pages_shrink_and_converge(rnd):
    C = random_complex(rnd, 4, (0, 1, 2, 3))
    # filtration by degree (the "stupid" filtration) is differential-closed
    off = C.offsets()
    degs = C.degrees()
    levels = []
    for p in range(len(degs) + 1):
        keep = [c for q in degs[:len(degs) - p] for c in range(off[q], off[q] + C.dim(q))]
        levels.append(keep)
    F = FilteredComplexF2.from_blocks(C, levels)
    pages = spectral_sequence(F, len(degs) + 2)
    totals = [pg.total() for pg in pages]
    assert all(a >= b for a, b in zip(totals, totals[1:]))
    assert totals[-1] == sum(homology(C).values())
    for pg, nxt in zip(pages, pages[1:]):
        ranks = sum(m.rank() for m in pg.differentials.values())
        assert nxt.total() == pg.total() - 2 * ranks


def test_filtration_must_be_closed():
    C = ChainComplexF2({0: 1, 1: 1}, {1: MatrixF2.identity(1)})
    # the degree-1 generator alone is not a subcomplex
    with pytest.raises(F2Error):
        FilteredComplexF2.from_blocks(C, [range(2), [1]])

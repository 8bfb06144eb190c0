"""Shared assertions for exact polygons, used by the module and acceptance suites."""

from surgerygon.exactpolygon import euler_check, polygon_spectral_sequence, side_complex, total_complex, verify_ngon
from surgerygon.f2chain import homology, is_quasi_iso

from oracles import dense, rank2


def corner_homology(C):
    return sum(homology(C).values())


def ungraded_homology(D):
    return D.nrows - 2 * rank2(dense(D))


def assert_polygon_properties(G):
    """Everything an accepted polygon must satisfy."""
    assert verify_ngon(G).ok
    tc = total_complex(G)
    assert ungraded_homology(tc.D) == 0
    assert tc.nilpotent_defect.is_nilpotent()
    for i in range(G.n):
        sc = side_complex(G, i)
        assert all(sc.checks().values()), sc.checks()
        assert is_quasi_iso(sc.map_F()) and is_quasi_iso(sc.map_G())
        assert ungraded_homology(sc.D) == corner_homology(G.C(i))
    ss = polygon_spectral_sequence(G)
    assert ss.first_page_matches
    assert ss.limit_total == 0 and ss.last_page_total == 0
    assert euler_check(G)

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hbforge.ideal import hilbert
from hbforge.poly import Field, PolyError
from hbforge.points import (
    PointSet,
    conic_screen,
    evaluation_rank,
    ideal_of_points,
    initial_degree_for,
    is_generic_subset,
    normalize_point,
    position_report,
    predicted_betti,
    predicted_regularity,
    random_points,
    uniform_check,
)
from hbforge.resolutions import BettiTable, minimal_resolution

F = Field()


def test_normalize_point():
    assert normalize_point((2, 4, 2), F) == (1, 2, 1)
    assert normalize_point((3, 0, 0), F) == (1, 0, 0)
    with pytest.raises(PolyError):
        normalize_point((0, 0, 0), F)


def test_pointset_rejects_duplicates_and_roundtrips():
    with pytest.raises(PolyError):
        PointSet(F, ((1, 2, 1), (2, 4, 2)))
    P = random_points(5, F, 3)
    assert PointSet.from_json(P.to_json()) == P


def test_capacity_guard():
    with pytest.raises(PolyError):
        random_points(10, Field(3), 0)


def test_initial_degree():
    assert initial_degree_for(6) == (3, 0)
    assert initial_degree_for(8) == (3, 2)
    assert initial_degree_for(18) == (5, 3)
    assert initial_degree_for(1) == (1, 0)


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 9), st.integers(0, 10 ** 6))
def test_ideal_of_points_vanishes_and_has_right_hilbert_function(n, seed):
    P = random_points(n, F, seed)
    I = ideal_of_points(P)
    for g in I.gens:
        for pt in P.points:
            assert g.evaluate(pt) == 0
    H = hilbert(I)
    assert H.multiplicity == n
    for t in range(6):
        assert H.hfun(t) == evaluation_rank(P.points, F, t)


def test_six_general_points():
    P = random_points(6, F, 1)
    I = ideal_of_points(P)
    rep = position_report(I, 6)
    assert (rep.s, rep.h) == (3, 0)
    assert rep.generic and rep.tight
    assert rep.reg == 3
    _, betti = minimal_resolution(I)
    assert betti.of_ideal() == predicted_betti(3, 0)


def test_uniform_check_finds_collinear_points():
    P = PointSet(F, ((0, 0, 1), (1, 0, 1), (5, 0, 1), (0, 1, 1), (1, 7, 1)))
    res = uniform_check(P)
    assert res["uniform"] is False
    wit = [P.points[i] for i in res["witness"]]
    assert len(wit) >= 3 and all(p[1] == 0 for p in wit)
    assert not is_generic_subset(wit, F)


def test_conic_screen():
    P = random_points(8, F, 0)
    assert conic_screen(P)["passed"]
    Q = PointSet(F, ((0, 0, 1), (1, 0, 1), (2, 0, 1), (0, 1, 1), (1, 3, 1), (4, 5, 1)))
    assert not conic_screen(Q)["passed"]


def test_predicted_tables():
    assert predicted_betti(3, 0) == BettiTable({(0, 3): 4, (1, 4): 3})
    assert predicted_betti(3, 2) == BettiTable({(0, 3): 2, (0, 4): 1, (1, 5): 2})
    assert predicted_regularity(3, 0) == 3
    assert predicted_regularity(3, 2) == 4


def test_report_json_shape():
    P = random_points(6, F, 1)
    data = position_report(ideal_of_points(P), 6).to_json()
    assert set(data) == {"n", "s", "h", "flags", "dims", "reg", "hilbert"}

"""Unit tests for the rational simplex and vertex enumeration."""

import random
from fractions import Fraction

import pytest

from cdcbranch.branching import psi
from cdcbranch.lp import (
    EQ,
    GE,
    LE,
    LpError,
    LpProblem,
    enumerate_vertices,
    facets_of_hull,
    lp_feasible,
    solve_lp,
    tight_rows,
)
from cdcbranch.numerics import dot, vec

F = Fraction


def test_single_variable_max():
    res = solve_lp(LpProblem(1, [1], [((1,), LE, 1)]))
    assert res.status == "optimal"
    assert res.value == 1
    assert res.x == (F(1),)


def test_simplex_face_max():
    # maximize the third weight over the unit simplex
    res = solve_lp(
        LpProblem(3, [0, 0, 1], [((1, 1, 1), EQ, 1)], bounds=[(0, None)] * 3)
    )
    assert res.status == "optimal"
    assert res.value == 1
    assert res.x == (F(0), F(0), F(1))


def test_parabola_hull_max_first_coordinate():
    rows = [(a, rel, rhs) for a, rel, rhs in psi(7, 1, 7).rows]
    res = solve_lp(LpProblem(2, [1, 0], rows))
    assert res.status == "optimal"
    assert res.value == 7
    assert res.x == (F(7), F(49))


def test_min_sense():
    rows = [((1,), GE, 3)]
    res = solve_lp(LpProblem(1, [1], rows, sense="min"))
    assert res.status == "optimal"
    assert res.value == 3


def test_infeasible():
    res = solve_lp(LpProblem(1, [1], [((1,), LE, 0), ((1,), GE, 1)]))
    assert res.status == "infeasible"


def test_unbounded():
    res = solve_lp(LpProblem(1, [1], [((1,), GE, 0)]))
    assert res.status == "unbounded"


def test_free_variable_with_negative_optimum():
    res = solve_lp(LpProblem(1, [1], [((1,), LE, -5)]))
    assert res.status == "optimal"
    assert res.value == -5


def test_bounds_handling():
    res = solve_lp(
        LpProblem(2, [1, 1], [((1, 1), LE, 10)], bounds=[(F(1), F(3)), (None, F(2))])
    )
    assert res.status == "optimal"
    assert res.value == 5
    assert res.x == (F(3), F(2))


def test_fixed_variable_bounds():
    res = solve_lp(LpProblem(1, [1], [], bounds=[(F(2), F(2))]))
    assert res.status == "optimal"
    assert res.value == 2


def test_degenerate_cycling_instance_terminates():
    # classic cycling instance; Bland's rule must reach the optimum
    rows = [
        ((F(1, 4), -60, F(-1, 25), 9), LE, 0),
        ((F(1, 2), -90, F(-1, 50), 3), LE, 0),
        ((0, 0, 1, 0), LE, 1),
    ]
    obj = [F(3, 4), -150, F(1, 50), -6]
    res = solve_lp(LpProblem(4, obj, rows, bounds=[(0, None)] * 4))
    assert res.status == "optimal"
    assert res.value == F(1, 20)


def test_rational_data_stays_exact():
    res = solve_lp(
        LpProblem(2, [F(1, 3), F(1, 7)], [((1, 1), LE, F(22, 7))], bounds=[(0, None)] * 2)
    )
    assert res.status == "optimal"
    assert res.value == F(22, 21)


def test_lp_feasible():
    assert lp_feasible(1, [((1,), LE, 1), ((1,), GE, 0)])
    assert not lp_feasible(1, [((1,), LE, 0), ((1,), GE, 1)])


def test_tight_rows():
    rows = [((1, 0), LE, 1), ((0, 1), LE, 1)]
    assert tight_rows(rows, vec((1, 0))) == [0]


def test_enumerate_vertices_simplex():
    verts = enumerate_vertices(
        3, [], eqs=[((1, 1, 1), 1)], bounds=[(0, None)] * 3
    )
    assert sorted(verts) == [
        (F(0), F(0), F(1)),
        (F(0), F(1), F(0)),
        (F(1), F(0), F(0)),
    ]


def test_enumerate_vertices_unit_square():
    verts = enumerate_vertices(2, [], bounds=[(0, 1), (0, 1)])
    assert len(verts) == 4
    assert set(verts) == {
        (F(0), F(0)),
        (F(0), F(1)),
        (F(1), F(0)),
        (F(1), F(1)),
    }


def test_enumerate_vertices_parabola_hull():
    Q = psi(4, 1, 4)
    verts = enumerate_vertices(2, Q.ineq_rows())
    assert sorted(verts) == [(F(1), F(1)), (F(2), F(4)), (F(3), F(9)), (F(4), F(16))]


def test_enumerate_vertices_empty_set():
    assert enumerate_vertices(1, [((1,), -1)], bounds=[(0, None)]) == []


def test_enumerate_vertices_unbounded_raises():
    with pytest.raises(LpError):
        enumerate_vertices(2, [((-1, 0), 0), ((0, -1), 0)])


def test_enumerate_vertices_equality_slice():
    # square sliced by x = y leaves a diagonal segment
    verts = enumerate_vertices(
        2, [], eqs=[((1, -1), 0)], bounds=[(0, 1), (0, 1)]
    )
    assert sorted(verts) == [(F(0), F(0)), (F(1), F(1))]


def test_enumerate_vertices_redundant_rows():
    verts = enumerate_vertices(
        1, [((1,), 1), ((2,), 2), ((1,), 3)], eqs=(), bounds=[(0, None)]
    )
    assert sorted(verts) == [(F(0),), (F(1),)]


def test_facets_of_triangle():
    pts = [(0, 0), (1, 0), (0, 1)]
    facets = facets_of_hull(pts)
    assert len(facets) == 3
    for a, rhs in facets:
        assert all(dot(a, vec(p)) <= rhs for p in pts)
        assert sum(1 for p in pts if dot(a, vec(p)) == rhs) == 2


def test_facets_of_square_interior_point_strict():
    pts = [(0, 0), (2, 0), (2, 2), (0, 2), (1, 1)]
    facets = facets_of_hull(pts)
    assert len(facets) == 4
    for a, rhs in facets:
        assert dot(a, vec((1, 1))) < rhs


def test_facets_need_full_dimension():
    with pytest.raises(LpError):
        facets_of_hull([(0, 0), (1, 1), (2, 2)])


def test_optimum_matches_vertex_enumeration_on_random_polytopes():
    rng = random.Random(20240817)
    for _ in range(20):
        n = 2
        ineqs = [((1, 0), F(3)), ((0, 1), F(3))]
        for _ in range(rng.randint(1, 3)):
            a = (rng.randint(-3, 3), rng.randint(-3, 3))
            if a == (0, 0):
                continue
            ineqs.append((a, F(rng.randint(0, 6))))
        bounds = [(F(0), None)] * n
        c = [rng.randint(-5, 5) for _ in range(n)]
        verts = enumerate_vertices(n, ineqs, bounds=bounds)
        rows = [(a, LE, rhs) for a, rhs in ineqs]
        res = solve_lp(LpProblem(n, c, rows, bounds=bounds))
        if not verts:
            assert res.status == "infeasible"
            continue
        assert res.status == "optimal"
        assert res.value == max(dot(vec(c), v) for v in verts)

"""Tests for code-space branching schemes."""

from fractions import Fraction as F

import pytest

from cdcbranch.branching import (
    BranchError,
    BranchOutcome,
    CodeRelaxation,
    ExoticScheme,
    MomentScheme,
    VariableScheme,
    branch_exotic,
    branch_moment,
    branch_variable,
    make_scheme,
    psi,
)
from cdcbranch.encodings import exotic_code, gray_code, moment_code, zigzag_code
from cdcbranch.lp import GE, LE, enumerate_vertices


def zz(*vals):
    return tuple(F(v) for v in vals)


def test_psi_membership():
    assert psi(7, 1, 7).contains(zz(2, 5))
    assert not psi(7, 3, 7).contains(zz(2, 5))
    assert psi(7, 1, 7).contains(zz(1, 1))
    assert psi(7, 1, 7).contains(zz(7, 49))
    assert not psi(7, 1, 7).contains(zz(0, 0))
    assert not psi(7, 1, 7).contains((F(4), F(25, 4)))


def test_psi_single_code():
    q = psi(5, 3, 3)
    assert q.contains(zz(3, 9))
    assert not q.contains(zz(3, 8))
    assert not q.contains(zz(2, 4))


def test_psi_adjacent_pair_is_segment():
    q = psi(7, 1, 2)
    verts = set(enumerate_vertices(2, q.ineq_rows()))
    assert verts == {zz(1, 1), zz(2, 4)}


def test_psi_vertices_are_codes():
    q = psi(7, 1, 7)
    verts = set(enumerate_vertices(2, q.ineq_rows()))
    assert verts == {zz(i, i * i) for i in range(1, 8)}


def test_psi_rejects_bad_interval():
    with pytest.raises(BranchError):
        psi(7, 5, 3)
    with pytest.raises(BranchError):
        psi(7, 0, 7)


def test_variable_split_on_fraction():
    enc = gray_code(2)
    sch = make_scheme("variable")
    root = sch.root(enc)
    out = sch.step(root, (F(1, 2), F(0)), enc)
    assert not out.verified and out.tag == "variable"
    (cuts1, q1), (cuts2, q2) = out.children
    assert cuts1 == [((1, 0), LE, 0)]
    assert cuts2 == [((1, 0), GE, 1)]
    assert not q1.contains((F(1, 2), F(0)))
    assert not q2.contains((F(1, 2), F(0)))


def test_variable_verifies_integral_point():
    enc = gray_code(2)
    sch = make_scheme("variable")
    out = sch.step(sch.root(enc), zz(1, 0), enc)
    assert out.verified


def test_variable_picks_lowest_fractional_index():
    enc = zigzag_code(3)
    sch = make_scheme("variable")
    out = sch.step(sch.root(enc), (F(3, 2), F(1, 2), F(0)), enc)
    (cuts1, _), _ = out.children
    assert cuts1[0][0] == (1, 0, 0)


def test_variable_rejects_outside_point():
    enc = gray_code(2)
    sch = make_scheme("variable")
    with pytest.raises(BranchError):
        sch.step(sch.root(enc), zz(5, 5), enc)


def test_moment_split_intervals():
    enc = moment_code(7)
    sch = make_scheme("moment")
    root = sch.root(enc)
    assert root.interval == (1, 7)
    out = sch.step(root, (F(7, 2), F(35, 2)), enc)
    assert out.tag == "moment"
    (_, left), (_, right) = out.children
    assert left.interval == (1, 3)
    assert right.interval == (4, 7)


def test_moment_split_at_integral_offcurve_point():
    # z1 integral but z2 above the curve: still a split, never verified
    enc = moment_code(7)
    sch = make_scheme("moment")
    out = sch.step(sch.root(enc), zz(4, 25), enc)
    assert not out.verified
    (_, left), (_, right) = out.children
    assert left.interval == (1, 4)
    assert right.interval == (5, 7)


def test_moment_verifies_code():
    enc = moment_code(7)
    sch = make_scheme("moment")
    out = sch.step(sch.root(enc), zz(2, 4), enc)
    assert out.verified


def test_moment_children_are_hulls():
    enc = moment_code(7)
    sch = make_scheme("moment")
    out = sch.step(sch.root(enc), (F(5, 2), F(7)), enc)
    for _, child in out.children:
        l, u = child.interval
        verts = set(enumerate_vertices(2, child.ineq_rows()))
        assert verts == {zz(i, i * i) for i in range(l, u + 1)}


def test_moment_needs_interval():
    bare = CodeRelaxation([((F(1), F(0)), GE, F(0))])
    with pytest.raises(BranchError):
        branch_moment(bare, 7, (F(3, 2), F(3)))


def test_exotic_case_fractional():
    enc = exotic_code(16)
    sch = make_scheme("exotic")
    out = sch.step(sch.root(enc), (F(1, 2), F(0)), enc)
    assert out.tag == "integer-split"
    (cuts1, _), (cuts2, _) = out.children
    assert cuts1 == [((1, 0), LE, 0)]
    assert cuts2 == [((1, 0), GE, 1)]


def test_exotic_case_between_levels():
    enc = exotic_code(16)
    sch = make_scheme("exotic")
    out = sch.step(sch.root(enc), zz(0, 3), enc)
    assert out.tag == "wide-split"
    (cuts1, _), (cuts2, _) = out.children
    assert cuts1 == [((0, 1), LE, 0)]
    assert cuts2 == [((0, 1), GE, 4)]


def test_exotic_case_inside_level():
    # level 4 runs from (-3, 4) to (4, 4); the cuts lean on (3, 7) and (-4, 0)
    enc = exotic_code(16)
    sch = make_scheme("exotic")
    out = sch.step(sch.root(enc), zz(0, 4), enc)
    assert out.tag == "corner-split"
    (cuts1, q1), (cuts2, q2) = out.children
    assert cuts1 == [((3, -6), LE, -33)]
    assert cuts2 == [((-4, 8), LE, 16)]
    assert not q1.contains(zz(0, 4)) and not q2.contains(zz(0, 4))
    # the level's two codes land in different children
    assert q1.contains(zz(-3, 4)) and not q2.contains(zz(-3, 4))
    assert q2.contains(zz(4, 4)) and not q1.contains(zz(4, 4))


def test_exotic_bottom_level_degenerate():
    enc = exotic_code(16)
    sch = make_scheme("exotic")
    out = sch.step(sch.root(enc), zz(0, -9), enc)
    assert out.tag == "corner-split"
    (cuts1, _), (cuts2, _) = out.children
    assert cuts1 == [((2, -3), LE, 25)]
    assert cuts2 == [((2, -3), GE, 29)]


def test_exotic_bottom_level_small():
    enc = exotic_code(8)
    sch = make_scheme("exotic")
    out = sch.step(sch.root(enc), zz(0, -2), enc)
    assert out.tag == "corner-split"
    (cuts1, _), (cuts2, _) = out.children
    assert cuts1 == [((2, -3), LE, 4)]
    assert cuts2 == [((2, -3), GE, 8)]


def test_exotic_verifies_code():
    enc = exotic_code(16)
    sch = make_scheme("exotic")
    out = sch.step(sch.root(enc), zz(-3, 4), enc)
    assert out.verified


def test_exotic_rejects_outside_point():
    enc = exotic_code(16)
    sch = make_scheme("exotic")
    with pytest.raises(BranchError):
        sch.step(sch.root(enc), zz(0, 100), enc)


def test_scheme_compatibility():
    var = VariableScheme()
    assert var.compatible(gray_code(3))[0]
    assert var.compatible(zigzag_code(3))[0]
    assert not var.compatible(moment_code(3))[0]
    assert not var.compatible(exotic_code(8))[0]

    mom = MomentScheme()
    assert mom.compatible(moment_code(5))[0]
    assert not mom.compatible(gray_code(2))[0]

    exo = ExoticScheme()
    assert exo.compatible(exotic_code(8))[0]
    assert not exo.compatible(moment_code(8))[0]
    assert not exo.compatible(gray_code(3))[0]


def test_make_scheme_unknown():
    with pytest.raises(BranchError):
        make_scheme("bisection")


def test_roots_contain_all_codes():
    cases = (
        (make_scheme("variable"), gray_code(3)),
        (make_scheme("variable"), zigzag_code(3)),
        (make_scheme("moment"), moment_code(7)),
        (make_scheme("exotic"), exotic_code(16)),
    )
    for sch, enc in cases:
        root = sch.root(enc)
        assert all(root.contains(h) for h in enc)


def test_outcome_constructors():
    v = BranchOutcome.verify()
    assert v.verified and v.children is None
    s = BranchOutcome.split("x", [1], None, [2], None)
    assert not s.verified and len(s.children) == 2


def test_relaxation_rejects_bad_relation():
    with pytest.raises(BranchError):
        CodeRelaxation([((F(1), F(0)), "<", F(0))])

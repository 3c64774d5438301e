import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from banach_cover.lp_function import MeasureGrid, StepFunction, normLp
from banach_cover.lp_space import DimensionMismatch, IndexMask, LpVector, norm
from banach_cover.projections import (
    Ball,
    Cylinder,
    Direction,
    Infeasible,
    KindMismatch,
    PositiveCone,
    classify_direction,
    membership,
    preimage_distance,
    project,
    project_ball,
    project_cone,
    project_cylinder,
    set_from_json,
    variational_check,
)

exponents = st.sampled_from([1.5, 2.0, 3.0])
vec4 = st.lists(st.floats(-20, 20, allow_nan=False), min_size=4, max_size=4)


def test_ball_examples():
    np.testing.assert_allclose(project_ball(LpVector(2, [3, 4]), 1).coords, [0.6, 0.8], rtol=1e-15)
    x = LpVector(2, [0.3, 0.4])
    assert project_ball(x, 1) is x
    got = project_ball(LpVector(3, [2, 2]), 1).coords
    # The image (c, c) lies on the unit sphere: 2 c^3 = 1.
    oracle = 0.5 ** (1 / 3)
    np.testing.assert_allclose(got, [oracle, oracle], rtol=1e-15)
    np.testing.assert_allclose(got, [0.793701, 0.793701], atol=1e-6)
    assert abs(got[0]) ** 3 + abs(got[1]) ** 3 == pytest.approx(1.0, rel=1e-15)


def test_cylinder_examples():
    M = IndexMask([1, 2])
    np.testing.assert_allclose(project_cylinder(LpVector(2, [3, 4, 7]), 1, M).coords, [0.6, 0.8, 7], rtol=1e-15)
    x = LpVector(2, [0.1, 0.2, 70])
    assert project_cylinder(x, 1, M) is x
    y = LpVector(3, [3, -4, 7])
    np.testing.assert_array_equal(project_cylinder(y, 1, IndexMask.full(3)).coords, project_ball(y, 1).coords)


def test_cone_examples():
    np.testing.assert_array_equal(project_cone(StepFunction([2, -3, 0], 2)).values, [2, 0, 0])
    assert not project_cone(StepFunction([-1, -2], 3)).values.any()
    with pytest.raises(DimensionMismatch):
        project_cone(StepFunction([1, 2], 2), MeasureGrid([1, 1, 1]))


def test_membership_examples_and_kind_errors():
    assert membership(Ball(1), LpVector(2, [0.6, 0.8]))
    assert membership(Cylinder(1, IndexMask([1])), LpVector(2, [0.5, 100]))
    assert not membership(PositiveCone(MeasureGrid([1, 1])), StepFunction([0, -1e-12], 2))
    with pytest.raises(KindMismatch):
        membership(Ball(1), StepFunction([1, 2], 2))
    with pytest.raises(KindMismatch):
        project(PositiveCone(MeasureGrid([1, 1])), LpVector(2, [1, 2]))


def test_set_validation_and_json():
    with pytest.raises(ValueError):
        Ball(0)
    s = Cylinder(1.5, IndexMask([2]))
    assert set_from_json(s.to_json()) == s
    assert set_from_json(Ball(2).to_json()) == Ball(2)


def test_preimage_examples():
    # min over t >= 1 of |2t' - 2| style: brute-force the one-dimensional problem.
    ts = np.linspace(1, 5, 400001)
    oracle = float(np.min(np.abs(ts * 1.0 - 2.0)))
    got = preimage_distance(Ball(1), LpVector(2, [2, 0]), LpVector(2, [1, 0]))
    assert oracle == 0.0 and got == pytest.approx(oracle, abs=1e-12)
    cone = PositiveCone(MeasureGrid([1, 1]))
    assert preimage_distance(cone, StepFunction([-2, 3], 2), StepFunction([0, 3], 2)) == 0.0
    with pytest.raises(Infeasible):
        preimage_distance(Ball(1), LpVector(2, [2, 0]), LpVector(2, [2, 0]))
    with pytest.raises(Infeasible):
        preimage_distance(cone, StepFunction([1, 1], 2), StepFunction([-1, 1], 2))


def test_preimage_boundary_against_brute_force():
    x, y = LpVector(3, [0.2, 1.5]), LpVector(3, [0.6, 0.8])
    y = y.with_coords(y.coords / norm(y))
    ts = np.linspace(1, 4, 300001)
    diffs = ts[:, None] * y.coords[None, :] - x.coords[None, :]
    oracle = float(np.min(np.sum(np.abs(diffs) ** 3, axis=1) ** (1 / 3)))
    assert preimage_distance(Ball(1), x, y) == pytest.approx(oracle, abs=1e-7)


@given(exponents, vec4)
def test_preimage_of_projection_is_bounded(p, xs):
    x = LpVector(p, xs)
    for s in (Ball(1.0), Cylinder(1.0, IndexMask([1, 3]))):
        u = project(s, x)
        d = preimage_distance(s, x, u)
        gap = norm(x.with_coords(x.coords - u.coords))
        assert d <= gap + 1e-9 * (1 + gap)
        if membership(s, x):
            assert d == 0.0


def test_classify_direction_examples():
    x = LpVector(2, [1, 0])
    assert classify_direction(x, LpVector(2, [1, 0]), Ball(1)) is Direction.UP
    assert classify_direction(x, LpVector(2, [-1, 0]), Ball(1)) is Direction.DOWN
    # ||(1, t)||_2 = sqrt(1 + t^2) > 1
    assert all(np.hypot(1, t) > 1 for t in (1e-2, 1e-4, 1e-6))
    assert classify_direction(x, LpVector(2, [0, 1]), Ball(1)) is Direction.UP
    with pytest.raises(ValueError):
        classify_direction(LpVector(2, [0.5, 0]), LpVector(2, [1, 0]), Ball(1))
    with pytest.raises(ValueError):
        classify_direction(x, LpVector(2, [0, 0]), Ball(1))


def test_variational_member_has_zero_slack():
    rep = variational_check(Ball(1), LpVector(2, [0.1, 0.2]), 50, seed=3)
    assert rep.min_slack == 0.0


@given(exponents, vec4, st.integers(0, 2**32))
def test_variational_inequality(p, xs, seed):
    x = LpVector(p, xs)
    scale = 1 + norm(x)
    for s in (Ball(1.0), Cylinder(0.5, IndexMask([2, 4]))):
        assert variational_check(s, x, 100, seed).min_slack >= -1e-10 * scale**2
    f = StepFunction(xs, p)
    cone = PositiveCone(MeasureGrid([0.5, 1.0, 2.0, 0.25]))
    assert variational_check(cone, f, 100, seed).min_slack >= -1e-10 * scale**2


@given(exponents, vec4, st.floats(0.1, 10))
def test_idempotent_and_member(p, xs, r):
    x = LpVector(p, xs)
    for s in (Ball(r), Cylinder(r, IndexMask([1, 2]))):
        u = project(s, x)
        assert membership(s, u)
        np.testing.assert_array_equal(project(s, u).coords, u.coords)
    f = StepFunction(xs, p)
    g = project_cone(f)
    np.testing.assert_array_equal(project_cone(g).values, g.values)


@given(exponents, vec4, vec4)
def test_cone_nonexpansive_against_cellwise_oracle(p, a, b):
    # Cellwise |a+ - b+| <= |a - b| integrates to the norm inequality.
    grid = MeasureGrid([0.3, 1.0, 2.5, 0.7])
    f, g = StepFunction(a, p), StepFunction(b, p)
    pf, pg = project_cone(f).values, project_cone(g).values
    assert np.all(np.abs(pf - pg) <= np.abs(f.values - g.values))
    lhs = normLp(f.with_values(pf - pg), grid)
    rhs = normLp(f.with_values(f.values - g.values), grid)
    assert lhs <= rhs + 1e-12


@given(vec4)
def test_cylinder_leaves_unmasked_coordinates_untouched(xs):
    x = LpVector(2.5, xs)
    u = project_cylinder(x, 0.5, IndexMask([1, 2]))
    np.testing.assert_array_equal(u.coords[2:], x.coords[2:])

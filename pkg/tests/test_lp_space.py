import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from banach_cover.lp_space import (
    DimensionMismatch,
    DualVector,
    ExponentMismatch,
    IndexMask,
    LpVector,
    duality_J,
    duality_J_on_subspace,
    duality_Jstar,
    lp_norm_array,
    mask_decompose,
    norm,
    pairing,
)

exponents = st.sampled_from([1.2, 1.5, 2.0, 3.0, 7.0])
coords = st.lists(st.floats(-1e3, 1e3, allow_nan=False), min_size=1, max_size=8)


def naive_norm(xs, p):
    return sum(abs(v) ** p for v in xs) ** (1.0 / p)


def test_norm_examples():
    assert norm(LpVector(2, [3, 4])) == pytest.approx(5.0, abs=1e-15)
    assert norm(LpVector(3.7, [0, 0, 0])) == 0.0
    # (1 + 1)^(1/3)
    assert norm(LpVector(3, [1, 1])) == pytest.approx(1.259921, abs=1e-6)
    assert norm(LpVector(3, [1, 1])) == pytest.approx(2 ** (1 / 3), rel=1e-15)


def test_norm_survives_extreme_magnitudes():
    big = LpVector(3, [1e200, 1e200])
    assert norm(big) == pytest.approx(1e200 * 2 ** (1 / 3), rel=1e-14)
    tiny = LpVector(3, [1e-200, 0.0])
    assert norm(tiny) == pytest.approx(1e-200, rel=1e-14)


def test_constructor_validation():
    with pytest.raises(ValueError):
        LpVector(1.0, [1])
    with pytest.raises(ValueError):
        LpVector(1 + 1e-7, [1])
    with pytest.raises(ValueError):
        LpVector(2e6, [1])
    with pytest.raises(ValueError):
        LpVector(2, [])
    with pytest.raises(ValueError):
        LpVector(2, [1, float("nan")])
    x = LpVector(2, [1, 2])
    with pytest.raises(ValueError):
        x.coords[0] = 5


def test_pairing_examples_and_errors():
    assert pairing(DualVector(2, [1, 0]), LpVector(2, [3, 4])) == 3
    assert pairing(DualVector(1.5, [0, 0]), LpVector(3, [3, 4])) == 0
    assert pairing(DualVector(2, [1, 2]), LpVector(2, [1, 2])) == 5
    with pytest.raises(DimensionMismatch):
        pairing(DualVector(2, [1, 0, 0]), LpVector(2, [1, 2]))
    with pytest.raises(ExponentMismatch):
        pairing(DualVector(2, [1, 0]), LpVector(3, [1, 2]))


def test_duality_examples():
    np.testing.assert_array_equal(duality_J(LpVector(2, [3, 4])).coords, [3, 4])
    j = duality_J(LpVector(3, [1, 1]))
    assert j.q == pytest.approx(1.5)
    np.testing.assert_allclose(j.coords, [2 ** (-1 / 3)] * 2, rtol=1e-14)
    np.testing.assert_allclose(j.coords, [0.793701] * 2, atol=1e-6)
    # <J(x), x> = ||x||^2 evaluated independently
    assert float(np.dot(j.coords, [1, 1])) == pytest.approx(naive_norm([1, 1], 3) ** 2, rel=1e-14)
    np.testing.assert_array_equal(duality_J(LpVector(4, [0, 0])).coords, [0, 0])


def test_duality_star_examples():
    np.testing.assert_array_equal(duality_Jstar(DualVector(2, [0, -1])).coords, [0, -1])
    np.testing.assert_array_equal(duality_Jstar(DualVector(3, [0, 0])).coords, [0, 0])
    back = duality_Jstar(duality_J(LpVector(3, [1, 1])))
    assert back.p == pytest.approx(3)
    np.testing.assert_allclose(back.coords, [1, 1], rtol=1e-14)


def test_mask_decompose_examples():
    x = LpVector(2, [1, 2, 3])
    a, b = mask_decompose(x, IndexMask([1, 2]))
    np.testing.assert_array_equal(a.coords, [1, 2, 0])
    np.testing.assert_array_equal(b.coords, [0, 0, 3])
    a, b = mask_decompose(LpVector(2, [0, 0, 0]), IndexMask([2]))
    assert not a.coords.any() and not b.coords.any()
    a, b = mask_decompose(x, IndexMask.full(3))
    assert a == x and not b.coords.any()


def test_mask_validation():
    with pytest.raises(ValueError):
        IndexMask([])
    with pytest.raises(ValueError):
        IndexMask([0, 1])
    with pytest.raises(DimensionMismatch):
        mask_decompose(LpVector(2, [1, 2]), IndexMask([3]))
    m = IndexMask([3, 1])
    assert m.to_json() == [1, 3]
    assert IndexMask.from_json([1, 3]) == m


def test_subspace_duality_examples():
    np.testing.assert_array_equal(duality_J_on_subspace(LpVector(2, [3, 4, 7]), IndexMask([1, 2])).coords, [3, 4, 0])
    got = duality_J_on_subspace(LpVector(3, [1, 1, 5]), IndexMask([1, 2])).coords
    np.testing.assert_allclose(got, [2 ** (-1 / 3), 2 ** (-1 / 3), 0], rtol=1e-14)
    x = LpVector(3, [1, -2, 0])
    np.testing.assert_array_equal(duality_J_on_subspace(x, IndexMask([1, 2])).coords, duality_J(x).coords)
    np.testing.assert_array_equal(duality_J_on_subspace(LpVector(3, [0, 0, 5]), IndexMask([1, 2])).coords, [0, 0, 0])


def test_json_round_trip():
    x = LpVector(3, [1.5, -2])
    assert x.to_json() == {"p": 3.0, "coords": [1.5, -2.0]}
    assert LpVector.from_json(x.to_json()) == x
    w = DualVector(1.5, [0.25])
    assert DualVector.from_json(w.to_json()) == w


@given(exponents, coords)
def test_duality_identity(p, xs):
    x = LpVector(p, xs)
    n = norm(x)
    j = duality_J(x)
    assert abs(pairing(j, x) - n * n) <= 1e-9 * (1 + n * n)
    assert abs(norm(j) - n) <= 1e-9 * (1 + n)
    assert norm(x.with_coords(duality_Jstar(j).coords - x.coords)) <= 1e-9 * (1 + n)


@given(exponents, st.data())
def test_two_sided_inequality(p, data):
    n = data.draw(st.integers(1, 6))
    vec = st.lists(st.floats(-50, 50, allow_nan=False), min_size=n, max_size=n)
    x, y = LpVector(p, data.draw(vec)), LpVector(p, data.draw(vec))
    nx, ny = norm(x), norm(y)
    d = x.with_coords(x.coords - y.coords)
    slack = 1e-10 * (1 + nx * nx + ny * ny)
    assert 2 * pairing(duality_J(y), d) <= nx * nx - ny * ny + slack
    assert nx * nx - ny * ny <= 2 * pairing(duality_J(x), d) + slack


@given(exponents, st.data())
def test_holder(p, data):
    n = data.draw(st.integers(1, 6))
    vec = st.lists(st.floats(-50, 50, allow_nan=False), min_size=n, max_size=n)
    x = LpVector(p, data.draw(vec))
    w = DualVector(x.q, data.draw(vec))
    assert abs(pairing(w, x)) <= norm(w) * norm(x) * (1 + 1e-12) + 1e-12


@given(exponents, coords, st.data())
def test_decomposition_exact(p, xs, data):
    x = LpVector(p, xs)
    members = data.draw(st.sets(st.integers(1, len(xs)), min_size=1))
    a, b = mask_decompose(x, IndexMask(members))
    np.testing.assert_array_equal(a.coords + b.coords, x.coords)
    assert not np.any((a.coords != 0) & (b.coords != 0))


@given(st.sampled_from([1.5, 2.0, 3.0]), st.lists(st.floats(-10, 10, allow_nan=False), min_size=4, max_size=4))
def test_subspace_refinement(p, xs):
    x = LpVector(p, xs)
    M = IndexMask([1, 2])
    x_m, _ = mask_decompose(x, M)
    if norm(x_m) < 1e-6:
        return
    ratio = (norm(x_m) / norm(x)) ** (p - 2)
    lhs = np.where(M.indicator(4), duality_J(x).coords, 0.0)
    rhs = ratio * duality_J_on_subspace(x, M).coords
    np.testing.assert_allclose(lhs, rhs, rtol=1e-9, atol=1e-12 * np.max(np.abs(rhs)))


def test_weighted_norm_kernel():
    assert lp_norm_array(np.array([1.0, 1.0]), 3, np.array([2.0, 1.0])) == pytest.approx(3 ** (1 / 3), rel=1e-15)
    assert math.isclose(lp_norm_array(np.zeros(3), 2), 0.0)

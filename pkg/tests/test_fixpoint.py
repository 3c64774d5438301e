import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from banach_cover.fixpoint import (
    STANDARD_NORMAL,
    UNIFORM_UNIT,
    BadLambda,
    Box,
    LeftDomain,
    NoConvergence,
    SInterval,
    SingleValuedProblem,
    builtin_example,
    estimate_lipschitz,
    event_probability,
    gamma_threshold,
    hausdorff_excess,
    picard_solve,
    residual_bound_check,
    segment_contains,
    segment_selection_solve,
    segment_substitution_record,
    substitution_record,
)


def simple(g, modulus=0.5, lo=-10.0, hi=10.0):
    return SingleValuedProblem(g=g, domain_U=Box((lo,), (hi,)), event_O=SInterval(0, 1),
                               base_point=(0.0,), modulus=modulus)


def test_quarter_square_plus_s_at_three_quarters():
    prob = builtin_example("6.7").problem
    rec = picard_solve(prob, 0.75, 1.0, x0=[0.0])
    assert rec.sigma[0] == pytest.approx(1.0, abs=1e-10)
    assert rec.residual <= 1e-12


@pytest.mark.parametrize("s", [0.0, 0.3, 0.7, 1.0])
def test_quarter_square_times_s_zero(s):
    rec = picard_solve(builtin_example("6.8").problem, s, 1.0)
    assert rec.sigma == [0.0] and rec.residual == 0.0


def test_constant_map_one_step():
    rec = picard_solve(simple(lambda x, s: np.full_like(x, 3.0)), 0.0, 1.0)
    # the first step lands on c; the second confirms it
    assert rec.sigma == [3.0] and rec.iterations == 2


def test_picard_errors():
    prob = simple(lambda x, s: 0.5 * x + s)
    with pytest.raises(BadLambda):
        picard_solve(prob, 0.1, lam=0.4)
    with pytest.raises(BadLambda):
        picard_solve(prob, 0.1, lam=1.2)
    narrow = simple(lambda x, s: 0.5 * x + s, lo=-1.0, hi=1.0)
    with pytest.raises(LeftDomain):
        picard_solve(narrow, 0.9, 1.0)
    slow = simple(lambda x, s: 0.999 * x + s, modulus=0.999, lo=-1e9, hi=1e9)
    with pytest.raises(NoConvergence):
        picard_solve(slow, 1.0, 1.0, max_iter=5)


@given(st.floats(0.0, 0.99))
def test_quarter_square_plus_s_closed_form(s):
    rec = picard_solve(builtin_example("6.7").problem, s, 1.0)
    assert rec.sigma[0] == pytest.approx(2 * (1 - math.sqrt(1 - s)), abs=1e-8)


@given(st.floats(0.55, 1.0), st.floats(-1, 1))
def test_scaled_picard_fixed_point_equation(lam, s):
    prob = simple(lambda x, s: 0.5 * np.cos(x) + s)
    rec = picard_solve(prob, s, lam)
    x = rec.sigma[0]
    assert abs(lam * x - (0.5 * math.cos(x) + s)) <= 1e-10


def test_observed_ratio_tracks_modulus():
    rec = picard_solve(simple(lambda x, s: 0.5 * x + s), 1.0, 1.0)
    assert rec.ratio == pytest.approx(0.5, rel=1e-6)


def test_lipschitz_estimates():
    assert estimate_lipschitz(simple(lambda x, s: np.full_like(x, 2.0)), 200) == 0.0
    assert estimate_lipschitz(simple(lambda x, s: x), 200) == pytest.approx(1.0, abs=1e-12)
    est = estimate_lipschitz(builtin_example("6.7").problem, 500)
    assert 0.4 < est <= 0.5
    with pytest.raises(ValueError):
        estimate_lipschitz(simple(lambda x, s: x), 0)


def test_residual_bound_quarter_square_plus_s():
    prob = builtin_example("6.7").problem
    for s in (0.1, 0.5, 0.9):
        rec = residual_bound_check(picard_solve(prob, s, 1.0), prob, s, 1.0, 0.75)
        assert rec.bound_rhs == pytest.approx(4 * s, rel=1e-14)
        assert rec.bound_ok
    with pytest.raises(ValueError):
        residual_bound_check(rec, prob, 0.5, 1.0, 0.4)
    with pytest.raises(ValueError):
        residual_bound_check(rec, prob, 0.5, 1.0, 1.0)


def test_quarter_square_times_s_other_branch_breaks_bound():
    ex = builtin_example("6.8")
    for s in (0.1, 0.5, 1.0):
        rec = substitution_record(ex.problem, s, ex.branches["zeta"](s))
        assert rec.residual <= 1e-12 * (1 + (4 / s) ** 2)
        assert not residual_bound_check(rec, ex.problem, s, 1.0, 0.75).bound_ok


@pytest.mark.parametrize("t_bar", [0.3, 0.6])
def test_gamma_threshold_makes_bound_tight(t_bar):
    zeta = builtin_example("6.7").branches["zeta"]
    gam = gamma_threshold(t_bar)
    assert 0.5 < gam < 1
    # tight at s = t_bar, slack elsewhere on [t_bar, 1]; here |0 - g(0, s)| = s and l = 1/2
    assert zeta(t_bar) == pytest.approx(t_bar / (gam - 0.5), rel=1e-12)
    for s in np.linspace(t_bar, 1.0, 201):
        assert zeta(s) <= s / (gam - 0.5) * (1 + 1e-12)
    # a slightly larger gamma breaks it at t_bar
    assert zeta(t_bar) > t_bar / (gam + 1e-6 - 0.5)


def test_segment_contains_examples():
    prob = builtin_example("6.9").problem
    assert segment_contains(prob, (0.0, 0.1), 0.0, at=(0.0, 0.0))
    assert not segment_contains(prob, (1.0, 1.0), 0.0, at=(0.0, 0.0))
    assert not segment_contains(prob, (0.0, 0.3), 0.0, at=(0.0, 0.0))


def test_segment_selection_examples():
    prob = builtin_example("6.9").problem
    rec = segment_selection_solve(prob, 1.0, (0.0, 0.0))
    np.testing.assert_allclose(rec.sigma, [4 / 3, 1.0], atol=1e-8)
    rec = segment_selection_solve(prob, 0.0, (0.0, 0.0))
    assert rec.sigma == [0.0, 0.0]
    assert segment_contains(prob, rec.sigma, 0.0)
    fixed = segment_selection_solve(prob, 1.0, (4 / 3, 1.0))
    assert fixed.iterations <= 1


@pytest.mark.parametrize("lam", [1.0, 1.1, 1.33])
@pytest.mark.parametrize("s", [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0])
def test_segment_map_branch_membership(lam, s):
    ex = builtin_example("6.9")
    sigma = ex.branches["sigma"](s, lam)
    assert segment_contains(ex.problem, sigma, s, tol=1e-12)
    assert segment_substitution_record(ex.problem, s, sigma).residual <= 1e-12


def test_hausdorff_examples():
    seg = (np.array([0.0, 0.0]), np.array([0.0, 1.0]))
    assert hausdorff_excess(seg, seg) == 0.0
    shifted = (seg[0] + [0.3, 0.0], seg[1] + [0.3, 0.0])
    assert hausdorff_excess(shifted, seg) == pytest.approx(0.3, abs=1e-15)


def test_event_probability_examples():
    assert event_probability((0, 1), UNIFORM_UNIT) == 1.0
    assert event_probability((0.5, 3), UNIFORM_UNIT) == 0.5
    assert event_probability((-math.inf, math.inf), STANDARD_NORMAL) == 1.0
    assert event_probability((0, math.inf), STANDARD_NORMAL) == 0.5
    with pytest.raises(ValueError):
        event_probability((1, 0), UNIFORM_UNIT)


@given(st.floats(-9, 9), st.floats(0, 6))
def test_event_probability_against_mpmath(a, width):
    mpmath = pytest.importorskip("mpmath")
    b = a + width
    mpmath.mp.dps = 40
    oracle = float(mpmath.ncdf(b) - mpmath.ncdf(a))
    assert abs(event_probability((a, b), STANDARD_NORMAL) - oracle) <= 1e-12


def test_builtin_registry():
    with pytest.raises(KeyError):
        builtin_example("6.10")
    assert builtin_example("6.9").branches["dist_origin"](1.0) == pytest.approx(math.sqrt(2))

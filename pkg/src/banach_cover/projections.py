"""Metric projections onto balls, cylinders and the positive cone.

All three targets have closed-form projections. Besides the projections
themselves this module exposes the checks used to exercise them: the
variational inequality, analytic preimage distances (for the covering
property sampler) and a directional classifier at boundary points.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .lp_function import MeasureGrid, StepFunction, normLp
from .lp_space import (
    DimensionMismatch,
    IndexMask,
    LpVector,
    duality_array,
    lp_norm_array,
    mask_decompose,
    norm,
)
from .sampling import rng_for, unit_directions

BOUNDARY_RTOL = 1e-9


def boundary_tol(r: float) -> float:
    return BOUNDARY_RTOL * (1.0 + r)


class KindMismatch(TypeError):
    """A vector was given where a function was expected, or vice versa."""


class Infeasible(ValueError):
    """The requested image point is not in the target set."""


# -- set descriptors ----------------------------------------------------------

@dataclass(frozen=True)
class Ball:
    r: float

    def __post_init__(self):
        if not self.r > 0:
            raise ValueError("ball radius must be positive")

    def to_json(self):
        return {"kind": "ball", "r": self.r}


@dataclass(frozen=True)
class Cylinder:
    r: float
    mask: IndexMask

    def __post_init__(self):
        if not self.r > 0:
            raise ValueError("cylinder radius must be positive")

    def to_json(self):
        return {"kind": "cylinder", "r": self.r, "mask": self.mask.to_json()}


@dataclass(frozen=True)
class PositiveCone:
    grid: MeasureGrid

    def to_json(self):
        return {"kind": "cone", "grid": self.grid.to_json()}


ConvexSet = Ball | Cylinder | PositiveCone


def set_from_json(obj: dict, grid: MeasureGrid | None = None) -> ConvexSet:
    kind = obj.get("kind")
    if kind == "ball":
        return Ball(float(obj["r"]))
    if kind == "cylinder":
        return Cylinder(float(obj["r"]), IndexMask.from_json(obj["mask"]))
    if kind == "cone":
        if "grid" in obj:
            grid = MeasureGrid.from_json(obj["grid"])
        if grid is None:
            raise ValueError("cone descriptor needs a grid")
        return PositiveCone(grid)
    raise ValueError(f"unknown set kind {kind!r}")


def _vector_only(s, x):
    if not isinstance(x, LpVector):
        raise KindMismatch(f"{type(s).__name__} acts on LpVector, got {type(x).__name__}")


def _function_only(s, x):
    if not isinstance(x, StepFunction):
        raise KindMismatch(f"PositiveCone acts on StepFunction, got {type(x).__name__}")
    if x.n != s.grid.n:
        raise DimensionMismatch(f"function has {x.n} cells, grid has {s.grid.n}")


# -- projections --------------------------------------------------------------

def _radial_scale(x_m: np.ndarray, nrm: float, r: float, p: float) -> float:
    """r/nrm, pulled inward by ulps until the scaled vector's computed norm is <= r.

    Without this, (r/||x||) x can land one ulp outside and a second projection
    would move it again.
    """
    c = r / nrm
    while lp_norm_array(c * x_m, p) > r:
        c = np.nextafter(c, 0.0)
    return c


def project_ball(x: LpVector, r: float) -> LpVector:
    nrm = norm(x)
    if nrm <= r:
        return x
    return x.with_coords(_radial_scale(x.coords, nrm, r, x.p) * x.coords)


def project_cylinder(x: LpVector, r: float, M: IndexMask) -> LpVector:
    ind = M.indicator(x.n)
    x_m = np.where(ind, x.coords, 0.0)
    nrm = lp_norm_array(x_m, x.p)
    if nrm <= r:
        return x
    c = _radial_scale(x_m, nrm, r, x.p)
    # np.where keeps the unmasked coordinates bit-for-bit.
    return x.with_coords(np.where(ind, c * x.coords, x.coords))


def project_cone(f: StepFunction, grid: MeasureGrid | None = None) -> StepFunction:
    if grid is not None and grid.n != f.n:
        raise DimensionMismatch(f"function has {f.n} cells, grid has {grid.n}")
    return f.with_values(np.where(f.values > 0, f.values, 0.0))


def project(s: ConvexSet, x):
    if isinstance(s, Ball):
        _vector_only(s, x)
        return project_ball(x, s.r)
    if isinstance(s, Cylinder):
        _vector_only(s, x)
        return project_cylinder(x, s.r, s.mask)
    if isinstance(s, PositiveCone):
        _function_only(s, x)
        return project_cone(x, s.grid)
    raise TypeError(f"not a set descriptor: {s!r}")


def boundary_value(s: ConvexSet, x: LpVector) -> float:
    """The functional whose level r is the boundary: ||x|| or ||x_M||."""
    if isinstance(s, Ball):
        return norm(x)
    if isinstance(s, Cylinder):
        return norm(mask_decompose(x, s.mask)[0])
    raise TypeError("boundary functional is defined for balls and cylinders only")


def membership(s: ConvexSet, x) -> bool:
    if isinstance(s, PositiveCone):
        _function_only(s, x)
        return bool(np.all(x.values >= 0))
    _vector_only(s, x)
    return boundary_value(s, x) <= s.r


def space_norm(s: ConvexSet, x) -> float:
    if isinstance(s, PositiveCone):
        return normLp(x, s.grid)
    return norm(x)


# -- variational inequality ---------------------------------------------------

@dataclass(frozen=True)
class VariationalReport:
    min_slack: float
    samples: int


def sample_set_points(s: ConvexSet, x, count: int, rng) -> np.ndarray:
    """Rows of points inside ``s`` (same dimension as ``x``)."""
    if isinstance(s, PositiveCone):
        scale = 1.0 + float(np.max(np.abs(x.values)))
        return np.abs(rng.standard_normal((count, x.n))) * scale
    n = x.n
    ind = np.ones(n, dtype=bool) if isinstance(s, Ball) else s.mask.indicator(n)
    k = int(ind.sum())
    d = unit_directions(rng, count, k, x.p)
    rho = s.r * rng.random(count) ** (1.0 / k)
    pts = np.empty((count, n))
    pts[:, ind] = rho[:, None] * d
    if k < n:
        scale = 1.0 + float(np.max(np.abs(x.coords)))
        pts[:, ~ind] = rng.standard_normal((count, n - k)) * scale
    return pts


def variational_check(s: ConvexSet, x, sample_count: int, seed: int = 0) -> VariationalReport:
    """Minimum over sampled z in C of <J(x - P x), P x - z>.

    A negative value (beyond rounding) falsifies the projection.
    """
    u = project(s, x)
    rng = rng_for(seed, 11)
    if isinstance(s, PositiveCone):
        diff = x.values - u.values
        j = duality_array(diff, x.p, s.grid.weights) * s.grid.weights
        base = u.values
    else:
        diff = x.coords - u.coords
        j = duality_array(diff, x.p)
        base = u.coords
    z = sample_set_points(s, x, sample_count, rng)
    slacks = (base[None, :] - z) @ j
    return VariationalReport(float(np.min(slacks)), sample_count)


# -- preimages ----------------------------------------------------------------

def _ray_distance(y: np.ndarray, x: np.ndarray, p: float) -> float:
    """min over t >= 1 of ||t*y - x||_p; the slope in t is monotone, so bisect it."""

    def slope(t):
        d = t * y - x
        return float(np.sum(np.sign(d) * np.abs(d) ** (p - 1.0) * y))

    if slope(1.0) >= 0.0:
        t = 1.0
    else:
        lo, hi = 1.0, 2.0
        while slope(hi) < 0.0:
            lo, hi = hi, 2.0 * hi
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if slope(mid) < 0.0:
                lo = mid
            else:
                hi = mid
        t = 0.5 * (lo + hi)
    return lp_norm_array(t * y - x, p)


def preimage_distance(s: ConvexSet, x, y_target) -> float:
    """min ||u - x|| over u with P(u) = y_target.

    Raises :class:`Infeasible` when y_target is outside the set.
    """
    if isinstance(s, PositiveCone):
        _function_only(s, x)
        _function_only(s, y_target)
        y = y_target.values
        if np.any(y < 0):
            raise Infeasible("target has negative cells")
        # Cells where y > 0 are pinned; cells where y = 0 accept any u <= 0.
        u = np.where(y > 0, y, np.minimum(x.values, 0.0))
        return lp_norm_array(u - x.values, x.p, s.grid.weights)

    _vector_only(s, x)
    _vector_only(s, y_target)
    if y_target.n != x.n:
        raise DimensionMismatch("target and point differ in length")
    ind = np.ones(x.n, dtype=bool) if isinstance(s, Ball) else s.mask.indicator(x.n)
    y_m = np.where(ind, y_target.coords, 0.0)
    level = lp_norm_array(y_m, x.p)
    tol = boundary_tol(s.r)
    if level > s.r + tol:
        raise Infeasible(f"target functional {level} exceeds r={s.r}")
    if level < s.r - tol:
        return lp_norm_array(y_target.coords - x.coords, x.p)
    # Boundary target: the masked part may be any t*y_M with t >= 1 and the
    # rest is pinned, so only the masked residual depends on t.
    x_m = np.where(ind, x.coords, 0.0)
    rest = lp_norm_array(np.where(ind, 0.0, y_target.coords - x.coords), x.p)
    masked = _ray_distance(y_m, x_m, x.p)
    return float((masked**x.p + rest**x.p) ** (1.0 / x.p)) if rest else masked


# -- directional classification -----------------------------------------------

class Direction(enum.Enum):
    UP = "up"
    DOWN = "down"
    INDETERMINATE = "indeterminate"


DEFAULT_T_SAMPLES = (1e-2, 1e-4, 1e-6)


def classify_direction(x: LpVector, v: LpVector, s: Ball | Cylinder,
                       t_samples=DEFAULT_T_SAMPLES) -> Direction:
    """Heuristic membership of v in x_r^up / x_r^down at a boundary point x.

    Evaluates the boundary functional at x + t v for each t in ``t_samples``;
    UP if every value exceeds r, DOWN if none does. Never a proof.
    """
    if isinstance(s, PositiveCone):
        raise TypeError("directional sets are defined for balls and cylinders")
    if not np.any(v.coords):
        raise ValueError("direction must be nonzero")
    if abs(boundary_value(s, x) - s.r) > boundary_tol(s.r):
        raise ValueError("x is not on the boundary")
    above = [boundary_value(s, x.with_coords(x.coords + t * v.coords)) > s.r for t in t_samples]
    if all(above):
        return Direction.UP
    if not any(above):
        return Direction.DOWN
    return Direction.INDETERMINATE

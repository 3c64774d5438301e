"""Step functions on a finite weighted grid, standing in for L_p(S).

Every cell has strictly positive measure, so "for mu-almost all s" reduces to
"for every cell". Cells are treated as divisible: :meth:`MeasureGrid.split`
refines a cell into two pieces of the same total measure, which is how a
nonatomic S is modelled when a construction needs a small-measure set.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lp_space import (
    DimensionMismatch,
    ExponentMismatch,
    are_conjugate,
    check_exponent,
    conjugate,
    duality_array,
    lp_norm_array,
)


def _frozen(values, name):
    arr = np.array(values, dtype=float).reshape(-1)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class MeasureGrid:
    weights: np.ndarray

    def __post_init__(self):
        w = _frozen(self.weights, "weights")
        if w.size < 2:
            raise ValueError("a measure grid needs at least two cells")
        if np.any(w <= 0):
            raise ValueError("cell measures must be strictly positive")
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return self.weights.size

    @property
    def total(self) -> float:
        return float(np.sum(self.weights))

    def split(self, cell: int, piece: float) -> "MeasureGrid":
        """Refine ``cell`` into (mu - piece, piece); the new cell sits right after it."""
        mu = self.weights[cell]
        if not 0.0 < piece < mu:
            raise ValueError(f"piece {piece} must lie strictly inside (0, {mu})")
        w = np.insert(self.weights, cell + 1, piece)
        w[cell] = mu - piece
        return MeasureGrid(w)

    def to_json(self) -> dict:
        return {"weights": self.weights.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> "MeasureGrid":
        return cls(obj["weights"])

    def __eq__(self, other):
        if not isinstance(other, MeasureGrid):
            return NotImplemented
        return np.array_equal(self.weights, other.weights)

    __hash__ = None


@dataclass(frozen=True, eq=False)
class StepFunction:
    """Cell values of an L_p function; dual-side functions carry q in ``p``."""

    values: np.ndarray
    p: float

    def __post_init__(self):
        object.__setattr__(self, "p", check_exponent(self.p))
        v = _frozen(self.values, "values")
        if v.size == 0:
            raise ValueError("values must be nonempty")
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def q(self) -> float:
        return conjugate(self.p)

    def with_values(self, values) -> "StepFunction":
        return StepFunction(values, self.p)

    def split(self, cell: int) -> "StepFunction":
        """Embed into the grid produced by ``MeasureGrid.split(cell, ...)``."""
        return self.with_values(np.insert(self.values, cell + 1, self.values[cell]))

    def to_json(self) -> dict:
        return {"p": self.p, "values": self.values.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> "StepFunction":
        return cls(obj["values"], obj["p"])

    def __eq__(self, other):
        if not isinstance(other, StepFunction):
            return NotImplemented
        return self.p == other.p and np.array_equal(self.values, other.values)

    __hash__ = None

    def __repr__(self):
        return f"StepFunction(p={self.p:g}, values={self.values.tolist()})"


@dataclass(frozen=True)
class OrderedInterval:
    """The order interval [lower, upper] of dual-side functions."""

    lower: StepFunction
    upper: StepFunction

    def __post_init__(self):
        if self.lower.n != self.upper.n:
            raise DimensionMismatch("interval endpoints differ in length")
        if np.any(self.lower.values > self.upper.values):
            raise ValueError("lower endpoint must be below upper endpoint on every cell")

    def to_json(self) -> dict:
        return {"lower": self.lower.to_json(), "upper": self.upper.to_json()}


def _check_grid(f: StepFunction, grid: MeasureGrid):
    if f.n != grid.n:
        raise DimensionMismatch(f"function has {f.n} cells, grid has {grid.n}")


def normLp(f: StepFunction, grid: MeasureGrid) -> float:
    _check_grid(f, grid)
    return lp_norm_array(f.values, f.p, grid.weights)


def pairingLp(phi: StepFunction, f: StepFunction, grid: MeasureGrid) -> float:
    _check_grid(f, grid)
    _check_grid(phi, grid)
    if not are_conjugate(f.p, phi.p):
        raise ExponentMismatch(f"1/{f.p} + 1/{phi.p} != 1")
    return float(np.sum(phi.values * f.values * grid.weights))


def duality_JLp(f: StepFunction, grid: MeasureGrid) -> StepFunction:
    _check_grid(f, grid)
    return StepFunction(duality_array(f.values, f.p, grid.weights), f.q)


def pos_neg_parts(f: StepFunction) -> tuple[StepFunction, StepFunction]:
    v = f.values
    return f.with_values(np.where(v > 0, v, 0.0)), f.with_values(np.where(v < 0, v, 0.0))


def cone_membership(f: StepFunction) -> bool:
    # No tolerance: -1e-15 is outside the cone.
    return bool(np.all(f.values >= 0))


def interval_contains(interval: OrderedInterval, phi: StepFunction) -> bool:
    if phi.n != interval.lower.n:
        raise DimensionMismatch("function and interval differ in length")
    v = phi.values
    return bool(np.all(interval.lower.values <= v) and np.all(v <= interval.upper.values))


def indicator_dual(grid: MeasureGrid, cell: int, q: float) -> StepFunction:
    """mu(E)^(-1/q) on the single cell E, zero elsewhere; unit norm in L_q."""
    values = np.zeros(grid.n)
    values[cell] = grid.weights[cell] ** (-1.0 / q)
    return StepFunction(values, q)

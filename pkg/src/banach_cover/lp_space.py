"""Finite truncations of l_p and l_q.

An :class:`LpVector` of length n is the l_p sequence supported on the first n
indices (zero tail), so every identity checked here holds exactly in l_p and
not only approximately. Dual elements are :class:`DualVector` instances
carrying the conjugate exponent q = p/(p-1).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

P_MIN = 1.0 + 1e-6
P_MAX = 1e6
CONJUGATE_TOL = 1e-12


class DimensionMismatch(ValueError):
    pass


class ExponentMismatch(ValueError):
    pass


def conjugate(p: float) -> float:
    """Return q with 1/p + 1/q = 1."""
    return p / (p - 1.0)


def check_exponent(p: float, name: str = "p") -> float:
    p = float(p)
    if not np.isfinite(p) or p <= P_MIN or p >= P_MAX:
        raise ValueError(f"{name}={p!r} outside the supported range ({P_MIN}, {P_MAX})")
    return p


def are_conjugate(p: float, q: float) -> bool:
    return abs(1.0 / p + 1.0 / q - 1.0) <= CONJUGATE_TOL


def _frozen(values, name: str) -> np.ndarray:
    arr = np.array(values, dtype=float).reshape(-1)
    if arr.size == 0:
        raise ValueError(f"{name} must contain at least one entry")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite")
    arr.flags.writeable = False
    return arr


# -- array kernels shared with the L_p(S) module ------------------------------

def lp_norm_array(a: np.ndarray, p: float, weights: np.ndarray | None = None) -> float:
    # Scale by max |a_i| so |a_i|^p neither overflows nor underflows.
    m = float(np.max(np.abs(a))) if a.size else 0.0
    if m == 0.0:
        return 0.0
    s = np.abs(a) / m
    terms = s**p if weights is None else s**p * weights
    return m * float(np.sum(terms)) ** (1.0 / p)


def duality_array(a: np.ndarray, p: float, weights: np.ndarray | None = None) -> np.ndarray:
    """|a_i|^(p-1) sign(a_i) / ||a||^(p-2), with the zero vector mapped to zero."""
    nrm = lp_norm_array(a, p, weights)
    if nrm == 0.0:
        return np.zeros_like(a, dtype=float)
    # ||a|| * (|a_i|/||a||)^(p-1) is the same quantity without the p-2 power of ||a||.
    return nrm * np.sign(a) * (np.abs(a) / nrm) ** (p - 1.0)


# -- domain types -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class LpVector:
    p: float
    coords: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "p", check_exponent(self.p))
        object.__setattr__(self, "coords", _frozen(self.coords, "coords"))

    @property
    def n(self) -> int:
        return self.coords.size

    @property
    def q(self) -> float:
        return conjugate(self.p)

    def with_coords(self, coords) -> "LpVector":
        return LpVector(self.p, coords)

    def zero_dual(self) -> "DualVector":
        return DualVector(self.q, np.zeros(self.n))

    def to_json(self) -> dict:
        return {"p": self.p, "coords": self.coords.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> "LpVector":
        return cls(obj["p"], obj["coords"])

    def __eq__(self, other):
        if not isinstance(other, LpVector):
            return NotImplemented
        return self.p == other.p and np.array_equal(self.coords, other.coords)

    __hash__ = None

    def __repr__(self):
        return f"LpVector(p={self.p:g}, coords={self.coords.tolist()})"


@dataclass(frozen=True, eq=False)
class DualVector:
    q: float
    coords: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "q", check_exponent(self.q, "q"))
        object.__setattr__(self, "coords", _frozen(self.coords, "coords"))

    @property
    def n(self) -> int:
        return self.coords.size

    @property
    def p(self) -> float:
        return conjugate(self.q)

    def with_coords(self, coords) -> "DualVector":
        return DualVector(self.q, coords)

    def to_json(self) -> dict:
        return {"q": self.q, "coords": self.coords.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> "DualVector":
        return cls(obj["q"], obj["coords"])

    def __eq__(self, other):
        if not isinstance(other, DualVector):
            return NotImplemented
        return self.q == other.q and np.array_equal(self.coords, other.coords)

    __hash__ = None

    def __repr__(self):
        return f"DualVector(q={self.q:g}, coords={self.coords.tolist()})"


@dataclass(frozen=True)
class IndexMask:
    """Nonempty set of 1-based coordinate indices."""

    members: frozenset

    def __init__(self, members: Iterable[int]):
        ms = frozenset(int(m) for m in members)
        if not ms:
            raise ValueError("index mask must be nonempty")
        if min(ms) < 1:
            raise ValueError("mask indices are 1-based")
        object.__setattr__(self, "members", ms)

    @classmethod
    def full(cls, n: int) -> "IndexMask":
        return cls(range(1, n + 1))

    def indicator(self, n: int) -> np.ndarray:
        if max(self.members) > n:
            raise DimensionMismatch(f"mask index {max(self.members)} exceeds dimension {n}")
        out = np.zeros(n, dtype=bool)
        out[[m - 1 for m in self.members]] = True
        return out

    def sorted(self) -> list[int]:
        return sorted(self.members)

    def to_json(self) -> list[int]:
        return self.sorted()

    @classmethod
    def from_json(cls, obj: Sequence[int]) -> "IndexMask":
        return cls(obj)


# -- operations ---------------------------------------------------------------

def norm(x: LpVector | DualVector) -> float:
    """l_p norm of an LpVector, or l_q norm of a DualVector."""
    exponent = x.p if isinstance(x, LpVector) else x.q
    return lp_norm_array(x.coords, exponent)


def pairing(w: DualVector, x: LpVector) -> float:
    if w.n != x.n:
        raise DimensionMismatch(f"dual has {w.n} coordinates, vector has {x.n}")
    if not are_conjugate(x.p, w.q):
        raise ExponentMismatch(f"1/{x.p} + 1/{w.q} != 1")
    return float(np.dot(w.coords, x.coords))


def duality_J(x: LpVector) -> DualVector:
    """Normalized duality map l_p -> l_q; J(theta) = theta*."""
    return DualVector(x.q, duality_array(x.coords, x.p))


def duality_Jstar(w: DualVector) -> LpVector:
    """Normalized duality map l_q -> l_p; the inverse of :func:`duality_J`."""
    return LpVector(w.p, duality_array(w.coords, w.q))


def mask_decompose(x: LpVector, M: IndexMask) -> tuple[LpVector, LpVector]:
    ind = M.indicator(x.n)
    inside = np.where(ind, x.coords, 0.0)
    outside = np.where(ind, 0.0, x.coords)
    return x.with_coords(inside), x.with_coords(outside)


def mask_decompose_dual(w: DualVector, M: IndexMask) -> tuple[DualVector, DualVector]:
    ind = M.indicator(w.n)
    return w.with_coords(np.where(ind, w.coords, 0.0)), w.with_coords(np.where(ind, 0.0, w.coords))


def duality_J_on_subspace(x: LpVector, M: IndexMask) -> DualVector:
    """J of x_M computed inside l_p^M; zero off M, and theta* when x_M = theta."""
    x_m, _ = mask_decompose(x, M)
    return duality_J(x_m)

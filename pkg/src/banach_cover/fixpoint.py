"""Stochastic fixed points: solving, bounding, and the three worked examples.

Single-valued problems are solved by the scaled Picard iteration
x <- g(x, s) / lambda. Vertical-segment maps are solved by nearest-point
selection. Both realize one fixed point per s. Other branches named in the
examples are checked by direct substitution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .sampling import rng_for


class FixpointError(RuntimeError):
    pass


class NoConvergence(FixpointError):
    pass


class LeftDomain(FixpointError):
    pass


class BadLambda(ValueError):
    pass


# -- domains and problems -----------------------------------------------------

@dataclass(frozen=True)
class Box:
    lower: tuple
    upper: tuple
    open: bool = False

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        lo, hi = np.asarray(self.lower), np.asarray(self.upper)
        if self.open:
            return bool(np.all(lo < x) and np.all(x < hi))
        return bool(np.all(lo <= x) and np.all(x <= hi))

    def sample(self, rng, count: int) -> np.ndarray:
        lo, hi = np.asarray(self.lower, dtype=float), np.asarray(self.upper, dtype=float)
        return lo + (hi - lo) * rng.random((count, lo.size))

    def to_json(self):
        return {"lower": list(self.lower), "upper": list(self.upper), "open": self.open}


@dataclass(frozen=True)
class SInterval:
    lo: float
    hi: float

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("interval endpoints out of order")

    def sample(self, rng, count: int) -> np.ndarray:
        return self.lo + (self.hi - self.lo) * rng.random(count)

    def to_json(self):
        return [self.lo, self.hi]


@dataclass(frozen=True)
class EventMeasure:
    kind: str  # "uniform_unit" or "standard_normal"

    def __post_init__(self):
        if self.kind not in ("uniform_unit", "standard_normal"):
            raise ValueError(f"unknown measure {self.kind!r}")


UNIFORM_UNIT = EventMeasure("uniform_unit")
STANDARD_NORMAL = EventMeasure("standard_normal")


@dataclass(frozen=True)
class SingleValuedProblem:
    g: Callable
    domain_U: Box
    event_O: SInterval
    base_point: tuple
    modulus: float
    # Where iterates may roam; defaults to domain_U. The examples' fixed points
    # can leave U (e.g. 2(1 - sqrt(1 - s)) > 1 for s > 3/4).
    search_domain: Box | None = None
    measure: EventMeasure = UNIFORM_UNIT
    name: str = "custom"

    def __post_init__(self):
        if not 0 < self.modulus < 1:
            raise ValueError("declared modulus must lie in (0, 1)")

    def evaluate(self, x, s) -> np.ndarray:
        return np.atleast_1d(np.asarray(self.g(np.asarray(x, dtype=float), s), dtype=float))


@dataclass(frozen=True)
class SegmentMapProblem:
    """G(x, s) = [lower(x), upper(x)] + shift(s), with vertical segments."""

    base_endpoints: Callable
    shift: Callable
    base_point: tuple
    modulus: float
    domain_U: Box
    event_O: SInterval
    measure: EventMeasure = STANDARD_NORMAL
    name: str = "custom"

    def segment(self, x, s) -> tuple[np.ndarray, np.ndarray]:
        lo, hi = self.base_endpoints(np.asarray(x, dtype=float))
        sh = np.asarray(self.shift(s), dtype=float)
        return np.asarray(lo, dtype=float) + sh, np.asarray(hi, dtype=float) + sh


@dataclass
class FixpointRecord:
    s: float
    sigma: list
    iterations: int
    residual: float
    bound_rhs: float | None = None
    bound_ok: bool | None = None
    ratio: float | None = None
    extra: dict = field(default_factory=dict)

    def to_json(self):
        out = {
            "s": self.s,
            "sigma": list(self.sigma),
            "iterations": self.iterations,
            "residual": self.residual,
            "bound_rhs": self.bound_rhs,
            "bound_ok": self.bound_ok,
            "ratio": self.ratio,
        }
        out.update(self.extra)
        return out


# -- single-valued solver -----------------------------------------------------

def picard_solve(problem: SingleValuedProblem, s: float, lam: float = 1.0, x0=None,
                 tol: float = 1e-12, max_iter: int = 10_000) -> FixpointRecord:
    """Iterate x <- g(x, s)/lam; l < lam <= 1 keeps the map a contraction on U."""
    if not (problem.modulus < lam <= 1.0):
        raise BadLambda(f"lambda={lam} must lie in (l, 1] = ({problem.modulus}, 1]")
    dom = problem.search_domain or problem.domain_U
    x = np.atleast_1d(np.asarray(problem.base_point if x0 is None else x0, dtype=float))
    if not dom.contains(x):
        raise LeftDomain(f"starting point {x.tolist()} is outside the domain")
    steps = []
    for k in range(1, max_iter + 1):
        nxt = problem.evaluate(x, s) / lam
        if not dom.contains(nxt):
            raise LeftDomain(f"iterate {k} at s={s} left the domain: {nxt.tolist()}")
        step = float(np.linalg.norm(nxt - x))
        steps.append(step)
        x = nxt
        if step <= tol:
            residual = float(np.linalg.norm(lam * x - problem.evaluate(x, s)))
            return FixpointRecord(s, x.tolist(), k, residual, ratio=_observed_ratio(steps))
    raise NoConvergence(f"no convergence at s={s} after {max_iter} iterations")


def _observed_ratio(steps: list) -> float | None:
    # Last ratio of successive steps that is not lost in rounding.
    ratios = [b / a for a, b in zip(steps, steps[1:]) if a > 1e-13 and b > 1e-13]
    return ratios[-1] if ratios else None


def substitution_record(problem: SingleValuedProblem, s: float, sigma, lam: float = 1.0,
                        branch: str = "") -> FixpointRecord:
    """Record for a closed-form branch, checked by plugging it in (no iteration)."""
    x = np.atleast_1d(np.asarray(sigma, dtype=float))
    residual = float(np.linalg.norm(lam * x - problem.evaluate(x, s)))
    extra = {"branch": branch} if branch else {}
    return FixpointRecord(s, x.tolist(), 0, residual, extra=extra)


def estimate_lipschitz(problem, pair_samples: int, seed: int = 0) -> float:
    """Largest sampled difference quotient over U x O (a lower bound on the modulus)."""
    if pair_samples < 1:
        raise ValueError("pair_samples must be at least 1")
    rng = rng_for(seed, 51)
    xs = problem.domain_U.sample(rng, pair_samples)
    us = problem.domain_U.sample(rng, pair_samples)
    ss = problem.event_O.sample(rng, pair_samples)
    best = 0.0
    for x, u, s in zip(xs, us, ss):
        d = float(np.linalg.norm(x - u))
        if d == 0.0:
            continue
        if isinstance(problem, SegmentMapProblem):
            a, b = problem.segment(x, s), problem.segment(u, s)
            num = max(hausdorff_excess(a, b), hausdorff_excess(b, a))
        else:
            num = float(np.linalg.norm(problem.evaluate(x, s) - problem.evaluate(u, s)))
        best = max(best, num / d)
    return best


def residual_bound_check(record: FixpointRecord, problem, s: float, lam: float,
                         alpha: float) -> FixpointRecord:
    """Fill bound_rhs = dist(lam*x-bar, G(x-bar, s))/(alpha - l) and bound_ok."""
    l = problem.modulus
    if not (l < alpha < lam <= 1.0):
        raise ValueError(f"need l < alpha < lambda <= 1, got l={l}, alpha={alpha}, lambda={lam}")
    xbar = np.atleast_1d(np.asarray(problem.base_point, dtype=float))
    if isinstance(problem, SegmentMapProblem):
        dist = point_segment_distance(lam * xbar, problem.segment(xbar, s))
    else:
        dist = float(np.linalg.norm(lam * xbar - problem.evaluate(xbar, s)))
    rhs = dist / (alpha - l)
    gap = float(np.linalg.norm(np.asarray(record.sigma) - xbar))
    return replace(record, bound_rhs=rhs, bound_ok=bool(gap <= rhs + 1e-9))


# -- segment maps -------------------------------------------------------------

def point_segment_distance(pt, seg) -> float:
    a, b = (np.asarray(v, dtype=float) for v in seg)
    pt = np.asarray(pt, dtype=float)
    d = b - a
    dd = float(d @ d)
    t = 0.0 if dd == 0.0 else min(max(float((pt - a) @ d) / dd, 0.0), 1.0)
    return float(np.linalg.norm(pt - (a + t * d)))


def hausdorff_excess(seg_a, seg_b) -> float:
    """sup over seg_a of the distance to seg_b; a convex function, so an endpoint wins."""
    return max(point_segment_distance(seg_a[0], seg_b), point_segment_distance(seg_a[1], seg_b))


def segment_contains(problem: SegmentMapProblem, x, s: float, tol: float = 1e-12, at=None) -> bool:
    """Is x in G(at, s)? With ``at`` omitted this is the fixed-point inclusion x in G(x, s)."""
    x = np.asarray(x, dtype=float)
    lo, hi = problem.segment(x if at is None else at, s)
    if abs(x[0] - lo[0]) > tol:
        return False
    bottom, top = min(lo[1], hi[1]), max(lo[1], hi[1])
    return bool(bottom - tol <= x[1] <= top + tol)


def segment_substitution_record(problem: SegmentMapProblem, s: float, sigma) -> FixpointRecord:
    """Record for a named branch; the residual is dist(sigma, G(sigma, s))."""
    pt = np.asarray(sigma, dtype=float)
    return FixpointRecord(s, pt.tolist(), 0, point_segment_distance(pt, problem.segment(pt, s)))


def segment_selection_solve(problem: SegmentMapProblem, s: float, x0=(0.0, 0.0),
                            tol: float = 1e-12, max_iter: int = 10_000) -> FixpointRecord:
    """x <- nearest point of G(x, s) to x: first coordinate forced, second clamped."""
    x = np.asarray(x0, dtype=float)
    for k in range(1, max_iter + 1):
        lo, hi = problem.segment(x, s)
        bottom, top = min(lo[1], hi[1]), max(lo[1], hi[1])
        nxt = np.array([lo[0], min(max(x[1], bottom), top)])
        step = float(np.linalg.norm(nxt - x))
        x = nxt
        if step <= tol:
            residual = point_segment_distance(x, problem.segment(x, s))
            return FixpointRecord(s, x.tolist(), k, residual)
    raise NoConvergence(f"selection iteration did not settle at s={s}")


# -- event probabilities ------------------------------------------------------

def _upper_tail(a: float) -> float:
    return 0.5 * math.erfc(a / math.sqrt(2.0))


def event_probability(W: tuple, measure: EventMeasure) -> float:
    a, b = float(W[0]), float(W[1])
    if a > b:
        raise ValueError("interval endpoints out of order")
    if measure.kind == "uniform_unit":
        return max(0.0, min(b, 1.0) - max(a, 0.0))
    # Difference of tails on the side away from the mean, to avoid cancellation.
    if a >= 0.0:
        return _upper_tail(a) - _upper_tail(b)
    if b <= 0.0:
        return _upper_tail(-b) - _upper_tail(-a)
    return 1.0 - _upper_tail(-a) - _upper_tail(b)


# -- built-in examples --------------------------------------------------------

@dataclass(frozen=True)
class BuiltinExample:
    id: str
    problem: SingleValuedProblem | SegmentMapProblem
    branches: dict
    notes: dict = field(default_factory=dict)


def _g67(x, s):
    return 0.25 * x**2 + s


def _g68(x, s):
    return 0.25 * x**2 * s


def _seg69(x):
    w, v = x[0], x[1]
    return np.array([0.25 * w, 0.0]), np.array([0.25 * w, 0.25 * math.sqrt(1.0 + v * v)])


def _shift69(s):
    return np.array([s * s, abs(s)])


def gamma_threshold(t_bar: float) -> float:
    """Largest admissible gamma on W = [t_bar, 1] for the unstable branch of g = x^2/4 + s."""
    return 0.5 + t_bar / (2.0 * (1.0 + math.sqrt(1.0 - t_bar)))


def builtin_example(example_id: str) -> BuiltinExample:
    eid = str(example_id)
    if eid == "6.7":
        prob = SingleValuedProblem(
            g=_g67, domain_U=Box((-1.0,), (1.0,), open=True), event_O=SInterval(0.0, 1.0),
            base_point=(0.0,), modulus=0.5, search_domain=Box((-2.0,), (2.0,)), name="6.7")
        branches = {
            "sigma": lambda s: 2.0 * (1.0 - math.sqrt(1.0 - s)),
            "zeta": lambda s: 2.0 * (1.0 + math.sqrt(1.0 - s)),
        }
        return BuiltinExample(eid, prob, branches, {"gamma_threshold": gamma_threshold})
    if eid == "6.8":
        prob = SingleValuedProblem(
            g=_g68, domain_U=Box((-1.0,), (1.0,), open=True), event_O=SInterval(0.0, 1.0),
            base_point=(0.0,), modulus=0.5, name="6.8")
        branches = {"sigma": lambda s: 0.0, "zeta": lambda s: 4.0 / s}
        return BuiltinExample(eid, prob, branches)
    if eid == "6.9":
        prob = SegmentMapProblem(
            base_endpoints=_seg69, shift=_shift69, base_point=(0.0, 0.0), modulus=0.5,
            domain_U=Box((-5.0, -5.0), (5.0, 5.0)), event_O=SInterval(-3.0, 3.0), name="6.9")
        branches = {
            "sigma": lambda s, lam=1.0: np.array([4.0 * s * s / 3.0, lam * abs(s)]),
            "dist_origin": lambda s: abs(s) * math.sqrt(s * s + 1.0),
        }
        return BuiltinExample(eid, prob, branches)
    raise KeyError(f"unknown example {example_id!r}; choose 6.7, 6.8 or 6.9")


# Named single-valued maps for the command line (no expression parsing).
MAP_REGISTRY = {
    "quarter-square-plus-s": lambda: builtin_example("6.7").problem,
    "quarter-square-times-s": lambda: builtin_example("6.8").problem,
    "half-cosine-plus-s": lambda: SingleValuedProblem(
        g=lambda x, s: 0.5 * np.cos(x) + s, domain_U=Box((-10.0,), (10.0,)),
        event_O=SInterval(0.0, 1.0), base_point=(0.0,), modulus=0.5, name="half-cosine-plus-s"),
    "half-affine": lambda: SingleValuedProblem(
        g=lambda x, s: 0.5 * x + s, domain_U=Box((-10.0,), (10.0,)),
        event_O=SInterval(0.0, 1.0), base_point=(0.0,), modulus=0.5, name="half-affine"),
}

"""Closed-form coderivatives of the three projections and of lambda*I.

At boundary points only theta*-membership is known in general, so those
cases come back as :class:`PredicateOnly`; nothing here fabricates the full
coderivative set. :func:`numeric_quotient_sup` evaluates the limsup quotient
on sampled directions and can falsify (never prove) a membership claim.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .lp_function import (
    MeasureGrid,
    OrderedInterval,
    StepFunction,
    cone_membership,
)
from .lp_space import (
    DimensionMismatch,
    DualVector,
    IndexMask,
    LpVector,
    duality_J,
    duality_Jstar,
    duality_array,
    mask_decompose,
    mask_decompose_dual,
    norm,
    pairing,
)
from .projections import (
    Ball,
    Cylinder,
    Direction,
    PositiveCone,
    boundary_tol,
    classify_direction,
)
from .sampling import axis_directions, rng_for, unit_directions

IDENTITY_RTOL = 1e-9


# -- answer shapes ------------------------------------------------------------

@dataclass(frozen=True)
class Singleton:
    value: DualVector | StepFunction

    def to_json(self):
        return {"kind": "singleton", "value": self.value.to_json()}


@dataclass(frozen=True)
class Empty:
    def to_json(self):
        return {"kind": "empty"}


@dataclass(frozen=True)
class Interval:
    interval: OrderedInterval

    def to_json(self):
        return {"kind": "interval", "interval": self.interval.to_json()}


@dataclass(frozen=True)
class PredicateOnly:
    """Only whether theta* belongs to the set is known; None means undecided."""

    zero_member: bool | None

    def to_json(self):
        return {"kind": "predicate", "zero_member": self.zero_member}


CoderivativeValue = Singleton | Empty | Interval | PredicateOnly


@dataclass(frozen=True)
class ScaledIdentity:
    lam: float

    def to_json(self):
        return {"kind": "scaled_identity", "lambda": self.lam}


# -- helpers ------------------------------------------------------------------

def _close(a: DualVector, b: DualVector) -> bool:
    return norm(a.with_coords(a.coords - b.coords)) <= IDENTITY_RTOL * (1.0 + norm(a))


def _proportional_coefficient(w: DualVector, x: LpVector, jx: DualVector) -> float | None:
    """lambda with w = lambda*J(x), if one exists (x != theta)."""
    lam = pairing(w, x) / norm(x) ** 2
    if _close(w, jx.with_coords(lam * jx.coords)):
        return lam
    return None


def _check_dims(w: DualVector, x: LpVector):
    if w.n != x.n:
        raise DimensionMismatch(f"dual has {w.n} coordinates, point has {x.n}")


# -- ball and cylinder --------------------------------------------------------

def coderivative_ball(x: LpVector, r: float, w: DualVector) -> CoderivativeValue:
    _check_dims(w, x)
    nrm = norm(x)
    if abs(nrm - r) <= boundary_tol(r):
        if not np.any(w.coords):
            return Singleton(w)
        jx = duality_J(x)
        if _close(w, jx):
            return Empty()
        lam = _proportional_coefficient(w, x, jx)
        if lam is None:
            return PredicateOnly(None)
        return PredicateOnly(lam < 0)
    if nrm < r:
        return Singleton(w)
    jx = duality_J(x)
    coef = pairing(w, x) / nrm**2
    return Singleton(w.with_coords((r / nrm) * (w.coords - coef * jx.coords)))


def coderivative_cylinder(x: LpVector, r: float, M: IndexMask, w: DualVector,
                          t_samples=None) -> CoderivativeValue:
    _check_dims(w, x)
    x_m, _ = mask_decompose(x, M)
    w_m, w_out = mask_decompose_dual(w, M)
    nrm = norm(x_m)
    if abs(nrm - r) <= boundary_tol(r):
        if not np.any(w.coords):
            return Singleton(w)
        if _close(w, duality_J(x)):
            return Empty()
        if np.any(w_out.coords):
            return PredicateOnly(False)
        wq = norm(w_m)
        if abs(pairing(w_m, x_m) + r * wq) > IDENTITY_RTOL * (1.0 + r * wq):
            return PredicateOnly(False)
        v = duality_Jstar(w)
        v_m, _ = mask_decompose(v, M)
        kwargs = {} if t_samples is None else {"t_samples": t_samples}
        d = classify_direction(x, v_m.with_coords(-v_m.coords), Cylinder(r, M), **kwargs)
        if d is Direction.INDETERMINATE:
            return PredicateOnly(None)
        return PredicateOnly(d is Direction.UP)
    if nrm < r:
        return Singleton(w)
    # J of x_M taken inside l_p^M; zero off M.
    j_m = duality_J(x_m)
    coef = pairing(w_m, x_m) / nrm**2
    z = (r / nrm) * (w_m.coords - coef * j_m.coords) + w_out.coords
    return Singleton(w.with_coords(z))


# -- positive cone ------------------------------------------------------------

def coderivative_cone_zero_membership(f: StepFunction, phi: StepFunction, grid: MeasureGrid) -> bool:
    if not (f.n == phi.n == grid.n):
        raise DimensionMismatch("function, dual function and grid must share cells")
    fv, pv = f.values, phi.values
    bad = ((pv != 0) & (fv > 0)) | ((pv < 0) & (fv <= 0))
    return not bool(np.any(bad))


def coderivative_cone_at_origin(psi: StepFunction) -> Interval:
    if not cone_membership(psi):
        raise ValueError("psi must be nonnegative on every cell")
    return Interval(OrderedInterval(psi.with_values(np.zeros(psi.n)), psi))


# -- scaled identity ----------------------------------------------------------

def coderivative_scaled_identity(lam: float, w: DualVector) -> Singleton:
    return Singleton(w.with_coords(lam * w.coords))


def coderivative(target, x, w) -> CoderivativeValue:
    """Dispatch on the target; the cone is only answered at the origin."""
    if isinstance(target, Ball):
        return coderivative_ball(x, target.r, w)
    if isinstance(target, Cylinder):
        return coderivative_cylinder(x, target.r, target.mask, w)
    if isinstance(target, ScaledIdentity):
        return coderivative_scaled_identity(target.lam, w)
    if isinstance(target, PositiveCone):
        if np.any(x.values):
            raise ValueError("cone coderivative sets are only closed-form at the origin")
        return coderivative_cone_at_origin(w)
    raise TypeError(f"unsupported target {target!r}")


# -- limsup quotient ----------------------------------------------------------

@dataclass(frozen=True)
class QuotientReport:
    sup_quotient: float
    samples_used: int
    radii: list = field(default_factory=list)

    def to_json(self):
        return {"sup": self.sup_quotient, "radii": list(self.radii), "samples": self.samples_used}


def _row_norms(a: np.ndarray, p: float, weights=None) -> np.ndarray:
    m = np.max(np.abs(a), axis=1)
    safe = np.where(m > 0, m, 1.0)
    s = np.abs(a) / safe[:, None]
    terms = s**p if weights is None else s**p * weights
    return m * np.sum(terms, axis=1) ** (1.0 / p)


def _project_rows(target, u: np.ndarray, p: float) -> np.ndarray:
    if isinstance(target, ScaledIdentity):
        return target.lam * u
    if isinstance(target, PositiveCone):
        return np.where(u > 0, u, 0.0)
    ind = np.ones(u.shape[1], dtype=bool) if isinstance(target, Ball) else target.mask.indicator(u.shape[1])
    nrm = _row_norms(np.where(ind, u, 0.0), p)
    scale = np.where(nrm > target.r, target.r / np.where(nrm > 0, nrm, 1.0), 1.0)
    return np.where(ind, scale[:, None] * u, u)


def numeric_quotient_sup(target, x, z, w, radii, directions_per_radius: int, seed: int = 0) -> QuotientReport:
    """max over sampled u = x + t*d of the Frechet-coderivative quotient.

    A clearly positive value falsifies z in D*P(x)(w); a small one is only
    consistent with it.
    """
    radii = [float(t) for t in radii]
    if not radii or any(t <= 0 for t in radii) or any(b >= a for a, b in zip(radii, radii[1:])):
        raise ValueError("radii must be positive and strictly decreasing")
    if directions_per_radius < 1:
        raise ValueError("directions_per_radius must be at least 1")
    if isinstance(x, StepFunction):
        if not isinstance(target, PositiveCone):
            raise TypeError("step functions go with the positive cone")
        base, p, weights = x.values, x.p, target.grid.weights
    else:
        base, p, weights = x.coords, x.p, None
    zc = np.asarray(z.coords if isinstance(z, DualVector) else z.values)
    wc = np.asarray(w.coords if isinstance(w, DualVector) else w.values)
    if not (zc.size == wc.size == base.size):
        raise DimensionMismatch("point and dual vectors differ in length")
    wz = zc if weights is None else zc * weights
    ww = wc if weights is None else wc * weights

    n = base.size
    rng = rng_for(seed, 23)
    px = _project_rows(target, base[None, :], p)[0]
    best = -np.inf
    used = 0
    axes = axis_directions(n, p, weights)
    for t in radii:
        d = np.vstack([unit_directions(rng, directions_per_radius, n, p, weights), axes])
        du = t * d
        dp = _project_rows(target, base[None, :] + du, p) - px[None, :]
        num = du @ wz - dp @ ww
        den = _row_norms(du, p, weights) + _row_norms(dp, p, weights)
        q = np.where(den > 0, num / np.where(den > 0, den, 1.0), 0.0)
        best = max(best, float(np.max(q)))
        used += d.shape[0]
    return QuotientReport(best, used, radii)


def exterior_identity_residual(x: LpVector, r: float, lam: float) -> float:
    """||z*|| when w* = lam*J(x) is fed to the exterior ball formula (should vanish)."""
    jx = duality_array(x.coords, x.p)
    nrm = norm(x)
    w = lam * jx
    coef = float(np.dot(w, x.coords)) / nrm**2
    return norm(DualVector(x.q, (r / nrm) * (w - coef * jx)))

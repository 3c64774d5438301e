"""Covering constants of the projections and of lambda*I.

The estimator follows the sup-inf definition on a finite eta grid. Sampled
coderivative norms only give an upper bound on each infimum, so exact values
come from two sources: the interior closed form (norm 1) and explicit zero
witnesses, i.e. a point near x-bar and a unit dual direction whose
coderivative provably contains theta*.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

from .coderivative import (
    PredicateOnly,
    ScaledIdentity,
    Singleton,
    coderivative_ball,
    coderivative_cone_zero_membership,
    coderivative_cylinder,
)
from .lp_function import MeasureGrid, StepFunction, indicator_dual, normLp
from .lp_space import DualVector, LpVector, duality_J, lp_norm_array, mask_decompose, norm
from .projections import (
    Ball,
    Cylinder,
    Infeasible,
    PositiveCone,
    boundary_tol,
    boundary_value,
    membership,
    preimage_distance,
    project,
    project_cone,
)
from .sampling import ball_points, rng_for, unit_directions

WITNESS_TOL = 1e-9


class UnsupportedTarget(ValueError):
    """The covering constant is not known in closed form for this target."""


# -- records ------------------------------------------------------------------

@dataclass(frozen=True)
class Witness:
    eta: float
    point: LpVector | StepFunction
    dual: DualVector | StepFunction
    # Cone witnesses live on a refined grid; ``base`` is x-bar embedded there.
    grid: MeasureGrid | None = None
    base: StepFunction | None = None

    def to_json(self):
        out = {"eta": self.eta, "point": self.point.to_json(), "dual": self.dual.to_json()}
        if self.grid is not None:
            out["grid"] = self.grid.to_json()
        return out


@dataclass
class CoveringReport:
    target: dict
    eta_grid: list
    per_eta_inf: list
    alpha_hat: float
    witnesses: list = field(default_factory=list)
    samples_per_eta: int = 0
    seed: int = 0

    def to_json(self):
        return {
            "target": self.target,
            "eta_grid": list(self.eta_grid),
            "per_eta_inf": list(self.per_eta_inf),
            "alpha_hat": self.alpha_hat,
            "samples_per_eta": self.samples_per_eta,
            "seed": self.seed,
            "witnesses": [w.to_json() for w in self.witnesses],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("eta,per_eta_inf\n")
        for eta, v in zip(self.eta_grid, self.per_eta_inf):
            buf.write(f"{eta:.17g},{v:.17g}\n")
        return buf.getvalue()


# -- reference values ---------------------------------------------------------

def theoretical_covering_constant(target, xbar) -> float:
    if isinstance(target, ScaledIdentity):
        if abs(target.lam) > 1:
            raise UnsupportedTarget(f"|lambda| = {abs(target.lam)} > 1: covering constant not covered")
        return abs(target.lam)
    if isinstance(target, PositiveCone):
        return 0.0
    if isinstance(target, (Ball, Cylinder)):
        return 1.0 if boundary_value(target, xbar) < target.r - boundary_tol(target.r) else 0.0
    raise UnsupportedTarget(f"no closed-form covering constant for {target!r}")


def default_eta_grid(target, xbar, points: int = 13) -> list[float]:
    scale = 1.0
    if isinstance(target, (Ball, Cylinder)):
        scale = max(abs(target.r - boundary_value(target, xbar)), 1.0)
    return np.geomspace(1e-3 * scale, 4.0 * scale, points).tolist()


# -- witnesses ----------------------------------------------------------------

def _radial_witness(x_m: np.ndarray, rest: np.ndarray, first: int, eta: float, r: float, p: float):
    """Shared ball/cylinder construction on the (masked) coordinates x_m."""
    tol = boundary_tol(r)
    nx = lp_norm_array(x_m, p)
    if nx >= r - tol:
        # Push radially outward by eta/2; -J(u)/||u|| annihilates the exterior formula.
        u_m = (1.0 + eta / (2.0 * nx)) * x_m
        return u_m + rest, -duality_J(LpVector(p, u_m)).coords / lp_norm_array(u_m, p)
    gap = r - nx
    if eta < gap - tol:
        return None
    if nx > 0:
        direction = x_m / nx
    else:
        direction = np.zeros_like(x_m)
        direction[first] = 1.0
    if abs(eta - gap) <= tol:
        # Only the sphere point r*x/||x|| is reachable; lambda*J with lambda < 0 there.
        u_m = r * direction
        return u_m + rest, -duality_J(LpVector(p, direction)).coords
    u_m = 0.5 * (eta + nx + r) * direction
    return u_m + rest, -duality_J(LpVector(p, u_m)).coords / lp_norm_array(u_m, p)


def witness_zero_ball(xbar: LpVector, eta: float, r: float) -> Witness | None:
    """(u, w*) with theta* in D*P(u)(w*), or None when eta is below the gap r - ||x-bar||."""
    built = _radial_witness(xbar.coords, np.zeros(xbar.n), 0, eta, r, xbar.p)
    if built is None:
        return None
    u, w = built
    return Witness(eta, xbar.with_coords(u), DualVector(xbar.q, w))


def witness_zero_cylinder(xbar: LpVector, eta: float, r: float, M) -> Witness | None:
    x_m, x_out = mask_decompose(xbar, M)
    built = _radial_witness(x_m.coords, x_out.coords, min(M.members) - 1, eta, r, xbar.p)
    if built is None:
        return None
    u, w = built
    return Witness(eta, xbar.with_coords(u), DualVector(xbar.q, w))


def witness_zero_cone(fbar: StepFunction, eta: float, grid: MeasureGrid) -> Witness:
    """Refine the grid so a nearby f has both signs, then put phi on a negative cell.

    Each forced sign costs at most eta/4 in norm: a piece of measure delta gets
    the value +-eta, with delta <= (eta / (4|eta - f_i|))^p.
    """
    if eta <= 0:
        raise ValueError("eta must be positive")
    p = fbar.p
    f, base, g = fbar, fbar, grid
    for sign in (1.0, -1.0):
        if np.any(sign * f.values > 0):
            continue
        i = int(np.argmax(g.weights))
        jump = abs(sign * eta - f.values[i])
        delta = 0.5 * g.weights[i]
        if jump > 0:
            delta = min(delta, (eta / (4.0 * jump)) ** p)
        g = g.split(i, delta)
        base = base.split(i)
        vals = np.array(f.split(i).values)
        vals[i + 1] = sign * eta
        f = f.with_values(vals)
    cell = int(np.flatnonzero(f.values < 0)[0])
    phi = indicator_dual(g, cell, fbar.q)
    return Witness(eta, f, phi, grid=g, base=base)


def witness_for(target, xbar, eta: float) -> Witness | None:
    if isinstance(target, Ball):
        return witness_zero_ball(xbar, eta, target.r)
    if isinstance(target, Cylinder):
        return witness_zero_cylinder(xbar, eta, target.r, target.mask)
    if isinstance(target, PositiveCone):
        return witness_zero_cone(xbar, eta, target.grid)
    return None


def check_witness(target, xbar, wit: Witness) -> bool:
    """Re-derive every claim a witness makes from the closed forms."""
    eta = wit.eta
    if isinstance(target, PositiveCone):
        g = wit.grid
        unit = abs(normLp(wit.dual, g) - 1.0) <= WITNESS_TOL
        near = normLp(wit.point.with_values(wit.point.values - wit.base.values), g) <= eta
        pu, pb = project_cone(wit.point), project_cone(wit.base)
        image_near = normLp(pu.with_values(pu.values - pb.values), g) <= eta
        zero = coderivative_cone_zero_membership(wit.point, wit.dual, g)
        return bool(unit and near and image_near and zero)
    tol = boundary_tol(target.r)
    u = wit.point
    unit = abs(norm(wit.dual) - 1.0) <= WITNESS_TOL
    near = norm(u.with_coords(u.coords - xbar.coords)) <= eta + tol
    pu, pb = project(target, u), project(target, xbar)
    image_near = norm(pu.with_coords(pu.coords - pb.coords)) <= eta + tol
    if isinstance(target, Ball):
        cd = coderivative_ball(u, target.r, wit.dual)
    else:
        cd = coderivative_cylinder(u, target.r, target.mask, wit.dual)
    if isinstance(cd, Singleton):
        zero = norm(cd.value) <= WITNESS_TOL
    else:
        zero = isinstance(cd, PredicateOnly) and cd.zero_member is True
    return bool(unit and near and image_near and zero)


# -- estimator ----------------------------------------------------------------

def _space(target, xbar):
    if isinstance(xbar, StepFunction):
        if not isinstance(target, PositiveCone):
            raise TypeError("step functions go with the positive cone")
        return xbar.values, xbar.p, target.grid.weights
    if isinstance(target, PositiveCone):
        raise TypeError("the positive cone acts on step functions")
    return xbar.coords, xbar.p, None


def _image(target, x):
    if isinstance(target, ScaledIdentity):
        return x.with_coords(target.lam * x.coords)
    return project(target, x)


def _sample_value(target, x, w) -> float | None:
    """||z*|| for one sampled (x, w*), or None when nothing closed-form applies."""
    if isinstance(target, ScaledIdentity):
        return abs(target.lam) * norm(w)
    if isinstance(target, PositiveCone):
        return 0.0 if coderivative_cone_zero_membership(x, w, target.grid) else None
    if isinstance(target, Ball):
        cd = coderivative_ball(x, target.r, w)
    else:
        cd = coderivative_cylinder(x, target.r, target.mask, w)
    if isinstance(cd, Singleton):
        return norm(cd.value)
    if isinstance(cd, PredicateOnly) and cd.zero_member:
        return 0.0
    return None


def estimate_covering_constant(target, xbar, eta_grid=None, samples_per_eta: int = 200,
                               seed: int = 0) -> CoveringReport:
    if isinstance(target, ScaledIdentity) and abs(target.lam) > 1:
        raise UnsupportedTarget(f"|lambda| = {abs(target.lam)} > 1: covering constant not covered")
    if not isinstance(target, (Ball, Cylinder, PositiveCone, ScaledIdentity)):
        raise UnsupportedTarget(f"no covering estimator for {target!r}")
    if eta_grid is None:
        eta_grid = default_eta_grid(target, xbar)
    eta_grid = [float(e) for e in eta_grid]
    if not eta_grid or eta_grid[0] <= 0 or any(b <= a for a, b in zip(eta_grid, eta_grid[1:])):
        raise ValueError("eta grid must be positive and strictly ascending")
    if samples_per_eta < 1:
        raise ValueError("samples_per_eta must be at least 1")

    base, p, weights = _space(target, xbar)
    q = p / (p - 1.0)
    ybar = _image(target, xbar)
    ybase = ybar.values if isinstance(ybar, StepFunction) else ybar.coords
    is_fn = isinstance(xbar, StepFunction)
    band = isinstance(target, (Ball, Cylinder))

    raw, witnesses = [], []
    for k, eta in enumerate(eta_grid):
        rng = rng_for(seed, 31, k)
        best = np.inf
        wit = witness_for(target, xbar, eta)
        if wit is not None and check_witness(target, xbar, wit):
            witnesses.append(wit)
            best = 0.0
        # x-bar itself is always feasible, so every eta sees at least one sample.
        pts = np.vstack([base[None, :], ball_points(rng, samples_per_eta - 1, base, eta, p, weights)])
        duals = unit_directions(rng, pts.shape[0], base.size, q, weights)
        for row, wrow in zip(pts, duals):
            x = xbar.with_values(row) if is_fn else xbar.with_coords(row)
            if band and abs(boundary_value(target, x) - target.r) <= boundary_tol(target.r):
                continue
            y = _image(target, x)
            ydiff = (y.values if is_fn else y.coords) - ybase
            if lp_norm_array(ydiff, p, weights) > eta:
                continue
            w = StepFunction(wrow, q) if is_fn else DualVector(q, wrow)
            val = _sample_value(target, x, w)
            if val is not None and val < best:
                best = val
        raw.append(best)

    # Feasible sets grow with eta, so the infimum can only go down.
    per_eta = np.minimum.accumulate(np.array(raw)).tolist()
    return CoveringReport(
        target=target.to_json(),
        eta_grid=eta_grid,
        per_eta_inf=per_eta,
        alpha_hat=float(max(per_eta)),
        witnesses=witnesses,
        samples_per_eta=samples_per_eta,
        seed=seed,
    )


# -- covering property --------------------------------------------------------

@dataclass(frozen=True)
class CoveringPropertyReport:
    violations: int
    max_deficit: float
    targets_kept: int

    def to_json(self):
        return {"violations": self.violations, "max_deficit": self.max_deficit,
                "targets_kept": self.targets_kept}


def covering_property_check(target, x, alpha: float, rho: float, target_samples: int,
                            seed: int = 0) -> CoveringPropertyReport:
    """Sample y' within alpha*rho of P(x) and ask for a preimage within rho of x."""
    if not rho > 0 or not alpha > 0:
        raise ValueError("alpha and rho must be positive")
    base, p, weights = _space(target, x)
    y = _image(target, x)
    is_fn = isinstance(x, StepFunction)
    ybase = y.values if is_fn else y.coords
    rng = rng_for(seed, 41)
    pts = ball_points(rng, target_samples, ybase, alpha * rho, p, weights)
    violations, kept, worst = 0, 0, 0.0
    for row in pts:
        yt = x.with_values(row) if is_fn else x.with_coords(row)
        if isinstance(target, ScaledIdentity):
            if target.lam == 0:
                if np.any(row):
                    continue
                dist = 0.0
            else:
                dist = norm(x.with_coords(row / target.lam - x.coords))
        else:
            if not membership(target, yt):
                continue
            try:
                dist = preimage_distance(target, x, yt)
            except Infeasible:
                continue
        kept += 1
        if dist > rho + 1e-9:
            violations += 1
            worst = max(worst, dist - rho)
    return CoveringPropertyReport(violations, worst, kept)

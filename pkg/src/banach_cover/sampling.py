"""Seeded sampling helpers: unit directions, balls, and dual unit vectors."""

from __future__ import annotations

import numpy as np

from .lp_space import lp_norm_array


def rng_for(seed, *stream) -> np.random.Generator:
    """Independent generator per (seed, stream...) so results don't depend on call order."""
    return np.random.default_rng([int(seed) & 0xFFFFFFFFFFFFFFFF, *[int(s) for s in stream]])


def unit_directions(rng, count: int, n: int, p: float, weights=None) -> np.ndarray:
    """``count`` rows of normalized Gaussian draws, unit in the (weighted) p-norm."""
    out = rng.standard_normal((count, n))
    for k in range(count):
        nrm = lp_norm_array(out[k], p, weights)
        while nrm == 0.0:
            out[k] = rng.standard_normal(n)
            nrm = lp_norm_array(out[k], p, weights)
        out[k] /= nrm
    return out


def axis_directions(n: int, p: float, weights=None) -> np.ndarray:
    """+-e_i scaled to unit (weighted) p-norm."""
    eye = np.eye(n)
    if weights is not None:
        eye = eye / (np.asarray(weights) ** (1.0 / p))[:, None]
    return np.vstack([eye, -eye])


def ball_points(rng, count: int, center: np.ndarray, radius: float, p: float, weights=None) -> np.ndarray:
    """Points center + rho*d with d a unit direction and rho = radius*U^(1/n)."""
    n = center.size
    d = unit_directions(rng, count, n, p, weights)
    rho = radius * rng.random(count) ** (1.0 / n)
    return center[None, :] + rho[:, None] * d

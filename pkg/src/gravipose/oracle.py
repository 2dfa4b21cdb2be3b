"""Brute-force verification of the smallest-eigenvalue objective.

The oracle never touches the stationary-point algebra: it scans the
rotation angle on a dense grid, then polishes the best cell by
golden-section search, scoring through the same numeric Gram evaluation
used to rank solver candidates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .solver_core import (evaluate_c_batch, normalized_ray_arrays,
                          theta_gram_batch)

THETA_EDGE = 1e-6  # open interval: stay off the parameterization boundary
GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass
class OracleResult:
    theta_star: float
    alpha_star: float
    grid_resolution: int
    refined: bool


def _alpha_min_batch(p, pp, thetas):
    C = theta_gram_batch(p, pp, thetas)
    return np.linalg.eigvalsh(C)[:, 0]


def _alpha_min_single(p, pp, theta):
    return float(_alpha_min_batch(p, pp, np.array([theta]))[0])


def grid_search_theta(pairs, grid_points: int = 100_000) -> OracleResult:
    """Global minimum of alpha_min(C(theta)) by exhaustion plus refinement.

    Scans a uniform grid over (-pi + eps, pi - eps), then golden-section
    refines the bracketing cell to 1e-12 width.  Grid ties break toward
    the smaller angle (argmin of the scan).
    """
    if grid_points < 1000:
        raise ValueError("grid_points must be at least 1e3")
    p, pp = normalized_ray_arrays(pairs)
    thetas = np.linspace(-np.pi + THETA_EDGE, np.pi - THETA_EDGE, grid_points)
    alphas = _alpha_min_batch(p, pp, thetas)
    k = int(np.argmin(alphas))
    best_grid = float(alphas[k])
    a = thetas[max(k - 1, 0)]
    b = thetas[min(k + 1, grid_points - 1)]

    # golden-section on the bracketing cell
    x1 = b - GOLDEN * (b - a)
    x2 = a + GOLDEN * (b - a)
    f1 = _alpha_min_single(p, pp, x1)
    f2 = _alpha_min_single(p, pp, x2)
    while b - a > 1e-12:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - GOLDEN * (b - a)
            f1 = _alpha_min_single(p, pp, x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + GOLDEN * (b - a)
            f2 = _alpha_min_single(p, pp, x2)
    theta_star = 0.5 * (a + b)
    alpha_star = _alpha_min_single(p, pp, theta_star)
    # refinement is monotone: never report worse than the grid scan
    if best_grid < alpha_star:
        theta_star, alpha_star = float(thetas[k]), best_grid
    return OracleResult(
        theta_star=float(theta_star),
        alpha_star=float(alpha_star),
        grid_resolution=grid_points,
        refined=True,
    )


def finite_diff_stationarity(pairs, y0: float, step: float) -> float:
    """Central finite-difference estimate of d(alpha_min)/dy at y0."""
    if step <= 0:
        raise ValueError("step must be positive")
    p, pp = normalized_ray_arrays(pairs)
    C = evaluate_c_batch(p, pp, np.array([y0 + step, y0 - step]))
    w = np.linalg.eigvalsh(C)[:, 0]
    return float((w[0] - w[1]) / (2.0 * step))

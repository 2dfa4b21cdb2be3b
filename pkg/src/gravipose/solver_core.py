"""Algebraic objects shared by the solvers: the polynomial constraint
matrix, the Gram polynomial system and its hidden-variable matrix, and
numeric evaluation of the 3x3 Gram matrix.

All constructions first rescale every aligned ray to unit norm.  The
homogeneous scale of each ray is free, and unit norms bound the Gram
coefficients, which is what keeps the exact divisions by powers of
delta = 1 + y^2 well conditioned.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._numeric import cross_rows
from .algebra import DELTA, Poly, PolyMat, poly_exact_divide
from .geometry import cayley_rotation, pairs_to_arrays


@dataclass
class CSystem:
    """The six univariate polynomials defining the stationary-point system.

    g1, g2, g3 are the delta-cleared trace, 2x2-minor sum and determinant
    of the Gram matrix (degrees <= 4, 6, 8); h1, h2, h3 are their cleared
    derivatives (same degree bounds, leading terms cancel).
    """

    g1: Poly
    g2: Poly
    g3: Poly
    h1: Poly
    h2: Poly
    h3: Poly
    n_points: int


def normalized_ray_arrays(pairs):
    """(N, 3) arrays of unit-normalized aligned rays."""
    p, pp = pairs_to_arrays(pairs)
    p = p / np.linalg.norm(p, axis=1, keepdims=True)
    pp = pp / np.linalg.norm(pp, axis=1, keepdims=True)
    return p, pp


def _atilde_coeffs(p: np.ndarray, pp: np.ndarray) -> np.ndarray:
    """Coefficient tensor (N, 3, 3): [pair, component, power of y].

    Column i of the scaled constraint matrix is
    [p'_i]_x (delta R_y) p_i, quadratic in y per component.
    """
    n = p.shape[0]
    x, yy, z = p[:, 0], p[:, 1], p[:, 2]
    V = np.zeros((n, 3, 3))
    V[:, 0, 0] = x
    V[:, 0, 1] = 2.0 * z
    V[:, 0, 2] = -x
    V[:, 1, 0] = yy
    V[:, 1, 2] = yy
    V[:, 2, 0] = z
    V[:, 2, 1] = -2.0 * x
    V[:, 2, 2] = -z
    S = np.zeros((n, 3, 3))
    S[:, 0, 1] = -pp[:, 2]
    S[:, 0, 2] = pp[:, 1]
    S[:, 1, 0] = pp[:, 2]
    S[:, 1, 2] = -pp[:, 0]
    S[:, 2, 0] = -pp[:, 1]
    S[:, 2, 1] = pp[:, 0]
    return np.einsum("nij,njk->nik", S, V)


def _gram_coeffs(A: np.ndarray) -> np.ndarray:
    """Entries of A~ A~^T as coefficient arrays, shape (3, 3, 2P-1)."""
    T = np.einsum("nar,nbs->abrs", A, A)
    P = A.shape[2]
    out = np.zeros((3, 3, 2 * P - 1))
    for r in range(P):
        for s in range(P):
            out[:, :, r + s] += T[:, :, r, s]
    return out


def build_a_tilde(pairs) -> PolyMat:
    """The 3xN polynomial constraint matrix (entries of degree <= 2).

    Evaluating at y0 and dividing by 1 + y0^2 reproduces the numeric
    constraint columns.
    """
    p, pp = normalized_ray_arrays(pairs)
    A = _atilde_coeffs(p, pp)
    n = p.shape[0]
    entries = [Poly(A[i, comp]) for comp in range(3) for i in range(n)]
    return PolyMat(3, n, entries)


def _conv(a, b):
    return np.convolve(a, b)


def build_c_system(pairs) -> CSystem:
    """Gram polynomial system from N >= 4 aligned pairs.

    The minor sum and determinant are assembled from the six distinct
    Gram entries directly (symmetry halves the multiplication count) and
    the delta powers are divided out exactly.
    """
    if len(pairs) < 4:
        raise ValueError("need at least 4 correspondences")
    p, pp = normalized_ray_arrays(pairs)
    A = _atilde_coeffs(p, pp)
    c = _gram_coeffs(A)
    c00, c11, c22 = c[0, 0], c[1, 1], c[2, 2]
    c01, c02, c12 = c[0, 1], c[0, 2], c[1, 2]

    g1 = Poly(c00 + c11 + c22)
    minors = (_conv(c00, c11) - _conv(c01, c01)
              + _conv(c00, c22) - _conv(c02, c02)
              + _conv(c11, c22) - _conv(c12, c12))
    det = (_conv(_conv(c00, c11), c22)
           + 2.0 * _conv(_conv(c01, c02), c12)
           - _conv(c00, _conv(c12, c12))
           - _conv(c11, _conv(c02, c02))
           - _conv(c22, _conv(c01, c01)))
    g2, _ = poly_exact_divide(Poly(minors), DELTA)
    g3, _ = poly_exact_divide(Poly(det), DELTA * DELTA)
    return CSystem(
        g1=g1, g2=g2, g3=g3,
        h1=derivative_identity(g1, 4),
        h2=derivative_identity(g2, 6),
        h3=derivative_identity(g3, 8),
        n_points=len(pairs),
    )


def derivative_identity(g: Poly, k: int) -> Poly:
    """h = g' * delta - k y g; the degree-k leading terms cancel."""
    c = g.c
    n = c.size
    out = np.zeros(n + 1)
    gp = c[1:] * np.arange(1, n)
    out[: n - 1] += gp          # g'
    out[2: n + 1] += gp         # y^2 g'
    out[1: n + 1] -= k * c      # k y g
    return Poly(out)


def build_b_matrix(sys: CSystem) -> PolyMat:
    """The 5x5 hidden-variable matrix acting on [1, b, b^2, b^3, b^4]."""
    g1, g2, g3 = sys.g1, sys.g2, sys.g3
    h1, h2, h3 = sys.h1, sys.h2, sys.h3
    z = Poly.zero()
    return PolyMat.from_rows([
        [-g3, g2, -g1, DELTA, z],
        [h3, -h2, h1, z, z],
        [z, -g3, g2, -g1, DELTA],
        [z, h3, -h2, h1, z],
        [z, z, h3, -h2, h1],
    ])


def evaluate_c(pairs, y0: float) -> np.ndarray:
    """Numeric 3x3 Gram matrix C = A A^T at y0 (unit-normalized rays)."""
    p, pp = normalized_ray_arrays(pairs)
    return evaluate_c_arrays(p, pp, y0)


def evaluate_c_arrays(p: np.ndarray, pp: np.ndarray, y0: float) -> np.ndarray:
    R = cayley_rotation(y0)
    a = cross_rows(pp, p @ R.T)
    return a.T @ a


def _gram_batch_cs(p, pp, ca, sa):
    """Gram matrices for per-candidate rotation (cos, sin) arrays."""
    K = ca.size
    rp = np.empty((K, p.shape[0], 3))
    rp[:, :, 0] = ca[:, None] * p[:, 0] + sa[:, None] * p[:, 2]
    rp[:, :, 1] = p[:, 1]
    rp[:, :, 2] = -sa[:, None] * p[:, 0] + ca[:, None] * p[:, 2]
    a = cross_rows(pp[None, :, :], rp)
    return np.einsum("kni,knj->kij", a, a)


def evaluate_c_batch(p: np.ndarray, pp: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Gram matrices for a batch of y values, shape (K, 3, 3)."""
    ys = np.asarray(ys, dtype=np.float64)
    d = 1.0 + ys * ys
    return _gram_batch_cs(p, pp, (1.0 - ys * ys) / d, 2.0 * ys / d)


def theta_gram_batch(p: np.ndarray, pp: np.ndarray, thetas: np.ndarray) -> np.ndarray:
    """Gram matrices for a batch of rotation angles, shape (K, 3, 3)."""
    thetas = np.asarray(thetas, dtype=np.float64)
    return _gram_batch_cs(p, pp, np.cos(thetas), np.sin(thetas))

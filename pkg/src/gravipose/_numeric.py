"""Compiled numeric kernels for the solver hot paths.

The expanded hidden-variable determinants are badly conditioned in the
monomial basis: near the objective minimum their value drops many orders
below the float64 evaluation noise floor, so roots read off the expanded
coefficients can be displaced.  Evaluating the determinant matrix-wise
(polynomial entries + LU) is backward stable at the matrix level, which
is the same accuracy class as the companion eigenvalue path.  These
kernels provide that evaluation, sign-scan root capture, bracket
polishing, and a closed-form smallest-eigenvalue refinement step.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, inline="always")
def _eval_det(coef, y):
    """det of sum_k y^k coef[k] via Horner on matrices then 5x5-max LU."""
    d = coef.shape[0] - 1
    n = coef.shape[1]
    M = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            v = coef[d, i, j]
            for k in range(d - 1, -1, -1):
                v = v * y + coef[k, i, j]
            M[i, j] = v
    det = 1.0
    for c in range(n):
        piv = c
        big = abs(M[c, c])
        for r in range(c + 1, n):
            if abs(M[r, c]) > big:
                big = abs(M[r, c])
                piv = r
        if big == 0.0:
            return 0.0
        if piv != c:
            for j in range(n):
                tmp = M[c, j]
                M[c, j] = M[piv, j]
                M[piv, j] = tmp
            det = -det
        det *= M[c, c]
        inv = 1.0 / M[c, c]
        for r in range(c + 1, n):
            f = M[r, c] * inv
            if f != 0.0:
                for j in range(c + 1, n):
                    M[r, j] -= f * M[c, j]
    return det


@njit(cache=True)
def _bisect_det(coef, a, b, fa, fb, max_iter=80):
    for _ in range(max_iter):
        m = 0.5 * (a + b)
        if b - a <= 1e-12 * max(1.0, abs(m)):
            break
        fm = _eval_det(coef, m)
        if fm == 0.0:
            return m
        if (fm > 0.0) == (fa > 0.0):
            a, fa = m, fm
        else:
            b, fb = m, fm
    return 0.5 * (a + b)


@njit(cache=True)
def det_scan_roots(coef, grid):
    """Sign-change roots of the matrix determinant along a sorted grid."""
    K = grid.shape[0]
    roots = np.empty(K)
    nr = 0
    fprev = _eval_det(coef, grid[0])
    for k in range(1, K):
        f = _eval_det(coef, grid[k])
        if f == 0.0:
            roots[nr] = grid[k]
            nr += 1
        elif fprev != 0.0 and (f > 0.0) != (fprev > 0.0):
            roots[nr] = _bisect_det(coef, grid[k - 1], grid[k], fprev, f)
            nr += 1
        fprev = f
    return roots[:nr]


@njit(cache=True)
def bracket_polish(coef, x0, w0, wmax):
    """Re-anchor an approximate root on the matrix determinant.

    Expands a bracket around x0 until the determinant changes sign, then
    bisects; returns x0 unchanged when no sign change is found (even
    multiplicity or spurious isolate).
    """
    w = w0
    f0 = _eval_det(coef, x0)
    while w <= wmax:
        a = x0 - w
        b = x0 + w
        fa = _eval_det(coef, a)
        fb = _eval_det(coef, b)
        if fa != 0.0 and fb != 0.0 and (fa > 0.0) != (fb > 0.0):
            return _bisect_det(coef, a, b, fa, fb)
        w *= 4.0
    return x0


@njit(cache=True, inline="always")
def _sym3_alpha_min(c00, c01, c02, c11, c12, c22):
    """Smallest eigenvalue of a symmetric 3x3, trigonometric closed form."""
    q = (c00 + c11 + c22) / 3.0
    d00 = c00 - q
    d11 = c11 - q
    d22 = c22 - q
    p2 = d00 * d00 + d11 * d11 + d22 * d22 + 2.0 * (
        c01 * c01 + c02 * c02 + c12 * c12)
    if p2 <= 0.0:
        return q
    p = np.sqrt(p2 / 6.0)
    inv = 1.0 / p
    b00 = d00 * inv
    b11 = d11 * inv
    b22 = d22 * inv
    b01 = c01 * inv
    b02 = c02 * inv
    b12 = c12 * inv
    detb = (b00 * (b11 * b22 - b12 * b12)
            - b01 * (b01 * b22 - b12 * b02)
            + b02 * (b01 * b12 - b11 * b02))
    r = 0.5 * detb
    if r <= -1.0:
        phi = np.pi / 3.0
    elif r >= 1.0:
        phi = 0.0
    else:
        phi = np.arccos(r) / 3.0
    # smallest eigenvalue uses phi + 2*pi/3
    return q + 2.0 * p * np.cos(phi + 2.0 * np.pi / 3.0)


@njit(cache=True, inline="always")
def _alpha_at_theta(G6, theta):
    c = np.cos(theta)
    s = np.sin(theta)
    w = np.empty(6)
    w[0] = c * c      # UU
    w[1] = s * s      # VV
    w[2] = 1.0        # WW
    w[3] = c * s      # UV (pre-symmetrized)
    w[4] = c          # UW
    w[5] = s          # VW
    c00 = 0.0
    c01 = 0.0
    c02 = 0.0
    c11 = 0.0
    c12 = 0.0
    c22 = 0.0
    for k in range(6):
        wk = w[k]
        c00 += wk * G6[k, 0, 0]
        c01 += wk * G6[k, 0, 1]
        c02 += wk * G6[k, 0, 2]
        c11 += wk * G6[k, 1, 1]
        c12 += wk * G6[k, 1, 2]
        c22 += wk * G6[k, 2, 2]
    return _sym3_alpha_min(c00, c01, c02, c11, c12, c22)


@njit(cache=True)
def refine_alpha_theta(G6, theta0, halfwidth):
    """Local minimum of the smallest-eigenvalue objective near theta0.

    Fine scan over the window, then golden-section on the best cell; the
    window is a few scan cells wide so near-coincident stationary points
    collapse onto the lowest one.
    """
    M = 33
    lo = theta0 - halfwidth
    hi = theta0 + halfwidth
    best = 0
    fbest = np.inf
    for k in range(M):
        t = lo + (hi - lo) * k / (M - 1)
        f = _alpha_at_theta(G6, t)
        if f < fbest:
            fbest = f
            best = k
    step = (hi - lo) / (M - 1)
    a = lo + step * (best - 1)
    b = lo + step * (best + 1)
    g = 0.6180339887498949
    x1 = b - g * (b - a)
    x2 = a + g * (b - a)
    f1 = _alpha_at_theta(G6, x1)
    f2 = _alpha_at_theta(G6, x2)
    while b - a > 1e-13:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - g * (b - a)
            f1 = _alpha_at_theta(G6, x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + g * (b - a)
            f2 = _alpha_at_theta(G6, x2)
    t = 0.5 * (a + b)
    return t, _alpha_at_theta(G6, t)


@njit(cache=True)
def _detp_rec(coef, rows, nact, colmask):
    """Laplace expansion of det of a polynomial matrix, along the active
    column with the most zero entries; coef is (d+1, n, n)."""
    d1 = coef.shape[0]
    n = coef.shape[1]
    out = np.zeros(n * (d1 - 1) + 1)
    if nact == 1:
        for c in range(n):
            if colmask & (1 << c):
                for k in range(d1):
                    out[k] = coef[k, rows[0], c]
                return out
        return out
    bestc = -1
    bestz = -1
    for c in range(n):
        if colmask & (1 << c):
            z = 0
            for ri in range(nact):
                nz = False
                for k in range(d1):
                    if coef[k, rows[ri], c] != 0.0:
                        nz = True
                        break
                if not nz:
                    z += 1
            if z > bestz:
                bestz = z
                bestc = c
    pos_c = 0
    for c in range(bestc):
        if colmask & (1 << c):
            pos_c += 1
    sub = np.empty(nact - 1, dtype=np.int64)
    for ri in range(nact):
        r = rows[ri]
        nz = False
        for k in range(d1):
            if coef[k, r, bestc] != 0.0:
                nz = True
                break
        if not nz:
            continue
        idx = 0
        for rj in range(nact):
            if rj != ri:
                sub[idx] = rows[rj]
                idx += 1
        minor = _detp_rec(coef, sub, nact - 1, colmask & ~(1 << bestc))
        s = 1.0 if (ri + pos_c) % 2 == 0 else -1.0
        for k1 in range(d1):
            v = coef[k1, r, bestc]
            if v != 0.0:
                sv = s * v
                for k2 in range(out.shape[0] - k1):
                    m = minor[k2]
                    if m != 0.0:
                        out[k1 + k2] += sv * m
    return out


@njit(cache=True)
def det_poly_coef(coef):
    """Coefficients of det(sum_k y^k coef[k]), ascending powers."""
    n = coef.shape[1]
    rows = np.arange(n)
    return _detp_rec(coef, rows, n, (1 << n) - 1)


def cross_rows(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Row-wise cross product without np.cross's axis shuffling."""
    out = np.empty(np.broadcast_shapes(a.shape, b.shape))
    out[..., 0] = a[..., 1] * b[..., 2] - a[..., 2] * b[..., 1]
    out[..., 1] = a[..., 2] * b[..., 0] - a[..., 0] * b[..., 2]
    out[..., 2] = a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]
    return out


def gram_blocks(p: np.ndarray, pp: np.ndarray) -> np.ndarray:
    """Six symmetric 3x3 blocks so that C(theta) is their trig combination.

    Columns are a_i = cos t * u_i + sin t * v_i + w_i with u, v, w the
    images of the rays under the rotation's cos/sin/constant parts.
    """
    u = cross_rows(pp, p * np.array([1.0, 0.0, 1.0]))
    vpart = np.empty_like(p)
    vpart[:, 0] = p[:, 2]
    vpart[:, 1] = 0.0
    vpart[:, 2] = -p[:, 0]
    v = cross_rows(pp, vpart)
    w = cross_rows(pp, p * np.array([0.0, 1.0, 0.0]))
    G = np.empty((6, 3, 3))
    G[0] = u.T @ u
    G[1] = v.T @ v
    G[2] = w.T @ w
    G[3] = u.T @ v + v.T @ u
    G[4] = u.T @ w + w.T @ u
    G[5] = v.T @ w + w.T @ v
    return G

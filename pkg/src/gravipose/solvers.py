"""Relative-pose solvers: globally optimal (Sturm / polynomial-eigenvalue
paths), linearized small-rotation, planar-motion, minimal 3-point and the
normalized 8-point baseline.

Root finding happens at two levels of representation.  The companion
(PEP) paths work directly on the 5x5 coefficient matrices and are stable.
The Sturm paths isolate roots of the expanded determinant, whose monomial
coefficients cannot represent the roots near the objective minimum to
full precision; every Sturm-path root is therefore re-anchored by sign
bisection on the matrix-level determinant (polynomial entries + LU),
which restores companion-level accuracy, and a dense sign scan catches
crossings that the expansion loses outright.
"""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass, field

import numpy as np

from ._numeric import (bracket_polish, det_poly_coef, det_scan_roots,
                       gram_blocks, refine_alpha_theta)
from .algebra import (DELTA, Poly, PolyMat, poly_exact_divide, polymat_det,
                      real_eigenvalues, sturm_real_roots)
from .exceptions import DegenerateInput, NumericalFailure
from .geometry import (RelativePose, cheirality_resolve_arrays,
                       compose_pose)
from .solver_core import (build_a_tilde, build_b_matrix, build_c_system,
                          derivative_identity, evaluate_c_batch,
                          normalized_ray_arrays, _atilde_coeffs,
                          _gram_coeffs, _conv)

# |y| beyond tan(89.5 deg) means theta within a degree of the Cayley
# degeneracy at 180 deg; such candidates are kept but flagged.
NEAR_DEGENERATE_Y = np.tan(np.radians(89.5))

# Guard evaluations at the parameterization boundary theta = +-(pi - 1e-6).
GUARD_THETAS = (np.pi - 1e-6, -(np.pi - 1e-6))

# Spurious companion eigenvalues: |z| below this is treated as z = 0.
PEP_Z_EPS = 1e-10

# Deterministic variable shifts used when the constant coefficient matrix
# of the companion construction is (nearly) singular.
PEP_SHIFTS = (0.125, -0.1875, 0.3125)

# Sign-scan resolution (cells over the rotation circle) for the
# matrix-determinant rescue pass of the Sturm paths.
SCAN_CELLS = 512


@dataclass
class PoseCandidate:
    """One stationary-point candidate of the smallest-eigenvalue objective."""

    y: float
    theta: float
    alpha_min: float
    t_aligned: np.ndarray
    near_degenerate: bool = False


@dataclass
class SolverReport:
    best: RelativePose
    candidates: list[PoseCandidate] = field(default_factory=list)
    method: str = ""
    timing_us: float = 0.0


def _coef_stack(mat: PolyMat) -> np.ndarray:
    return np.ascontiguousarray(np.stack(mat.coefficient_matrices()))


def _dedupe_sorted(vals: np.ndarray, rel: float = 1e-7) -> np.ndarray:
    if vals.size < 2:
        return vals
    vals = np.sort(vals)
    keep = [vals[0]]
    for v in vals[1:]:
        if v - keep[-1] > rel * (1.0 + abs(v)):
            keep.append(v)
    return np.asarray(keep)


def _theta_grid(cells: int = SCAN_CELLS) -> np.ndarray:
    edge = np.pi / cells
    return np.linspace(-np.pi + edge, np.pi - edge, cells)


def _sturm_path_roots(coef: np.ndarray, in_theta: bool) -> np.ndarray:
    """Sturm isolation on the expanded determinant, re-anchored on the
    matrix determinant, plus a dense sign scan for lost crossings."""
    det = Poly(det_poly_coef(coef))
    grid = _theta_grid()
    if not in_theta:
        grid = np.tan(0.5 * grid)
    scan = det_scan_roots(coef, grid)
    roots = list(scan)
    for r in sturm_real_roots(det):
        if scan.size and np.min(np.abs(scan - r)) <= 1e-4 * (1.0 + abs(r)):
            continue
        roots.append(float(bracket_polish(coef, float(r),
                                          1e-9 * (1.0 + abs(r)),
                                          3e-2 * (1.0 + abs(r)))))
    return _dedupe_sorted(np.asarray(roots, dtype=np.float64))


def _pep_real_roots(mat: PolyMat, expected_size: int, coef=None):
    """Real roots of det(mat(y)) via the block companion of the PEP.

    The PEP sum_k y^k M_k w = 0 is linearized with z = 1/y; columns of the
    companion that are identically zero (monomials never produced by the
    coefficient matrices) are removed together with their rows, which
    strips the structurally spurious zero eigenvalues.
    """
    Mk = mat.coefficient_matrices()
    d = len(Mk) - 1
    n = mat.rows
    if d < 1:
        return np.empty(0)
    scale = max(np.max(np.abs(M)) for M in Mk)
    if scale == 0.0:
        return np.empty(0)

    shift = 0.0
    smin = np.linalg.svd(Mk[0], compute_uv=False)[-1]
    if smin < 1e-12 * scale:
        for s in PEP_SHIFTS:
            Mk_s = mat.shift(s).coefficient_matrices()
            if len(Mk_s) - 1 < 1:
                continue
            if np.linalg.svd(Mk_s[0], compute_uv=False)[-1] >= 1e-12 * scale:
                Mk, d, shift = Mk_s, len(Mk_s) - 1, s
                break
        else:
            raise NumericalFailure("constant coefficient matrix singular "
                                   "for every fallback shift")

    B0inv = np.linalg.inv(Mk[0])
    m = n * d
    D = np.zeros((m, m))
    if m > n:
        D[: m - n, n:] = np.eye(m - n)
    for j in range(d):
        D[m - n:, j * n:(j + 1) * n] = -B0inv @ Mk[d - j]

    # cascade removal of identically-zero columns (with matching rows)
    while True:
        zero_cols = np.nonzero(np.max(np.abs(D), axis=0) == 0.0)[0]
        if zero_cols.size == 0:
            break
        keep = np.setdiff1d(np.arange(D.shape[0]), zero_cols)
        D = D[np.ix_(keep, keep)]
    if D.shape[0] != expected_size:
        warnings.warn(
            f"companion reduced to {D.shape[0]}x{D.shape[0]}, "
            f"expected {expected_size}x{expected_size}",
            RuntimeWarning,
        )
    z = real_eigenvalues(D).real_eigenvalues
    z = z[np.abs(z) > PEP_Z_EPS]
    roots = 1.0 / z + shift
    if coef is not None:
        roots = np.array([
            float(bracket_polish(coef, float(r), 1e-9 * (1.0 + abs(r)),
                                 3e-2 * (1.0 + abs(r))))
            for r in roots
        ])
        roots = _dedupe_sorted(roots)
    return roots


def _select_best(p, pp, ys, alphas, ts, eigs):
    """Index of the minimal-alpha candidate; near-ties (within
    1e-12 * trace) break toward the larger positive-depth count."""
    order = np.argsort(alphas)
    best = order[0]
    trace = float(np.sum(eigs[best]))
    tied = [i for i in order
            if alphas[i] <= alphas[best] + 1e-12 * max(trace, 1e-300)]
    if len(tied) > 1:
        counts = []
        for i in tied:
            _, cnt, _ = cheirality_resolve_arrays(p, pp, float(ys[i]), ts[i])
            counts.append(cnt)
        best = tied[int(np.argmax(counts))]
    return int(best)


def _finalize(p, pp, y_best, t_best, alpha_best, eig_best, R, R_prime):
    trace = float(np.sum(eig_best))
    if eig_best[1] <= 1e-10 * max(trace, 1e-300):
        raise DegenerateInput(
            "Gram matrix has rank < 2 at the optimum; translation "
            "direction is unobservable (pure rotation or collinear points)"
        )
    t_signed, _, _ = cheirality_resolve_arrays(p, pp, y_best, t_best)
    R = np.eye(3) if R is None else R
    R_prime = np.eye(3) if R_prime is None else R_prime
    return compose_pose(y_best, t_signed, R, R_prime, score=alpha_best)


def _make_candidates(ys, alphas, ts, n_real):
    return [
        PoseCandidate(
            y=float(ys[i]),
            theta=2.0 * float(np.arctan(ys[i])),
            alpha_min=float(alphas[i]),
            t_aligned=ts[i],
            near_degenerate=bool(abs(ys[i]) > NEAR_DEGENERATE_Y),
        )
        for i in range(n_real)
    ]


def solve_opt(pairs, method: str = "pep", R=None, R_prime=None) -> SolverReport:
    """Globally optimal estimate from N >= 4 aligned pairs.

    method='sturm' isolates the real roots of the degree-28 hidden-variable
    determinant; method='pep' takes the real eigenvalues of the reduced
    34x34 companion (falling back to the Sturm path on numerical failure).
    Every interior stationary point of the smallest-eigenvalue objective is
    among the scored candidates; the selected one is polished by a local
    search of the objective itself.
    """
    if method not in ("sturm", "pep"):
        raise ValueError(f"unknown method {method!r}")
    if len(pairs) < 4:
        raise ValueError("solve_opt needs at least 4 correspondences")
    t0 = time.perf_counter()
    p, pp = normalized_ray_arrays(pairs)
    sys = build_c_system(pairs)
    B = build_b_matrix(sys)
    coef = _coef_stack(B)
    if method == "pep":
        try:
            ys = _pep_real_roots(B, expected_size=34)
        except NumericalFailure:
            ys = _sturm_path_roots(coef, in_theta=False)
    else:
        ys = _sturm_path_roots(coef, in_theta=False)
    n_real = len(ys)
    ys = np.concatenate([ys, [np.tan(t / 2.0) for t in GUARD_THETAS]])

    C = evaluate_c_batch(p, pp, ys)
    eigs, vecs = np.linalg.eigh(C)
    alphas = eigs[:, 0]
    ts = vecs[:, :, 0]
    best = _select_best(p, pp, ys, alphas, ts, eigs)
    candidates = _make_candidates(ys, alphas, ts, n_real)

    # local polish of the objective around the winning stationary point
    G6 = gram_blocks(p, pp)
    theta_best = 2.0 * float(np.arctan(ys[best]))
    halfwidth = 4.0 * (2.0 * np.pi / SCAN_CELLS)
    theta_ref, _ = refine_alpha_theta(G6, theta_best, halfwidth)
    y_ref = np.tan(0.5 * theta_ref)
    Cb = evaluate_c_batch(p, pp, np.array([y_ref]))[0]
    wb, vb = np.linalg.eigh(Cb)
    if wb[0] <= alphas[best]:
        y_fin, alpha_fin, t_fin, eig_fin = y_ref, float(wb[0]), vb[:, 0], wb
    else:
        y_fin, alpha_fin, t_fin, eig_fin = (float(ys[best]),
                                            float(alphas[best]),
                                            ts[best], eigs[best])
    pose = _finalize(p, pp, float(y_fin), t_fin, alpha_fin, eig_fin, R,
                     R_prime)
    return SolverReport(best=pose, candidates=candidates,
                        method=f"opt-{method}",
                        timing_us=(time.perf_counter() - t0) * 1e6)


def _lin_system(p, pp):
    """First-order system: Gram entries quadratic in theta."""
    n = p.shape[0]
    x, yy, z = p[:, 0], p[:, 1], p[:, 2]
    V = np.zeros((n, 3, 2))
    V[:, 0, 0] = x
    V[:, 0, 1] = z
    V[:, 1, 0] = yy
    V[:, 2, 0] = z
    V[:, 2, 1] = -x
    S = np.zeros((n, 3, 3))
    S[:, 0, 1] = -pp[:, 2]
    S[:, 0, 2] = pp[:, 1]
    S[:, 1, 0] = pp[:, 2]
    S[:, 1, 2] = -pp[:, 0]
    S[:, 2, 0] = -pp[:, 1]
    S[:, 2, 1] = pp[:, 0]
    A = np.einsum("nij,njk->nik", S, V)
    c = _gram_coeffs(A)  # products of linear entries: degree <= 2
    c00, c11, c22 = c[0, 0], c[1, 1], c[2, 2]
    c01, c02, c12 = c[0, 1], c[0, 2], c[1, 2]
    f1 = Poly(c00 + c11 + c22)
    f2 = Poly(_conv(c00, c11) - _conv(c01, c01)
              + _conv(c00, c22) - _conv(c02, c02)
              + _conv(c11, c22) - _conv(c12, c12))
    f3 = Poly(_conv(_conv(c00, c11), c22)
              + 2.0 * _conv(_conv(c01, c02), c12)
              - _conv(c00, _conv(c12, c12))
              - _conv(c11, _conv(c02, c02))
              - _conv(c22, _conv(c01, c01)))
    return f1, f2, f3


def build_lin_b_matrix(f1: Poly, f2: Poly, f3: Poly) -> PolyMat:
    """Hidden-variable matrix of the linearized stationary system."""
    d1, d2, d3 = f1.deriv(), f2.deriv(), f3.deriv()
    z = Poly.zero()
    one = Poly.one()
    return PolyMat.from_rows([
        [-f3, f2, -f1, one, z],
        [d3, -d2, d1, z, z],
        [z, -f3, f2, -f1, one],
        [z, d3, -d2, d1, z],
        [z, z, d3, -d2, d1],
    ])


def solve_lin(pairs, method: str = "pep", R=None, R_prime=None) -> SolverReport:
    """Linearized-rotation estimate, intended for small relative rotation.

    The rotation is replaced by its first-order expansion, giving a
    degree-15 determinant (sturm) or a 21x21 companion (pep).  Candidates
    are re-scored through the exact rotation model, and the reported
    rotation is rebuilt from the exact one-parameter form, so it is
    orthonormal even though the linearized model is not.
    """
    if method not in ("sturm", "pep"):
        raise ValueError(f"unknown method {method!r}")
    if len(pairs) < 4:
        raise ValueError("solve_lin needs at least 4 correspondences")
    t0 = time.perf_counter()
    p, pp = normalized_ray_arrays(pairs)
    f1, f2, f3 = _lin_system(p, pp)
    B = build_lin_b_matrix(f1, f2, f3)
    coef = _coef_stack(B)
    if method == "pep":
        try:
            thetas = _pep_real_roots(B, expected_size=21, coef=coef)
        except NumericalFailure:
            thetas = _sturm_path_roots(coef, in_theta=True)
    else:
        thetas = _sturm_path_roots(coef, in_theta=True)
    thetas = thetas[np.abs(thetas) <= np.pi]
    ys = np.tan(0.5 * thetas)
    n_real = len(ys)
    ys = np.concatenate([ys, [0.0]])  # theta = 0 fallback candidate

    C = evaluate_c_batch(p, pp, ys)
    eigs, vecs = np.linalg.eigh(C)
    alphas = eigs[:, 0]
    ts = vecs[:, :, 0]
    best = _select_best(p, pp, ys, alphas, ts, eigs)
    candidates = _make_candidates(ys, alphas, ts, n_real)
    pose = _finalize(p, pp, float(ys[best]), ts[best], float(alphas[best]),
                     eigs[best], R, R_prime)
    return SolverReport(best=pose, candidates=candidates,
                        method=f"lin-{method}",
                        timing_us=(time.perf_counter() - t0) * 1e6)


def _planar_system(p, pp):
    A = _atilde_coeffs(p, pp)
    c = _gram_coeffs(A)
    g1 = Poly(c[0, 0] + c[2, 2])
    det2 = Poly(_conv(c[0, 0], c[2, 2]) - _conv(c[0, 2], c[0, 2]))
    g2, _ = poly_exact_divide(det2, DELTA * DELTA)
    return g1, g2, derivative_identity(g1, 4), derivative_identity(g2, 4)


def _planar_sturm_roots(coef, q10):
    q8, _ = poly_exact_divide(q10, DELTA)
    grid = np.tan(0.5 * _theta_grid())
    scan = det_scan_roots(coef, grid)
    roots = list(scan)
    for r in sturm_real_roots(q8):
        if scan.size and np.min(np.abs(scan - r)) <= 1e-4 * (1.0 + abs(r)):
            continue
        roots.append(float(bracket_polish(coef, float(r),
                                          1e-9 * (1.0 + abs(r)),
                                          3e-2 * (1.0 + abs(r)))))
    return _dedupe_sorted(np.asarray(roots, dtype=np.float64))


def build_planar_matrix(g1: Poly, g2: Poly, h1: Poly, h2: Poly) -> PolyMat:
    """3x3 hidden-variable matrix of the planar system on [1, a, a^2]."""
    z = Poly.zero()
    return PolyMat.from_rows([
        [g2, -g1, DELTA * DELTA],
        [-h2, h1, z],
        [z, -h2, h1],
    ])


def solve_planar(pairs, method: str = "pep", R=None, R_prime=None) -> SolverReport:
    """Planar-motion estimate (translation constrained to t_y = 0).

    The middle row/column of the Gram matrix drops out; elimination gives a
    degree-8 univariate after removing both delta factors (sturm) or a
    10x10 companion of the once-reduced degree-10 polynomial (pep) -- the
    two extra companion roots are the complex delta pair and never produce
    real candidates, so at most 8 solutions remain.
    """
    if method not in ("sturm", "pep"):
        raise ValueError(f"unknown method {method!r}")
    if len(pairs) < 3:
        raise ValueError("solve_planar needs at least 3 correspondences")
    t0 = time.perf_counter()
    p, pp = normalized_ray_arrays(pairs)
    g1, g2, h1, h2 = _planar_system(p, pp)
    M = build_planar_matrix(g1, g2, h1, h2)
    coef = _coef_stack(M)
    detM = Poly(det_poly_coef(coef))
    q10, _ = poly_exact_divide(detM, DELTA)
    if method == "pep":
        try:
            ys = _pep_real_roots(PolyMat.from_rows([[q10]]), expected_size=10,
                                 coef=coef)
        except NumericalFailure:
            ys = _planar_sturm_roots(coef, q10)
    else:
        ys = _planar_sturm_roots(coef, q10)
    n_real = len(ys)
    ys = np.concatenate([ys, [np.tan(t / 2.0) for t in GUARD_THETAS]])

    C = evaluate_c_batch(p, pp, ys)
    C2 = C[:, [0, 2]][:, :, [0, 2]]
    w2, v2 = np.linalg.eigh(C2)
    alphas = w2[:, 0]
    ts = np.zeros((len(ys), 3))
    ts[:, 0] = v2[:, 0, 0]
    ts[:, 2] = v2[:, 1, 0]
    best = _select_best(p, pp, ys, alphas, ts, w2)
    candidates = _make_candidates(ys, alphas, ts, n_real)
    trace2 = float(np.sum(w2[best]))
    if w2[best, 1] <= 1e-10 * max(trace2, 1e-300):
        raise DegenerateInput("planar Gram matrix has rank < 2 at the optimum")
    t_signed, _, _ = cheirality_resolve_arrays(p, pp, float(ys[best]),
                                               ts[best])
    Rm = np.eye(3) if R is None else R
    Rpm = np.eye(3) if R_prime is None else R_prime
    pose = compose_pose(float(ys[best]), t_signed, Rm, Rpm,
                        score=float(alphas[best]))
    return SolverReport(best=pose, candidates=candidates, method="planar",
                        timing_us=(time.perf_counter() - t0) * 1e6)


def solve_minimal_3pc(pairs, R=None, R_prime=None) -> SolverReport:
    """Minimal 3-point hypothesis generator: up to 4 solutions.

    det of the 3x3 polynomial constraint matrix is degree 6 with one exact
    delta factor; the degree-4 quotient is solved by Sturm bisection.  The
    translation per root is the null direction of the evaluated constraint
    matrix.  All candidates are returned; 'best' is chosen by positive-depth
    count (callers doing robust estimation should score all candidates).
    """
    if len(pairs) != 3:
        raise ValueError("solve_minimal_3pc needs exactly 3 correspondences")
    t0 = time.perf_counter()
    p, pp = normalized_ray_arrays(pairs)
    A = _atilde_coeffs(p, pp)        # (pair, component, power)
    coef = np.ascontiguousarray(A.transpose(2, 1, 0))  # (power, row, col)
    detA = Poly(det_poly_coef(coef))
    if detA.degree < 1:
        raise DegenerateInput("constraint determinant degenerates; "
                              "aligned ray pairs are linearly dependent")
    q4, _ = poly_exact_divide(detA, DELTA)
    ys = sturm_real_roots(q4)
    candidates = []
    col_scale = float(np.max(np.abs(A)))
    for y0 in ys:
        A3 = coef[0] + coef[1] * y0 + coef[2] * (y0 * y0)
        cols = [A3[:, i] for i in range(3)]
        crosses = [np.cross(cols[i], cols[j]) for i, j in ((0, 1), (0, 2), (1, 2))]
        norms = [np.linalg.norm(cv) for cv in crosses]
        k = int(np.argmax(norms))
        if norms[k] < 1e-12 * col_scale**2:
            continue
        t = crosses[k] / norms[k]
        C = evaluate_c_batch(p, pp, np.array([y0]))[0]
        w = np.linalg.eigvalsh(C)
        candidates.append(PoseCandidate(
            y=float(y0),
            theta=2.0 * float(np.arctan(y0)),
            alpha_min=float(w[0]),
            t_aligned=t,
            near_degenerate=bool(abs(y0) > NEAR_DEGENERATE_Y),
        ))
    if not candidates:
        raise DegenerateInput("no valid minimal solution; "
                              "aligned ray pairs are linearly dependent")
    scored = []
    for cand in candidates:
        t_signed, cnt, _ = cheirality_resolve_arrays(p, pp, cand.y,
                                                     cand.t_aligned)
        scored.append((cnt, -cand.alpha_min, cand, t_signed))
    scored.sort(key=lambda s: (s[0], s[1]), reverse=True)
    _, _, best, t_signed = scored[0]
    Rm = np.eye(3) if R is None else R
    Rpm = np.eye(3) if R_prime is None else R_prime
    pose = compose_pose(best.y, t_signed, Rm, Rpm, score=best.alpha_min)
    return SolverReport(best=pose, candidates=candidates, method="3pc",
                        timing_us=(time.perf_counter() - t0) * 1e6)


# ---------------------------------------------------------------------------
# Normalized 8-point baseline (ignores the gravity prior)
# ---------------------------------------------------------------------------


def _hartley_normalize(m: np.ndarray):
    """Similarity transform: centroid to origin, mean distance sqrt(2)."""
    uv = m[:, :2] / m[:, 2:3]
    centroid = uv.mean(axis=0)
    d = np.mean(np.linalg.norm(uv - centroid, axis=1))
    s = np.sqrt(2.0) / max(d, 1e-12)
    T = np.array([
        [s, 0.0, -s * centroid[0]],
        [0.0, s, -s * centroid[1]],
        [0.0, 0.0, 1.0],
    ])
    return (T @ m.T).T, T


def _depth_signs(Rc: np.ndarray, t: np.ndarray, m: np.ndarray, mp: np.ndarray):
    """Per-pair depths (lambda, lambda') for lambda' m' = lambda R m + t."""
    rm = m @ Rc.T
    a = np.einsum("ij,ij->i", rm, rm)
    b = -np.einsum("ij,ij->i", rm, mp)
    c = np.einsum("ij,ij->i", mp, mp)
    det = a * c - b * b
    det = np.where(np.abs(det) < 1e-30, 1e-30, det)
    u = -(rm @ t)
    v = mp @ t
    lam = (c * u - b * v) / det
    lamp = (a * v - b * u) / det
    return lam, lamp


def solve_8pt(corrs) -> SolverReport:
    """Normalized 8-point essential-matrix baseline.

    DLT on Hartley-normalized points, projection to the essential manifold
    (two equal singular values, third zero) and the standard 4-fold pose
    decomposition disambiguated by positive depth counts.
    """
    if len(corrs) < 8:
        raise ValueError("solve_8pt needs at least 8 correspondences")
    t0 = time.perf_counter()
    m = np.array([c.m for c in corrs], dtype=np.float64)
    mp = np.array([c.m_prime for c in corrs], dtype=np.float64)
    mn, T = _hartley_normalize(m)
    mpn, Tp = _hartley_normalize(mp)
    design = np.einsum("ni,nj->nij", mpn, mn).reshape(len(corrs), 9)
    _, sv, Vt = np.linalg.svd(design)
    if sv.size < 8 or sv[7] <= 1e-12 * sv[0]:
        raise DegenerateInput("rank-deficient design matrix")
    E = Vt[-1].reshape(3, 3)
    E = Tp.T @ E @ T
    U, S, Vt = np.linalg.svd(E)
    s = 0.5 * (S[0] + S[1])
    E = U @ np.diag([s, s, 0.0]) @ Vt
    # re-decompose the projected matrix
    U, _, Vt = np.linalg.svd(E)
    if np.linalg.det(U) < 0:
        U = -U
    if np.linalg.det(Vt) < 0:
        Vt = -Vt
    W = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
    R1 = U @ W @ Vt
    R2 = U @ W.T @ Vt
    tu = U[:, 2]
    best_pose, best_cnt = None, -1
    for Rc in (R1, R2):
        for tc in (tu, -tu):
            lam, lamp = _depth_signs(Rc, tc, m, mp)
            cnt = int(np.sum((lam > 0) & (lamp > 0)))
            if cnt > best_cnt:
                best_cnt = cnt
                best_pose = (Rc, tc)
    Rb, tb = best_pose
    resid = np.einsum("ni,ij,nj->n", mp, E, m)
    pose = RelativePose(R_rel=Rb, t_rel=tb / np.linalg.norm(tb),
                        score=float(np.mean(resid**2)))
    return SolverReport(best=pose, candidates=[], method="8pc",
                        timing_us=(time.perf_counter() - t0) * 1e6)

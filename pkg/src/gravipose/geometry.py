"""Camera-frame bookkeeping: gravity alignment, the one-parameter vertical
rotation, pose composition, cheirality and angular error metrics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

E_Y = np.array([0.0, 1.0, 0.0])


@dataclass(frozen=True)
class Correspondence:
    """A calibrated 2D-2D match; both points homogeneous with third
    coordinate exactly 1."""

    m: np.ndarray
    m_prime: np.ndarray

    @staticmethod
    def from_uv(u, v, u_prime, v_prime) -> "Correspondence":
        return Correspondence(
            np.array([u, v, 1.0]), np.array([u_prime, v_prime, 1.0])
        )


@dataclass(frozen=True)
class AlignedPair:
    """Gravity-aligned rays p = R m, p' = R' m'."""

    p: np.ndarray
    p_prime: np.ndarray


@dataclass
class RelativePose:
    """Relative pose; aligned-frame fields are None for solvers that do
    not use the gravity prior (the 8-point baseline)."""

    R_rel: np.ndarray
    t_rel: np.ndarray
    theta: float | None = None
    y: float | None = None
    t_aligned: np.ndarray | None = None
    score: float = 0.0


def skew(v: np.ndarray) -> np.ndarray:
    return np.array(
        [[0.0, -v[2], v[1]], [v[2], 0.0, -v[0]], [-v[1], v[0], 0.0]]
    )


def rotation_about_y(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def cayley_rotation(y: float) -> np.ndarray:
    """Rotation about the y-axis with y = tan(theta/2).

    Rational form; degenerate only at theta = +-pi, which the solvers
    exclude by construction.
    """
    d = 1.0 + y * y
    a = (1.0 - y * y) / d
    b = 2.0 * y / d
    return np.array([[a, 0.0, b], [0.0, 1.0, 0.0], [-b, 0.0, a]])


def gravity_to_rotation(g: np.ndarray) -> np.ndarray:
    """Minimal rotation R with R g = e_y for a unit gravity direction g.

    The antipodal case g = -e_y is tie-broken to a half-turn about the
    x-axis.
    """
    g = np.asarray(g, dtype=np.float64)
    n = np.linalg.norm(g)
    if abs(n - 1.0) > 1e-6:
        raise ValueError(f"gravity direction must be unit length, |g| = {n:.6g}")
    g = g / n
    c = float(np.dot(g, E_Y))
    axis = np.cross(g, E_Y)
    s = np.linalg.norm(axis)
    if s < 1e-12:
        if c > 0.0:
            return np.eye(3)
        # antipodal: half turn about x
        return np.diag([1.0, -1.0, -1.0])
    axis = axis / s
    K = skew(axis)
    # Rodrigues with sin = s, cos = c of the angle between g and e_y
    return np.eye(3) + s * K + (1.0 - c) * (K @ K)


def align_correspondences(corrs, R: np.ndarray, R_prime: np.ndarray):
    """Apply the per-camera alignment rotations to every match."""
    return [
        AlignedPair(R @ c.m, R_prime @ c.m_prime) for c in corrs
    ]


def pairs_to_arrays(pairs):
    """Stack aligned pairs into (N, 3) arrays (p, p_prime)."""
    p = np.array([q.p for q in pairs], dtype=np.float64)
    pp = np.array([q.p_prime for q in pairs], dtype=np.float64)
    return p, pp


def compose_pose(y: float, t_aligned: np.ndarray, R: np.ndarray,
                 R_prime: np.ndarray, score: float = 0.0) -> RelativePose:
    """Recompose the pose in the original camera frames.

    With aligned-frame estimates (R_y(y), t) the original-frame pose is
    R_rel = R'^T R_y R and t_rel = R'^T t, so lambda' m' = lambda R_rel m + t_rel.
    """
    t_aligned = np.asarray(t_aligned, dtype=np.float64)
    R_y = cayley_rotation(y)
    return RelativePose(
        R_rel=R_prime.T @ R_y @ R,
        t_rel=R_prime.T @ t_aligned,
        theta=2.0 * np.arctan(y),
        y=float(y),
        t_aligned=t_aligned,
        score=float(score),
    )


def decompose_pose(pose: RelativePose, R: np.ndarray, R_prime: np.ndarray):
    """Inverse of compose_pose: (theta, t_aligned) from original-frame pose."""
    R_y = R_prime @ pose.R_rel @ R.T
    theta = float(np.arctan2(R_y[0, 2], R_y[0, 0]))
    t_aligned = R_prime @ pose.t_rel
    return theta, t_aligned


def cheirality_resolve(pairs, y: float, t: np.ndarray):
    """Pick the translation sign yielding more positive depth pairs.

    Solves the 3x2 least-squares system lambda' p' = lambda R_y p + s t per
    pair for both signs s; ties break toward +1.  Returns
    (signed_t, positive_count, depths) with depths of shape (N, 2) holding
    (lambda, lambda') for the chosen sign.
    """
    p, pp = pairs_to_arrays(pairs)
    return cheirality_resolve_arrays(p, pp, y, t)


def cheirality_resolve_arrays(p: np.ndarray, pp: np.ndarray, y: float,
                              t: np.ndarray):
    R_y = cayley_rotation(y)
    rp = p @ R_y.T  # rows R_y p_i
    t = np.asarray(t, dtype=np.float64)

    # closed-form 2x2 normal equations per pair: [rp, -pp] [l, l']^T = -s t
    a = np.einsum("ij,ij->i", rp, rp)
    b = -np.einsum("ij,ij->i", rp, pp)
    c = np.einsum("ij,ij->i", pp, pp)
    det = a * c - b * b
    det = np.where(np.abs(det) < 1e-30, 1e-30, det)
    u = -(rp @ t)  # s = +1 right-hand side
    v = pp @ t
    lam = (c * u - b * v) / det
    lamp = (a * v - b * u) / det
    # for s = +1, depths (lam, lamp); s = -1 flips both (system is linear in s)
    pos_plus = int(np.sum((lam > 0) & (lamp > 0)))
    pos_minus = int(np.sum((-lam > 0) & (-lamp > 0)))
    if pos_minus > pos_plus:
        return -t, pos_minus, np.stack([-lam, -lamp], axis=1)
    return t, pos_plus, np.stack([lam, lamp], axis=1)


def rotation_error(R_g: np.ndarray, R_e: np.ndarray) -> float:
    """Angle between two rotations, in degrees."""
    c = (np.trace(R_g @ R_e.T) - 1.0) / 2.0
    return float(np.degrees(np.arccos(np.clip(c, -1.0, 1.0))))


def translation_error(t_g: np.ndarray, t_e: np.ndarray) -> float:
    """Angle between two translation directions, in degrees.

    Not sign-invariant: resolve cheirality before comparing.
    """
    t_g = np.asarray(t_g, dtype=np.float64)
    t_e = np.asarray(t_e, dtype=np.float64)
    c = np.dot(t_g, t_e) / (np.linalg.norm(t_g) * np.linalg.norm(t_e))
    return float(np.degrees(np.arccos(np.clip(c, -1.0, 1.0))))

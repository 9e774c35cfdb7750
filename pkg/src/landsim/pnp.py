"""Pose and intrinsics recovery from tag-corner correspondences.

Three solvers share the same building blocks:

- :func:`estimate_homography`: Hartley-normalized DLT mapping plane
  coordinates to pixel homogeneous coordinates.
- :func:`solve_pnp`: camera pose from 3D-2D correspondences under known
  intrinsics. Coplanar point sets (the tag-wall case) are initialized by
  homography decomposition, general sets by the 12-parameter DLT; both are
  refined by Gauss-Newton on the reprojection error with an axis-angle
  update.
- :func:`calibrate_intrinsics`: closed-form shared intrinsics from per-view
  homographies of a planar target.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import (
    DegenerateConfiguration,
    DegenerateMotion,
    InsufficientViews,
    NoConvergence,
)
from .geometry import (
    CameraIntrinsics,
    Correspondence,
    Pose,
    orthonormalize,
    rotation_from_axis_angle,
)

MAX_ITERATIONS = 50
STEP_TOL = 1e-10
COST_CHANGE_TOL = 1e-12
RANK_TOL = 1e-9


def _corr_arrays(correspondences: Sequence[Correspondence]):
    world = np.array([[c.world.x, c.world.y, c.world.z] for c in correspondences])
    pixels = np.array([[c.pixel.u, c.pixel.v] for c in correspondences])
    return world, pixels


def _normalize_2d(pts: np.ndarray):
    """Hartley normalization: centroid at origin, mean distance sqrt(2)."""
    mean = pts.mean(axis=0)
    dist = np.sqrt(((pts - mean) ** 2).sum(axis=1)).mean()
    s = np.sqrt(2.0) / dist if dist > 1e-12 else 1.0
    t = np.array([[s, 0.0, -s * mean[0]], [0.0, s, -s * mean[1]], [0.0, 0.0, 1.0]])
    return (pts - mean) * s, t


def _homography_dlt(src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    """DLT homography from (N,2) plane points to (N,2) pixels."""
    n = src.shape[0]
    if n < 4:
        raise DegenerateConfiguration("homography needs at least 4 correspondences")
    sn, ts = _normalize_2d(src)
    dn, td = _normalize_2d(dst)
    a = np.zeros((2 * n, 9))
    a[0::2, 0:2] = -sn
    a[0::2, 2] = -1.0
    a[0::2, 6:8] = dn[:, 0:1] * sn
    a[0::2, 8] = dn[:, 0]
    a[1::2, 3:5] = -sn
    a[1::2, 5] = -1.0
    a[1::2, 6:8] = dn[:, 1:2] * sn
    a[1::2, 8] = dn[:, 1]
    _, s, vt = np.linalg.svd(a)
    # Uniqueness up to scale needs rank 8. The system has min(2n, 9) singular
    # values, so the 8th (index 7) is the one that must stay away from zero.
    if s[7] < RANK_TOL * s[0]:
        raise DegenerateConfiguration("correspondences do not determine a unique homography")
    h = np.linalg.inv(td) @ vt[-1].reshape(3, 3) @ ts
    if abs(h[2, 2]) > 1e-12:
        h = h / h[2, 2]
    return h


def estimate_homography(correspondences: Sequence[Correspondence]) -> np.ndarray:
    """Plane-to-image homography from correspondences with world z = 0.

    The result maps (x, y, 1) plane coordinates to pixel homogeneous
    coordinates and is scaled so its bottom-right entry is 1 when nonzero.
    """
    world, pixels = _corr_arrays(correspondences)
    if world.shape[0] >= 1 and np.max(np.abs(world[:, 2])) > 1e-9:
        raise ValueError("estimate_homography expects world points on the z=0 plane")
    return _homography_dlt(world[:, :2], pixels)


def _plane_basis(world: np.ndarray):
    """Orthonormal in-plane basis (e1, e2) and centroid for coplanar points."""
    centroid = world.mean(axis=0)
    _, _, vt = np.linalg.svd(world - centroid)
    e1, e2 = vt[0], vt[1]
    return centroid, e1, e2


def _pose_from_planar(world, pixels, intrinsics: CameraIntrinsics):
    """Initial pose by homography decomposition for coplanar world points."""
    centroid, e1, e2 = _plane_basis(world)
    plane = np.column_stack([(world - centroid) @ e1, (world - centroid) @ e2])
    h = _homography_dlt(plane, pixels)
    b = np.linalg.inv(intrinsics.matrix) @ h
    scale = 2.0 / (np.linalg.norm(b[:, 0]) + np.linalg.norm(b[:, 1]))
    r1 = b[:, 0] * scale
    r2 = b[:, 1] * scale
    t = b[:, 2] * scale
    # Two sign choices map the plane either in front of or behind the camera;
    # keep the physically visible one.
    depths = plane @ np.vstack([r1[2], r2[2]]) + t[2]
    if depths.mean() < 0:
        r1, r2, t = -r1, -r2, -t
    rot_plane = orthonormalize(np.column_stack([r1, r2, np.cross(r1, r2)]))
    # Compose with the world->plane frame change (rows e1, e2, e1 x e2).
    frame = np.vstack([e1, e2, np.cross(e1, e2)])
    rotation = rot_plane @ frame
    translation = t - rotation @ centroid
    return rotation, translation


def _pose_from_dlt(world, pixels, intrinsics: CameraIntrinsics):
    """Initial pose from the general 12-parameter DLT (needs >= 6 points)."""
    n = world.shape[0]
    mean = world.mean(axis=0)
    scale = np.sqrt(((world - mean) ** 2).sum(axis=1)).mean()
    s3 = np.sqrt(3.0) / scale if scale > 1e-12 else 1.0
    wn = np.hstack([(world - mean) * s3, np.ones((n, 1))])
    tw = np.eye(4)
    tw[:3, :3] *= s3
    tw[:3, 3] = -s3 * mean
    pn, tp = _normalize_2d(pixels)
    a = np.zeros((2 * n, 12))
    a[0::2, 0:4] = wn
    a[0::2, 8:12] = -pn[:, 0:1] * wn
    a[1::2, 4:8] = wn
    a[1::2, 8:12] = -pn[:, 1:2] * wn
    _, s, vt = np.linalg.svd(a)
    if s[-2] < RANK_TOL * s[0]:
        raise DegenerateConfiguration("correspondences do not determine a unique projection")
    p = np.linalg.inv(tp) @ vt[-1].reshape(3, 4) @ tw
    # Strip the intrinsics; the third row of a normalized [R|t] is unit length.
    b = np.linalg.inv(intrinsics.matrix) @ p
    norm = np.linalg.norm(b[2, :3])
    if norm < 1e-12:
        raise DegenerateConfiguration("degenerate projection matrix")
    b = b / norm
    if (world @ b[2, :3] + b[2, 3]).mean() < 0:
        b = -b
    return orthonormalize(b[:, :3]), b[:, 3]


def _refine_pose(world, pixels, intrinsics: CameraIntrinsics, rotation, translation):
    """Gauss-Newton on the reprojection error; axis-angle rotation update."""
    a = intrinsics.matrix
    fx, fy, sk = intrinsics.fx, intrinsics.fy, intrinsics.skew
    rot = rotation.copy()
    t = translation.copy()
    n = world.shape[0]

    def residual(rot, t):
        cam = world @ rot.T + t
        proj = (cam @ a.T)[:, :2] / cam[:, 2:3]
        return cam, (proj - pixels).ravel()

    cam, res = residual(rot, t)
    cost = float(res @ res)
    for _ in range(MAX_ITERATIONS):
        x, y, z = cam[:, 0], cam[:, 1], cam[:, 2]
        # d(u,v)/d(cam point)
        jp = np.zeros((n, 2, 3))
        jp[:, 0, 0] = fx / z
        jp[:, 0, 1] = sk / z
        jp[:, 0, 2] = -(fx * x + sk * y) / z**2
        jp[:, 1, 1] = fy / z
        jp[:, 1, 2] = -fy * y / z**2
        # cam = exp(dtheta) R p + t + dt, so d(cam)/d(dtheta) = -[R p]_x.
        rp = cam - t
        skews = np.zeros((n, 3, 3))
        skews[:, 0, 1] = -rp[:, 2]
        skews[:, 0, 2] = rp[:, 1]
        skews[:, 1, 0] = rp[:, 2]
        skews[:, 1, 2] = -rp[:, 0]
        skews[:, 2, 0] = -rp[:, 1]
        skews[:, 2, 1] = rp[:, 0]
        jac = np.concatenate([-np.einsum("nij,njk->nik", jp, skews), jp], axis=2)
        jac = jac.reshape(2 * n, 6)
        jtj = jac.T @ jac
        g = jac.T @ res
        try:
            delta = np.linalg.solve(jtj, -g)
        except np.linalg.LinAlgError:
            delta = np.linalg.lstsq(jtj, -g, rcond=None)[0]
        rot = rotation_from_axis_angle(delta[:3]) @ rot
        t = t + delta[3:]
        cam, res = residual(rot, t)
        new_cost = float(res @ res)
        if np.linalg.norm(delta) < STEP_TOL or abs(cost - new_cost) < COST_CHANGE_TOL:
            return orthonormalize(rot), t
        cost = new_cost
    raise NoConvergence(
        f"pose refinement did not converge in {MAX_ITERATIONS} iterations (cost {cost:g})"
    )


def solve_pnp(
    correspondences: Sequence[Correspondence],
    intrinsics: CameraIntrinsics,
    initial_pose: Pose | None = None,
) -> Pose:
    """Camera pose minimizing the sum of squared reprojection errors.

    Needs at least 4 non-collinear correspondences. Coplanar point sets are
    initialized by planar homography decomposition; general sets by DLT
    (which needs at least 6 points). An optional ``initial_pose`` skips
    initialization, which both warm-starts tracking loops and speeds them up.
    """
    if len(correspondences) < 4:
        raise DegenerateConfiguration("solve_pnp needs at least 4 correspondences")
    world, pixels = _corr_arrays(correspondences)
    centered = world - world.mean(axis=0)
    svals = np.linalg.svd(centered, compute_uv=False)
    if svals[1] < RANK_TOL * svals[0]:
        raise DegenerateConfiguration("world points are collinear")
    if initial_pose is not None:
        rotation, translation = initial_pose.rotation, initial_pose.translation
    elif svals[2] < RANK_TOL * svals[0]:
        rotation, translation = _pose_from_planar(world, pixels, intrinsics)
    else:
        if len(correspondences) < 6:
            raise DegenerateConfiguration(
                "non-coplanar configurations need at least 6 correspondences"
            )
        rotation, translation = _pose_from_dlt(world, pixels, intrinsics)
    rotation, translation = _refine_pose(world, pixels, intrinsics, rotation, translation)
    return Pose(rotation, translation)


def reprojection_errors(
    correspondences: Sequence[Correspondence],
    pose: Pose,
    intrinsics: CameraIntrinsics,
) -> np.ndarray:
    """Per-point pixel reprojection error magnitudes."""
    world, pixels = _corr_arrays(correspondences)
    cam = pose.apply(world)
    proj = (cam @ intrinsics.matrix.T)[:, :2] / cam[:, 2:3]
    return np.sqrt(((proj - pixels) ** 2).sum(axis=1))


def _conic_row(h: np.ndarray, i: int, j: int) -> np.ndarray:
    return np.array(
        [
            h[0, i] * h[0, j],
            h[0, i] * h[1, j] + h[1, i] * h[0, j],
            h[1, i] * h[1, j],
            h[2, i] * h[0, j] + h[0, i] * h[2, j],
            h[2, i] * h[1, j] + h[1, i] * h[2, j],
            h[2, i] * h[2, j],
        ]
    )


def calibrate_intrinsics(views: Sequence[Sequence[Correspondence]]) -> CameraIntrinsics:
    """Closed-form intrinsics from >= 3 views of a planar (z = 0) target.

    Stacks the two absolute-conic constraints per view homography and solves
    the 6-parameter system by SVD; the intrinsics (including skew) follow in
    closed form. Raises :class:`DegenerateMotion` when the views do not
    constrain the system, e.g. identical views or pure-translation motion.
    """
    if len(views) < 3:
        raise InsufficientViews(f"calibration needs >= 3 views, got {len(views)}")
    homographies = [estimate_homography(v) for v in views]
    v = np.zeros((2 * len(homographies), 6))
    for k, h in enumerate(homographies):
        v[2 * k] = _conic_row(h, 0, 1)
        v[2 * k + 1] = _conic_row(h, 0, 0) - _conic_row(h, 1, 1)
    _, s, vt = np.linalg.svd(v)
    if s[4] < 1e-8 * s[0]:
        raise DegenerateMotion("views do not constrain the intrinsics (rank-deficient system)")
    b11, b12, b22, b13, b23, b33 = vt[-1]
    if b11 < 0:
        b11, b12, b22, b13, b23, b33 = -b11, -b12, -b22, -b13, -b23, -b33
    denom = b11 * b22 - b12 * b12
    if abs(denom) < 1e-16 or abs(b11) < 1e-16:
        raise DegenerateMotion("conic solution is singular")
    v0 = (b12 * b13 - b11 * b23) / denom
    lam = b33 - (b13 * b13 + v0 * (b12 * b13 - b11 * b23)) / b11
    if lam / b11 <= 0 or lam * b11 / denom <= 0:
        raise DegenerateMotion("conic solution is not positive definite")
    alpha = float(np.sqrt(lam / b11))
    beta = float(np.sqrt(lam * b11 / denom))
    gamma = float(-b12 * alpha * alpha * beta / lam)
    u0 = float(gamma * v0 / beta - b13 * alpha * alpha / lam)
    return CameraIntrinsics(fx=alpha, fy=beta, cx=u0, cy=float(v0), skew=gamma)

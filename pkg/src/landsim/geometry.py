"""Pinhole camera geometry: intrinsics, rigid transforms, projection.

Coordinate conventions
----------------------
World frame: right-handed, meters. The simulator uses x to the right when
facing the tag wall, y toward the wall, z up.

Camera frame: x right, y down, z forward along the optical axis.

Image frame: pixels, origin at the top-left corner, u right, v down.

A :class:`Pose` is a rigid transform ``x_out = R @ x_in + t``. Which frames
it connects depends on context; projection treats it as world -> camera.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from .errors import PointAtCameraPlane

ORTHONORMALITY_TOL = 1e-9


def _frozen_array(value, shape) -> np.ndarray:
    arr = np.array(value, dtype=float).reshape(shape)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class CameraIntrinsics:
    """Upper-triangular pinhole intrinsics (focal lengths, principal point, skew)."""

    fx: float
    fy: float
    cx: float
    cy: float
    skew: float = 0.0

    def __post_init__(self):
        for name in ("fx", "fy", "cx", "cy", "skew"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"intrinsics field {name} must be finite")
        if self.fx <= 0 or self.fy <= 0:
            raise ValueError("focal lengths must be positive")

    @property
    def matrix(self) -> np.ndarray:
        return np.array(
            [
                [self.fx, self.skew, self.cx],
                [0.0, self.fy, self.cy],
                [0.0, 0.0, 1.0],
            ]
        )

    def to_dict(self) -> dict:
        return {"fx": self.fx, "fy": self.fy, "cx": self.cx, "cy": self.cy, "skew": self.skew}

    @classmethod
    def from_dict(cls, data: dict) -> "CameraIntrinsics":
        return cls(
            fx=float(data["fx"]),
            fy=float(data["fy"]),
            cx=float(data["cx"]),
            cy=float(data["cy"]),
            skew=float(data.get("skew", 0.0)),
        )


@dataclass(frozen=True, eq=False)
class Pose:
    """Rigid transform: a proper rotation plus a translation, ``R @ x + t``."""

    rotation: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "rotation", _frozen_array(self.rotation, (3, 3)))
        object.__setattr__(self, "translation", _frozen_array(self.translation, (3,)))
        r = self.rotation
        if not np.all(np.isfinite(r)) or not np.all(np.isfinite(self.translation)):
            raise ValueError("pose entries must be finite")
        if np.max(np.abs(r.T @ r - np.eye(3))) > ORTHONORMALITY_TOL:
            raise ValueError("rotation is not orthonormal")
        if abs(np.linalg.det(r) - 1.0) > ORTHONORMALITY_TOL:
            raise ValueError("rotation must have determinant +1")

    @classmethod
    def identity(cls) -> "Pose":
        return cls(np.eye(3), np.zeros(3))

    @property
    def matrix(self) -> np.ndarray:
        """The 3x4 joint matrix [R | t]."""
        return np.hstack([self.rotation, self.translation.reshape(3, 1)])

    @property
    def center(self) -> np.ndarray:
        """Origin of the output frame expressed in the input frame (-R^T t).

        For a world->camera pose this is the camera position in world
        coordinates.
        """
        return -self.rotation.T @ self.translation

    def apply(self, points: np.ndarray) -> np.ndarray:
        """Transform one (3,) point or an (N, 3) batch."""
        pts = np.asarray(points, dtype=float)
        return pts @ self.rotation.T + self.translation

    def inverse(self) -> "Pose":
        return Pose(self.rotation.T, -self.rotation.T @ self.translation)


@dataclass(frozen=True)
class WorldPoint:
    """A 3D point in the world frame, meters."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.x, self.y, self.z)):
            raise ValueError("world point components must be finite")

    @property
    def array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    @classmethod
    def from_array(cls, arr) -> "WorldPoint":
        x, y, z = np.asarray(arr, dtype=float).reshape(3)
        return cls(float(x), float(y), float(z))


@dataclass(frozen=True)
class PixelPoint:
    """A 2D point in the image frame, pixels. May lie outside the sensor."""

    u: float
    v: float

    def __post_init__(self):
        if not (math.isfinite(self.u) and math.isfinite(self.v)):
            raise ValueError("pixel components must be finite")

    @property
    def array(self) -> np.ndarray:
        return np.array([self.u, self.v])


@dataclass(frozen=True)
class ProjectionResult:
    """A projected pixel and the camera-frame depth it was scaled by."""

    pixel: PixelPoint
    depth_scale: float


@dataclass(frozen=True)
class Correspondence:
    """One 3D tag corner paired with its 2D projection."""

    world: WorldPoint
    pixel: PixelPoint
    tag_id: int
    corner_index: int

    def __post_init__(self):
        if self.corner_index not in (0, 1, 2, 3):
            raise ValueError("corner_index must be in 0..3")


def rotation_from_axis_angle(vec) -> np.ndarray:
    """Rodrigues formula: axis-angle vector (axis * angle in radians) to matrix."""
    v = np.asarray(vec, dtype=float).reshape(3)
    theta = np.linalg.norm(v)
    if theta < 1e-14:
        return np.eye(3)
    k = v / theta
    kx = np.array([[0.0, -k[2], k[1]], [k[2], 0.0, -k[0]], [-k[1], k[0], 0.0]])
    return np.eye(3) + math.sin(theta) * kx + (1.0 - math.cos(theta)) * (kx @ kx)


def axis_angle_from_rotation(rot: np.ndarray) -> np.ndarray:
    """Inverse Rodrigues: rotation matrix to axis-angle vector."""
    r = np.asarray(rot, dtype=float)
    cos_theta = min(1.0, max(-1.0, (np.trace(r) - 1.0) * 0.5))
    theta = math.acos(cos_theta)
    if theta < 1e-12:
        return np.zeros(3)
    if math.pi - theta < 1e-6:
        # Near pi the off-diagonal formula degenerates; recover the axis from
        # the symmetric part.
        a = (r + np.eye(3)) / 2.0
        axis = np.sqrt(np.maximum(np.diagonal(a), 0.0))
        # Fix signs from the largest component.
        i = int(np.argmax(axis))
        axis = a[:, i] / max(axis[i], 1e-12)
        axis = axis / np.linalg.norm(axis)
        return axis * theta
    axis = np.array([r[2, 1] - r[1, 2], r[0, 2] - r[2, 0], r[1, 0] - r[0, 1]])
    return axis * (theta / (2.0 * math.sin(theta)))


def rotation_angle(rot: np.ndarray) -> float:
    """Rotation magnitude in radians (0..pi)."""
    return float(np.linalg.norm(axis_angle_from_rotation(rot)))


def orthonormalize(rot: np.ndarray) -> np.ndarray:
    """Nearest proper rotation (Frobenius sense) to an approximate one."""
    u, _, vt = np.linalg.svd(np.asarray(rot, dtype=float))
    r = u @ vt
    if np.linalg.det(r) < 0:
        u[:, -1] *= -1.0
        r = u @ vt
    return r


def project(point: WorldPoint, pose: Pose, intrinsics: CameraIntrinsics) -> ProjectionResult:
    """Project one world point through the pinhole model.

    Dehomogenizes A [R|t] P by the camera-frame depth, which is returned as
    the scaling factor. Raises :class:`PointAtCameraPlane` when the point is
    numerically on the camera plane.
    """
    cam = pose.apply(point.array)
    z = float(cam[2])
    if abs(z) < 1e-12:
        raise PointAtCameraPlane(f"camera-frame z = {z:g}")
    hom = intrinsics.matrix @ cam
    return ProjectionResult(
        pixel=PixelPoint(float(hom[0] / z), float(hom[1] / z)),
        depth_scale=z,
    )


def project_points(points: np.ndarray, pose: Pose, intrinsics: CameraIntrinsics):
    """Vectorized projection of an (N, 3) array.

    Returns (pixels (N, 2), depths (N,)). No camera-plane check; callers that
    need per-point errors should use :func:`project`.
    """
    cam = pose.apply(np.asarray(points, dtype=float))
    hom = cam @ intrinsics.matrix.T
    depths = cam[:, 2]
    return hom[:, :2] / depths[:, None], depths

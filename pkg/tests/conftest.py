import numpy as np
import pytest

from landsim import CameraIntrinsics, Correspondence, Pose, WorldPoint
from landsim.geometry import project, rotation_from_axis_angle
from landsim.simulate import CAMERA_MOUNT
from landsim.tags import wall_grid


@pytest.fixture
def intrinsics():
    return CameraIntrinsics(fx=600.0, fy=600.0, cx=320.0, cy=240.0)


@pytest.fixture
def wall_tags():
    """Six coplanar wall tags (24 corners), the pose-estimation layout."""
    return wall_grid(ids=range(6), wall_y=5.2, xs=(-0.75, 0.0, 0.75), zs=(0.9, 1.65), side_m=0.35)


def correspondences_for_pose(tags, pose, intrinsics, rng=None, pixel_sigma=0.0):
    """Project every tag corner through the pose, optionally with noise."""
    corrs = []
    for tag in tags:
        for ci, corner in enumerate(tag.corners_world()):
            wp = WorldPoint.from_array(corner)
            res = project(wp, pose, intrinsics)
            u, v = res.pixel.u, res.pixel.v
            if rng is not None and pixel_sigma > 0:
                du, dv = rng.normal(0.0, pixel_sigma, 2)
                u, v = u + du, v + dv
            corrs.append(
                Correspondence(wp, type(res.pixel)(u, v), tag_id=tag.id, corner_index=ci)
            )
    return corrs


def random_wall_pose(rng, max_tilt=0.2):
    """A camera pose in front of the wall with the whole array in view."""
    axis = rng.normal(size=3) * max_tilt
    rotation = rotation_from_axis_angle(axis) @ CAMERA_MOUNT
    center = np.array(
        [rng.uniform(-0.8, 0.8), rng.uniform(-1.5, 2.5), rng.uniform(0.3, 2.2)]
    )
    return Pose(rotation, -rotation @ center)

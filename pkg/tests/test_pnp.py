import numpy as np
import pytest

from landsim import (
    CameraIntrinsics,
    Correspondence,
    DegenerateConfiguration,
    PixelPoint,
    Pose,
    WorldPoint,
    estimate_homography,
    solve_pnp,
)
from landsim.geometry import project, rotation_angle, rotation_from_axis_angle
from landsim.pnp import reprojection_errors

from conftest import correspondences_for_pose, random_wall_pose


def _plane_corrs(points_2d, pixels):
    return [
        Correspondence(
            WorldPoint(float(x), float(y), 0.0),
            PixelPoint(float(u), float(v)),
            tag_id=0,
            corner_index=i % 4,
        )
        for i, ((x, y), (u, v)) in enumerate(zip(points_2d, pixels))
    ]


class TestEstimateHomography:
    def test_identity_square(self):
        pts = [(0, 0), (1, 0), (1, 1), (0, 1)]
        h = estimate_homography(_plane_corrs(pts, pts))
        assert np.allclose(h, np.eye(3), atol=1e-12)

    def test_round_trip_random_homography(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            h_true = np.eye(3) + rng.normal(scale=0.2, size=(3, 3))
            h_true[2, 2] = 1.0
            pts = rng.uniform(-2, 2, size=(8, 2))
            src = np.hstack([pts, np.ones((8, 1))])
            dst = src @ h_true.T
            if np.any(np.abs(dst[:, 2]) < 0.2):
                continue
            dst = dst[:, :2] / dst[:, 2:3]
            h = estimate_homography(_plane_corrs(pts, dst))
            assert np.linalg.norm(h - h_true / h_true[2, 2]) < 1e-9

    def test_three_collinear_of_four_degenerate(self):
        pts = [(0, 0), (1, 0), (2, 0), (0, 1)]
        with pytest.raises(DegenerateConfiguration):
            estimate_homography(_plane_corrs(pts, pts))

    def test_too_few_points(self):
        pts = [(0, 0), (1, 0), (1, 1)]
        with pytest.raises(DegenerateConfiguration):
            estimate_homography(_plane_corrs(pts, pts))

    def test_rejects_off_plane_points(self):
        corrs = _plane_corrs([(0, 0), (1, 0), (1, 1), (0, 1)], [(0, 0), (1, 0), (1, 1), (0, 1)])
        corrs[0] = Correspondence(WorldPoint(0, 0, 0.5), corrs[0].pixel, 0, 0)
        with pytest.raises(ValueError):
            estimate_homography(corrs)


class TestSolvePnp:
    def test_wall_round_trip(self, wall_tags, intrinsics):
        """Noiseless corners from the 6-tag wall recover the exact pose."""
        rng = np.random.default_rng(3)
        for _ in range(50):
            pose = random_wall_pose(rng)
            corrs = correspondences_for_pose(wall_tags, pose, intrinsics)
            est = solve_pnp(corrs, intrinsics)
            assert rotation_angle(est.rotation @ pose.rotation.T) < 1e-6
            assert np.linalg.norm(est.translation - pose.translation) < 1e-6
            assert reprojection_errors(corrs, est, intrinsics).mean() < 1e-6

    def test_fronto_parallel_single_tag(self, intrinsics):
        """A square tag seen head-on from z=1 with identity rotation."""
        pose = Pose(np.eye(3), [0.0, 0.0, 1.0])
        side = 0.4
        corrs = []
        for ci, (dx, dy) in enumerate([(-1, -1), (1, -1), (1, 1), (-1, 1)]):
            wp = WorldPoint(dx * side / 2, dy * side / 2, 0.0)
            corrs.append(Correspondence(wp, project(wp, pose, intrinsics).pixel, 0, ci))
        est = solve_pnp(corrs, intrinsics)
        assert rotation_angle(est.rotation) < 1e-9
        assert np.allclose(est.translation, [0.0, 0.0, 1.0], atol=1e-9)

    def test_noise_monte_carlo_5mm_at_1m(self, intrinsics):
        """0.5 px pixel noise on 24 corners: translation error under 5 mm at
        1 m range, 95th percentile over 100 seeded trials."""
        from landsim.tags import wall_grid

        tags = wall_grid(ids=range(6), wall_y=1.0, xs=(-0.35, 0.0, 0.35), zs=(-0.2, 0.2), side_m=0.16)
        base = np.array([[1.0, 0, 0], [0, 0, -1.0], [0, 1.0, 0]])
        pose = Pose(base, -base @ np.array([0.0, 0.0, 0.0]))  # 1 m from the wall
        errors = []
        for seed in range(100):
            rng = np.random.default_rng(seed)
            corrs = correspondences_for_pose(tags, pose, intrinsics, rng=rng, pixel_sigma=0.5)
            est = solve_pnp(corrs, intrinsics)
            errors.append(np.linalg.norm(est.translation - pose.translation))
        assert np.percentile(errors, 95) < 5e-3

    def test_permutation_invariance(self, wall_tags, intrinsics):
        rng = np.random.default_rng(17)
        pose = random_wall_pose(rng)
        corrs = correspondences_for_pose(wall_tags, pose, intrinsics)
        est_a = solve_pnp(corrs, intrinsics)
        for _ in range(5):
            order = rng.permutation(len(corrs))
            est_b = solve_pnp([corrs[i] for i in order], intrinsics)
            assert np.max(np.abs(est_a.rotation - est_b.rotation)) < 1e-9
            assert np.max(np.abs(est_a.translation - est_b.translation)) < 1e-9

    def test_non_planar_dlt_path(self, intrinsics):
        rng = np.random.default_rng(23)
        for _ in range(20):
            world = rng.uniform(-1, 1, size=(10, 3))
            rot = rotation_from_axis_angle(rng.normal(scale=0.3, size=3))
            pose = Pose(rot, [0.1, -0.2, 4.0])
            corrs = []
            for i, w in enumerate(world):
                wp = WorldPoint.from_array(w)
                corrs.append(Correspondence(wp, project(wp, pose, intrinsics).pixel, i, 0))
            est = solve_pnp(corrs, intrinsics)
            assert rotation_angle(est.rotation @ pose.rotation.T) < 1e-6
            assert np.linalg.norm(est.translation - pose.translation) < 1e-6

    def test_too_few_points(self, intrinsics):
        pose = Pose(np.eye(3), [0, 0, 2.0])
        corrs = []
        for i, w in enumerate([(0, 0, 0), (1, 0, 0), (0, 1, 0)]):
            wp = WorldPoint(*w)
            corrs.append(Correspondence(wp, project(wp, pose, intrinsics).pixel, 0, i))
        with pytest.raises(DegenerateConfiguration):
            solve_pnp(corrs, intrinsics)

    def test_collinear_points(self, intrinsics):
        pose = Pose(np.eye(3), [0, 0, 2.0])
        corrs = []
        for i, x in enumerate((0.0, 0.2, 0.4, 0.6)):
            wp = WorldPoint(x, 0.0, 0.0)
            corrs.append(Correspondence(wp, project(wp, pose, intrinsics).pixel, 0, i))
        with pytest.raises(DegenerateConfiguration):
            solve_pnp(corrs, intrinsics)

    def test_warm_start_matches_cold(self, wall_tags, intrinsics):
        rng = np.random.default_rng(29)
        pose = random_wall_pose(rng)
        corrs = correspondences_for_pose(wall_tags, pose, intrinsics)
        cold = solve_pnp(corrs, intrinsics)
        warm = solve_pnp(corrs, intrinsics, initial_pose=cold)
        assert rotation_angle(cold.rotation @ warm.rotation.T) < 1e-9
        assert np.linalg.norm(cold.translation - warm.translation) < 1e-9

    def test_outputs_orthonormal_pose(self, wall_tags, intrinsics):
        rng = np.random.default_rng(31)
        for _ in range(20):
            pose = random_wall_pose(rng)
            corrs = correspondences_for_pose(wall_tags, pose, intrinsics, rng=rng, pixel_sigma=1.0)
            est = solve_pnp(corrs, intrinsics)
            r = est.rotation
            assert np.max(np.abs(r.T @ r - np.eye(3))) < 1e-9
            assert abs(np.linalg.det(r) - 1.0) < 1e-9

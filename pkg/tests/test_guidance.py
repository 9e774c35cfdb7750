import numpy as np
import pytest

from landsim import (
    GuidanceConfig,
    Mode,
    VelocityCommand,
    WorldPoint,
    apply_latency,
    compute_command,
)

ZONE = WorldPoint(0.0, 0.0, 0.0)
CONFIG = GuidanceConfig(landing_zone=ZONE, gain=0.5, v_max=100.0, command_delay=1.0)


class TestComputeCommand:
    def test_zero_error_zero_command(self):
        for mode in Mode:
            cmd = compute_command(ZONE, ZONE, CONFIG, mode)
            assert (cmd.vx, cmd.vy, cmd.vz) == (0.0, 0.0, 0.0)

    def test_waiting_commands_zero_despite_error(self):
        cmd = compute_command(WorldPoint(1.0, 0.0, 1.0), ZONE, CONFIG, Mode.WAITING)
        assert (cmd.vx, cmd.vy, cmd.vz) == (0.0, 0.0, 0.0)

    def test_landed_commands_zero(self):
        cmd = compute_command(WorldPoint(1.0, 1.0, 1.0), ZONE, CONFIG, Mode.LANDED)
        assert (cmd.vx, cmd.vy, cmd.vz) == (0.0, 0.0, 0.0)

    def test_proportional_with_clamp_boundary(self):
        # gain 0.5 /s on a 2 m error is 100 cm/s, exactly at the clamp.
        cmd = compute_command(WorldPoint(-2.0, 0.0, 0.0), ZONE, CONFIG, Mode.EN_ROUTE)
        assert cmd.vx == 100.0
        assert cmd.vy == 0.0

    def test_clamp_applies_per_axis(self):
        cmd = compute_command(WorldPoint(-4.0, -3.0, 0.0), ZONE, CONFIG, Mode.EN_ROUTE)
        assert (cmd.vx, cmd.vy) == (100.0, 100.0)
        cmd = compute_command(WorldPoint(4.0, 0.5, 0.0), ZONE, CONFIG, Mode.PROCEED)
        assert (cmd.vx, cmd.vy) == (-100.0, -25.0)

    def test_descends_only_within_arrival_radius(self):
        high = WorldPoint(0.05, 0.05, 1.0)
        cmd = compute_command(high, ZONE, CONFIG, Mode.PROCEED)
        assert cmd.vz == -CONFIG.descend_rate
        far = WorldPoint(1.0, 0.0, 1.0)
        cmd = compute_command(far, ZONE, CONFIG, Mode.PROCEED)
        assert cmd.vz == 0.0

    def test_no_descent_at_or_below_target_altitude(self):
        at_ground = WorldPoint(0.0, 0.1, 0.0)
        cmd = compute_command(at_ground, ZONE, CONFIG, Mode.PROCEED)
        assert cmd.vz == 0.0

    def test_never_exceeds_v_max(self):
        rng = np.random.default_rng(0)
        for _ in range(500):
            current = WorldPoint(*rng.uniform(-50, 50, 3))
            cmd = compute_command(current, ZONE, CONFIG, Mode.EN_ROUTE)
            assert abs(cmd.vx) <= CONFIG.v_max
            assert abs(cmd.vy) <= CONFIG.v_max
            assert abs(cmd.vz) <= max(CONFIG.v_max, CONFIG.descend_rate)

    def test_magnitude_decreases_on_approach(self):
        """Commanded per-axis speed shrinks monotonically as the vehicle
        closes on the target under a fixed mode."""
        position = np.array([3.0, -2.5, 1.0])
        dt = 0.05
        prev = None
        for k in range(400):
            cmd = compute_command(
                WorldPoint.from_array(position), ZONE, CONFIG, Mode.EN_ROUTE, t=k * dt
            )
            if prev is not None:
                assert abs(cmd.vx) <= abs(prev.vx) + 1e-12
                assert abs(cmd.vy) <= abs(prev.vy) + 1e-12
            position = position + np.array([cmd.vx, cmd.vy, cmd.vz]) / 100.0 * dt
            prev = cmd


class TestApplyLatency:
    def test_not_yet_matured_returns_zero(self):
        queue = [VelocityCommand(50.0, 0.0, 0.0, t_issued=5.0)]
        cmd = apply_latency(queue, now=5.5, config=CONFIG)
        assert (cmd.vx, cmd.vy, cmd.vz) == (0.0, 0.0, 0.0)

    def test_boundary_inclusive(self):
        queue = [VelocityCommand(50.0, 0.0, 0.0, t_issued=5.0)]
        cmd = apply_latency(queue, now=6.0, config=CONFIG)
        assert cmd.vx == 50.0

    def test_zero_delay_passthrough(self):
        config = GuidanceConfig(landing_zone=ZONE, command_delay=0.0)
        queue = [
            VelocityCommand(10.0, 0.0, 0.0, t_issued=1.0),
            VelocityCommand(20.0, 0.0, 0.0, t_issued=2.0),
        ]
        assert apply_latency(queue, now=2.0, config=config).vx == 20.0

    def test_newest_matured_wins(self):
        queue = [VelocityCommand(float(k), 0.0, 0.0, t_issued=float(k)) for k in range(10)]
        cmd = apply_latency(queue, now=7.25, config=CONFIG)
        assert cmd.t_issued == 6.0

    def test_causality(self):
        rng = np.random.default_rng(1)
        queue = []
        t = 0.0
        for _ in range(300):
            t += float(rng.uniform(0.0, 0.3))
            queue.append(VelocityCommand(float(rng.uniform(-100, 100)), 0.0, 0.0, t_issued=t))
            now = t + float(rng.uniform(0.0, 2.0))
            cmd = apply_latency(queue, now, CONFIG)
            assert cmd.t_issued <= now - CONFIG.command_delay


class TestGuidanceConfigValidation:
    @pytest.mark.parametrize(
        "kwargs",
        [
            {"gain": 0.0},
            {"v_max": 0.0},
            {"command_delay": -0.5},
            {"arrival_radius": 0.0},
        ],
    )
    def test_rejects_bad_values(self, kwargs):
        with pytest.raises(ValueError):
            GuidanceConfig(landing_zone=ZONE, **kwargs)

"""Scenario configuration: tag layout, trajectories, camera, noise, timing.

A scenario file is the JSON form of :class:`ScenarioConfig`; see
``scenarios/`` in the repository for the two stock scenarios and
:func:`baseline_scenario` / :func:`crossing_scenario` for their builders.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .detection import NoiseSpec
from .errors import ConfigInvalid
from .geometry import CameraIntrinsics, WorldPoint
from .guidance import GuidanceConfig
from .monitor import MonitorConfig
from .tags import TagSpec, wall_grid


@dataclass(frozen=True, eq=False)
class ScenarioConfig:
    tags: tuple[TagSpec, ...]
    intrinsics: CameraIntrinsics
    level1_trajectory: tuple[tuple[float, WorldPoint], ...]
    level2_start: WorldPoint
    level2_landing_zone: WorldPoint
    monitor: MonitorConfig
    guidance: GuidanceConfig
    noise: NoiseSpec
    dt_tick: float = 0.05
    duration: float = 60.0
    seed: int = 0
    collision_radius: float = 0.5
    level1_half_extents: tuple[float, float, float] = (0.18, 0.18, 0.05)
    image_size: tuple[int, int] | None = (640, 480)
    landing_tag_id: int = 6
    monitor_enabled: bool = True

    def __post_init__(self):
        object.__setattr__(self, "tags", tuple(self.tags))
        object.__setattr__(
            self, "level1_trajectory", tuple((float(t), p) for t, p in self.level1_trajectory)
        )
        if not self.dt_tick > 0:
            raise ConfigInvalid("dt_tick must be positive")
        if not self.duration > 0:
            raise ConfigInvalid("duration must be positive")
        ids = [tag.id for tag in self.tags]
        if len(set(ids)) != len(ids):
            raise ConfigInvalid("tag ids must be unique")
        times = [t for t, _ in self.level1_trajectory]
        if any(b < a for a, b in zip(times, times[1:])):
            raise ConfigInvalid("level1_trajectory times must be non-decreasing")
        zone = self.level2_landing_zone
        gz = self.guidance.landing_zone
        if (gz.x, gz.y, gz.z) != (zone.x, zone.y, zone.z):
            raise ConfigInvalid("guidance.landing_zone must equal level2_landing_zone")

    @property
    def pose_tags(self) -> tuple[TagSpec, ...]:
        """Tags the level II vehicle localizes against (the wall array)."""
        return tuple(t for t in self.tags if t.id != self.landing_tag_id)

    def to_dict(self) -> dict:
        return {
            "tags": [t.to_dict() for t in self.tags],
            "intrinsics": self.intrinsics.to_dict(),
            "level1_trajectory": [
                {"t": t, "xyz": [p.x, p.y, p.z]} for t, p in self.level1_trajectory
            ],
            "level2_start": [self.level2_start.x, self.level2_start.y, self.level2_start.z],
            "level2_landing_zone": [
                self.level2_landing_zone.x,
                self.level2_landing_zone.y,
                self.level2_landing_zone.z,
            ],
            "monitor": self.monitor.to_dict(),
            "guidance": self.guidance.to_dict(),
            "noise": self.noise.to_dict(),
            "dt_tick": self.dt_tick,
            "duration": self.duration,
            "seed": self.seed,
            "collision_radius": self.collision_radius,
            "level1_half_extents": list(self.level1_half_extents),
            "image_size": list(self.image_size) if self.image_size else None,
            "landing_tag_id": self.landing_tag_id,
            "monitor_enabled": self.monitor_enabled,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ScenarioConfig":
        zone = WorldPoint.from_array(data["level2_landing_zone"])
        guidance_data = dict(data["guidance"])
        guidance_data.setdefault("landing_zone", [zone.x, zone.y, zone.z])
        image_size = data.get("image_size", (640, 480))
        return cls(
            tags=tuple(TagSpec.from_dict(t) for t in data["tags"]),
            intrinsics=CameraIntrinsics.from_dict(data["intrinsics"]),
            level1_trajectory=tuple(
                (float(wp["t"]), WorldPoint.from_array(wp["xyz"]))
                for wp in data["level1_trajectory"]
            ),
            level2_start=WorldPoint.from_array(data["level2_start"]),
            level2_landing_zone=zone,
            monitor=MonitorConfig.from_dict(data["monitor"]),
            guidance=GuidanceConfig.from_dict(guidance_data),
            noise=NoiseSpec.from_dict(data["noise"]),
            dt_tick=float(data.get("dt_tick", 0.05)),
            duration=float(data.get("duration", 60.0)),
            seed=int(data.get("seed", 0)),
            collision_radius=float(data.get("collision_radius", 0.5)),
            level1_half_extents=tuple(
                float(v) for v in data.get("level1_half_extents", (0.18, 0.18, 0.05))
            ),
            image_size=tuple(int(v) for v in image_size) if image_size else None,
            landing_tag_id=int(data.get("landing_tag_id", 6)),
            monitor_enabled=bool(data.get("monitor_enabled", True)),
        )


def load_scenario(path) -> ScenarioConfig:
    return ScenarioConfig.from_dict(json.loads(Path(path).read_text()))


def save_scenario(config: ScenarioConfig, path) -> None:
    Path(path).write_text(json.dumps(config.to_dict(), indent=2) + "\n")


def schedule_position(trajectory, t: float) -> np.ndarray:
    """Piecewise-linear waypoint interpolation, clamped at both ends."""
    times = np.array([wt for wt, _ in trajectory])
    coords = np.array([[p.x, p.y, p.z] for _, p in trajectory])
    return np.array([np.interp(t, times, coords[:, i]) for i in range(3)])


def _stock_wall() -> list[TagSpec]:
    return wall_grid(
        ids=range(6), wall_y=5.2, xs=(-0.75, 0.0, 0.75), zs=(0.9, 1.65), side_m=0.35
    )


def baseline_scenario(seed: int = 0) -> ScenarioConfig:
    """Two staggered landings on adjacent zones near the tag wall.

    The level I vehicle transits above the camera's view, descends to a
    hover over its pad (entering the level II field of view a few seconds
    into the run), holds, then drops onto the pad fast enough for the
    displacement threshold. The level II vehicle approaches its own zone,
    hovers when it first sees level I, and resumes once the drop is
    detected.
    """
    tags = _stock_wall()
    tags.append(
        TagSpec(id=6, family="36h11", side_m=0.4, center=[0.55, 4.4, 0.0], normal=[0, 0, 1])
    )
    pad = [0.55, 4.4]
    zone = WorldPoint(-0.7, 3.5, 0.0)
    trajectory = (
        (0.0, WorldPoint(pad[0], pad[1], 4.2)),
        (1.0, WorldPoint(pad[0], pad[1], 4.2)),
        (8.0, WorldPoint(pad[0], pad[1], 1.8)),
        (10.0, WorldPoint(pad[0], pad[1], 1.8)),
        (11.6, WorldPoint(pad[0], pad[1], 0.05)),
        (40.0, WorldPoint(pad[0], pad[1], 0.05)),
    )
    return ScenarioConfig(
        tags=tuple(tags),
        intrinsics=CameraIntrinsics(fx=600.0, fy=600.0, cx=320.0, cy=240.0),
        level1_trajectory=trajectory,
        level2_start=WorldPoint(0.1, -2.2, 1.0),
        level2_landing_zone=zone,
        monitor=MonitorConfig(sigma=150.0, delta_t=1.0),
        guidance=GuidanceConfig(landing_zone=zone, gain=0.3, v_max=60.0),
        noise=NoiseSpec(
            center_sigma_px=2.0,
            size_sigma_px=3.0,
            duplicate_count=2,
            dropout_prob=0.02,
            pixel_noise_sigma=0.5,
        ),
        dt_tick=0.05,
        duration=40.0,
        seed=seed,
    )


def crossing_scenario(seed: int = 0) -> ScenarioConfig:
    """The level I vehicle parked on the level II vehicle's flight path.

    With the monitor enabled the level II vehicle hovers as soon as it sees
    the obstruction and never collides (the parked target never produces a
    landing displacement). With the monitor disabled it flies straight
    through the occupied point.
    """
    tags = _stock_wall()
    tags.append(
        TagSpec(id=6, family="36h11", side_m=0.4, center=[0.55, 4.4, 0.0], normal=[0, 0, 1])
    )
    zone = WorldPoint(0.0, 4.0, 0.0)
    hover = WorldPoint(0.0, 1.0, 1.0)
    return ScenarioConfig(
        tags=tuple(tags),
        intrinsics=CameraIntrinsics(fx=600.0, fy=600.0, cx=320.0, cy=240.0),
        level1_trajectory=((0.0, hover), (30.0, hover)),
        level2_start=WorldPoint(0.0, -2.0, 1.0),
        level2_landing_zone=zone,
        monitor=MonitorConfig(sigma=150.0, delta_t=1.0),
        guidance=GuidanceConfig(landing_zone=zone, gain=0.3, v_max=60.0),
        noise=NoiseSpec(
            center_sigma_px=2.0,
            size_sigma_px=3.0,
            duplicate_count=2,
            dropout_prob=0.02,
            pixel_noise_sigma=0.5,
        ),
        dt_tick=0.05,
        duration=30.0,
        seed=seed,
    )

"""Deterministic tick-loop simulation of the two-vehicle landing scenario.

Each tick the level II vehicle:

1. observes the wall-tag corners (with pixel noise) and recovers its own
   pose by PnP,
2. receives a synthetic detection frame of the level I vehicle,
3. advances the landing monitor,
4. computes a proportional velocity command, which takes effect after the
   configured transport delay, and
5. integrates first-order kinematics.

The level I vehicle follows its scripted waypoint schedule. Everything is a
pure function of the scenario seed.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Optional

import numpy as np

from .detection import DetectionFrame, synth_detect
from .errors import DegenerateConfiguration, NoConvergence, TargetBehindCamera
from .geometry import (
    CameraIntrinsics,
    Correspondence,
    PixelPoint,
    Pose,
    WorldPoint,
    project_points,
)
from .guidance import VelocityCommand, apply_latency, compute_command
from .monitor import (
    EventKind,
    Mode,
    MonitorConfig,
    MonitorEvent,
    MonitorState,
    mark_landed,
    step,
)
from .pnp import solve_pnp
from .scenario import ScenarioConfig, schedule_position

# Front camera mount: world x -> camera x (right), world z -> camera -y
# (image v grows downward), world y -> camera z (optical axis toward the
# tag wall).
CAMERA_MOUNT = np.array([[1.0, 0.0, 0.0], [0.0, 0.0, -1.0], [0.0, 1.0, 0.0]])


class Verdict(str, Enum):
    SAFE_LANDED = "SAFE_LANDED"
    COLLISION = "COLLISION"
    TIMEOUT = "TIMEOUT"


@dataclass(frozen=True)
class TrajectoryPoint:
    t: float
    level1: Optional[WorldPoint]
    level2: WorldPoint
    separation: Optional[float]
    mode: Mode

    def to_row(self) -> list:
        l1 = [self.level1.x, self.level1.y, self.level1.z] if self.level1 else [None] * 3
        return [
            self.t,
            *l1,
            self.level2.x,
            self.level2.y,
            self.level2.z,
            self.separation,
            self.mode.value,
        ]


@dataclass(frozen=True)
class CommandRecord:
    """One commanded (not yet latency-applied) velocity, for the trace."""

    t: float
    mode: Mode
    command: VelocityCommand


@dataclass(frozen=True)
class SimResult:
    verdict: Verdict
    min_separation: Optional[float]
    wait_start: Optional[float]
    landing_detected_t: Optional[float]
    level2_touchdown_t: Optional[float]
    trajectory: tuple[TrajectoryPoint, ...]
    events: tuple[MonitorEvent, ...]
    commands: tuple[CommandRecord, ...]
    collision_radius: float

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "min_separation": self.min_separation,
            "wait_start": self.wait_start,
            "landing_detected_t": self.landing_detected_t,
            "level2_touchdown_t": self.level2_touchdown_t,
            "collision_radius": self.collision_radius,
            "events": [e.to_dict() for e in self.events],
            "trajectory": [p.to_row() for p in self.trajectory],
            "commands": [
                [c.t, c.mode.value, c.command.vx, c.command.vy, c.command.vz]
                for c in self.commands
            ],
        }


def observer_pose(position: np.ndarray) -> Pose:
    """World->camera pose of the forward-looking camera at ``position``."""
    return Pose(CAMERA_MOUNT, -CAMERA_MOUNT @ np.asarray(position, dtype=float))


def tag_corner_table(tags) -> tuple[np.ndarray, list[tuple[int, int]]]:
    """Stacked corner positions (4 per tag) with their (tag id, corner) labels."""
    world = np.vstack([tag.corners_world() for tag in tags])
    labels = [(tag.id, corner) for tag in tags for corner in range(4)]
    return world, labels


def observe_tag_corners(
    config: ScenarioConfig,
    cam_pose: Pose,
    rng: np.random.Generator,
    table: tuple[np.ndarray, list[tuple[int, int]]] | None = None,
) -> list[Correspondence]:
    """Noisy pixel observations of every visible pose-tag corner."""
    world, labels = table if table is not None else tag_corner_table(config.pose_tags)
    pixels, depths = project_points(world, cam_pose, config.intrinsics)
    pixels = pixels + rng.normal(0.0, config.noise.pixel_noise_sigma, pixels.shape)
    return [
        Correspondence(
            world=WorldPoint.from_array(world[i]),
            pixel=PixelPoint(float(pixels[i, 0]), float(pixels[i, 1])),
            tag_id=tag_id,
            corner_index=corner,
        )
        for i, (tag_id, corner) in enumerate(labels)
        if depths[i] > 1e-6
    ]


def _touched_down(position: np.ndarray, config: ScenarioConfig) -> bool:
    zone = config.level2_landing_zone
    horizontal = np.hypot(position[0] - zone.x, position[1] - zone.y)
    return horizontal <= config.guidance.arrival_radius and position[2] <= zone.z + 1e-9


def run_scenario(
    config: ScenarioConfig,
    frame_recorder: Callable[[DetectionFrame], None] | None = None,
) -> SimResult:
    """Run one scenario to verdict. Deterministic given ``config.seed``."""
    rng = np.random.default_rng(config.seed)
    level2 = config.level2_start.array.copy()
    monitor_state = MonitorState.initial()
    estimated = config.level2_start.array.copy()
    est_pose: Pose | None = None
    queue: list[VelocityCommand] = []
    events: list[MonitorEvent] = []
    commands: list[CommandRecord] = []
    trajectory: list[TrajectoryPoint] = []
    has_level1 = len(config.level1_trajectory) > 0
    min_separation: float | None = None
    wait_start = landing_detected_t = touchdown_t = None
    verdict = Verdict.TIMEOUT
    corner_table = tag_corner_table(config.pose_tags)

    n_ticks = int(round(config.duration / config.dt_tick))
    for k in range(n_ticks + 1):
        t = k * config.dt_tick
        level1 = schedule_position(config.level1_trajectory, t) if has_level1 else None
        cam_pose = observer_pose(level2)

        # Self-localization from the tag wall.
        corrs = observe_tag_corners(config, cam_pose, rng, table=corner_table)
        try:
            est_pose = solve_pnp(corrs, config.intrinsics, initial_pose=est_pose)
            estimated = est_pose.center
        except (DegenerateConfiguration, NoConvergence):
            est_pose = None  # cold-start next tick, keep last estimate

        # Detection of the level I vehicle.
        if level1 is not None:
            try:
                frame = synth_detect(
                    Pose(np.eye(3), level1),
                    cam_pose,
                    config.intrinsics,
                    config.level1_half_extents,
                    config.noise,
                    rng,
                    t=t,
                    image_size=config.image_size,
                )
            except TargetBehindCamera:
                frame = DetectionFrame(t, ())
        else:
            frame = DetectionFrame(t, ())
        if frame_recorder is not None:
            frame_recorder(frame)

        if config.monitor_enabled:
            monitor_state, event = step(monitor_state, frame, config.monitor)
            if event is not None:
                events.append(event)
                if event.kind is EventKind.HOVER_COMMANDED and wait_start is None:
                    wait_start = event.t
                if event.kind is EventKind.LANDING_DETECTED and landing_detected_t is None:
                    landing_detected_t = event.t

        command = compute_command(
            WorldPoint.from_array(estimated),
            config.level2_landing_zone,
            config.guidance,
            monitor_state.mode,
            t=t,
        )
        queue.append(command)
        commands.append(CommandRecord(t, monitor_state.mode, command))

        separation = float(np.linalg.norm(level1 - level2)) if level1 is not None else None
        if separation is not None:
            min_separation = separation if min_separation is None else min(min_separation, separation)
        trajectory.append(
            TrajectoryPoint(
                t=t,
                level1=WorldPoint.from_array(level1) if level1 is not None else None,
                level2=WorldPoint.from_array(level2),
                separation=separation,
                mode=monitor_state.mode,
            )
        )

        if separation is not None and separation < config.collision_radius:
            verdict = Verdict.COLLISION
            break
        if _touched_down(level2, config):
            verdict = Verdict.SAFE_LANDED
            touchdown_t = t
            if monitor_state.mode is Mode.PROCEED:
                monitor_state = mark_landed(monitor_state)
            break

        active = apply_latency(queue, t, config.guidance)
        velocity = np.array([active.vx, active.vy, active.vz]) / 100.0
        level2 = level2 + velocity * config.dt_tick

    return SimResult(
        verdict=verdict,
        min_separation=min_separation,
        wait_start=wait_start,
        landing_detected_t=landing_detected_t,
        level2_touchdown_t=touchdown_t,
        trajectory=tuple(trajectory),
        events=tuple(events),
        commands=tuple(commands),
        collision_radius=config.collision_radius,
    )


def replay(
    frames: Iterable[DetectionFrame], monitor: MonitorConfig
) -> list[MonitorEvent]:
    """Drive a fresh monitor over a recorded detection stream.

    Produces the identical event sequence to the live run that recorded the
    stream. Raises :class:`NonMonotonicTime` on a backwards timestamp.
    """
    state = MonitorState.initial()
    events: list[MonitorEvent] = []
    for frame in frames:
        state, event = step(state, frame, monitor)
        if event is not None:
            events.append(event)
    return events

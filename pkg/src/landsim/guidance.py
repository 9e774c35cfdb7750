"""Velocity command generation for the level II vehicle.

Commands are proportional to the world-frame position error, clamped per
axis, zero while waiting, and reach the vehicle only after a fixed transport
delay (the detection-latency compensation pause). Velocities are in cm/s to
match the remote-control convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .geometry import WorldPoint
from .monitor import Mode

M_TO_CM = 100.0


@dataclass(frozen=True)
class VelocityCommand:
    """World-frame velocity command in cm/s, stamped with its issue time."""

    vx: float
    vy: float
    vz: float
    t_issued: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.vx, self.vy, self.vz, self.t_issued)):
            raise ValueError("command fields must be finite")

    @property
    def speed(self) -> float:
        return math.sqrt(self.vx**2 + self.vy**2 + self.vz**2)


@dataclass(frozen=True)
class GuidanceConfig:
    landing_zone: WorldPoint
    gain: float = 0.5
    v_max: float = 100.0
    command_delay: float = 1.0
    descend_rate: float = 30.0
    arrival_radius: float = 0.15

    def __post_init__(self):
        if not self.gain > 0:
            raise ValueError("gain must be positive")
        if not self.v_max > 0:
            raise ValueError("v_max must be positive")
        if self.command_delay < 0:
            raise ValueError("command_delay must be non-negative")
        if not self.arrival_radius > 0:
            raise ValueError("arrival_radius must be positive")
        if self.descend_rate < 0:
            raise ValueError("descend_rate must be non-negative")

    def to_dict(self) -> dict:
        return {
            "gain": self.gain,
            "v_max": self.v_max,
            "command_delay": self.command_delay,
            "landing_zone": [self.landing_zone.x, self.landing_zone.y, self.landing_zone.z],
            "descend_rate": self.descend_rate,
            "arrival_radius": self.arrival_radius,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GuidanceConfig":
        return cls(
            landing_zone=WorldPoint.from_array(data["landing_zone"]),
            gain=float(data.get("gain", 0.5)),
            v_max=float(data.get("v_max", 100.0)),
            command_delay=float(data.get("command_delay", 1.0)),
            descend_rate=float(data.get("descend_rate", 30.0)),
            arrival_radius=float(data.get("arrival_radius", 0.15)),
        )


def _clamp(value: float, limit: float) -> float:
    return min(limit, max(-limit, value))


def compute_command(
    current: WorldPoint,
    target: WorldPoint,
    config: GuidanceConfig,
    mode: Mode,
    t: float = 0.0,
) -> VelocityCommand:
    """Proportional velocity command for the current monitor mode.

    WAITING and LANDED command exactly zero velocity. Otherwise the x and y
    components are gain * error, clamped per axis to v_max. Descent at
    descend_rate kicks in once the vehicle is horizontally within
    arrival_radius of the target and still above it.
    """
    if mode in (Mode.WAITING, Mode.LANDED):
        return VelocityCommand(0.0, 0.0, 0.0, t)
    ex = target.x - current.x
    ey = target.y - current.y
    vx = _clamp(config.gain * ex * M_TO_CM, config.v_max)
    vy = _clamp(config.gain * ey * M_TO_CM, config.v_max)
    vz = 0.0
    if math.hypot(ex, ey) <= config.arrival_radius and current.z - target.z > 1e-12:
        vz = -config.descend_rate
    return VelocityCommand(vx, vy, vz, t)


def apply_latency(
    queue: Sequence[VelocityCommand], now: float, config: GuidanceConfig
) -> VelocityCommand:
    """The command currently acting on the vehicle.

    Returns the newest command issued at or before ``now - command_delay``;
    before any command has matured, a zero command. The queue must be
    ordered by issue time.
    """
    cutoff = now - config.command_delay
    for cmd in reversed(queue):
        if cmd.t_issued <= cutoff:
            return cmd
    return VelocityCommand(0.0, 0.0, 0.0, cutoff)

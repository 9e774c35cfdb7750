"""Landing-completion monitor for the lower-priority (level II) vehicle.

Watches the detection stream of the higher-priority (level I) vehicle. On
first sighting it commands a hover (WAITING). While waiting it snapshots the
tracked box position on a fixed sampling grid (one sample every ``delta_t``
seconds, taken from the nearest frame at or after each deadline) and
computes the displacement between consecutive samples:

    f = sqrt((x2 - x1)^2 + (y2 - y1)^2)

A displacement strictly greater than the threshold ``sigma`` means the
tracked vehicle has completed its landing drop; the monitor then releases
the vehicle (PROCEED). Losing the track for ``track_loss_timeout`` seconds
while waiting reverts to EN_ROUTE.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional

from .detection import Detection, DetectionFrame, confidence_filter, nms
from .errors import NonMonotonicTime


class Mode(str, Enum):
    EN_ROUTE = "EN_ROUTE"
    WAITING = "WAITING"
    PROCEED = "PROCEED"
    LANDED = "LANDED"


class EventKind(str, Enum):
    HOVER_COMMANDED = "HoverCommanded"
    LANDING_DETECTED = "LandingDetected"
    TRACK_LOST = "TrackLost"


@dataclass(frozen=True)
class MonitorConfig:
    sigma: float
    delta_t: float = 1.0
    track_loss_timeout: float = 3.0
    confidence_threshold: float = 0.5
    iou_threshold: float = 0.4

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")
        if not self.delta_t > 0:
            raise ValueError("delta_t must be positive")
        if not self.track_loss_timeout > 0:
            raise ValueError("track_loss_timeout must be positive")

    def to_dict(self) -> dict:
        return {
            "sigma": self.sigma,
            "delta_t": self.delta_t,
            "track_loss_timeout": self.track_loss_timeout,
            "confidence_threshold": self.confidence_threshold,
            "iou_threshold": self.iou_threshold,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "MonitorConfig":
        return cls(
            sigma=float(data["sigma"]),
            delta_t=float(data.get("delta_t", 1.0)),
            track_loss_timeout=float(data.get("track_loss_timeout", 3.0)),
            confidence_threshold=float(data.get("confidence_threshold", 0.5)),
            iou_threshold=float(data.get("iou_threshold", 0.4)),
        )


@dataclass(frozen=True)
class TrackSample:
    """Tracked box center at one sampling instant."""

    t: float
    x: float
    y: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.t, self.x, self.y)):
            raise ValueError("track sample fields must be finite")


@dataclass(frozen=True)
class MonitorState:
    mode: Mode = Mode.EN_ROUTE
    last_sample: Optional[TrackSample] = None
    last_seen_t: Optional[float] = None
    last_frame_t: Optional[float] = None

    @classmethod
    def initial(cls) -> "MonitorState":
        return cls()


@dataclass(frozen=True)
class MonitorEvent:
    t: float
    kind: EventKind
    mode: Mode
    f: Optional[float] = None

    def to_dict(self) -> dict:
        return {"t": self.t, "event": self.kind.value, "mode": self.mode.value, "f": self.f}

    @classmethod
    def from_dict(cls, data: dict) -> "MonitorEvent":
        return cls(
            t=float(data["t"]),
            kind=EventKind(data["event"]),
            mode=Mode(data["mode"]),
            f=None if data.get("f") is None else float(data["f"]),
        )


def displacement(prev: TrackSample, curr: TrackSample) -> float:
    """Image-plane distance between two track samples."""
    if curr.t <= prev.t:
        raise NonMonotonicTime(f"sample times must increase ({prev.t} -> {curr.t})")
    return math.hypot(curr.x - prev.x, curr.y - prev.y)


def best_detection(frame: DetectionFrame) -> Optional[Detection]:
    """Highest-confidence detection, ties broken by list order; None if empty."""
    best = None
    for det in frame.detections:
        if best is None or det.confidence > best.confidence:
            best = det
    return best


def step(
    state: MonitorState, frame: DetectionFrame, config: MonitorConfig
) -> tuple[MonitorState, Optional[MonitorEvent]]:
    """Advance the monitor by one detection frame.

    Returns the successor state and the event this frame produced, if any.
    Frames must arrive with non-decreasing timestamps.
    """
    if state.last_frame_t is not None and frame.t < state.last_frame_t:
        raise NonMonotonicTime(f"frame time went backwards ({state.last_frame_t} -> {frame.t})")
    processed = nms(
        confidence_filter(frame, config.confidence_threshold), config.iou_threshold
    )
    det = best_detection(processed)

    if state.mode in (Mode.LANDED, Mode.PROCEED):
        return replace(state, last_frame_t=frame.t), None

    if state.mode == Mode.EN_ROUTE:
        if det is None:
            return replace(state, last_frame_t=frame.t), None
        sample = TrackSample(frame.t, det.box.x, det.box.y)
        new = MonitorState(Mode.WAITING, sample, frame.t, frame.t)
        return new, MonitorEvent(frame.t, EventKind.HOVER_COMMANDED, Mode.WAITING)

    # WAITING
    if det is None:
        if frame.t - state.last_seen_t >= config.track_loss_timeout:
            new = MonitorState(Mode.EN_ROUTE, None, None, frame.t)
            return new, MonitorEvent(frame.t, EventKind.TRACK_LOST, Mode.EN_ROUTE)
        return replace(state, last_frame_t=frame.t), None

    deadline = state.last_sample.t + config.delta_t
    if frame.t < deadline:
        return replace(state, last_seen_t=frame.t, last_frame_t=frame.t), None
    curr = TrackSample(frame.t, det.box.x, det.box.y)
    f = displacement(state.last_sample, curr)
    if f > config.sigma:
        new = MonitorState(Mode.PROCEED, curr, frame.t, frame.t)
        return new, MonitorEvent(frame.t, EventKind.LANDING_DETECTED, Mode.PROCEED, f=f)
    return MonitorState(Mode.WAITING, curr, frame.t, frame.t), None


def mark_landed(state: MonitorState) -> MonitorState:
    """Record touchdown; only legal from PROCEED."""
    if state.mode is not Mode.PROCEED:
        raise ValueError(f"cannot land from mode {state.mode}")
    return replace(state, mode=Mode.LANDED)

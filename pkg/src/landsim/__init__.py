"""Vision-based multi-UAV landing deconfliction: core library and simulator.

A lower-priority vehicle estimates its pose from fiducial-marker corners,
watches a higher-priority vehicle through a bounding-box detection stream,
hovers while that vehicle lands, detects landing completion from the box
displacement, and then proceeds to its own landing zone.
"""

from .detection import (
    BoundingBox,
    Detection,
    DetectionFrame,
    NoiseSpec,
    confidence_filter,
    iou,
    nms,
    synth_detect,
)
from .errors import (
    ConfigInvalid,
    DegenerateConfiguration,
    DegenerateMotion,
    InsufficientViews,
    LandsimError,
    NoConvergence,
    NonMonotonicTime,
    PointAtCameraPlane,
    TargetBehindCamera,
)
from .geometry import (
    CameraIntrinsics,
    Correspondence,
    PixelPoint,
    Pose,
    ProjectionResult,
    WorldPoint,
    project,
)
from .guidance import GuidanceConfig, VelocityCommand, apply_latency, compute_command
from .monitor import (
    EventKind,
    Mode,
    MonitorConfig,
    MonitorEvent,
    MonitorState,
    TrackSample,
    best_detection,
    displacement,
    mark_landed,
    step,
)
from .pnp import calibrate_intrinsics, estimate_homography, solve_pnp
from .scenario import (
    ScenarioConfig,
    baseline_scenario,
    crossing_scenario,
    load_scenario,
    save_scenario,
)
from .simulate import SimResult, Verdict, replay, run_scenario
from .tags import TagSpec, load_tag_layout, save_tag_layout

__version__ = "0.1.0"

__all__ = [
    "BoundingBox",
    "CameraIntrinsics",
    "ConfigInvalid",
    "Correspondence",
    "DegenerateConfiguration",
    "DegenerateMotion",
    "Detection",
    "DetectionFrame",
    "EventKind",
    "GuidanceConfig",
    "InsufficientViews",
    "LandsimError",
    "Mode",
    "MonitorConfig",
    "MonitorEvent",
    "MonitorState",
    "NoConvergence",
    "NoiseSpec",
    "NonMonotonicTime",
    "PixelPoint",
    "PointAtCameraPlane",
    "Pose",
    "ProjectionResult",
    "ScenarioConfig",
    "SimResult",
    "TagSpec",
    "TargetBehindCamera",
    "TrackSample",
    "VelocityCommand",
    "Verdict",
    "WorldPoint",
    "apply_latency",
    "baseline_scenario",
    "best_detection",
    "calibrate_intrinsics",
    "compute_command",
    "confidence_filter",
    "crossing_scenario",
    "displacement",
    "estimate_homography",
    "iou",
    "load_scenario",
    "load_tag_layout",
    "mark_landed",
    "nms",
    "project",
    "replay",
    "run_scenario",
    "save_scenario",
    "save_tag_layout",
    "solve_pnp",
    "step",
    "synth_detect",
]

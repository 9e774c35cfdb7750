"""Bounding-box detections and the post-processing chain.

Boxes use the center convention: (x, y) is the box center in pixels with the
image origin at the top left, (w, h) the width and height. A frame is the
set of predictions for one image; the chain is confidence filtering (strict
``confidence > threshold``) followed by greedy non-maximum suppression.

:func:`synth_detect` is the pluggable stand-in for a trained detector: it
projects the target's body box into the image and emits the pixel hull with
configurable noise, duplicates and dropouts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import TargetBehindCamera
from .geometry import CameraIntrinsics, Pose

# Jittered duplicate detections draw their confidence uniformly from this
# range, always below the primary detection's 1.0.
DUPLICATE_CONFIDENCE_RANGE = (0.3, 0.9)


@dataclass(frozen=True)
class BoundingBox:
    """A 4-component blob: center (x, y) plus width and height, pixels."""

    x: float
    y: float
    w: float
    h: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.x, self.y, self.w, self.h)):
            raise ValueError("box fields must be finite")
        if self.w < 0 or self.h < 0:
            raise ValueError("box width and height must be non-negative")

    @property
    def extents(self) -> tuple[float, float, float, float]:
        """(x1, y1, x2, y2) corner form."""
        return (
            self.x - self.w / 2.0,
            self.y - self.h / 2.0,
            self.x + self.w / 2.0,
            self.y + self.h / 2.0,
        )

    @property
    def area(self) -> float:
        return self.w * self.h


@dataclass(frozen=True)
class Detection:
    box: BoundingBox
    confidence: float
    class_id: int = 0

    def __post_init__(self):
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError("confidence must be in [0, 1]")


@dataclass(frozen=True)
class DetectionFrame:
    """All detections for one image at simulation time t."""

    t: float
    detections: tuple[Detection, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "detections", tuple(self.detections))
        if not (math.isfinite(self.t) and self.t >= 0):
            raise ValueError("frame time must be finite and >= 0")


@dataclass(frozen=True)
class NoiseSpec:
    """Detection and observation noise knobs for the synthetic sources."""

    center_sigma_px: float = 2.0
    size_sigma_px: float = 3.0
    duplicate_count: int = 0
    dropout_prob: float = 0.0
    pixel_noise_sigma: float = 0.0

    def __post_init__(self):
        if min(self.center_sigma_px, self.size_sigma_px, self.pixel_noise_sigma) < 0:
            raise ValueError("noise sigmas must be non-negative")
        if self.duplicate_count < 0:
            raise ValueError("duplicate_count must be non-negative")
        if not 0.0 <= self.dropout_prob <= 1.0:
            raise ValueError("dropout_prob must be in [0, 1]")

    def to_dict(self) -> dict:
        return {
            "center_sigma_px": self.center_sigma_px,
            "size_sigma_px": self.size_sigma_px,
            "duplicate_count": self.duplicate_count,
            "dropout_prob": self.dropout_prob,
            "pixel_noise_sigma": self.pixel_noise_sigma,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "NoiseSpec":
        return cls(
            center_sigma_px=float(data.get("center_sigma_px", 2.0)),
            size_sigma_px=float(data.get("size_sigma_px", 3.0)),
            duplicate_count=int(data.get("duplicate_count", 0)),
            dropout_prob=float(data.get("dropout_prob", 0.0)),
            pixel_noise_sigma=float(data.get("pixel_noise_sigma", 0.0)),
        )


def iou(a: BoundingBox, b: BoundingBox) -> float:
    """Intersection over union of two boxes; 0 when the union is empty."""
    ax1, ay1, ax2, ay2 = a.extents
    bx1, by1, bx2, by2 = b.extents
    iw = min(ax2, bx2) - max(ax1, bx1)
    ih = min(ay2, by2) - max(ay1, by1)
    if iw <= 0 or ih <= 0:
        inter = 0.0
    else:
        inter = iw * ih
    # Areas from the same corner arithmetic as the intersection, so that
    # identical boxes give exactly 1.
    union = (ax2 - ax1) * (ay2 - ay1) + (bx2 - bx1) * (by2 - by1) - inter
    if union <= 0:
        return 0.0
    return inter / union


def confidence_filter(frame: DetectionFrame, threshold: float) -> DetectionFrame:
    """Keep detections with confidence strictly above the threshold."""
    kept = tuple(d for d in frame.detections if d.confidence > threshold)
    return DetectionFrame(frame.t, kept)


def nms(frame: DetectionFrame, iou_threshold: float) -> DetectionFrame:
    """Greedy non-maximum suppression.

    Repeatedly keeps the highest-confidence remaining detection (ties broken
    by input order) and removes every remaining detection whose IoU with it
    strictly exceeds the threshold. Kept detections come out in selection
    order.
    """
    remaining = list(enumerate(frame.detections))
    kept: list[Detection] = []
    while remaining:
        best_pos = 0
        for pos in range(1, len(remaining)):
            if remaining[pos][1].confidence > remaining[best_pos][1].confidence:
                best_pos = pos
        _, best = remaining.pop(best_pos)
        kept.append(best)
        remaining = [
            (i, d) for i, d in remaining if iou(best.box, d.box) <= iou_threshold
        ]
    return DetectionFrame(frame.t, tuple(kept))


def _pixel_hull(points_cam: np.ndarray, intrinsics: CameraIntrinsics) -> BoundingBox:
    hom = points_cam @ intrinsics.matrix.T
    pix = hom[:, :2] / points_cam[:, 2:3]
    u1, v1 = pix.min(axis=0)
    u2, v2 = pix.max(axis=0)
    return BoundingBox((u1 + u2) / 2.0, (v1 + v2) / 2.0, u2 - u1, v2 - v1)


def synth_detect(
    target_pose: Pose,
    observer_pose: Pose,
    intrinsics: CameraIntrinsics,
    body_half_extents,
    noise: NoiseSpec,
    rng: np.random.Generator,
    t: float = 0.0,
    image_size: tuple[int, int] | None = None,
) -> DetectionFrame:
    """Synthetic single-target detector.

    Projects the 8 corners of the target's body box (``target_pose`` maps
    the body frame to the world, ``observer_pose`` the world to the camera)
    and takes the axis-aligned pixel hull as the true box. Emits the true
    box under Gaussian center/size noise at confidence 1.0, plus
    ``noise.duplicate_count`` jittered lower-confidence duplicates; with
    probability ``noise.dropout_prob`` the frame is empty. Deterministic
    given the generator state.

    ``image_size``, when given, gates the output on the sensor: a frame is
    only emitted if the true hull overlaps the (width, height) rectangle,
    which is how the simulator models the target entering the field of view.
    Raises :class:`TargetBehindCamera` if any corner has non-positive depth.
    """
    ex, ey, ez = (float(v) for v in body_half_extents)
    corners_body = np.array(
        [[sx * ex, sy * ey, sz * ez] for sx in (-1, 1) for sy in (-1, 1) for sz in (-1, 1)]
    )
    cam = observer_pose.apply(target_pose.apply(corners_body))
    if np.any(cam[:, 2] < 1e-12):
        raise TargetBehindCamera("target body box reaches the camera plane")
    true_box = _pixel_hull(cam, intrinsics)
    if image_size is not None:
        width, height = image_size
        x1, y1, x2, y2 = true_box.extents
        if x2 < 0 or x1 > width or y2 < 0 or y1 > height:
            return DetectionFrame(t, ())
    if rng.uniform() < noise.dropout_prob:
        return DetectionFrame(t, ())

    def jitter(conf: float) -> Detection:
        dx, dy = rng.normal(0.0, noise.center_sigma_px, 2)
        dw, dh = rng.normal(0.0, noise.size_sigma_px, 2)
        box = BoundingBox(
            true_box.x + dx,
            true_box.y + dy,
            max(0.0, true_box.w + dw),
            max(0.0, true_box.h + dh),
        )
        return Detection(box=box, confidence=conf)

    detections = [jitter(1.0)]
    lo, hi = DUPLICATE_CONFIDENCE_RANGE
    for _ in range(noise.duplicate_count):
        conf = float(rng.uniform(lo, hi))
        detections.append(jitter(conf))
    return DetectionFrame(t, tuple(detections))

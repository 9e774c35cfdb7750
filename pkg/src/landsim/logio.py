"""File formats: JSONL streams, JSON configs, and the CSV traces.

Formats (field names and order are part of the contract):

- detection log, one frame per line:
  ``{"t": float, "dets": [[x, y, w, h, conf], ...]}``
- event log, one event per line:
  ``{"t": float, "event": str, "mode": str, "f": float|null}``
- correspondence dump, one view per line:
  ``{"view": int, "points": [{"tag": int, "corner": int,
  "world": [x, y, z], "pixel": [u, v]}, ...]}``
- trajectory CSV: ``t,l1_x,l1_y,l1_z,l2_x,l2_y,l2_z,separation_m,mode``
- command trace CSV: ``t,mode,vx_cmps,vy_cmps,vz_cmps``
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Iterable, Iterator

from .detection import BoundingBox, Detection, DetectionFrame
from .geometry import CameraIntrinsics, Correspondence, PixelPoint, WorldPoint
from .monitor import MonitorEvent
from .simulate import SimResult

TRAJECTORY_HEADER = ["t", "l1_x", "l1_y", "l1_z", "l2_x", "l2_y", "l2_z", "separation_m", "mode"]
COMMANDS_HEADER = ["t", "mode", "vx_cmps", "vy_cmps", "vz_cmps"]
SWEEP_HEADER = [
    "seed",
    "verdict",
    "min_separation_m",
    "wait_start_s",
    "landing_detected_t_s",
    "touchdown_t_s",
]


def frame_to_dict(frame: DetectionFrame) -> dict:
    return {
        "t": frame.t,
        "dets": [[d.box.x, d.box.y, d.box.w, d.box.h, d.confidence] for d in frame.detections],
    }


def frame_from_dict(data: dict) -> DetectionFrame:
    detections = tuple(
        Detection(box=BoundingBox(x, y, w, h), confidence=conf)
        for x, y, w, h, conf in data["dets"]
    )
    return DetectionFrame(float(data["t"]), detections)


def write_detection_log(frames: Iterable[DetectionFrame], path) -> None:
    with open(path, "w") as fp:
        for frame in frames:
            fp.write(json.dumps(frame_to_dict(frame)) + "\n")


def iter_detection_log(path) -> Iterator[DetectionFrame]:
    with open(path) as fp:
        for line in fp:
            line = line.strip()
            if line:
                yield frame_from_dict(json.loads(line))


def write_event_log(events: Iterable[MonitorEvent], path) -> None:
    with open(path, "w") as fp:
        for event in events:
            fp.write(json.dumps(event.to_dict()) + "\n")


def read_event_log(path) -> list[MonitorEvent]:
    events = []
    with open(path) as fp:
        for line in fp:
            line = line.strip()
            if line:
                events.append(MonitorEvent.from_dict(json.loads(line)))
    return events


def write_correspondence_views(views: Iterable[Iterable[Correspondence]], path) -> None:
    with open(path, "w") as fp:
        for i, view in enumerate(views):
            record = {
                "view": i,
                "points": [
                    {
                        "tag": c.tag_id,
                        "corner": c.corner_index,
                        "world": [c.world.x, c.world.y, c.world.z],
                        "pixel": [c.pixel.u, c.pixel.v],
                    }
                    for c in view
                ],
            }
            fp.write(json.dumps(record) + "\n")


def read_correspondence_views(path) -> list[list[Correspondence]]:
    views = []
    with open(path) as fp:
        for line in fp:
            line = line.strip()
            if not line:
                continue
            record = json.loads(line)
            views.append(
                [
                    Correspondence(
                        world=WorldPoint.from_array(p["world"]),
                        pixel=PixelPoint(float(p["pixel"][0]), float(p["pixel"][1])),
                        tag_id=int(p["tag"]),
                        corner_index=int(p["corner"]),
                    )
                    for p in record["points"]
                ]
            )
    return views


def write_intrinsics(intrinsics: CameraIntrinsics, path) -> None:
    Path(path).write_text(json.dumps(intrinsics.to_dict(), indent=2) + "\n")


def read_intrinsics(path) -> CameraIntrinsics:
    return CameraIntrinsics.from_dict(json.loads(Path(path).read_text()))


def write_result(result: SimResult, path) -> None:
    Path(path).write_text(json.dumps(result.to_dict(), indent=2) + "\n")


def write_trajectory_csv(result: SimResult, path) -> None:
    with open(path, "w", newline="") as fp:
        writer = csv.writer(fp)
        writer.writerow(TRAJECTORY_HEADER)
        for point in result.trajectory:
            row = point.to_row()
            writer.writerow(["" if v is None else v for v in row])


def write_commands_csv(result: SimResult, path) -> None:
    with open(path, "w", newline="") as fp:
        writer = csv.writer(fp)
        writer.writerow(COMMANDS_HEADER)
        for rec in result.commands:
            writer.writerow([rec.t, rec.mode.value, rec.command.vx, rec.command.vy, rec.command.vz])


def write_sweep_csv(rows: Iterable[dict], path) -> None:
    with open(path, "w", newline="") as fp:
        writer = csv.DictWriter(fp, fieldnames=SWEEP_HEADER)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: ("" if row.get(k) is None else row[k]) for k in SWEEP_HEADER})

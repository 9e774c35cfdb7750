"""AprilTag layout descriptions and world-frame corner generation.

A layout file is a JSON array of objects with the fields ``id``, ``family``,
``side_m``, ``center_xyz_m``, ``normal_xyz`` and ``roll_deg``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .geometry import rotation_from_axis_angle


@dataclass(frozen=True, eq=False)
class TagSpec:
    """One square fiducial marker placed in the world."""

    id: int
    family: str
    side_m: float
    center: np.ndarray
    normal: np.ndarray
    roll_deg: float = 0.0

    def __post_init__(self):
        center = np.array(self.center, dtype=float).reshape(3)
        normal = np.array(self.normal, dtype=float).reshape(3)
        norm = np.linalg.norm(normal)
        if norm < 1e-12:
            raise ValueError("tag normal must be nonzero")
        normal = normal / norm
        if self.side_m <= 0:
            raise ValueError("tag side length must be positive")
        center.setflags(write=False)
        normal.setflags(write=False)
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "normal", normal)

    def basis(self):
        """In-plane unit axes (u, v) of the tag frame.

        Before roll, u is the world-horizontal direction cross(z, normal)
        (falling back to cross(y, normal) for floor/ceiling tags) and
        v = normal x u. ``roll_deg`` then rotates both about the normal.
        """
        u = np.cross([0.0, 0.0, 1.0], self.normal)
        if np.linalg.norm(u) < 1e-12:
            u = np.cross([0.0, 1.0, 0.0], self.normal)
        u = u / np.linalg.norm(u)
        v = np.cross(self.normal, u)
        if self.roll_deg != 0.0:
            rot = rotation_from_axis_angle(self.normal * np.radians(self.roll_deg))
            u = rot @ u
            v = rot @ v
        return u, v

    def corners_world(self) -> np.ndarray:
        """The 4 corners, (4, 3), counter-clockwise from the (-s/2, -s/2)
        corner of the tag frame as seen looking against the normal."""
        u, v = self.basis()
        h = self.side_m / 2.0
        offsets = [(-h, -h), (h, -h), (h, h), (-h, h)]
        return np.array([self.center + du * u + dv * v for du, dv in offsets])

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "family": self.family,
            "side_m": self.side_m,
            "center_xyz_m": [float(c) for c in self.center],
            "normal_xyz": [float(c) for c in self.normal],
            "roll_deg": self.roll_deg,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TagSpec":
        return cls(
            id=int(data["id"]),
            family=str(data["family"]),
            side_m=float(data["side_m"]),
            center=data["center_xyz_m"],
            normal=data["normal_xyz"],
            roll_deg=float(data.get("roll_deg", 0.0)),
        )


def save_tag_layout(tags, path) -> None:
    Path(path).write_text(json.dumps([t.to_dict() for t in tags], indent=2) + "\n")


def load_tag_layout(path) -> list[TagSpec]:
    data = json.loads(Path(path).read_text())
    return [TagSpec.from_dict(entry) for entry in data]


def wall_grid(
    ids,
    wall_y: float,
    xs,
    zs,
    side_m: float,
    family: str = "36h11",
) -> list[TagSpec]:
    """A grid of wall tags facing -y, one per (z, x) pair, in id order."""
    tags = []
    it = iter(ids)
    for z in zs:
        for x in xs:
            tags.append(
                TagSpec(
                    id=next(it),
                    family=family,
                    side_m=side_m,
                    center=[x, wall_y, z],
                    normal=[0.0, -1.0, 0.0],
                )
            )
    return tags

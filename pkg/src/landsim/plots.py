"""Report figures rendered next to the delimited run outputs."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .monitor import Mode
from .simulate import SimResult


def _waiting_spans(result: SimResult):
    """(start, end) time spans the vehicle spent in WAITING."""
    spans = []
    start = None
    for point in result.trajectory:
        if point.mode is Mode.WAITING and start is None:
            start = point.t
        elif point.mode is not Mode.WAITING and start is not None:
            spans.append((start, point.t))
            start = None
    if start is not None:
        spans.append((start, result.trajectory[-1].t))
    return spans


def plot_velocity_profile(result: SimResult, path) -> Path:
    """Commanded x/y velocity over time, waiting phase shaded."""
    t = [rec.t for rec in result.commands]
    vx = [rec.command.vx for rec in result.commands]
    vy = [rec.command.vy for rec in result.commands]
    fig, axes = plt.subplots(2, 1, sharex=True, figsize=(7, 5))
    for ax, values, label in ((axes[0], vx, "x-velocity"), (axes[1], vy, "y-velocity")):
        ax.plot(t, values, lw=1.2)
        for start, end in _waiting_spans(result):
            ax.axvspan(start, end, color="0.85", zorder=0)
        ax.set_ylabel(f"{label} (cm/s)")
        ax.grid(alpha=0.3)
    axes[1].set_xlabel("time (s)")
    axes[0].set_title("Commanded world-frame velocity (shaded: waiting)")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return Path(path)


def plot_trajectory_topdown(result: SimResult, path) -> Path:
    """Top-down (x, y) paths of both vehicles."""
    l2 = np.array([[p.level2.x, p.level2.y] for p in result.trajectory])
    fig, ax = plt.subplots(figsize=(6, 6))
    ax.plot(l2[:, 0], l2[:, 1], label="level II", lw=1.5)
    ax.plot(l2[0, 0], l2[0, 1], "o", color="C0")
    l1_pts = [(p.level1.x, p.level1.y) for p in result.trajectory if p.level1 is not None]
    if l1_pts:
        l1 = np.array(l1_pts)
        ax.plot(l1[:, 0], l1[:, 1], label="level I", lw=1.5, color="C3")
        ax.plot(l1[-1, 0], l1[-1, 1], "x", color="C3")
    ax.set_xlabel("x (m)")
    ax.set_ylabel("y (m)")
    ax.set_title(f"Top-down trajectories ({result.verdict.value})")
    ax.axis("equal")
    ax.grid(alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return Path(path)


def plot_separation(result: SimResult, path) -> Path:
    """Inter-vehicle separation over time against the collision radius."""
    rows = [(p.t, p.separation) for p in result.trajectory if p.separation is not None]
    fig, ax = plt.subplots(figsize=(7, 4))
    if rows:
        arr = np.array(rows)
        ax.plot(arr[:, 0], arr[:, 1], lw=1.5)
    ax.axhline(result.collision_radius, color="C3", ls="--", label="collision radius")
    ax.set_xlabel("time (s)")
    ax.set_ylabel("separation (m)")
    ax.set_title("Inter-vehicle separation")
    ax.grid(alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return Path(path)


def plot_sweep_separation(rows, collision_radius: float, path) -> Path:
    """Per-seed minimum separation from a sweep summary."""
    seeds = [r["seed"] for r in rows]
    seps = [r["min_separation_m"] for r in rows]
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(seeds, seps, "o", ms=4)
    ax.axhline(collision_radius, color="C3", ls="--", label="collision radius")
    ax.set_xlabel("seed")
    ax.set_ylabel("min separation (m)")
    ax.set_title("Minimum separation per seed")
    ax.grid(alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return Path(path)


def render_run_report(result: SimResult, out_dir) -> list[Path]:
    """Render the run figures into ``out_dir``; returns the written paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return [
        plot_velocity_profile(result, out / "velocity.png"),
        plot_trajectory_topdown(result, out / "trajectory.png"),
        plot_separation(result, out / "separation.png"),
    ]

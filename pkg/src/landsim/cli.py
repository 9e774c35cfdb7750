"""Command-line interface. Console script name: ``sim``."""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from . import logio
from .errors import LandsimError
from .monitor import MonitorConfig
from .pnp import calibrate_intrinsics
from .scenario import load_scenario
from .simulate import run_scenario, replay


def _cmd_run(args) -> int:
    config = load_scenario(args.scenario)
    if args.seed is not None:
        config = dataclasses.replace(config, seed=args.seed)
    if args.no_monitor:
        config = dataclasses.replace(config, monitor_enabled=False)

    frames = []
    recorder = frames.append if args.record_detections else None
    result = run_scenario(config, frame_recorder=recorder)

    if args.record_detections:
        logio.write_detection_log(frames, args.record_detections)
    if args.out:
        logio.write_result(result, args.out)
    if args.report_dir:
        from . import plots

        report = Path(args.report_dir)
        report.mkdir(parents=True, exist_ok=True)
        logio.write_trajectory_csv(result, report / "trajectory.csv")
        logio.write_commands_csv(result, report / "commands.csv")
        logio.write_event_log(result.events, report / "events.jsonl")
        plots.render_run_report(result, report)

    sep = "n/a" if result.min_separation is None else f"{result.min_separation:.3f} m"
    print(
        f"verdict={result.verdict.value} min_separation={sep} "
        f"wait_start={result.wait_start} landing_detected={result.landing_detected_t} "
        f"touchdown={result.level2_touchdown_t}"
    )
    return 0


def _cmd_replay(args) -> int:
    monitor = MonitorConfig.from_dict(json.loads(Path(args.monitor).read_text()))
    events = replay(logio.iter_detection_log(args.log), monitor)
    logio.write_event_log(events, args.out)
    print(f"{len(events)} event(s) -> {args.out}")
    return 0


def _cmd_calibrate(args) -> int:
    views = logio.read_correspondence_views(args.views)
    intrinsics = calibrate_intrinsics(views)
    logio.write_intrinsics(intrinsics, args.out)
    print(
        f"fx={intrinsics.fx:.4f} fy={intrinsics.fy:.4f} "
        f"cx={intrinsics.cx:.4f} cy={intrinsics.cy:.4f} skew={intrinsics.skew:.6f}"
    )
    return 0


def _cmd_sweep(args) -> int:
    config = load_scenario(args.scenario)
    rows = []
    for seed in range(config.seed, config.seed + args.seeds):
        result = run_scenario(dataclasses.replace(config, seed=seed))
        rows.append(
            {
                "seed": seed,
                "verdict": result.verdict.value,
                "min_separation_m": result.min_separation,
                "wait_start_s": result.wait_start,
                "landing_detected_t_s": result.landing_detected_t,
                "touchdown_t_s": result.level2_touchdown_t,
            }
        )
    logio.write_sweep_csv(rows, args.out)
    if args.plot:
        from . import plots

        plots.plot_sweep_separation(rows, config.collision_radius, args.plot)
    verdicts = {}
    for row in rows:
        verdicts[row["verdict"]] = verdicts.get(row["verdict"], 0) + 1
    print(f"{args.seeds} run(s): " + ", ".join(f"{k}={v}" for k, v in sorted(verdicts.items())))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sim",
        description="Vision-based multi-UAV landing deconfliction simulator.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one scenario to verdict")
    run.add_argument("--scenario", required=True, help="scenario JSON file")
    run.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    run.add_argument("--record-detections", default=None, help="write the detection log (JSONL)")
    run.add_argument("--out", default=None, help="write the result JSON")
    run.add_argument(
        "--report-dir",
        default=None,
        help="write trajectory/commands CSV, events JSONL and figures here",
    )
    run.add_argument(
        "--no-monitor",
        action="store_true",
        help="ablation: disable the landing monitor (never waits)",
    )
    run.set_defaults(func=_cmd_run)

    rep = sub.add_parser("replay", help="re-run the monitor over a detection log")
    rep.add_argument("--log", required=True, help="detection log (JSONL)")
    rep.add_argument("--monitor", required=True, help="monitor config JSON")
    rep.add_argument("--out", required=True, help="event log output (JSONL)")
    rep.set_defaults(func=_cmd_replay)

    cal = sub.add_parser("calibrate", help="closed-form intrinsics from planar views")
    cal.add_argument("--views", required=True, help="correspondence dump (JSONL, one view per line)")
    cal.add_argument("--out", required=True, help="intrinsics JSON output")
    cal.set_defaults(func=_cmd_calibrate)

    sweep = sub.add_parser("sweep", help="run a scenario across consecutive seeds")
    sweep.add_argument("--scenario", required=True, help="scenario JSON file")
    sweep.add_argument("--seeds", type=int, required=True, help="number of seeds to run")
    sweep.add_argument("--out", required=True, help="summary CSV output")
    sweep.add_argument("--plot", default=None, help="optional min-separation figure (PNG)")
    sweep.set_defaults(func=_cmd_sweep)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except LandsimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""SVG figures and companion CSV dumps for plans, missions and reports."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .optimize.planner import PlanResult  # noqa: E402
from .usv.mission import MissionLog  # noqa: E402

_COLORS = {"gp-mc": "tab:blue", "gp-fixed": "tab:cyan", "astar": "tab:orange",
           "rrt-star": "tab:red", "fmm": "tab:green"}


def _finish(fig, out_path: Path) -> Path:
    out_path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out_path, format="svg")
    plt.close(fig)
    return out_path


def overlay_svg(out_path, grid=None, env=None, paths: dict | None = None,
                start=None, goal=None, traveled=None, title: str = "") -> Path:
    """Map overlay: obstacles, current quiver, planned and traveled paths."""
    fig, ax = plt.subplots(figsize=(6, 6))
    if grid is not None:
        lo, hi = grid.extent()
        ax.imshow(grid.cells, cmap="Greys", origin="lower", vmin=0, vmax=1,
                  extent=[lo[0], hi[0], lo[1], hi[1]], interpolation="nearest")
    if env is not None and np.any(env.energy_rate > 0):
        stride = max(1, env.energy_rate.shape[0] // 24)
        h, w = env.energy_rate.shape
        cols, rows = np.meshgrid(np.arange(0, w, stride), np.arange(0, h, stride))
        xs = env.origin[0] + cols * env.cell_size
        ys = env.origin[1] + rows * env.cell_size
        ax.quiver(xs, ys, env.current[::stride, ::stride, 0],
                  env.current[::stride, ::stride, 1], color="steelblue",
                  alpha=0.5, width=0.002)
    for name, pts in (paths or {}).items():
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        ax.plot(pts[:, 0], pts[:, 1], label=name,
                color=_COLORS.get(name), linewidth=1.8)
    if traveled is not None:
        traveled = np.atleast_2d(np.asarray(traveled, dtype=float))
        ax.plot(traveled[:, 0], traveled[:, 1], "k--", linewidth=1.2,
                label="traveled")
    if start is not None:
        ax.plot(*start, "g^", markersize=9, label="start")
    if goal is not None:
        ax.plot(*goal, "r*", markersize=12, label="goal")
    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")
    ax.set_title(title)
    ax.set_aspect("equal")
    if paths or start is not None:
        ax.legend(loc="best", fontsize=8)
    return _finish(fig, Path(out_path))


def replan_curve_csv(result: PlanResult) -> str:
    lines = ["iteration,length_m,objective,collision_free,accepted,interp_counts"]
    for r in result.replans:
        counts = ";".join(str(c) for c in r.interp_counts)
        lines.append(f"{r.iteration},{r.length_m!r},{r.objective!r},"
                     f"{r.collision_free},{r.accepted},{counts}")
    return "\n".join(lines) + "\n"


def replan_curve_svg(out_path, result: PlanResult) -> Path:
    fig, ax = plt.subplots(figsize=(5, 3.2))
    its = [r.iteration for r in result.replans]
    lengths = [r.length_m for r in result.replans]
    ax.plot(its, lengths, "o-", color="grey", label="generated")
    incumbent = []
    best = None
    for r in result.replans:
        if r.accepted:
            best = r.length_m
        incumbent.append(best)
    ax.step([i for i, b in zip(its, incumbent) if b is not None],
            [b for b in incumbent if b is not None], where="post",
            color="tab:blue", label="accepted")
    ax.set_xlabel("replanning iteration")
    ax.set_ylabel("path length [m]")
    ax.legend(fontsize=8)
    fig.tight_layout()
    return _finish(fig, Path(out_path))


def emit_plan_artifacts(result: PlanResult, out_dir, stem: str = "plan",
                        grid=None, env=None, start=None, goal=None) -> list[Path]:
    """Overlay SVG + path CSV (+ replan curve when the loop ran)."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    files = [overlay_svg(out_dir / f"{stem}_overlay.svg", grid=grid, env=env,
                         paths={"path": result.path[:, :2]}, start=start,
                         goal=goal, title=stem)]
    csv_path = out_dir / f"{stem}_path.csv"
    csv_path.write_text(result.path_csv())
    files.append(csv_path)
    if len(result.replans) > 1:
        files.append(replan_curve_svg(out_dir / f"{stem}_replan.svg", result))
        curve = out_dir / f"{stem}_replan.csv"
        curve.write_text(replan_curve_csv(result))
        files.append(curve)
    return files


def mission_series_svg(out_path, log: MissionLog) -> Path:
    fig, axes = plt.subplots(3, 1, figsize=(6, 7), sharex=True)
    axes[0].plot(log.t, log.cross_track, color="tab:red")
    axes[0].set_ylabel("track error [m]")
    axes[1].plot(log.t, np.degrees(log.psi_d), label="desired", color="grey")
    axes[1].plot(log.t, np.degrees(log.psi), label="measured", color="tab:blue")
    axes[1].set_ylabel("heading [deg]")
    axes[1].legend(fontsize=8)
    axes[2].plot(log.t, log.speed_d, label="desired", color="grey")
    axes[2].plot(log.t, log.speed, label="measured", color="tab:blue")
    axes[2].set_ylabel("speed [m/s]")
    axes[2].set_xlabel("t [s]")
    axes[2].legend(fontsize=8)
    fig.tight_layout()
    return _finish(fig, Path(out_path))


def emit_mission_artifacts(log: MissionLog, out_dir, stem: str = "mission",
                           grid=None, env=None, desired=None) -> list[Path]:
    """Time-series SVG + CSV, plus a map overlay when the map is available."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    files = [mission_series_svg(out_dir / f"{stem}_series.svg", log)]
    csv_path = out_dir / f"{stem}.csv"
    csv_path.write_text(log.to_csv())
    files.append(csv_path)
    if grid is not None:
        paths = {"planned": desired} if desired is not None else {}
        files.append(overlay_svg(out_dir / f"{stem}_overlay.svg", grid=grid,
                                 env=env, paths=paths,
                                 traveled=np.column_stack([log.e, log.n]),
                                 title=stem))
    return files


def emit_report_artifacts(report: dict, out_dir, scenarios: dict | None = None) -> list[Path]:
    """One overlay SVG per (scenario, planner) plus the aggregate CSV.

    ``scenarios`` maps scenario names to Scenario objects so overlays can
    render the map raster; without it paths are drawn on a blank canvas.
    """
    from .bench import report_csv

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    files = []
    for row in report["rows"]:
        run = next((r for r in report["raw"]
                    if r["scenario"] == row["scenario"]
                    and r["planner"] == row["planner"] and r["success"]), None)
        if run is None or run.get("path") is None:
            continue
        scen = (scenarios or {}).get(row["scenario"])
        files.append(overlay_svg(
            out_dir / f"{row['scenario']}_{row['planner']}_overlay.svg",
            grid=scen.grid if scen else None,
            env=scen.workspace().env if scen else None,
            paths={row["planner"]: np.array(run["path"])},
            start=scen.start if scen else None,
            goal=scen.goal if scen else None,
            title=f"{row['scenario']} / {row['planner']}"))
    csv_path = out_dir / "report.csv"
    csv_path.write_text(report_csv(report))
    files.append(csv_path)
    return files

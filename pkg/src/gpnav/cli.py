"""Thin HTTP client over the planning service.

Every verb talks to the service API; by default an in-process instance of
the app answers the requests, and ``--server URL`` points the same verbs at
a remote deployment. Exit codes: 0 success, 2 planning failure, 1 usage or
I/O error.
"""
from __future__ import annotations

import base64
import json
import sys
from pathlib import Path

import click
import httpx


class PlanningFailure(Exception):
    pass


class ServiceClient:
    def __init__(self, server: str | None):
        if server:
            self._client = httpx.Client(base_url=server, timeout=None)
        else:
            import warnings
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                from fastapi.testclient import TestClient

            from .service.app import app
            self._client = TestClient(app)

    def post(self, path: str, payload: dict) -> dict:
        response = self._client.post(path, json=payload)
        if response.status_code != 200:
            try:
                detail = response.json().get("detail", response.text)
            except ValueError:
                detail = response.text
            raise click.ClickException(f"{path} failed ({response.status_code}): {detail}")
        return response.json()


def load_scenario_payload(path) -> dict:
    """Read a scenario config and inline its map as base64."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise click.ClickException(f"cannot read scenario {path}: {exc}")
    map_path = path.parent / doc.pop("map")
    if not map_path.exists():
        raise click.ClickException(f"{path.name} references missing map {map_path}")
    doc["map_pgm"] = base64.b64encode(map_path.read_bytes()).decode("ascii")
    return doc


def _write_files(files: dict[str, str], out_dir: Path, binary: bool) -> list[Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for name, content in sorted(files.items()):
        target = out_dir / name
        if binary:
            target.write_bytes(base64.b64decode(content))
        else:
            target.write_text(content)
        written.append(target)
    return written


@click.group()
@click.option("--server", default=None, metavar="URL",
              help="Base URL of a running service (default: in-process).")
@click.pass_context
def cli(ctx, server):
    """Plan, benchmark and simulate over raster sea charts."""
    ctx.obj = ServiceClient(server)


@cli.command("gen-scenarios")
@click.argument("names", nargs=-1, required=True)
@click.option("--size", default=500, show_default=True, type=int)
@click.option("--currents", "mode", flag_value="currents",
              help="Only the ocean-current variants.")
@click.option("--no-currents", "mode", flag_value="none", default=True,
              help="Only the still-water variants.")
@click.option("--both-modes", "mode", flag_value="both",
              help="Still-water and current variants.")
@click.option("--out", default="scenarios", show_default=True)
@click.pass_obj
def gen_scenarios(client: ServiceClient, names, size, mode, out):
    """Write built-in maps and configs (problem1..problem5 or 'all')."""
    data = client.post("/scenarios/generate",
                       {"names": list(names), "size": size, "currents": mode})
    written = _write_files(data["files"], Path(out), binary=True)
    for p in written:
        click.echo(str(p))


@cli.command("plan")
@click.argument("scenario_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--planner", default="gp-mc", show_default=True)
@click.option("--seed", type=int, default=None)
@click.option("--replan", type=int, default=None)
@click.option("--timeout", default=30.0, show_default=True)
@click.option("--out", default="out", show_default=True)
@click.pass_obj
def plan_cmd(client: ServiceClient, scenario_file, planner, seed, replan,
             timeout, out):
    """Run one planner on one scenario; writes plan JSON and path CSV."""
    payload = load_scenario_payload(scenario_file)
    if replan is not None:
        payload["replan"] = replan
    data = client.post("/plan", {"scenario": payload, "planner": planner,
                                 "seed": seed, "timeout_s": timeout})
    if not data["success"]:
        raise PlanningFailure(data.get("reason") or "planner reported failure")
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = f"{payload['name']}_{planner}"
    plan_path = out_dir / f"{stem}.json"
    plan_path.write_text(json.dumps(data, sort_keys=True, indent=1) + "\n")
    csv_path = out_dir / f"{stem}_path.csv"
    csv_path.write_text("t,x,y,vx,vy\n" + "\n".join(
        ",".join(repr(v) for v in row) for row in data["path"]) + "\n")
    click.echo(f"{planner}: length {data['length_m']:.1f} m, "
               f"collision-free {data['collision_free']}, "
               f"{data['duration_s'] * 1e3:.0f} ms -> {plan_path}")


@cli.command("bench")
@click.argument("scenario_files", nargs=-1, required=True,
                type=click.Path(exists=True, dir_okay=False))
@click.option("--jobs", default=1, show_default=True)
@click.option("--timeout", default=30.0, show_default=True)
@click.option("--out", default="out", show_default=True)
@click.pass_obj
def bench_cmd(client: ServiceClient, scenario_files, jobs, timeout, out):
    """Benchmark every configured planner over the given scenarios."""
    payloads = [load_scenario_payload(p) for p in scenario_files]
    data = client.post("/bench", {"scenarios": payloads, "jobs": jobs,
                                  "timeout_s": timeout})
    report = data["report"]
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "report.json").write_text(
        json.dumps(report, sort_keys=True, indent=1) + "\n")
    from .bench import report_csv
    (out_dir / "report.csv").write_text(report_csv(report))
    for row in report["rows"]:
        length = row["length_m"]["mean"] if row["length_m"] else float("nan")
        t_ms = row["time_ms"]["mean"] if row["time_ms"] else float("nan")
        click.echo(f"{row['scenario']:28s} {row['planner']:9s} "
                   f"ok {row['successes']}/{row['repetitions']} "
                   f"L {length:9.1f} m  T {t_ms:9.1f} ms")
    click.echo(f"report -> {out_dir / 'report.json'}")
    if all(row["successes"] == 0 for row in report["rows"]):
        raise PlanningFailure("every benchmark run failed")


@cli.command("mission")
@click.argument("plan_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--scenario", "scenario_file", default=None,
              type=click.Path(exists=True, dir_okay=False),
              help="Scenario supplying the current field.")
@click.option("--dt", default=0.01, show_default=True)
@click.option("--out", default="out", show_default=True)
@click.pass_obj
def mission_cmd(client: ServiceClient, plan_file, scenario_file, dt, out):
    """Track a planned path with the simulated vessel; writes the log CSV."""
    plan_doc = json.loads(Path(plan_file).read_text())
    payload = {"path": plan_doc["path"], "dt": dt}
    if scenario_file:
        payload["scenario"] = load_scenario_payload(scenario_file)
    data = client.post("/mission", payload)
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = Path(plan_file).stem + "_mission"
    (out_dir / f"{stem}.csv").write_text(data["csv"])
    (out_dir / f"{stem}.json").write_text(
        json.dumps(data["summary"], sort_keys=True, indent=1) + "\n")
    s = data["summary"]
    click.echo(f"completed {s['completed']}, mean track error "
               f"{s['mean_cross_track_m']:.2f} m -> {out_dir / (stem + '.csv')}")


@cli.command("plot")
@click.option("--plan", "plan_file", default=None,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--mission", "mission_file", default=None,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--report", "report_file", default=None,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--scenario", "scenario_files", multiple=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--out", default="plots", show_default=True)
@click.pass_obj
def plot_cmd(client: ServiceClient, plan_file, mission_file, report_file,
             scenario_files, out):
    """Render SVG overlays/series (plus CSV dumps) for saved artifacts."""
    scenarios = [load_scenario_payload(p) for p in scenario_files]
    requests = []
    if plan_file:
        doc = json.loads(Path(plan_file).read_text())
        requests.append({"kind": "plan", "plan": doc, "scenarios": scenarios,
                         "stem": Path(plan_file).stem})
    if mission_file:
        req = {"kind": "mission", "mission_csv": Path(mission_file).read_text(),
               "scenarios": scenarios, "stem": Path(mission_file).stem}
        if plan_file:
            req["plan"] = json.loads(Path(plan_file).read_text())
        requests.append(req)
    if report_file:
        requests.append({"kind": "report",
                         "report": json.loads(Path(report_file).read_text()),
                         "scenarios": scenarios})
    if not requests:
        raise click.ClickException("nothing to plot: pass --plan/--mission/--report")
    out_dir = Path(out)
    for req in requests:
        data = client.post("/plot", req)
        for p in _write_files(data["files"], out_dir, binary=False):
            click.echo(str(p))


@cli.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
def serve_cmd(host, port):
    """Run the planning service under uvicorn."""
    import uvicorn

    from .service.app import app
    uvicorn.run(app, host=host, port=port)


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.exceptions.Exit as exc:
        return int(exc.exit_code)
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 1
    except PlanningFailure as exc:
        click.echo(f"planning failed: {exc}", err=True)
        return 2
    except OSError as exc:
        click.echo(f"I/O error: {exc}", err=True)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface.

Exit codes: 0 all checks pass, 1 warnings only, 2 failures (or an
infeasible solve), 3 usage or ingestion errors.
"""

from __future__ import annotations

import json
import math
import sys
from pathlib import Path

import click

from ._version import __version__
from .analysis import (
    analysis_csv,
    analyze,
    canonical_json,
    curve_csv,
    curve_rows,
    evaluate_json,
    mask_json,
    plan_csv,
    plan_json,
    remap_csv,
    solve_result_json,
    window_report_json,
    comfort_report_json,
)
from .comfort import ComfortLimits
from .errors import DomainError, InfeasibleError, IngestError
from .geometry import Geometry
from .layout import MaskSpec, check_window, fix_window
from .remap import (
    DepthBand,
    identity,
    remap_depth_proportional,
    remap_interpolate,
    remap_multirig,
    shift as shift_curve,
)
from .shots import ingest, limits_from_dict
from .solver import SceneBudget, SolveRequest, solve
from .transitions import CutSpec, plan_transition

USAGE_EXIT = 3
FAIL_EXIT = 2


def _parse_geometry(text: str, label: str) -> Geometry:
    parts = text.split(",")
    if len(parts) != 3:
        raise click.UsageError(f"--{label} expects 'interocular,convergence,width' in meters")
    try:
        return Geometry(*(float(part) for part in parts))
    except (ValueError, DomainError) as exc:
        raise click.UsageError(f"--{label}: {exc}")


def _parse_depth(text: str) -> float:
    if text.strip().lower() == "inf":
        return math.inf
    return float(text)


def _load_limits(path: str | None) -> ComfortLimits | None:
    if path is None:
        return None
    raw = json.loads(Path(path).read_text())
    return limits_from_dict(raw)


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        click.echo(text, nl=not text.endswith("\n"))


@click.group()
@click.version_option(__version__)
def cli():
    """Stereoscopic shot-geometry toolbox."""


@cli.command("analyze")
@click.option("--project", required=True, type=click.Path(), help="Project JSON file.")
@click.option("--limits", "limits_path", type=click.Path(), help="Limits JSON overriding the project's.")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
@click.option("--output", type=click.Path(), help="Write the report here instead of stdout.")
def analyze_cmd(project, limits_path, fmt, output):
    """Comfort, window and transition report for a whole project."""
    doc = ingest(project)
    limits = _load_limits(limits_path)
    if limits is not None:
        from dataclasses import replace

        doc = replace(doc, limits=limits)
    report = analyze(doc)
    _emit(canonical_json(report) if fmt == "json" else analysis_csv(report), output)
    sys.exit(report["exit_code"])


@cli.command()
@click.option("--shoot", required=True, help="Rig as 'interocular,convergence,width' (m).")
@click.option("--view", required=True, help="Room as 'interocular,convergence,width' (m).")
@click.option("--shift", default=0.0, type=float, help="Image shift, width fraction.")
@click.option("--z", "z_values", help="Comma-separated depths in meters ('inf' allowed).")
@click.option("--z-min", type=float, help="Start of a log-spaced sweep.")
@click.option("--z-max", type=float, help="End of a log-spaced sweep.")
@click.option("--samples", default=40, type=int, help="Sweep sample count.")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="csv")
@click.option("--output", type=click.Path())
def curve(shoot, view, shift, z_values, z_min, z_max, samples, fmt, output):
    """Tabulate perceived depth against scene depth."""
    shoot_g = _parse_geometry(shoot, "shoot")
    view_g = _parse_geometry(view, "view")
    if z_values:
        zs = [_parse_depth(part) for part in z_values.split(",")]
    else:
        lo = z_min if z_min is not None else shoot_g.convergence / 4.0
        hi = z_max if z_max is not None else shoot_g.convergence * 40.0
        if not (0 < lo < hi) or samples < 2:
            raise click.UsageError("need 0 < z-min < z-max and at least 2 samples")
        zs = [lo * (hi / lo) ** (index / (samples - 1)) for index in range(samples)]
    rows = curve_rows(shoot_g, view_g, shift, zs)
    _emit(curve_csv(rows) if fmt == "csv" else canonical_json(rows), output)


@cli.command("solve")
@click.option("--view", required=True, help="Room as 'interocular,convergence,width' (m).")
@click.option("--scene", required=True, help="Depth budget 'near,subject,far' (m, far may be inf).")
@click.option("--roundness", default=1.0, type=float, help="Target roundness at the screen plane.")
@click.option("--width", default=None, help="Field width at the subject (m), or 'free'.")
@click.option("--allow-shift", is_flag=True, default=False)
@click.option("--limits", "limits_path", type=click.Path())
@click.option("--format", "fmt", type=click.Choice(["json"]), default="json")
@click.option("--output", type=click.Path())
def solve_cmd(view, scene, roundness, width, allow_shift, limits_path, fmt, output):
    """Solve for a rig that shows the scene comfortably."""
    parts = scene.split(",")
    if len(parts) != 3:
        raise click.UsageError("--scene expects 'near,subject,far'")
    budget = SceneBudget(_parse_depth(parts[0]), _parse_depth(parts[1]), _parse_depth(parts[2]))
    field_width = None if width in (None, "free") else float(width)
    request = SolveRequest(
        view=_parse_geometry(view, "view"),
        scene=budget,
        target_roundness=roundness,
        field_width=field_width,
        limits=_load_limits(limits_path) or ComfortLimits(),
        allow_shift=allow_shift,
    )
    try:
        result = solve(request)
    except InfeasibleError as exc:
        click.echo(f"infeasible ({exc.binding}): {exc}", err=True)
        sys.exit(FAIL_EXIT)
    _emit(canonical_json(solve_result_json(result)), output)


@cli.command()
@click.option("--kind", required=True,
              type=click.Choice(["identity", "shift", "interpolate", "depth-proportional", "multirig"]))
@click.option("--shift", "shift_frac", type=float, help="Offset for --kind shift.")
@click.option("--t", type=float, help="Baseline fraction for --kind interpolate.")
@click.option("--shoot", help="Rig geometry (needed by depth-proportional and multirig).")
@click.option("--view", help="Room geometry (needed by depth-proportional).")
@click.option("--bands", help="Multirig bands 'zmin:zmax:scale;...' (zmax may be inf).")
@click.option("--at", "eval_at", help="Comma-separated input disparities to evaluate.")
@click.option("--output", type=click.Path())
def remap(kind, shift_frac, t, shoot, view, bands, eval_at, output):
    """Build a disparity transfer curve and export it as CSV."""
    if kind == "identity":
        curve_obj = identity()
    elif kind == "shift":
        if shift_frac is None:
            raise click.UsageError("--kind shift needs --shift")
        curve_obj = shift_curve(shift_frac)
    elif kind == "interpolate":
        if t is None:
            raise click.UsageError("--kind interpolate needs --t")
        curve_obj = remap_interpolate(t)
    elif kind == "depth-proportional":
        if not (shoot and view):
            raise click.UsageError("--kind depth-proportional needs --shoot and --view")
        curve_obj = remap_depth_proportional(
            _parse_geometry(shoot, "shoot"), _parse_geometry(view, "view")
        )
    else:
        if not (bands and shoot):
            raise click.UsageError("--kind multirig needs --bands and --shoot")
        parsed = []
        for chunk in bands.split(";"):
            z_min, z_max, scale = chunk.split(":")
            parsed.append(DepthBand(float(z_min), _parse_depth(z_max), float(scale)))
        curve_obj = remap_multirig(parsed, _parse_geometry(shoot, "shoot"))
    samples = [float(part) for part in eval_at.split(",")] if eval_at else []
    _emit(remap_csv(curve_obj, samples), output)


@cli.command()
@click.option("--d1", required=True, type=float, help="Outgoing subject disparity at the cut.")
@click.option("--d2", required=True, type=float, help="Incoming subject disparity at the cut.")
@click.option("--fps", default=24.0, type=float)
@click.option("--ramp", default=1.0, type=float, help="Ramp length in seconds per side.")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv")
@click.option("--output", type=click.Path())
def transition(d1, d2, fps, ramp, fmt, output):
    """Plan a cut-softening shift schedule."""
    plan = plan_transition(CutSpec(d1=d1, d2=d2, fps=fps, ramp_seconds=ramp))
    _emit(plan_csv(plan) if fmt == "csv" else canonical_json(plan_json(plan)), output)


@cli.command("fix-window")
@click.option("--project", required=True, type=click.Path())
@click.option("--shot", "shot_id", required=True, help="Shot id inside the project.")
@click.option("--output", type=click.Path())
def fix_window_cmd(project, shot_id, output):
    """Smallest floating-window masks clearing a shot's border violations."""
    doc = ingest(project)
    shot = doc.shot(shot_id)
    before = check_window(shot, MaskSpec(), doc.view)
    mask = fix_window(shot, doc.view)
    after = check_window(shot, mask, doc.view)
    payload = {
        "mask": mask_json(mask),
        "violations_before": len(before.violations),
        "violations_after": len(after.violations),
        "window": window_report_json(after),
    }
    _emit(canonical_json(payload), output)


@cli.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", default=8750, type=int)
def serve(host, port):
    """Run the stateless /v1 evaluation service."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=host, port=port, log_level="warning")


def main() -> None:
    try:
        cli.main(standalone_mode=False)
    except click.UsageError as exc:
        exc.show()
        sys.exit(USAGE_EXIT)
    except click.ClickException as exc:
        exc.show()
        sys.exit(USAGE_EXIT)
    except click.exceptions.Abort:
        sys.exit(USAGE_EXIT)
    except (IngestError, DomainError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(USAGE_EXIT)


if __name__ == "__main__":
    main()

"""Report assembly and export formats.

Everything the CLI prints and the HTTP service returns is built here, from
the same pure functions, so the two surfaces agree bit-for-bit.  Depths
that are not finite numbers are tagged in JSON as the strings ``"inf"``
and ``"divergent"`` (JSON has no infinity), and the same literal token
``divergent`` marks divergent cells in CSV exports.
"""

from __future__ import annotations

import io
import json
import math
from typing import Sequence

from ._version import __version__
from .comfort import (
    ComfortLimits,
    ComfortReport,
    Status,
    angular_disparity,
    assess,
    diopter_conflict,
    display_disparity_at_angle,
    worst_status,
)
from .errors import DomainError, InfeasibleError
from .geometry import (
    DepthResult,
    Geometry,
    build_mapping,
    disparity_from_depth,
    homothety_scale,
    is_divergent,
    perceived_depth,
    roundness_factor,
)
from .layout import MaskSpec, WindowReport, check_window, fix_window
from .remap import RemapCurve
from .shots import (
    ProjectDoc,
    ShotRecord,
    geometry_to_dict,
    limits_to_dict,
)
from .solver import SolveResult, max_baseline_no_divergence
from .transitions import CutSpec, TransitionPlan, plan_transition, validate_transition

EXIT_BY_STATUS = {Status.PASS: 0, Status.WARN: 1, Status.FAIL: 2}
DIVERGENT_TOKEN = "divergent"
INF_TOKEN = "inf"


def depth_json(value: DepthResult | None) -> float | str | None:
    if value is None:
        return None
    if is_divergent(value):
        return DIVERGENT_TOKEN
    if value == math.inf:
        return INF_TOKEN
    return value


def depth_from_json(value: float | str) -> float:
    if value == INF_TOKEN:
        return math.inf
    if isinstance(value, (int, float)):
        return float(value)
    raise DomainError(f"expected a number or 'inf', got {value!r}")


def canonical_json(payload: object) -> str:
    """Key-sorted, minimal-separator JSON; the parity normal form."""
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), allow_nan=False)


def comfort_report_json(report: ComfortReport) -> dict:
    return {
        "divergent": report.divergent,
        "roundness": report.roundness,
        "probes": [
            {
                "z_m": depth_json(probe.z_scene),
                "display_disparity_frac": probe.display_disparity,
                "z_perceived_m": depth_json(probe.z_perceived),
                "angular_deg": probe.angular_deg,
                "diopter_conflict_d": probe.diopter,
            }
            for probe in report.probes
        ],
        "verdicts": [
            {"check": v.check, "status": v.status.value, "message": v.message}
            for v in report.verdicts
        ],
        "worst": report.worst.value,
    }


def window_report_json(report: WindowReport) -> dict:
    return {
        "left_edge_depth_m": depth_json(report.left_edge_depth),
        "right_edge_depth_m": depth_json(report.right_edge_depth),
        "violations": [
            {
                "frame": violation.frame,
                "side": violation.side,
                "object_disparity_frac": violation.object_disparity,
                "window_disparity_frac": violation.window_disparity,
            }
            for violation in report.violations
        ],
    }


def mask_json(mask: MaskSpec) -> dict:
    return {"left_frac": mask.left, "right_frac": mask.right, "opacity": mask.opacity}


def plan_json(plan: TransitionPlan) -> dict:
    return {
        "outgoing": [{"frame": fs.frame, "shift_frac": fs.shift} for fs in plan.outgoing],
        "incoming": [{"frame": fs.frame, "shift_frac": fs.shift} for fs in plan.incoming],
        "meet_disparity_frac": plan.meet_disparity,
    }


def curve_json(curve: RemapCurve) -> dict:
    return {
        "family": curve.family,
        "label": curve.label,
        "breakpoints": [list(point) for point in curve.breakpoints],
    }


def solve_result_json(result: SolveResult) -> dict:
    return {
        "shoot": geometry_to_dict(result.shoot),
        "shift_frac": result.shift,
        "achieved_roundness": result.achieved_roundness,
        "report": comfort_report_json(result.report),
        "adjustments": list(result.adjustments),
    }


def curve_rows(
    shoot: Geometry,
    view: Geometry,
    shift: float,
    z_samples: Sequence[float],
) -> list[dict]:
    """Tabulate the depth mapping at the given scene depths."""
    previous = None
    for z in z_samples:
        if previous is not None and z <= previous:
            raise DomainError("z samples must be strictly ascending")
        previous = z
    rows = []
    for z in z_samples:
        d = disparity_from_depth(shoot, z)
        displayed = d + shift
        z_perceived = perceived_depth(view, d, shift)
        divergent = is_divergent(z_perceived)
        rows.append(
            {
                "z_m": depth_json(z),
                "disparity_frac": d,
                "display_disparity_frac": displayed,
                "z_perceived_m": depth_json(z_perceived),
                "angular_deg": angular_disparity(view, displayed),
                "diopter_conflict_d": None
                if divergent
                else diopter_conflict(view, z_perceived),
                "divergent": divergent,
            }
        )
    return rows


def default_depth_samples(shoot: Geometry, count: int = 120) -> list[float]:
    """Log-spaced depths from well inside the convergence distance out to
    infinity; geared for plotting the mapping."""
    if count < 3:
        raise DomainError("need at least 3 samples")
    lo = shoot.convergence / 4.0
    hi = shoot.convergence * 40.0
    samples = [
        lo * (hi / lo) ** (index / (count - 2)) for index in range(count - 1)
    ]
    samples.append(math.inf)
    return samples


def evaluate_json(
    shoot: Geometry,
    view: Geometry,
    shift: float = 0.0,
    z_samples: Sequence[float] | None = None,
) -> dict:
    """One-stop evaluation powering interactive exploration.

    Bundles the mapping summary, the chart rows, the roundness, and the
    inline fix hints (largest divergence-free interocular, Percival band in
    perceived depth).
    """
    mapping = build_mapping(shoot, view, shift)
    samples = list(z_samples) if z_samples is not None else default_depth_samples(shoot)
    rows = curve_rows(shoot, view, shift, samples)
    percival_near = perceived_depth(
        view, display_disparity_at_angle(view, ComfortLimits().percival_deg), 0.0
    )
    percival_far = perceived_depth(
        view, display_disparity_at_angle(view, -ComfortLimits().percival_deg), 0.0
    )
    return {
        "mapping": {
            "classification": mapping.classification.value,
            "pole_depth_m": depth_json(mapping.pole_depth),
            "infinity_image_m": depth_json(mapping.infinity_image),
            "homothety_scale": mapping.homothety,
        },
        "roundness": roundness_factor(shoot, view),
        "max_interocular_m": max_baseline_no_divergence(view, shoot.width, shift),
        "screen_m": view.convergence,
        "percival_band_m": {
            "near": depth_json(percival_near),
            "far": depth_json(percival_far),
        },
        "rows": rows,
    }


def resolve_cut(doc: ProjectDoc, index: int) -> tuple[CutSpec, ShotRecord, ShotRecord]:
    """Turn a cut reference into a concrete spec using the subject tracks."""
    cut = doc.cuts[index]
    outgoing = doc.shot(cut.outgoing_id)
    incoming = doc.shot(cut.incoming_id)
    d1 = outgoing.frames[-1].subject_disparity
    d2 = incoming.frames[0].subject_disparity
    if d1 is None or d2 is None:  # pragma: no cover - enforced at ingest
        raise DomainError(f"cut {index}: boundary frames lack subject disparities")
    spec = CutSpec(d1=d1, d2=d2, fps=outgoing.fps, ramp_seconds=cut.ramp_seconds)
    return spec, outgoing, incoming


def analyze(doc: ProjectDoc) -> dict:
    """Full project report: per-shot comfort + window, per-cut validation.

    Deterministic and order-independent: each entry depends only on its own
    shot or cut.  The exit code mirrors the worst verdict (0 pass, 1 warn,
    2 fail); window violations count as failures.
    """
    statuses: list[Status] = []
    shots_out = []
    for shot in doc.shots:
        scene = shot.scene_range()
        report = assess(shot.shoot, doc.view, shot.shift, scene, doc.limits)
        window = check_window(shot, MaskSpec(), doc.view)
        suggested = fix_window(shot, doc.view) if window.violations else None
        statuses.append(report.worst)
        if window.violations:
            statuses.append(Status.FAIL)
        shots_out.append(
            {
                "id": shot.id,
                "comfort": comfort_report_json(report),
                "window": window_report_json(window),
                "suggested_mask": mask_json(suggested) if suggested else None,
            }
        )

    cuts_out = []
    for index in range(len(doc.cuts)):
        spec, outgoing, incoming = resolve_cut(doc, index)
        plan = plan_transition(spec)
        report = validate_transition(plan, outgoing, incoming, doc.view, doc.limits)
        statuses.append(report.worst)
        cuts_out.append(
            {
                "outgoing": outgoing.id,
                "incoming": incoming.id,
                "plan": plan_json(plan),
                "report": comfort_report_json(report),
            }
        )

    worst = worst_status(statuses)
    return {
        "schema": "shotdesk/analysis-v1",
        "version": __version__,
        "view": geometry_to_dict(doc.view),
        "limits": limits_to_dict(doc.limits),
        "shots": shots_out,
        "cuts": cuts_out,
        "worst": worst.value,
        "exit_code": EXIT_BY_STATUS[worst],
    }


def _csv_cell(value: object) -> str:
    if value is None:
        return DIVERGENT_TOKEN
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _csv(header: Sequence[str], rows: Sequence[Sequence[object]], preamble: str | None = None) -> str:
    out = io.StringIO()
    if preamble:
        out.write(preamble + "\r\n")
    out.write(",".join(header) + "\r\n")
    for row in rows:
        out.write(",".join(_csv_cell(cell) for cell in row) + "\r\n")
    return out.getvalue()


def curve_csv(rows: Sequence[dict]) -> str:
    header = (
        "z_m",
        "disparity_frac",
        "display_disparity_frac",
        "z_perceived_m",
        "angular_deg",
        "diopter_conflict_d",
        "divergent",
    )
    return _csv(header, [[row[key] for key in header] for row in rows])


def plan_csv(plan: TransitionPlan) -> str:
    rows = [("outgoing", fs.frame, fs.shift) for fs in plan.outgoing]
    rows += [("incoming", fs.frame, fs.shift) for fs in plan.incoming]
    return _csv(("side", "frame_index", "shift_frac"), rows)


def remap_csv(curve: RemapCurve, sample_inputs: Sequence[float] = ()) -> str:
    """Breakpoints (or sampled points for closed-form families) as CSV with
    a header line naming the family and parameters."""
    points = list(curve.breakpoints)
    for d in sample_inputs:
        points.append((d, curve.apply(d)))
    points.sort()
    return _csv(
        ("d_in_frac", "d_out_frac"),
        points,
        preamble=f"# family={curve.family} {curve.label}".rstrip(),
    )


def analysis_csv(report: dict) -> str:
    """Flat verdict table for spreadsheet use."""
    rows: list[tuple[object, ...]] = []
    for shot in report["shots"]:
        for verdict in shot["comfort"]["verdicts"]:
            rows.append(("shot", shot["id"], verdict["check"], verdict["status"], verdict["message"]))
        for violation in shot["window"]["violations"]:
            rows.append(
                (
                    "shot",
                    shot["id"],
                    "window",
                    "fail",
                    f"frame {violation['frame']} {violation['side']} border object at "
                    f"{violation['object_disparity_frac']!r} breaks the window",
                )
            )
    for cut in report["cuts"]:
        for verdict in cut["report"]["verdicts"]:
            rows.append(
                (
                    "cut",
                    f"{cut['outgoing']}->{cut['incoming']}",
                    verdict["check"],
                    verdict["status"],
                    verdict["message"],
                )
            )
    rows.append(("project", "", "overall", report["worst"], f"exit code {report['exit_code']}"))
    return _csv(("scope", "id", "check", "status", "message"), rows)

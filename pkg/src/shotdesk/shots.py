"""Shot metadata records and the project document format.

Projects are JSON with unit-bearing field names; disparities are width
fractions internally.  Per-frame statistics arrive from upstream stereo
analysis (or the synthetic generator in :mod:`shotdesk.scenegen`); this
package never computes them from pixels.  Disparities may be supplied in
pixels instead by giving a shot an ``image_width_px`` and using ``*_px``
keys in its frames; they are converted once at ingestion.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema

from .comfort import ComfortLimits
from .errors import IngestError
from .geometry import Geometry

_FRAC_KEYS = {
    "min_disparity": "min_disparity_frac",
    "max_disparity": "max_disparity_frac",
    "left_border_min": "left_border_min_frac",
    "right_border_min": "right_border_min_frac",
    "subject_disparity": "subject_disparity_frac",
}
_PX_KEYS = {name: frac.replace("_frac", "_px") for name, frac in _FRAC_KEYS.items()}


@dataclass(frozen=True)
class FrameStats:
    """Disparity statistics for one frame, in width fractions."""

    min_disparity: float
    max_disparity: float
    left_border_min: float
    right_border_min: float
    subject_disparity: float | None = None


@dataclass(frozen=True)
class ShotRecord:
    """One shot: its rig, baked-in shift, and per-frame disparity stats."""

    id: str
    shoot: Geometry
    shift: float
    fps: float
    frames: tuple[FrameStats, ...]

    @property
    def frame_count(self) -> int:
        return len(self.frames)

    def scene_range(self) -> tuple[float, float]:
        """Scene depth extremes implied by the disparity statistics."""
        from .geometry import depth_from_disparity

        if not self.frames:
            raise IngestError(f"shot {self.id!r} has no frames to derive a depth range from")
        d_min = min(stats.min_disparity for stats in self.frames)
        d_max = max(stats.max_disparity for stats in self.frames)
        return (
            depth_from_disparity(self.shoot, d_min),
            depth_from_disparity(self.shoot, d_max),
        )


@dataclass(frozen=True)
class CutRef:
    """A cut between two shots, referenced by id."""

    outgoing_id: str
    incoming_id: str
    ramp_seconds: float = 1.0


@dataclass(frozen=True)
class ProjectDoc:
    view: Geometry
    limits: ComfortLimits
    shots: tuple[ShotRecord, ...]
    cuts: tuple[CutRef, ...] = ()

    def shot(self, shot_id: str) -> ShotRecord:
        for shot in self.shots:
            if shot.id == shot_id:
                return shot
        raise IngestError(f"no shot with id {shot_id!r}")


def _schema() -> dict:
    with resources.files("shotdesk").joinpath("data/project.schema.json").open("rb") as fh:
        return json.load(fh)


def geometry_from_dict(raw: dict, where: str) -> Geometry:
    try:
        return Geometry(
            interocular=float(raw["interocular_m"]),
            convergence=float(raw["convergence_m"]),
            width=float(raw["width_m"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise IngestError(f"{where}: invalid geometry: {exc}") from exc


def geometry_to_dict(geometry: Geometry) -> dict:
    return {
        "interocular_m": geometry.interocular,
        "convergence_m": geometry.convergence,
        "width_m": geometry.width,
    }


def limits_from_dict(raw: dict | None) -> ComfortLimits:
    raw = raw or {}
    try:
        return ComfortLimits(**{key: float(value) for key, value in raw.items()})
    except (TypeError, ValueError) as exc:
        raise IngestError(f"limits: {exc}") from exc


def limits_to_dict(limits: ComfortLimits) -> dict:
    return {
        "dof_diopters": limits.dof_diopters,
        "percival_deg": limits.percival_deg,
        "fusion_deg": limits.fusion_deg,
        "easy_arcmin": limits.easy_arcmin,
        "min_roundness": limits.min_roundness,
    }


def _frame_from_dict(raw: dict, shot_id: str, index: int, px_width: float | None) -> FrameStats:
    where = f"shot {shot_id!r} frame {index}"
    uses_px = any(key in raw for key in _PX_KEYS.values())
    uses_frac = any(key in raw for key in _FRAC_KEYS.values())
    if uses_px and uses_frac:
        raise IngestError(f"{where}: mixes *_frac and *_px disparity keys")
    if uses_px and px_width is None:
        raise IngestError(f"{where}: pixel disparities need image_width_px on the shot")

    keys = _PX_KEYS if uses_px else _FRAC_KEYS
    values: dict[str, float | None] = {}
    for name, key in keys.items():
        if key not in raw:
            if name == "subject_disparity":
                values[name] = None
                continue
            raise IngestError(f"{where}: missing {key}")
        try:
            value = float(raw[key])
        except (TypeError, ValueError) as exc:
            raise IngestError(f"{where}: {key}: {exc}") from exc
        if not math.isfinite(value):
            raise IngestError(f"{where}: {key} must be finite, got {value!r}")
        values[name] = value / px_width if uses_px else value

    stats = FrameStats(**values)  # type: ignore[arg-type]
    if stats.min_disparity > stats.max_disparity:
        raise IngestError(
            f"{where}: min_disparity {stats.min_disparity!r} exceeds "
            f"max_disparity {stats.max_disparity!r}"
        )
    for side in ("left_border_min", "right_border_min"):
        if getattr(stats, side) < stats.min_disparity:
            raise IngestError(
                f"{where}: {side} {getattr(stats, side)!r} is below the frame "
                f"minimum {stats.min_disparity!r}"
            )
    return stats


def _shot_from_dict(raw: dict) -> ShotRecord:
    shot_id = raw["id"]
    where = f"shot {shot_id!r}"
    shoot = geometry_from_dict(raw["shoot"], where)
    px_width = raw.get("image_width_px")
    if px_width is not None and not (isinstance(px_width, (int, float)) and px_width > 0):
        raise IngestError(f"{where}: image_width_px must be > 0, got {px_width!r}")
    frames = tuple(
        _frame_from_dict(frame, shot_id, index, px_width)
        for index, frame in enumerate(raw.get("frames", []))
    )
    declared = raw.get("frame_count")
    if declared is not None and declared != len(frames):
        raise IngestError(
            f"{where}: frame_count {declared} does not match the {len(frames)} "
            f"frame statistics provided"
        )
    limit = shoot.infinity_disparity
    for index, stats in enumerate(frames):
        if stats.max_disparity > limit:
            raise IngestError(
                f"{where} frame {index}: max_disparity {stats.max_disparity!r} exceeds "
                f"the rig's infinity disparity {limit!r}; no real depth produces it"
            )
    shift = float(raw.get("shift_frac", 0.0))
    if not math.isfinite(shift):
        raise IngestError(f"{where}: shift_frac must be finite")
    fps = float(raw["fps"])
    if not (math.isfinite(fps) and fps > 0):
        raise IngestError(f"{where}: fps must be > 0, got {fps!r}")
    return ShotRecord(id=shot_id, shoot=shoot, shift=shift, fps=fps, frames=frames)


def _frame_to_dict(stats: FrameStats) -> dict:
    out = {
        "min_disparity_frac": stats.min_disparity,
        "max_disparity_frac": stats.max_disparity,
        "left_border_min_frac": stats.left_border_min,
        "right_border_min_frac": stats.right_border_min,
    }
    if stats.subject_disparity is not None:
        out["subject_disparity_frac"] = stats.subject_disparity
    return out


def _shot_to_dict(shot: ShotRecord) -> dict:
    return {
        "id": shot.id,
        "shoot": geometry_to_dict(shot.shoot),
        "shift_frac": shot.shift,
        "fps": shot.fps,
        "frame_count": shot.frame_count,
        "frames": [_frame_to_dict(stats) for stats in shot.frames],
    }


def project_from_dict(raw: dict) -> ProjectDoc:
    """Build and fully validate a project from parsed JSON."""
    try:
        jsonschema.validate(raw, _schema())
    except jsonschema.ValidationError as exc:
        path = "/".join(str(part) for part in exc.absolute_path) or "(document root)"
        raise IngestError(f"schema violation at {path}: {exc.message}") from exc

    view = geometry_from_dict(raw["view"], "view")
    if view.interocular <= 0:
        raise IngestError("view: interocular_m must be > 0 for a viewing geometry")
    limits = limits_from_dict(raw.get("limits"))
    shots = tuple(_shot_from_dict(shot) for shot in raw["shots"])
    ids = [shot.id for shot in shots]
    if len(set(ids)) != len(ids):
        raise IngestError(f"duplicate shot ids: {sorted(ids)!r}")

    cuts = []
    for raw_cut in raw.get("cuts", []):
        cut = CutRef(
            outgoing_id=raw_cut["outgoing_shot_id"],
            incoming_id=raw_cut["incoming_shot_id"],
            ramp_seconds=float(raw_cut.get("ramp_seconds", 1.0)),
        )
        for shot_id in (cut.outgoing_id, cut.incoming_id):
            if shot_id not in ids:
                raise IngestError(f"cut references unknown shot {shot_id!r}")
        outgoing = shots[ids.index(cut.outgoing_id)]
        incoming = shots[ids.index(cut.incoming_id)]
        if not outgoing.frames or outgoing.frames[-1].subject_disparity is None:
            raise IngestError(
                f"cut {cut.outgoing_id!r}->{cut.incoming_id!r}: outgoing shot needs "
                f"subject_disparity on its last frame"
            )
        if not incoming.frames or incoming.frames[0].subject_disparity is None:
            raise IngestError(
                f"cut {cut.outgoing_id!r}->{cut.incoming_id!r}: incoming shot needs "
                f"subject_disparity on its first frame"
            )
        if outgoing.fps != incoming.fps:
            raise IngestError(
                f"cut {cut.outgoing_id!r}->{cut.incoming_id!r}: frame rates differ "
                f"({outgoing.fps!r} vs {incoming.fps!r})"
            )
        cuts.append(cut)

    return ProjectDoc(view=view, limits=limits, shots=shots, cuts=tuple(cuts))


def project_to_dict(doc: ProjectDoc) -> dict:
    return {
        "view": geometry_to_dict(doc.view),
        "limits": limits_to_dict(doc.limits),
        "shots": [_shot_to_dict(shot) for shot in doc.shots],
        "cuts": [
            {
                "outgoing_shot_id": cut.outgoing_id,
                "incoming_shot_id": cut.incoming_id,
                "ramp_seconds": cut.ramp_seconds,
            }
            for cut in doc.cuts
        ],
    }


def ingest(path: str | Path) -> ProjectDoc:
    """Load and validate a project file."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except FileNotFoundError as exc:
        raise IngestError(f"project file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise IngestError(f"{path}: not valid JSON: {exc}") from exc
    return project_from_dict(raw)


def serialize(doc: ProjectDoc, path: str | Path | None = None) -> str:
    """Serialize a project; `ingest(serialize(doc))` round-trips equal."""
    text = json.dumps(project_to_dict(doc), indent=2, sort_keys=True) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text

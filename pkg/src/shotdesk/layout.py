"""Floating-window arithmetic and subtitle depth placement.

Masking a strip of width ``m`` (as a fraction of the screen width) off the
left edge of the right view and the right edge of the left view gives the
screen borders an edge disparity of exactly ``-m``, floating the perceived
window nearer than the screen.  An object nearer than the window that
touches a lateral border is visible in only one eye there; that is a
window violation.  Top and bottom contacts are tolerated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Mapping

from .comfort import ComfortLimits, angular_disparity
from .errors import DomainError
from .geometry import Geometry, perceived_depth

if TYPE_CHECKING:
    from .shots import ShotRecord

REGION_ORDER = ("speaker_adjacent", "bottom", "top")


@dataclass(frozen=True)
class MaskSpec:
    """Per-side edge masks as fractions of the screen width.

    ``opacity`` is carried for crosstalk-friendly semi-opaque edges; it has
    no geometric effect.
    """

    left: float = 0.0
    right: float = 0.0
    opacity: float = 1.0

    def __post_init__(self):
        for name, value in (("left", self.left), ("right", self.right)):
            if not (0.0 <= value < 0.5) or not math.isfinite(value):
                raise DomainError(f"{name} mask must be in [0, 0.5), got {value!r}")
        if not (0.0 < self.opacity <= 1.0):
            raise DomainError(f"opacity must be in (0, 1], got {self.opacity!r}")


@dataclass(frozen=True)
class WindowViolation:
    frame: int
    side: str
    object_disparity: float
    window_disparity: float


@dataclass(frozen=True)
class WindowReport:
    left_edge_depth: float
    right_edge_depth: float
    violations: tuple[WindowViolation, ...]


@dataclass(frozen=True)
class SubtitlePlan:
    region: str
    disparity: float
    rationale: str
    clamped: bool
    percival_ok: bool


def window_depth(mask: float, view: Geometry) -> float:
    """Perceived depth of a window edge masked by ``mask`` of the width."""
    if not (0.0 <= mask < 0.5) or not math.isfinite(mask):
        raise DomainError(f"mask must be in [0, 0.5), got {mask!r}")
    z = perceived_depth(view, -mask, 0.0)
    assert isinstance(z, float)  # crossed disparity can never diverge
    return z


def check_window(shot: "ShotRecord", mask: MaskSpec, view: Geometry) -> WindowReport:
    """List the frames where border content comes nearer than the window.

    A border whose minimum displayed disparity is below the window edge
    disparity (``-mask`` on that side) holds an object in front of the
    window touching it; equality is admitted, a window floated exactly to
    the object's depth is legal.
    """
    if not shot.frames:
        raise DomainError(f"shot {shot.id!r} carries no per-frame border statistics")
    violations: list[WindowViolation] = []
    edges = (("left", -mask.left), ("right", -mask.right))
    for index, stats in enumerate(shot.frames):
        for side, window_disparity in edges:
            border_min = stats.left_border_min if side == "left" else stats.right_border_min
            displayed = border_min + shot.shift
            if displayed < window_disparity:
                violations.append(
                    WindowViolation(
                        frame=index,
                        side=side,
                        object_disparity=displayed,
                        window_disparity=window_disparity,
                    )
                )
    return WindowReport(
        left_edge_depth=window_depth(mask.left, view),
        right_edge_depth=window_depth(mask.right, view),
        violations=tuple(violations),
    )


def fix_window(shot: "ShotRecord", view: Geometry) -> MaskSpec:
    """Smallest per-side masks (possibly asymmetric) clearing every
    violation: each side floats exactly to its nearest border object."""
    if not shot.frames:
        raise DomainError(f"shot {shot.id!r} carries no per-frame border statistics")
    left_min = min(stats.left_border_min for stats in shot.frames) + shot.shift
    right_min = min(stats.right_border_min for stats in shot.frames) + shot.shift
    return MaskSpec(left=max(0.0, -left_min), right=max(0.0, -right_min))


def place_subtitle(
    speaker_disparity: float,
    region_stats: Mapping[str, float],
    view: Geometry,
    limits: ComfortLimits | None = None,
) -> SubtitlePlan:
    """Pick a region and disparity for a subtitle.

    The subtitle wants the speaker's depth and must be the nearest thing in
    its region.  Among regions that admit the speaker depth, the one whose
    nearest content sits closest to the subtitle wins (no gratuitous
    floating in front of empty space); ties fall back to the canonical
    speaker-adjacent, bottom, top order.  With no admissible region the
    disparity is clamped down to the most permissive region's minimum.
    """
    limits = limits or ComfortLimits()
    if not region_stats:
        raise DomainError("at least one region must be provided")
    if not math.isfinite(speaker_disparity):
        raise DomainError(f"speaker disparity must be finite, got {speaker_disparity!r}")
    unknown = set(region_stats) - set(REGION_ORDER)
    if unknown:
        raise DomainError(f"unknown subtitle regions: {sorted(unknown)!r}")

    ranked = sorted(region_stats, key=REGION_ORDER.index)
    admissible = [name for name in ranked if speaker_disparity <= region_stats[name]]
    if admissible:
        region = min(
            admissible,
            key=lambda name: (region_stats[name] - speaker_disparity, REGION_ORDER.index(name)),
        )
        disparity = speaker_disparity
        clamped = False
        rationale = f"speaker depth fits the {region} region"
    else:
        region = max(ranked, key=lambda name: (region_stats[name], -REGION_ORDER.index(name)))
        disparity = region_stats[region]
        clamped = True
        rationale = (
            f"speaker depth would sit behind {region} content; clamped to the "
            f"region's nearest disparity {disparity:.6g}"
        )

    percival_ok = abs(angular_disparity(view, disparity)) <= limits.percival_deg
    if not percival_ok:
        rationale += "; placement leaves the Percival comfort zone"
    return SubtitlePlan(
        region=region,
        disparity=disparity,
        rationale=rationale,
        clamped=clamped,
        percival_ok=percival_ok,
    )

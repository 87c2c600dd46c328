"""Cut-softening shift schedules between shots.

A cut between subjects at disparities d1 and d2 is softened by ramping a
horizontal image shift over roughly a second on each side so the displayed
subject disparity meets halfway, at (d1+d2)/2, exactly at the cut.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING

from .comfort import ComfortLimits, ComfortReport, Verdict, assess_display_range, worst_status
from .errors import DomainError
from .geometry import Geometry, roundness_factor

if TYPE_CHECKING:
    from .shots import ShotRecord


class RampProfile(str, Enum):
    LINEAR = "linear"
    EASE_IN_OUT = "ease_in_out"   # smoothstep; accepted but not the default


def _ease(profile: RampProfile, fraction: float) -> float:
    if profile is RampProfile.EASE_IN_OUT:
        return fraction * fraction * (3.0 - 2.0 * fraction)
    return fraction


@dataclass(frozen=True)
class CutSpec:
    """Subject disparities on both sides of a cut plus ramp timing."""

    d1: float
    d2: float
    fps: float
    ramp_seconds: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.d1) and math.isfinite(self.d2)):
            raise DomainError("subject disparities must be finite")
        if not (math.isfinite(self.fps) and self.fps > 0):
            raise DomainError(f"fps must be > 0, got {self.fps!r}")
        if not (math.isfinite(self.ramp_seconds) and self.ramp_seconds > 0):
            raise DomainError(f"ramp_seconds must be > 0, got {self.ramp_seconds!r}")


@dataclass(frozen=True)
class FrameShift:
    frame: int      # relative to the cut: outgoing frames are negative
    shift: float


@dataclass(frozen=True)
class TransitionPlan:
    """Sampled shift ramps on both sides of a cut.

    Outgoing frames occupy -n..-1 (the last n frames of shot 1), incoming
    frames 0..n-1 (the first n of shot 2).  The outgoing ramp ends at
    (d2-d1)/2 and the incoming ramp starts at its exact negation, so the
    displayed subject disparity is continuous at ``meet_disparity``.
    """

    outgoing: tuple[FrameShift, ...]
    incoming: tuple[FrameShift, ...]
    meet_disparity: float


def plan_transition(spec: CutSpec, profile: RampProfile = RampProfile.LINEAR) -> TransitionPlan:
    """Sample the softening ramps at the shot frame rate.

    The ramp target is computed once as ``(d2 - d1) / 2`` and the incoming
    start is its exact negation, so the zero-sum and swap-symmetry
    identities hold bit-for-bit.
    """
    n = max(2, round(spec.fps * spec.ramp_seconds))
    target = (spec.d2 - spec.d1) / 2.0
    denom = n - 1

    outgoing = tuple(
        FrameShift(frame=k - n, shift=target * _ease(profile, k / denom))
        for k in range(n)
    )
    incoming = tuple(
        FrameShift(frame=k, shift=(-target) * _ease(profile, (denom - k) / denom))
        for k in range(n)
    )
    return TransitionPlan(
        outgoing=outgoing,
        incoming=incoming,
        meet_disparity=(spec.d1 + spec.d2) / 2.0,
    )


def _frame_stats(shot: "ShotRecord", index: int, side: str, plan_frame: int):
    if index < 0 or index >= len(shot.frames):
        raise DomainError(
            f"{side} plan frame {plan_frame} needs shot {shot.id!r} frame {index}, "
            f"but the shot has {len(shot.frames)} frames of statistics"
        )
    return shot.frames[index]


def validate_transition(
    plan: TransitionPlan,
    outgoing_shot: "ShotRecord",
    incoming_shot: "ShotRecord",
    view: Geometry,
    limits: ComfortLimits | None = None,
) -> ComfortReport:
    """Re-check comfort for every ramp frame with its shift applied.

    Each planned frame shifts the shot's per-frame disparity extremes and
    runs the display-side comfort checks; the returned report aggregates
    the worst verdict per check across both sides.
    """
    limits = limits or ComfortLimits()
    per_check: dict[str, Verdict] = {}
    divergent = False
    roundness = min(
        roundness_factor(outgoing_shot.shoot, view),
        roundness_factor(incoming_shot.shoot, view),
    )

    sides = (
        ("outgoing", outgoing_shot, plan.outgoing, lambda f: len(outgoing_shot.frames) + f),
        ("incoming", incoming_shot, plan.incoming, lambda f: f),
    )
    for side, shot, ramp, to_index in sides:
        shot_roundness = roundness_factor(shot.shoot, view)
        for frame_shift in ramp:
            stats = _frame_stats(shot, to_index(frame_shift.frame), side, frame_shift.frame)
            total = shot.shift + frame_shift.shift
            report = assess_display_range(
                view,
                [
                    (stats.min_disparity + total, None),
                    (stats.max_disparity + total, None),
                ],
                limits,
                roundness=shot_roundness,
            )
            divergent = divergent or report.divergent
            for verdict in report.verdicts:
                tagged = Verdict(
                    verdict.check,
                    verdict.status,
                    f"{side} frame {frame_shift.frame}: {verdict.message}",
                )
                current = per_check.get(verdict.check)
                if current is None or worst_status((current.status, tagged.status)) != current.status:
                    per_check[verdict.check] = tagged

    order = ("divergence", "fusion", "percival", "dof", "roundness")
    verdicts = tuple(per_check[name] for name in order if name in per_check)
    return ComfortReport(
        probes=(),
        divergent=divergent,
        roundness=roundness,
        verdicts=verdicts,
    )

"""Solve for shooting parameters from viewing conditions and a depth budget.

The forward rules fix convergence on the subject and size the interocular
for the requested roundness; when the comfort checks push back, the
interocular is shrunk by bisection (roundness is sacrificed before the
subject is moved off the screen plane, which is a creative choice no tool
should make silently).  Every constraint is monotone in the interocular at
fixed convergence and width, so bisection is exact and a general optimizer
would be unjustified.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .comfort import (
    ComfortLimits,
    ComfortReport,
    assess,
    display_disparity_at_angle,
    display_disparity_focus_bounds,
)
from .errors import DomainError, InfeasibleError
from .geometry import Geometry, _check_depth, disparity_from_depth, roundness_factor

BISECTION_ITERATIONS = 32
BASELINE_TOLERANCE_M = 1e-6


@dataclass(frozen=True)
class SceneBudget:
    """Scene depth range with the subject that should sit on screen."""

    z_near: float
    z_subject: float
    z_far: float

    def __post_init__(self):
        near = _check_depth(self.z_near)
        subject = _check_depth(self.z_subject)
        far = _check_depth(self.z_far)
        if subject == math.inf:
            raise DomainError("the subject depth must be finite")
        if not (near <= subject <= far):
            raise DomainError(
                f"scene depths must satisfy z_near <= z_subject <= z_far, got "
                f"{self.z_near!r}, {self.z_subject!r}, {self.z_far!r}"
            )


@dataclass(frozen=True)
class SolveRequest:
    view: Geometry
    scene: SceneBudget
    target_roundness: float = 1.0
    field_width: float | None = None      # None: derive from the interocular
    limits: ComfortLimits = field(default_factory=ComfortLimits)
    allow_shift: bool = False
    convergence: float | None = None      # optional override of subject-on-screen

    def __post_init__(self):
        if not (math.isfinite(self.target_roundness) and self.target_roundness > 0):
            raise DomainError(f"target roundness must be > 0, got {self.target_roundness!r}")
        if self.field_width is not None and not (
            math.isfinite(self.field_width) and self.field_width > 0
        ):
            raise DomainError(f"field width must be > 0, got {self.field_width!r}")
        if self.convergence is not None:
            z = _check_depth(self.convergence)
            if z == math.inf:
                raise DomainError("convergence override must be finite")


@dataclass(frozen=True)
class SolveResult:
    shoot: Geometry
    shift: float
    achieved_roundness: float
    report: ComfortReport
    adjustments: tuple[str, ...]


def max_baseline_no_divergence(view: Geometry, width: float, shift: float = 0.0) -> float:
    """Largest interocular whose infinity disparity, plus ``shift``, stays at
    or under the viewer's parallel-gaze limit.

    The analytic value ``(limit - shift) * width`` is nudged by ulps so the
    comparison holds in floating point too: the returned interocular plugged
    back into the display maps scene infinity exactly to perceived infinity.
    """
    if not (math.isfinite(width) and width > 0):
        raise DomainError(f"width must be > 0, got {width!r}")
    if view.interocular == 0.0:
        raise DomainError("viewing geometry needs a positive interocular")
    if not math.isfinite(shift):
        raise DomainError("shift must be finite")
    limit = view.infinity_disparity
    if shift >= limit:
        raise InfeasibleError(
            f"shift {shift!r} alone reaches the parallel-gaze limit {limit!r}",
            binding="shift",
        )
    b = (limit - shift) * width

    def ok(candidate: float) -> bool:
        return candidate >= 0.0 and candidate / width + shift <= limit

    for _ in range(64):
        if ok(b):
            break
        b = math.nextafter(b, 0.0)
    for _ in range(64):
        up = math.nextafter(b, math.inf)
        if not ok(up):
            break
        b = up
    return b


def _shift_intervals(
    view: Geometry,
    d_min: float,
    d_max: float,
    limits: ComfortLimits,
) -> list[tuple[str, float, float]]:
    """Feasible shift interval per comfort check, given the scene's shot
    disparity extremes."""
    intervals = [("divergence", -math.inf, view.infinity_disparity - d_max)]
    for name, angle in (("fusion", limits.fusion_deg), ("percival", limits.percival_deg)):
        lo = display_disparity_at_angle(view, angle) - d_min
        hi = display_disparity_at_angle(view, -angle) - d_max
        intervals.append((name, lo, hi))
    focus_lo, focus_hi = display_disparity_focus_bounds(view, limits.dof_diopters)
    intervals.append(("dof", focus_lo - d_min, focus_hi - d_max))
    return intervals


def _choose_shift(
    intervals: list[tuple[str, float, float]], allow_shift: bool
) -> tuple[float | None, str | None]:
    """Smallest-magnitude feasible shift, or the name of a binding check."""
    lo = max(interval[1] for interval in intervals)
    hi = min(interval[2] for interval in intervals)
    if allow_shift:
        if lo > hi:
            blocking_hi = min(intervals, key=lambda interval: interval[2])[0]
            return None, blocking_hi
        if lo <= 0.0 <= hi:
            return 0.0, None
        return (lo if lo > 0.0 else hi), None
    for name, check_lo, check_hi in intervals:
        if not (check_lo <= 0.0 <= check_hi):
            return None, name
    return 0.0, None


def solve(request: SolveRequest) -> SolveResult:
    """Deterministic shooting-parameter search; always passes or raises.

    Convergence lands on the subject, the interocular follows the depth
    consistency rule scaled by the roundness target, and the plane width is
    either the caller's or derived to keep the rig a scaled copy of the
    viewing room.  Comfort pressure shrinks the interocular by bisection
    (recording the roundness sacrifice); an optional shift is explored
    within the Percival-preserving interval first.
    """
    view = request.view
    if view.interocular == 0.0:
        raise DomainError("viewing geometry needs a positive interocular")
    convergence = request.convergence if request.convergence is not None else request.scene.z_subject
    target_b = request.target_roundness * view.interocular * convergence / view.convergence

    def make_geometry(b: float) -> Geometry:
        if request.field_width is not None:
            return Geometry(b, convergence, request.field_width)
        width = b * view.width / view.interocular
        # Keep the derived rig's infinity disparity at or under the viewer's,
        # so the scaled-copy rig can never diverge through rounding alone.
        for _ in range(8):
            if b / width <= view.infinity_disparity:
                break
            width = math.nextafter(width, math.inf)
        return Geometry(b, convergence, width)

    def evaluate(b: float) -> tuple[float | None, str | None]:
        geometry = make_geometry(b) if b > 0 else Geometry(0.0, convergence, request.field_width or view.width)
        d_min = disparity_from_depth(geometry, request.scene.z_near)
        d_max = disparity_from_depth(geometry, request.scene.z_far)
        return _choose_shift(
            _shift_intervals(view, d_min, d_max, request.limits),
            request.allow_shift,
        )

    adjustments: list[str] = []
    shift, binding = evaluate(target_b)
    b_final = target_b
    if shift is None:
        if request.field_width is None:
            # With the width tied to the interocular the scene's displayed
            # disparities do not depend on it; no interocular can help.
            raise InfeasibleError(
                f"no interocular satisfies the {binding} check for this scene "
                f"and viewing geometry",
                binding=binding or "unknown",
            )
        shift_at_zero, binding_zero = evaluate(0.0)
        if shift_at_zero is None:
            raise InfeasibleError(
                f"even a zero interocular fails the {binding_zero} check; the "
                f"scene cannot be shown comfortably in this viewing geometry",
                binding=binding_zero or "unknown",
            )
        lo, hi = 0.0, target_b
        for _ in range(BISECTION_ITERATIONS):
            mid = 0.5 * (lo + hi)
            candidate, _ = evaluate(mid)
            if candidate is not None:
                lo = mid
            else:
                hi = mid
        b_final = lo
        shift, _ = evaluate(b_final)
        if shift is None:  # pragma: no cover - lo is feasible by construction
            raise InfeasibleError("bisection lost feasibility", binding=binding or "unknown")
        adjustments.append(
            f"reduced interocular from {target_b:.9g} m to {b_final:.9g} m to "
            f"satisfy the {binding} check"
        )
    if shift != 0.0:
        adjustments.append(f"applied image shift {shift:.9g} to center the depth budget")

    shoot = make_geometry(b_final)
    achieved = roundness_factor(shoot, view)
    if math.isclose(achieved, request.target_roundness, rel_tol=1e-12):
        achieved = request.target_roundness
    achieved = min(achieved, request.target_roundness)
    report = assess(shoot, view, shift, (request.scene.z_near, request.scene.z_far), request.limits)
    return SolveResult(
        shoot=shoot,
        shift=shift,
        achieved_roundness=achieved,
        report=report,
        adjustments=tuple(adjustments),
    )

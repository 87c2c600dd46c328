"""Comfort diagnostics: focus ranges, vergence angles, verdicts.

Angles are exact vergence differences (no small-angle shortcut), depths of
field live in diopters (inverse meters) because a diopter band is the same
width at every focus distance, and verdict severity follows practice:
divergence and fusion breaches are failures, Percival-zone, focus-range
and roundness breaches are warnings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

from .errors import DomainError
from .geometry import (
    DIVERGENT,
    DepthResult,
    Divergent,
    Geometry,
    _check_depth,
    disparity_from_depth,
    is_divergent,
    perceived_depth,
    roundness_factor,
)


@dataclass(frozen=True)
class ComfortLimits:
    """Configurable comfort thresholds.

    ``dof_diopters`` is the accommodation band around the screen (0.2 D is
    the conservative human depth of field; 0.3 D is also defensible).
    ``percival_deg`` bounds the comfortable vergence offset, ``fusion_deg``
    the fusible one.  ``easy_arcmin`` is the informational
    easily-fused disparity *range*; it is reported but never a verdict.
    """

    dof_diopters: float = 0.2
    percival_deg: float = 1.0
    fusion_deg: float = 2.0
    easy_arcmin: float = 35.0
    min_roundness: float = 0.2

    def __post_init__(self):
        for name in ("dof_diopters", "percival_deg", "fusion_deg", "easy_arcmin", "min_roundness"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be finite and > 0, got {value!r}")
        if self.percival_deg > self.fusion_deg:
            raise DomainError("percival_deg must not exceed fusion_deg")


@dataclass(frozen=True)
class FocusRange:
    """In-focus depth interval; ``far`` may be infinite."""

    near: float
    far: float


def focus_range(distance: float, dof_diopters: float) -> FocusRange:
    """Depth interval in focus when accommodated at ``distance``.

    The band is symmetric in diopters: ``1/near - 1/distance``
    and ``1/distance - 1/far`` both equal ``dof_diopters``.
    """
    z = _check_depth(distance)
    if z == math.inf:
        raise DomainError("focus distance must be finite")
    if not (math.isfinite(dof_diopters) and dof_diopters > 0):
        raise DomainError(f"depth of field must be > 0 diopters, got {dof_diopters!r}")
    near = 1.0 / (1.0 / z + dof_diopters)
    inv_far = 1.0 / z - dof_diopters
    far = math.inf if inv_far <= 0.0 else 1.0 / inv_far
    return FocusRange(near=near, far=far)


def _vergence_rad(view: Geometry, screen_disparity_m: float) -> float:
    """Convergence angle of the two gaze rays for a physical screen
    disparity (meters); negative beyond parallel."""
    return 2.0 * math.atan(
        (view.interocular - screen_disparity_m) / (2.0 * view.convergence)
    )


def angular_disparity(view: Geometry, display_disparity: float) -> float:
    """Vergence offset, in degrees, of displayed disparity relative to the screen.

    Positive for crossed (near) content, zero on the screen, negative for
    uncrossed content; at ``interocular/width`` the gaze is exactly
    parallel, and larger disparities continue smoothly into beyond-parallel
    (divergent) angles.
    """
    if not math.isfinite(display_disparity):
        raise DomainError(f"display disparity must be finite, got {display_disparity!r}")
    p = display_disparity * view.width
    return math.degrees(_vergence_rad(view, p) - _vergence_rad(view, 0.0))


def display_disparity_at_angle(view: Geometry, angle_deg: float) -> float:
    """Inverse of :func:`angular_disparity`: the displayed disparity whose
    vergence offset from the screen equals ``angle_deg``."""
    if view.interocular == 0.0:
        raise DomainError("viewing geometry needs a positive interocular")
    half = (math.radians(angle_deg) + _vergence_rad(view, 0.0)) / 2.0
    p = view.interocular - 2.0 * view.convergence * math.tan(half)
    return p / view.width


def diopter_conflict(view: Geometry, z_perceived: float) -> float:
    """Accommodation-vergence gap ``|1/Z' - 1/H'|`` in diopters (1/inf = 0)."""
    z = _check_depth(z_perceived)
    inv = 0.0 if z == math.inf else 1.0 / z
    return abs(inv - 1.0 / view.convergence)


def display_disparity_focus_bounds(view: Geometry, dof_diopters: float) -> tuple[float, float]:
    """Displayed-disparity interval whose perceived depths stay within the
    viewer's focus band around the screen."""
    rng = focus_range(view.convergence, dof_diopters)
    b_over_w = view.infinity_disparity
    d_lo = b_over_w * (rng.near - view.convergence) / rng.near
    if rng.far == math.inf:
        d_hi = b_over_w
    else:
        d_hi = b_over_w * (rng.far - view.convergence) / rng.far
    return d_lo, d_hi


class Status(str, Enum):
    PASS = "pass"
    WARN = "warn"
    FAIL = "fail"


_SEVERITY = {Status.PASS: 0, Status.WARN: 1, Status.FAIL: 2}


def worst_status(statuses: Iterable[Status]) -> Status:
    worst = Status.PASS
    for status in statuses:
        if _SEVERITY[status] > _SEVERITY[worst]:
            worst = status
    return worst


@dataclass(frozen=True)
class Verdict:
    check: str
    status: Status
    message: str


@dataclass(frozen=True)
class DepthProbe:
    """Diagnostics for one probed displayed disparity."""

    z_scene: float | None          # scene depth, when the probe came from one
    display_disparity: float
    z_perceived: DepthResult
    angular_deg: float
    diopter: float | None          # None when the probe diverges


@dataclass(frozen=True)
class ComfortReport:
    probes: tuple[DepthProbe, ...]
    divergent: bool
    roundness: float | None
    verdicts: tuple[Verdict, ...]

    @property
    def worst(self) -> Status:
        return worst_status(v.status for v in self.verdicts)


def _probe(view: Geometry, display_disparity: float, z_scene: float | None) -> DepthProbe:
    z_perceived = perceived_depth(view, display_disparity, 0.0)
    angle = angular_disparity(view, display_disparity)
    if is_divergent(z_perceived):
        diopter = None
    else:
        diopter = diopter_conflict(view, z_perceived)
    return DepthProbe(
        z_scene=z_scene,
        display_disparity=display_disparity,
        z_perceived=z_perceived,
        angular_deg=angle,
        diopter=diopter,
    )


def _fmt(value: float) -> str:
    return f"{value:.6g}"


def assess_display_range(
    view: Geometry,
    probes: Sequence[tuple[float, float | None]],
    limits: ComfortLimits,
    roundness: float | None = None,
) -> ComfortReport:
    """Run the comfort checks over displayed disparities.

    ``probes`` is a sequence of ``(display_disparity, scene_depth_or_None)``
    pairs; the extremes decide every verdict since all checks are monotone
    away from the screen.  ``roundness`` enables the roundness check.
    """
    if not probes:
        raise DomainError("at least one probe is required")
    rows = tuple(_probe(view, d, z) for d, z in probes)

    divergent = any(is_divergent(row.z_perceived) for row in rows)
    verdicts: list[Verdict] = []

    max_disp = max(row.display_disparity for row in rows)
    if divergent:
        verdicts.append(
            Verdict(
                "divergence",
                Status.FAIL,
                f"displayed disparity {_fmt(max_disp)} exceeds the parallel-gaze "
                f"limit {_fmt(view.infinity_disparity)}",
            )
        )
    else:
        verdicts.append(
            Verdict(
                "divergence",
                Status.PASS,
                f"all displayed disparities within the parallel-gaze limit "
                f"{_fmt(view.infinity_disparity)}",
            )
        )

    peak_angle = max(abs(row.angular_deg) for row in rows)
    if peak_angle > limits.fusion_deg:
        verdicts.append(
            Verdict(
                "fusion",
                Status.FAIL,
                f"vergence offset {_fmt(peak_angle)} deg exceeds the fusion "
                f"limit {_fmt(limits.fusion_deg)} deg",
            )
        )
    else:
        verdicts.append(
            Verdict(
                "fusion",
                Status.PASS,
                f"vergence offsets within {_fmt(limits.fusion_deg)} deg",
            )
        )

    if peak_angle > limits.percival_deg:
        verdicts.append(
            Verdict(
                "percival",
                Status.WARN,
                f"vergence offset {_fmt(peak_angle)} deg leaves the Percival "
                f"zone (+-{_fmt(limits.percival_deg)} deg)",
            )
        )
    else:
        verdicts.append(
            Verdict(
                "percival",
                Status.PASS,
                f"vergence offsets within the Percival zone "
                f"(+-{_fmt(limits.percival_deg)} deg)",
            )
        )

    conflicts = [row.diopter for row in rows if row.diopter is not None]
    peak_conflict = max(conflicts) if conflicts else math.inf
    if peak_conflict > limits.dof_diopters:
        verdicts.append(
            Verdict(
                "dof",
                Status.WARN,
                f"accommodation conflict {_fmt(peak_conflict)} D exceeds the "
                f"focus band +-{_fmt(limits.dof_diopters)} D",
            )
        )
    else:
        verdicts.append(
            Verdict(
                "dof",
                Status.PASS,
                f"accommodation conflicts within +-{_fmt(limits.dof_diopters)} D",
            )
        )

    if roundness is not None:
        if roundness < limits.min_roundness:
            verdicts.append(
                Verdict(
                    "roundness",
                    Status.WARN,
                    f"roundness {_fmt(roundness)} below the minimum "
                    f"{_fmt(limits.min_roundness)} (cardboard risk)",
                )
            )
        else:
            verdicts.append(
                Verdict(
                    "roundness",
                    Status.PASS,
                    f"roundness {_fmt(roundness)} at or above "
                    f"{_fmt(limits.min_roundness)}",
                )
            )

    return ComfortReport(
        probes=rows,
        divergent=divergent,
        roundness=roundness,
        verdicts=tuple(verdicts),
    )


def assess(
    shoot: Geometry,
    view: Geometry,
    shift: float,
    scene: tuple[float, float],
    limits: ComfortLimits | None = None,
) -> ComfortReport:
    """Comfort report for a scene depth range shot and viewed as given.

    Probes the scene extremes plus the convergence plane when it lies
    inside the range; enlarging the range can only worsen the verdicts.
    """
    limits = limits or ComfortLimits()
    z_near, z_far = scene
    z_near = _check_depth(z_near)
    z_far = _check_depth(z_far)
    if z_near > z_far:
        raise DomainError(f"scene range is inverted: near {z_near!r} > far {z_far!r}")

    depths = [z_near]
    if z_near < shoot.convergence < z_far:
        depths.append(shoot.convergence)
    if z_far != z_near:
        depths.append(z_far)

    probes = [(disparity_from_depth(shoot, z) + shift, z) for z in depths]
    return assess_display_range(
        view,
        probes,
        limits,
        roundness=roundness_factor(shoot, view),
    )

"""Disparity transfer curves: post-production geometry changes without pixels.

A curve maps an input disparity (width fraction) to an output disparity.
Every constructor yields a monotone non-decreasing transfer; pixel warping
from a curve is another system's job.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field

from .errors import DomainError, MonotonicityError
from .geometry import Geometry, disparity_from_depth

IDENTITY = "identity"
SHIFT = "shift"
INTERPOLATE = "interpolate"
DEPTH_PROPORTIONAL = "depth_proportional"
PIECEWISE_DEPTH = "piecewise_depth"
LUT = "lut"


@dataclass(frozen=True)
class Segment:
    """One linear piece, evaluated as ``slope * d + intercept``.

    Depth-band pieces keep ``intercept == 0`` so band disparities scale
    exactly; bridge pieces interpolate between band endpoints.
    """

    start: float
    end: float
    slope: float
    intercept: float

    def __call__(self, d: float) -> float:
        return self.slope * d + self.intercept


@dataclass(frozen=True)
class RemapCurve:
    """A monotone disparity transfer with family metadata.

    ``scale``/``offset`` drive the closed-form families; ``segments`` and
    ``breakpoints`` drive the piecewise ones.  ``pole_in``/``pole_out`` pin
    the infinity disparity of a source rig to the infinity disparity of the
    target so remapped points at infinity land exactly at infinity.
    """

    family: str
    scale: float = 1.0
    offset: float = 0.0
    pole_in: float | None = None
    pole_out: float | None = None
    segments: tuple[Segment, ...] = ()
    breakpoints: tuple[tuple[float, float], ...] = ()
    label: str = ""

    def apply(self, d: float) -> float:
        return apply(self, d)

    def __call__(self, d: float) -> float:
        return apply(self, d)


def identity() -> RemapCurve:
    return RemapCurve(family=IDENTITY, label="identity")


def shift(offset: float) -> RemapCurve:
    """Additive image shift: ``d_out = d_in + offset``."""
    if not math.isfinite(offset):
        raise DomainError(f"shift must be finite, got {offset!r}")
    return RemapCurve(family=SHIFT, offset=offset, label=f"offset={offset!r}")


def remap_interpolate(t: float) -> RemapCurve:
    """Transfer of a view synthesized at baseline fraction ``t`` from the
    left camera: disparities scale linearly, ``d_out = t * d_in``."""
    if not (0.0 <= t <= 1.0):
        raise DomainError(f"baseline fraction must be in [0, 1], got {t!r}")
    if t == 1.0:
        return identity()
    return RemapCurve(family=INTERPOLATE, scale=t, label=f"t={t!r}")


def remap_depth_proportional(shoot: Geometry, view: Geometry) -> RemapCurve:
    """Transfer that makes perceived depth proportional to scene depth.

    Requiring ``Z' = (H'/H) * Z`` for every depth collapses, in
    width-fraction units, to one scale factor: the ratio of the two rigs'
    infinity disparities.  The source infinity disparity is pinned to the
    target's exactly, so scene infinity can never diverge after remapping.
    """
    if shoot.interocular <= 0.0:
        raise DomainError("depth-proportional remap needs a positive shoot interocular")
    if view.interocular <= 0.0:
        raise DomainError("viewing geometry needs a positive interocular")
    pole_in = shoot.infinity_disparity
    pole_out = view.infinity_disparity
    scale = pole_out / pole_in
    if scale == 1.0:
        return identity()
    return RemapCurve(
        family=DEPTH_PROPORTIONAL,
        scale=scale,
        pole_in=pole_in,
        pole_out=pole_out,
        label=f"scale={scale!r}",
    )


@dataclass(frozen=True)
class DepthBand:
    """A scene depth interval shot with its own baseline scale."""

    z_min: float
    z_max: float
    baseline_scale: float

    def __post_init__(self):
        if not (self.z_min >= 0.0 and math.isfinite(self.z_min)):
            raise DomainError(f"band z_min must be finite and >= 0, got {self.z_min!r}")
        if not (self.z_max > self.z_min):
            raise DomainError(f"band z_max must exceed z_min, got {self.z_max!r}")
        if not (self.baseline_scale >= 0.0 and math.isfinite(self.baseline_scale)):
            raise DomainError(f"baseline scale must be finite and >= 0, got {self.baseline_scale!r}")


def remap_multirig(bands: list[DepthBand], shoot: Geometry) -> RemapCurve:
    """Piecewise transfer emulating per-object baselines composited into one
    stereo pair.

    Within each depth band the output follows the disparity the band's
    scaled baseline would have produced (``scale * d``, a line through the
    origin); gaps between bands get linear bridges.  Band assignments whose
    raw per-band lines cannot be bridged monotonically are rejected with
    the offending pair.
    """
    if not bands:
        raise DomainError("at least one band is required")
    if shoot.interocular <= 0.0:
        raise DomainError("multi-rig remap needs a positive shoot interocular")
    ordered = sorted(bands, key=lambda band: band.z_min)
    for left, right in zip(ordered, ordered[1:]):
        if right.z_min < left.z_max:
            raise DomainError(
                f"bands overlap in depth: ({left.z_min!r}, {left.z_max!r}) and "
                f"({right.z_min!r}, {right.z_max!r})"
            )

    # Band edges in disparity space; an open near end maps to -inf.
    spans: list[tuple[float, float, float]] = []
    for band in ordered:
        d_lo = -math.inf if band.z_min == 0.0 else disparity_from_depth(shoot, band.z_min)
        d_hi = disparity_from_depth(shoot, band.z_max if band.z_max != math.inf else math.inf)
        spans.append((d_lo, d_hi, band.baseline_scale))

    for index in range(len(spans) - 1):
        _, d_hi, s_left = spans[index]
        d_lo_next, _, s_right = spans[index + 1]
        if s_left * d_hi > s_right * d_lo_next:
            raise MonotonicityError(
                f"bands {index} and {index + 1} cannot be bridged monotonically: "
                f"band {index} ends at d_out {s_left * d_hi!r} but band "
                f"{index + 1} starts at d_out {s_right * d_lo_next!r}",
                offending_pair=(index, index + 1),
            )

    segments: list[Segment] = []
    previous: tuple[float, float] | None = None  # end of the last band segment
    for d_lo, d_hi, scale in spans:
        if previous is not None and previous[0] < d_lo:
            x1, y1 = previous
            x2, y2 = d_lo, scale * d_lo
            slope = (y2 - y1) / (x2 - x1)
            segments.append(Segment(x1, x2, slope, y1 - slope * x1))
        segments.append(Segment(d_lo, d_hi, scale, 0.0))
        previous = (d_hi, scale * d_hi)

    breakpoints = []
    for seg in segments:
        for x in (seg.start, seg.end):
            if math.isfinite(x):
                point = (x, seg(x))
                if not breakpoints or breakpoints[-1] != point:
                    breakpoints.append(point)

    return RemapCurve(
        family=PIECEWISE_DEPTH,
        segments=tuple(segments),
        breakpoints=tuple(breakpoints),
        label="bands=" + ";".join(
            f"({band.z_min!r},{band.z_max!r})x{band.baseline_scale!r}" for band in ordered
        ),
    )


def remap_lut(breakpoints: list[tuple[float, float]]) -> RemapCurve:
    """Piecewise-linear transfer through explicit breakpoints (clamped
    outside the table)."""
    if len(breakpoints) < 2:
        raise DomainError("a lookup curve needs at least two breakpoints")
    points = [(float(d_in), float(d_out)) for d_in, d_out in breakpoints]
    for (x1, y1), (x2, y2) in zip(points, points[1:]):
        if x2 <= x1:
            raise DomainError(f"breakpoints must be strictly increasing in d_in: {x1!r} then {x2!r}")
        if y2 < y1:
            raise MonotonicityError(
                f"breakpoints must be monotone non-decreasing in d_out: {y1!r} then {y2!r}"
            )
    return RemapCurve(
        family=LUT,
        breakpoints=tuple(points),
        label=f"breakpoints={len(points)}",
    )


def apply(curve: RemapCurve, d: float) -> float:
    """Evaluate the transfer at one input disparity."""
    if not math.isfinite(d):
        raise DomainError(f"disparity must be finite, got {d!r}")
    if curve.family == IDENTITY:
        return d
    if curve.family == SHIFT:
        return d + curve.offset
    if curve.family in (INTERPOLATE, DEPTH_PROPORTIONAL):
        if curve.pole_in is not None and d == curve.pole_in:
            return curve.pole_out
        return curve.scale * d
    if curve.family == PIECEWISE_DEPTH:
        return _eval_segments(curve.segments, d)
    if curve.family == LUT:
        return _eval_lut(curve.breakpoints, d)
    raise DomainError(f"unknown curve family {curve.family!r}")


def _eval_segments(segments: tuple[Segment, ...], d: float) -> float:
    if d <= segments[0].end:
        return segments[0](d)
    if d >= segments[-1].start:
        return segments[-1](d)
    for seg in segments:
        if seg.start <= d <= seg.end:
            return seg(d)
    # Between segments can only happen from rounding at shared edges.
    nearest = min(segments, key=lambda seg: min(abs(d - seg.start), abs(d - seg.end)))
    return nearest(d)


def _eval_lut(points: tuple[tuple[float, float], ...], d: float) -> float:
    xs = [p[0] for p in points]
    if d <= xs[0]:
        return points[0][1]
    if d >= xs[-1]:
        return points[-1][1]
    hi = bisect_right(xs, d)
    x1, y1 = points[hi - 1]
    x2, y2 = points[hi]
    w = (d - x1) / (x2 - x1)
    return y1 + w * (y2 - y1)

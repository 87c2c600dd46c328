"""Synthesize shot disparity statistics from analytic scenes.

Stereo matching is out of scope for this package, so test fixtures and the
bundled demo are generated from scenes described as fronto-parallel planes
at known depths: every statistic falls out of the disparity formula.
"""

from __future__ import annotations

import math
from typing import Sequence

from .errors import DomainError
from .geometry import Geometry, disparity_from_depth
from .shots import FrameStats, ShotRecord


def plane_shot(
    shot_id: str,
    shoot: Geometry,
    *,
    fps: float,
    frame_count: int,
    plane_depths: Sequence[float],
    border_depths: Sequence[float] | None = None,
    subject_depth: float | Sequence[float] | None = None,
    shift: float = 0.0,
) -> ShotRecord:
    """Build a :class:`ShotRecord` from planes at known depths.

    ``plane_depths`` are the depths present anywhere in frame (``math.inf``
    allowed); ``border_depths`` are the planes touching the lateral borders
    (defaults to every plane).  ``subject_depth`` may be a single depth or a
    ``(start, end)`` pair interpolated linearly across the shot.
    """
    if frame_count < 1:
        raise DomainError("frame_count must be at least 1")
    if not plane_depths:
        raise DomainError("at least one plane depth is required")
    disparities = [disparity_from_depth(shoot, z) for z in plane_depths]
    border_source = border_depths if border_depths is not None else plane_depths
    border_disparities = [disparity_from_depth(shoot, z) for z in border_source]

    def subject_at(index: int) -> float | None:
        if subject_depth is None:
            return None
        if isinstance(subject_depth, (int, float)):
            return disparity_from_depth(shoot, float(subject_depth))
        start, end = subject_depth
        if frame_count == 1:
            return disparity_from_depth(shoot, float(start))
        w = index / (frame_count - 1)
        if math.inf in (start, end):
            raise DomainError("subject tracks must stay at finite depths")
        return disparity_from_depth(shoot, start + w * (end - start))

    frames = tuple(
        FrameStats(
            min_disparity=min(disparities),
            max_disparity=max(disparities),
            left_border_min=min(border_disparities),
            right_border_min=min(border_disparities),
            subject_disparity=subject_at(index),
        )
        for index in range(frame_count)
    )
    return ShotRecord(id=shot_id, shoot=shoot, shift=shift, fps=fps, frames=frames)

"""Stereoscopic shot-geometry engine.

Maps shooting geometry to perceived viewing geometry, validates viewer
comfort, plans disparity corrections (shifts, remaps, cut transitions,
floating windows, subtitle depths) and solves for shooting parameters.
"""

from ._version import __version__
from .comfort import (
    ComfortLimits,
    ComfortReport,
    DepthProbe,
    FocusRange,
    Status,
    Verdict,
    angular_disparity,
    assess,
    diopter_conflict,
    focus_range,
)
from .errors import (
    AmbiguousDepthError,
    DomainError,
    InfeasibleError,
    IngestError,
    MonotonicityError,
)
from .geometry import (
    DIVERGENT,
    DepthMapping,
    Divergent,
    Geometry,
    InfinityPlacement,
    build_mapping,
    depth_from_disparity,
    disparity_from_depth,
    homothety_scale,
    is_divergent,
    map_depth,
    nearness_factor,
    perceived_depth,
    roundness_factor,
)
from .layout import (
    MaskSpec,
    SubtitlePlan,
    WindowReport,
    check_window,
    fix_window,
    place_subtitle,
    window_depth,
)
from .remap import (
    DepthBand,
    RemapCurve,
    apply,
    identity,
    remap_depth_proportional,
    remap_interpolate,
    remap_lut,
    remap_multirig,
    shift,
)
from .shots import (
    CutRef,
    FrameStats,
    ProjectDoc,
    ShotRecord,
    ingest,
    serialize,
)
from .solver import (
    SceneBudget,
    SolveRequest,
    SolveResult,
    max_baseline_no_divergence,
    solve,
)
from .transitions import (
    CutSpec,
    FrameShift,
    RampProfile,
    TransitionPlan,
    plan_transition,
    validate_transition,
)

__all__ = [
    "__version__",
    "AmbiguousDepthError",
    "ComfortLimits",
    "ComfortReport",
    "CutRef",
    "CutSpec",
    "DepthBand",
    "DepthMapping",
    "DepthProbe",
    "DIVERGENT",
    "Divergent",
    "DomainError",
    "FocusRange",
    "FrameShift",
    "FrameStats",
    "Geometry",
    "InfeasibleError",
    "InfinityPlacement",
    "IngestError",
    "MaskSpec",
    "MonotonicityError",
    "ProjectDoc",
    "RampProfile",
    "RemapCurve",
    "SceneBudget",
    "ShotRecord",
    "SolveRequest",
    "SolveResult",
    "Status",
    "SubtitlePlan",
    "TransitionPlan",
    "Verdict",
    "WindowReport",
    "angular_disparity",
    "apply",
    "assess",
    "build_mapping",
    "check_window",
    "depth_from_disparity",
    "diopter_conflict",
    "disparity_from_depth",
    "fix_window",
    "focus_range",
    "homothety_scale",
    "identity",
    "ingest",
    "is_divergent",
    "map_depth",
    "max_baseline_no_divergence",
    "nearness_factor",
    "perceived_depth",
    "place_subtitle",
    "plan_transition",
    "remap_depth_proportional",
    "remap_interpolate",
    "remap_lut",
    "remap_multirig",
    "roundness_factor",
    "serialize",
    "shift",
    "solve",
    "validate_transition",
    "window_depth",
]

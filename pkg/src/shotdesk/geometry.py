"""Closed-form stereoscopic shooting/viewing geometry.

A stereo configuration -- camera rig or viewer-plus-screen -- is described
by the same three lengths (:class:`Geometry`): the interocular separation
between the two optical centers, the distance to the plane of zero
disparity (the convergence plane when shooting, the screen when viewing),
and the width of that plane.  Disparities are dimensionless fractions of
the plane width throughout; depths are meters measured from the
optical-center baseline, positive in front, with ``math.inf`` as a
first-class "at infinity" depth.

Conventions:

* d > 0 is uncrossed disparity (content behind the convergence plane or
  screen), d < 0 is crossed (content in front).
* A displayed disparity larger than the viewer's ``interocular/width``
  would force the eyes beyond parallel.  That outcome is the first-class
  value :data:`DIVERGENT`, not an exception: ordinary footage shown on the
  wrong screen produces it routinely.
* Equality checks use relative tolerance 1e-9 (``REL_TOL``) with an
  absolute floor of 1e-12 m; everything here is closed-form, so looser
  tolerances would only mask sign errors.

All types are immutable values and all functions are pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Union

from .errors import AmbiguousDepthError, DomainError

REL_TOL = 1e-9
ABS_TOL = 1e-12


class Divergent:
    """Outcome of a displayed disparity exceeding the viewer interocular."""

    __slots__ = ()
    _instance: "Divergent | None" = None

    def __new__(cls) -> "Divergent":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "divergent"


DIVERGENT = Divergent()

Depth = float
DepthResult = Union[float, Divergent]


def is_divergent(value: object) -> bool:
    return isinstance(value, Divergent)


def _check_depth(z: float) -> float:
    """Validate a depth: strictly positive meters, or +inf."""
    if z == math.inf:
        return z
    if not isinstance(z, (int, float)) or math.isnan(z) or z <= 0 or not math.isfinite(z):
        raise DomainError(f"depth must be > 0 or inf, got {z!r}")
    return float(z)


@dataclass(frozen=True)
class Geometry:
    """One stereo configuration, camera rig or viewing room.

    Attributes:
        interocular: separation of the two optical centers, meters (>= 0;
            zero is the flat 2-D degenerate rig).
        convergence: distance to the zero-disparity plane, meters.  For a
            viewing room this is the screen distance.
        width: width of the convergence plane / screen, meters.
    """

    interocular: float
    convergence: float
    width: float

    def __post_init__(self):
        if not (math.isfinite(self.interocular) and self.interocular >= 0):
            raise DomainError(f"interocular must be finite and >= 0, got {self.interocular!r}")
        if not (math.isfinite(self.convergence) and self.convergence > 0):
            raise DomainError(f"convergence distance must be finite and > 0, got {self.convergence!r}")
        if not (math.isfinite(self.width) and self.width > 0):
            raise DomainError(f"plane width must be finite and > 0, got {self.width!r}")

    @property
    def infinity_disparity(self) -> float:
        """Disparity of infinitely distant content: interocular / width.

        No physically realized depth produces a larger disparity; for a
        viewer it is also the parallel-gaze boundary.
        """
        return self.interocular / self.width


class InfinityPlacement(str, Enum):
    """Where scene infinity lands for the viewer."""

    ORTHO = "ortho-infinite"   # infinity is perceived exactly at infinity
    HYPER = "hyper-infinite"   # infinity would force divergence
    HYPO = "hypo-infinite"     # infinity is perceived at a finite depth


def disparity_from_depth(geometry: Geometry, z: float) -> float:
    """Disparity (width fraction) of a point at depth ``z`` under ``geometry``.

    Similar triangles through the convergence plane give
    ``d = (b/W) * (z - H) / z``; the limit at infinity is exactly ``b/W``.
    """
    z = _check_depth(z)
    if z == math.inf:
        return geometry.infinity_disparity
    return (geometry.interocular / geometry.width) * ((z - geometry.convergence) / z)


def depth_from_disparity(geometry: Geometry, d: float) -> float:
    """Depth whose image disparity is ``d``; inverse of `disparity_from_depth`.

    ``d`` equal to ``interocular/width`` maps to infinity; anything larger
    is produced by no real depth and raises :class:`DomainError`.
    """
    if not math.isfinite(d):
        raise DomainError(f"disparity must be finite, got {d!r}")
    if geometry.interocular == 0.0:
        if d == 0.0:
            raise AmbiguousDepthError(
                "zero-interocular rig: every depth has zero disparity, inverse is ambiguous"
            )
        raise DomainError(f"zero-interocular rig produces no disparity {d!r}")
    limit = geometry.infinity_disparity
    if d > limit:
        raise DomainError(
            f"disparity {d!r} exceeds the infinity limit {limit!r}; no real depth produces it"
        )
    if d == limit:
        return math.inf
    denom = 1.0 - (geometry.width / geometry.interocular) * d
    if denom <= 0.0:
        # d is within a rounding of the limit; the turn to infinity is real.
        return math.inf
    return geometry.convergence / denom


def perceived_depth(view: Geometry, d: float, shift: float = 0.0) -> DepthResult:
    """Depth perceived by a viewer for displayed disparity ``d + shift``.

    Returns ``inf`` exactly at the parallel-gaze boundary and
    :data:`DIVERGENT` beyond it.
    """
    if view.interocular == 0.0:
        raise DomainError("viewing geometry needs a positive interocular")
    if not math.isfinite(d) or not math.isfinite(shift):
        raise DomainError("disparity and shift must be finite")
    total = d + shift
    limit = view.infinity_disparity
    if total > limit:
        return DIVERGENT
    if total == limit:
        return math.inf
    denom = 1.0 - (view.width / view.interocular) * total
    if denom <= 0.0:
        return math.inf
    return view.convergence / denom


def homothety_scale(shoot: Geometry, view: Geometry, rel_tol: float = REL_TOL) -> float | None:
    """Common scale factor taking ``shoot`` to ``view`` when the two
    geometries are homothetic (equal up to one scale), else ``None``.

    Two zero-interocular rigs count as matching on that axis; a single
    zero does not.
    """
    scale_h = view.convergence / shoot.convergence
    scale_w = view.width / shoot.width
    if not math.isclose(scale_w, scale_h, rel_tol=rel_tol):
        return None
    if shoot.interocular == 0.0 or view.interocular == 0.0:
        if shoot.interocular == 0.0 and view.interocular == 0.0:
            return scale_h
        return None
    scale_b = view.interocular / shoot.interocular
    if not math.isclose(scale_b, scale_h, rel_tol=rel_tol):
        return None
    return scale_h


def roundness_factor(shoot: Geometry, view: Geometry) -> float:
    """Depth magnification over width magnification at the screen plane.

    Equals ``(b * H') / (b' * H)``; 1.0 means faithful depth around the
    screen, below 1 flattens (cardboard look).  Values are snapped to
    exactly 1.0 for homothetic pairs, where the mapping is exactly linear.
    Independent of both plane widths.
    """
    if view.interocular == 0.0:
        raise DomainError("viewing geometry needs a positive interocular")
    if homothety_scale(shoot, view) is not None:
        return 1.0
    return (shoot.interocular * view.convergence) / (view.interocular * shoot.convergence)


def nearness_factor(view: Geometry, z_perceived: float) -> float:
    """Screen distance over perceived distance: 0 at infinity, 1 on the
    screen, 2 at half the screen distance."""
    z = _check_depth(z_perceived)
    if z == math.inf:
        return 0.0
    return view.convergence / z


@dataclass(frozen=True)
class DepthMapping:
    """The scene-depth to perceived-depth map for a (shoot, view, shift) triple.

    The map is a homography of the depth axis.  ``pole_depth`` is the scene
    depth imaged to perceived infinity when one exists short of scene
    infinity (anything beyond it diverges); ``infinity_image`` is where
    scene infinity lands, and ``classification`` summarizes it.
    """

    source: Geometry
    target: Geometry
    shift: float
    pole_depth: float | None
    infinity_image: DepthResult
    classification: InfinityPlacement
    homothety: float | None

    def map(self, z: float) -> DepthResult:
        return map_depth(self, z)


def build_mapping(shoot: Geometry, view: Geometry, shift: float = 0.0) -> DepthMapping:
    """Assemble the depth map and its infinity behaviour."""
    if view.interocular == 0.0:
        raise DomainError("viewing geometry needs a positive interocular")
    if not math.isfinite(shift):
        raise DomainError("shift must be finite")

    homothety = homothety_scale(shoot, view) if shift == 0.0 else None
    if homothety is not None:
        # Faithful reproduction: the exact linear map, ortho-infinite by
        # construction (shields the boundary from rounding noise too).
        return DepthMapping(
            source=shoot,
            target=view,
            shift=shift,
            pole_depth=None,
            infinity_image=math.inf,
            classification=InfinityPlacement.ORTHO,
            homothety=homothety,
        )

    infinity_image = perceived_depth(view, shoot.infinity_disparity, shift)
    pole_depth = None
    if is_divergent(infinity_image):
        classification = InfinityPlacement.HYPER
        if shoot.interocular == 0.0:
            # Flat rig shifted past parallel: every depth diverges and no
            # finite depth is imaged to infinity.
            pole_depth = None
        else:
            # The scene depth whose image disparity displays exactly at the
            # parallel-gaze boundary.
            try:
                pole_depth = depth_from_disparity(shoot, view.infinity_disparity - shift)
            except DomainError:
                pole_depth = math.inf
            if pole_depth == math.inf:
                # Divergence at infinity was only rounding-deep.
                classification = InfinityPlacement.ORTHO
                infinity_image = math.inf
                pole_depth = None
    elif infinity_image == math.inf:
        classification = InfinityPlacement.ORTHO
    else:
        classification = InfinityPlacement.HYPO

    return DepthMapping(
        source=shoot,
        target=view,
        shift=shift,
        pole_depth=pole_depth,
        infinity_image=infinity_image,
        classification=classification,
        homothety=homothety,
    )


def map_depth(mapping: DepthMapping, z: float) -> DepthResult:
    """Perceived depth of scene depth ``z`` under ``mapping``.

    Homothetic unshifted pairs take the exact linear path ``z * H'/H`` so
    the faithful-reproduction identity holds to the last bit.
    """
    z = _check_depth(z)
    if mapping.homothety is not None:
        return z * (mapping.target.convergence / mapping.source.convergence)
    d = disparity_from_depth(mapping.source, z)
    return perceived_depth(mapping.target, d, mapping.shift)

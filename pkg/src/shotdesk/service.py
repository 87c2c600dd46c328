"""Stateless HTTP evaluation service.

Every endpoint is a pure request/response wrapper over the in-process
functions; results are numerically identical to calling the library
directly.  Depth fields accept numbers or the string ``"inf"``; divergent
outcomes come back as the string ``"divergent"``, never as an error.
"""

from __future__ import annotations

import math
from typing import Literal, Union

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field, field_validator

from ._version import __version__
from .analysis import (
    comfort_report_json,
    curve_json,
    evaluate_json,
    mask_json,
    plan_json,
    solve_result_json,
    window_report_json,
)
from .comfort import ComfortLimits, assess
from .errors import DomainError, InfeasibleError, IngestError, MonotonicityError
from .geometry import Geometry
from .layout import MaskSpec, check_window, fix_window
from .remap import (
    DepthBand,
    RemapCurve,
    remap_depth_proportional,
    remap_interpolate,
    remap_lut,
    remap_multirig,
    shift as shift_curve,
)
from .shots import FrameStats, ShotRecord
from .solver import SceneBudget, SolveRequest, solve
from .transitions import CutSpec, plan_transition, validate_transition

DepthIn = Union[float, Literal["inf"]]


def _depth(value: DepthIn) -> float:
    return math.inf if value == "inf" else float(value)


class GeometryIn(BaseModel):
    interocular_m: float = Field(ge=0)
    convergence_m: float = Field(gt=0)
    width_m: float = Field(gt=0)

    def build(self) -> Geometry:
        return Geometry(self.interocular_m, self.convergence_m, self.width_m)


class LimitsIn(BaseModel):
    dof_diopters: float = Field(default=0.2, gt=0)
    percival_deg: float = Field(default=1.0, gt=0)
    fusion_deg: float = Field(default=2.0, gt=0)
    easy_arcmin: float = Field(default=35.0, gt=0)
    min_roundness: float = Field(default=0.2, gt=0)

    def build(self) -> ComfortLimits:
        return ComfortLimits(
            dof_diopters=self.dof_diopters,
            percival_deg=self.percival_deg,
            fusion_deg=self.fusion_deg,
            easy_arcmin=self.easy_arcmin,
            min_roundness=self.min_roundness,
        )


class FrameIn(BaseModel):
    min_disparity_frac: float
    max_disparity_frac: float
    left_border_min_frac: float
    right_border_min_frac: float
    subject_disparity_frac: float | None = None

    def build(self) -> FrameStats:
        return FrameStats(
            min_disparity=self.min_disparity_frac,
            max_disparity=self.max_disparity_frac,
            left_border_min=self.left_border_min_frac,
            right_border_min=self.right_border_min_frac,
            subject_disparity=self.subject_disparity_frac,
        )


class ShotIn(BaseModel):
    id: str = "shot"
    shoot: GeometryIn
    shift_frac: float = 0.0
    fps: float = Field(default=24.0, gt=0)
    frames: list[FrameIn]

    def build(self) -> ShotRecord:
        return ShotRecord(
            id=self.id,
            shoot=self.shoot.build(),
            shift=self.shift_frac,
            fps=self.fps,
            frames=tuple(frame.build() for frame in self.frames),
        )


class EvaluateIn(BaseModel):
    shoot: GeometryIn
    view: GeometryIn
    shift_frac: float = 0.0
    z_samples_m: list[DepthIn] | None = None


class SceneIn(BaseModel):
    z_near_m: DepthIn
    z_far_m: DepthIn


class AssessIn(BaseModel):
    shoot: GeometryIn
    view: GeometryIn
    shift_frac: float = 0.0
    scene: SceneIn
    limits: LimitsIn | None = None


class SolveSceneIn(BaseModel):
    z_near_m: DepthIn
    z_subject_m: float
    z_far_m: DepthIn


class SolveIn(BaseModel):
    view: GeometryIn
    scene: SolveSceneIn
    target_roundness: float = 1.0
    field_width_m: float | None = None
    allow_shift: bool = False
    convergence_m: float | None = None
    limits: LimitsIn | None = None


class BandIn(BaseModel):
    z_min_m: float = Field(ge=0)
    z_max_m: DepthIn
    baseline_scale: float = Field(ge=0)


class RemapIn(BaseModel):
    kind: Literal["identity", "shift", "interpolate", "depth_proportional", "multirig", "lut"]
    shift_frac: float | None = None
    t: float | None = None
    shoot: GeometryIn | None = None
    view: GeometryIn | None = None
    bands: list[BandIn] | None = None
    breakpoints: list[tuple[float, float]] | None = None
    eval_at: list[float] = Field(default_factory=list)


class TransitionValidateIn(BaseModel):
    outgoing: ShotIn
    incoming: ShotIn
    view: GeometryIn
    limits: LimitsIn | None = None


class TransitionIn(BaseModel):
    d1_frac: float
    d2_frac: float
    fps: float = Field(gt=0)
    ramp_seconds: float = Field(default=1.0, gt=0)
    validate_against: TransitionValidateIn | None = None


class WindowIn(BaseModel):
    view: GeometryIn
    shot: ShotIn
    mask: dict | None = None


def _build_curve(request: RemapIn) -> RemapCurve:
    if request.kind == "identity":
        from .remap import identity

        return identity()
    if request.kind == "shift":
        if request.shift_frac is None:
            raise DomainError("shift remap needs shift_frac")
        return shift_curve(request.shift_frac)
    if request.kind == "interpolate":
        if request.t is None:
            raise DomainError("interpolate remap needs t")
        return remap_interpolate(request.t)
    if request.kind == "depth_proportional":
        if request.shoot is None or request.view is None:
            raise DomainError("depth_proportional remap needs shoot and view")
        return remap_depth_proportional(request.shoot.build(), request.view.build())
    if request.kind == "multirig":
        if request.bands is None or request.shoot is None:
            raise DomainError("multirig remap needs bands and shoot")
        bands = [
            DepthBand(band.z_min_m, _depth(band.z_max_m), band.baseline_scale)
            for band in request.bands
        ]
        return remap_multirig(bands, request.shoot.build())
    if request.breakpoints is None:
        raise DomainError("lut remap needs breakpoints")
    return remap_lut(list(request.breakpoints))


def create_app() -> FastAPI:
    app = FastAPI(title="shotdesk", version=__version__)

    @app.exception_handler(DomainError)
    @app.exception_handler(IngestError)
    async def _domain_error(request: Request, exc: Exception):
        return JSONResponse(status_code=422, content={"detail": [{"msg": str(exc)}]})

    @app.get("/v1/health")
    def health():
        return {"status": "ok", "version": __version__}

    @app.post("/v1/evaluate")
    def evaluate(request: EvaluateIn):
        samples = (
            None
            if request.z_samples_m is None
            else [_depth(z) for z in request.z_samples_m]
        )
        return evaluate_json(
            request.shoot.build(), request.view.build(), request.shift_frac, samples
        )

    @app.post("/v1/assess")
    def assess_endpoint(request: AssessIn):
        limits = request.limits.build() if request.limits else ComfortLimits()
        report = assess(
            request.shoot.build(),
            request.view.build(),
            request.shift_frac,
            (_depth(request.scene.z_near_m), _depth(request.scene.z_far_m)),
            limits,
        )
        return comfort_report_json(report)

    @app.post("/v1/solve")
    def solve_endpoint(request: SolveIn):
        limits = request.limits.build() if request.limits else ComfortLimits()
        solve_request = SolveRequest(
            view=request.view.build(),
            scene=SceneBudget(
                _depth(request.scene.z_near_m),
                request.scene.z_subject_m,
                _depth(request.scene.z_far_m),
            ),
            target_roundness=request.target_roundness,
            field_width=request.field_width_m,
            limits=limits,
            allow_shift=request.allow_shift,
            convergence=request.convergence_m,
        )
        try:
            result = solve(solve_request)
        except InfeasibleError as exc:
            return {"status": "infeasible", "binding": exc.binding, "message": str(exc)}
        return {"status": "ok", "result": solve_result_json(result)}

    @app.post("/v1/remap")
    def remap_endpoint(request: RemapIn):
        try:
            curve = _build_curve(request)
        except MonotonicityError as exc:
            return {
                "status": "non_monotone",
                "message": str(exc),
                "offending_pair": exc.offending_pair,
            }
        return {
            "status": "ok",
            "curve": curve_json(curve),
            "outputs": [curve.apply(d) for d in request.eval_at],
        }

    @app.post("/v1/transition")
    def transition_endpoint(request: TransitionIn):
        spec = CutSpec(
            d1=request.d1_frac,
            d2=request.d2_frac,
            fps=request.fps,
            ramp_seconds=request.ramp_seconds,
        )
        plan = plan_transition(spec)
        payload = {"plan": plan_json(plan), "report": None}
        if request.validate_against is not None:
            limits = (
                request.validate_against.limits.build()
                if request.validate_against.limits
                else ComfortLimits()
            )
            report = validate_transition(
                plan,
                request.validate_against.outgoing.build(),
                request.validate_against.incoming.build(),
                request.validate_against.view.build(),
                limits,
            )
            payload["report"] = comfort_report_json(report)
        return payload

    @app.post("/v1/window")
    def window_endpoint(request: WindowIn):
        view = request.view.build()
        shot = request.shot.build()
        mask = MaskSpec(
            left=(request.mask or {}).get("left_frac", 0.0),
            right=(request.mask or {}).get("right_frac", 0.0),
        )
        report = check_window(shot, mask, view)
        suggested = fix_window(shot, view) if report.violations else None
        return {
            "report": window_report_json(report),
            "suggested_mask": mask_json(suggested) if suggested else None,
        }

    return app


app = create_app()

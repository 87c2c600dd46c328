"""Cut-softening plans and their validation."""

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shotdesk.comfort import ComfortLimits, Status
from shotdesk.errors import DomainError
from shotdesk.geometry import Geometry
from shotdesk.shots import FrameStats, ShotRecord
from shotdesk.transitions import (
    CutSpec,
    RampProfile,
    plan_transition,
    validate_transition,
)

VIEW = Geometry(0.065, 15.0, 10.0)
GRID = 2.0**-20


def dyadic(rng, span=50_000):
    return rng.randint(-span, span) * GRID


def make_shot(shot_id, d_min, d_max, frames=30, shift=0.0, subject=None):
    stats = FrameStats(
        min_disparity=d_min,
        max_disparity=d_max,
        left_border_min=d_min,
        right_border_min=d_min,
        subject_disparity=subject,
    )
    return ShotRecord(
        id=shot_id,
        shoot=Geometry(0.065, 15.0, 10.0),
        shift=shift,
        fps=24.0,
        frames=tuple(stats for _ in range(frames)),
    )


class TestPlanTransition:
    def test_midpoint_arithmetic(self):
        plan = plan_transition(CutSpec(d1=0.01, d2=-0.01, fps=24.0))
        assert plan.outgoing[-1].shift == -0.01
        assert plan.incoming[0].shift == 0.01
        assert plan.meet_disparity == 0.0

    def test_equal_disparities_are_a_noop(self):
        plan = plan_transition(CutSpec(d1=0.004, d2=0.004, fps=24.0))
        assert all(fs.shift == 0.0 for fs in plan.outgoing)
        assert all(fs.shift == 0.0 for fs in plan.incoming)

    def test_sampling_at_24fps(self):
        plan = plan_transition(CutSpec(d1=0.0, d2=0.006, fps=24.0, ramp_seconds=1.0))
        assert len(plan.outgoing) == 24
        assert len(plan.incoming) == 24
        assert [fs.frame for fs in plan.outgoing] == list(range(-24, 0))
        assert [fs.frame for fs in plan.incoming] == list(range(0, 24))
        assert plan.outgoing[0].shift == 0.0
        assert plan.outgoing[-1].shift == pytest.approx(0.003, rel=1e-12)
        assert plan.incoming[0].shift == pytest.approx(-0.003, rel=1e-12)
        assert plan.incoming[-1].shift == 0.0
        # Linear ramp: each step moves by the same amount.
        steps = [
            b.shift - a.shift for a, b in zip(plan.outgoing, plan.outgoing[1:])
        ]
        assert all(step == pytest.approx(0.003 / 23.0, rel=1e-9) for step in steps)

    def test_ramps_monotone(self):
        rng = random.Random(31)
        for _ in range(200):
            spec = CutSpec(
                d1=rng.uniform(-0.05, 0.05),
                d2=rng.uniform(-0.05, 0.05),
                fps=rng.choice([24.0, 25.0, 30.0, 48.0]),
                ramp_seconds=rng.uniform(0.25, 2.0),
            )
            plan = plan_transition(spec)
            for ramp in (plan.outgoing, plan.incoming):
                shifts = [fs.shift for fs in ramp]
                diffs = [b - a for a, b in zip(shifts, shifts[1:])]
                assert all(d >= 0 for d in diffs) or all(d <= 0 for d in diffs)

    def test_exact_invariants_on_dyadic_grid(self):
        # Disparities on a 2**-20 grid (about one ppm of the screen width)
        # keep every sum exact, so the endpoint, continuity and zero-sum
        # identities must hold bit for bit.
        rng = random.Random(32)
        for _ in range(1000):
            d1, d2 = dyadic(rng), dyadic(rng)
            plan = plan_transition(CutSpec(d1=d1, d2=d2, fps=24.0))
            assert plan.outgoing[0].shift == 0.0
            assert plan.outgoing[-1].shift == (d2 - d1) / 2.0
            assert plan.incoming[0].shift == (d1 - d2) / 2.0
            assert plan.incoming[-1].shift == 0.0
            # Zero-sum and continuity at the cut.
            assert plan.outgoing[-1].shift + plan.incoming[0].shift == 0.0
            assert d1 + plan.outgoing[-1].shift == d2 + plan.incoming[0].shift
            assert d1 + plan.outgoing[-1].shift == plan.meet_disparity

    @settings(max_examples=300)
    @given(st.floats(-0.1, 0.1), st.floats(-0.1, 0.1))
    def test_swap_symmetry_negates_everything(self, d1, d2):
        forward = plan_transition(CutSpec(d1=d1, d2=d2, fps=24.0))
        backward = plan_transition(CutSpec(d1=d2, d2=d1, fps=24.0))
        for a, b in zip(forward.outgoing, backward.outgoing):
            assert a.shift == -b.shift
        for a, b in zip(forward.incoming, backward.incoming):
            assert a.shift == -b.shift

    @settings(max_examples=300)
    @given(st.floats(-0.1, 0.1), st.floats(-0.1, 0.1))
    def test_zero_sum_for_arbitrary_floats(self, d1, d2):
        plan = plan_transition(CutSpec(d1=d1, d2=d2, fps=24.0))
        assert plan.outgoing[-1].shift + plan.incoming[0].shift == 0.0

    def test_ease_profile_keeps_endpoints(self):
        plan = plan_transition(
            CutSpec(d1=0.0, d2=0.006, fps=24.0), profile=RampProfile.EASE_IN_OUT
        )
        assert plan.outgoing[0].shift == 0.0
        assert plan.outgoing[-1].shift == 0.003
        assert plan.incoming[0].shift == -0.003

    def test_short_ramps_still_carry_both_endpoints(self):
        plan = plan_transition(CutSpec(d1=0.0, d2=0.004, fps=1.0, ramp_seconds=1.0))
        assert len(plan.outgoing) == 2
        assert plan.outgoing[0].shift == 0.0
        assert plan.outgoing[-1].shift == 0.002


class TestValidateTransition:
    def test_noop_plan_on_comfortable_shots_passes(self):
        plan = plan_transition(CutSpec(d1=0.001, d2=0.001, fps=24.0))
        shot = make_shot("a", -0.002, 0.003)
        report = validate_transition(plan, shot, shot, VIEW, ComfortLimits())
        assert report.worst is Status.PASS

    def test_shift_into_divergence_fails(self):
        # Max disparity one notch under the parallel limit; a +0.002 shift
        # pushes it over during the ramp.
        plan = plan_transition(CutSpec(d1=0.0, d2=0.004, fps=24.0))
        assert plan.outgoing[-1].shift == pytest.approx(0.002, rel=1e-12)
        outgoing = make_shot("a", 0.0, VIEW.infinity_disparity - 0.001)
        incoming = make_shot("b", -0.002, 0.002)
        report = validate_transition(plan, outgoing, incoming, VIEW, ComfortLimits())
        assert report.divergent
        assert report.worst is Status.FAIL
        failing = [v for v in report.verdicts if v.check == "divergence"]
        assert failing[0].status is Status.FAIL
        assert "outgoing" in failing[0].message

    def test_shifts_within_percival_pass(self):
        plan = plan_transition(CutSpec(d1=-0.002, d2=0.002, fps=24.0))
        outgoing = make_shot("a", -0.003, 0.002)
        incoming = make_shot("b", -0.002, 0.003)
        report = validate_transition(plan, outgoing, incoming, VIEW, ComfortLimits())
        assert all(v.status is Status.PASS for v in report.verdicts)

    def test_missing_frames_error_names_the_frame(self):
        plan = plan_transition(CutSpec(d1=0.0, d2=0.004, fps=24.0))
        outgoing = make_shot("a", -0.002, 0.002, frames=10)
        incoming = make_shot("b", -0.002, 0.002)
        with pytest.raises(DomainError, match="outgoing plan frame -24"):
            validate_transition(plan, outgoing, incoming, VIEW, ComfortLimits())

    def test_loosened_limits_pass_without_divergence(self):
        # With no divergence in play, arbitrarily loose limits always pass.
        rng = random.Random(33)
        loose = ComfortLimits(
            dof_diopters=1e9, percival_deg=179.0, fusion_deg=179.0, min_roundness=1e-12
        )
        for _ in range(50):
            d1 = rng.uniform(-0.01, 0.01)
            d2 = rng.uniform(-0.01, 0.01)
            plan = plan_transition(CutSpec(d1=d1, d2=d2, fps=24.0))
            headroom = max(abs(d1 - d2), 0.001)
            outgoing = make_shot("a", rng.uniform(-0.02, 0.0), 0.0065 - 2 * headroom)
            incoming = make_shot("b", rng.uniform(-0.02, 0.0), 0.0065 - 2 * headroom)
            report = validate_transition(plan, outgoing, incoming, VIEW, loose)
            assert report.worst is Status.PASS

    def test_shot_baked_shift_included(self):
        plan = plan_transition(CutSpec(d1=0.0, d2=0.0, fps=24.0))
        shot = make_shot("a", 0.0, 0.006, shift=0.001)  # 0.006 + 0.001 > 0.0065
        report = validate_transition(plan, shot, shot, VIEW, ComfortLimits())
        assert report.divergent

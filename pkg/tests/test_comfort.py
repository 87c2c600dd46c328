"""Comfort diagnostics: focus ranges, vergence angles, assessment verdicts."""

import math
import random

import pytest

from shotdesk.comfort import (
    ComfortLimits,
    Status,
    angular_disparity,
    assess,
    diopter_conflict,
    display_disparity_at_angle,
    display_disparity_focus_bounds,
    focus_range,
)
from shotdesk.errors import DomainError
from shotdesk.geometry import Geometry, perceived_depth

from oracles import gaze_angular_disparity_deg

VIEW = Geometry(0.065, 15.0, 10.0)


class TestFocusRange:
    def test_cinema_screen(self):
        rng = focus_range(16.0, 0.2)
        assert rng.near == pytest.approx(3.8095238095, rel=1e-9)
        assert rng.far == math.inf

    def test_three_meters_wide_band(self):
        rng = focus_range(3.0, 0.3)
        assert rng.near == pytest.approx(1.5789473684, rel=1e-9)
        assert rng.far == pytest.approx(30.0, rel=1e-9)

    def test_tv_distance(self):
        rng = focus_range(3.5, 0.2)
        assert rng.near == pytest.approx(2.0588235294, rel=1e-9)
        assert rng.far == pytest.approx(11.6666666667, rel=1e-9)

    def test_symmetric_in_diopters(self):
        rng_state = random.Random(3)
        for _ in range(100):
            z = rng_state.uniform(0.3, 40.0)
            dof = rng_state.uniform(0.05, 0.5)
            rng = focus_range(z, dof)
            assert 1.0 / rng.near - 1.0 / z == pytest.approx(dof, rel=1e-12)
            far_gap = 1.0 / z - (0.0 if rng.far == math.inf else 1.0 / rng.far)
            if rng.far != math.inf:
                assert far_gap == pytest.approx(dof, rel=1e-12)
            else:
                assert 1.0 / z <= dof

    def test_rejects_bad_inputs(self):
        with pytest.raises(DomainError):
            focus_range(0.0, 0.2)
        with pytest.raises(DomainError):
            focus_range(3.0, 0.0)
        with pytest.raises(DomainError):
            focus_range(math.inf, 0.2)


class TestAngularDisparity:
    def test_zero_on_screen(self):
        assert angular_disparity(VIEW, 0.0) == 0.0

    def test_parallel_gaze_at_interocular_limit(self):
        # Magnitude is exactly the screen vergence.
        angle = angular_disparity(VIEW, 0.0065)
        screen_vergence = math.degrees(2.0 * math.atan(0.065 / 30.0))
        assert angle == pytest.approx(-screen_vergence, rel=1e-12)
        assert angle == pytest.approx(-0.2483, abs=1e-4)

    def test_crossed_disparity_converges_nearer(self):
        angle = angular_disparity(VIEW, -0.0065)
        oracle = gaze_angular_disparity_deg(0.065, 15.0, 10.0, -0.0065)
        assert angle == pytest.approx(oracle, rel=1e-12)
        assert angle == pytest.approx(0.2483, abs=1e-4)

    def test_matches_gaze_vector_oracle(self):
        rng = random.Random(4)
        for _ in range(200):
            b = rng.uniform(0.05, 0.08)
            h = rng.uniform(1.0, 30.0)
            w = rng.uniform(0.5, 20.0)
            d = rng.uniform(-0.05, 0.02)
            view = Geometry(b, h, w)
            assert angular_disparity(view, d) == pytest.approx(
                gaze_angular_disparity_deg(b, h, w, d), rel=1e-12, abs=1e-12
            )

    def test_strictly_decreasing_in_disparity(self):
        samples = [(-0.05 + 0.001 * index) for index in range(100)]
        values = [angular_disparity(VIEW, d) for d in samples]
        assert all(b < a for a, b in zip(values, values[1:]))

    def test_small_angle_approximation_within_one_percent(self):
        # For physical disparities under a tenth of the screen distance the
        # flat-angle shortcut stays within 1% of the exact value.
        rng = random.Random(5)
        for _ in range(200):
            d = rng.uniform(-0.09, 0.0099) * VIEW.convergence / VIEW.width
            exact = angular_disparity(VIEW, d)
            approx = math.degrees(-d * VIEW.width / VIEW.convergence)
            if exact != 0.0:
                assert abs(approx - exact) < 0.01 * abs(exact)

    def test_inverse_round_trips(self):
        for angle in (-1.5, -0.3, 0.0, 0.4, 1.9):
            d = display_disparity_at_angle(VIEW, angle)
            assert angular_disparity(VIEW, d) == pytest.approx(angle, rel=1e-12, abs=1e-12)


class TestDiopterConflict:
    def test_zero_on_screen(self):
        assert diopter_conflict(VIEW, 15.0) == 0.0

    def test_infinity(self):
        assert diopter_conflict(VIEW, math.inf) == pytest.approx(1.0 / 15.0, rel=1e-12)

    def test_near_object(self):
        assert diopter_conflict(VIEW, 5.91) == pytest.approx(0.1025, abs=5e-5)

    def test_focus_bounds_match_focus_range(self):
        d_lo, d_hi = display_disparity_focus_bounds(VIEW, 0.2)
        z_lo = perceived_depth(VIEW, d_lo, 0.0)
        z_hi = perceived_depth(VIEW, d_hi, 0.0)
        assert diopter_conflict(VIEW, z_lo) == pytest.approx(0.2, rel=1e-9)
        assert z_hi == math.inf  # 1/15 < 0.2 puts the far bound at infinity


def verdict(report, check):
    matches = [v for v in report.verdicts if v.check == check]
    assert len(matches) == 1
    return matches[0]


class TestAssess:
    def test_homothetic_scene_in_focus_all_pass(self):
        shoot = Geometry(0.065, 15.0, 10.0)
        report = assess(shoot, VIEW, 0.0, (4.0, math.inf), ComfortLimits())
        assert report.worst is Status.PASS
        assert not report.divergent
        assert {v.check for v in report.verdicts} == {
            "divergence",
            "fusion",
            "percival",
            "dof",
            "roundness",
        }

    def test_hyperstereo_far_content_fails_divergence(self):
        shoot = Geometry(0.13, 15.0, 10.0)
        report = assess(shoot, VIEW, 0.0, (7.5, math.inf), ComfortLimits())
        assert report.divergent
        assert verdict(report, "divergence").status is Status.FAIL
        assert report.worst is Status.FAIL

    def test_quarter_roundness_against_thresholds(self):
        shoot = Geometry(0.065, 16.0, 10.0)
        view = Geometry(0.065, 4.0, 10.0)
        scene = (14.0, 18.0)
        passing = assess(shoot, view, 0.0, scene, ComfortLimits())
        assert verdict(passing, "roundness").status is Status.PASS
        strict = assess(shoot, view, 0.0, scene, ComfortLimits(min_roundness=0.3))
        assert verdict(strict, "roundness").status is Status.WARN
        assert strict.worst is Status.WARN

    def test_percival_warn_fusion_fail_ladder(self):
        # Very crossed content: first leaves the Percival zone, then fusion.
        shoot = Geometry(0.065, 15.0, 10.0)
        mild = assess(shoot, VIEW, 0.0, (2.0, 15.0), ComfortLimits())
        assert verdict(mild, "percival").status is Status.WARN
        assert verdict(mild, "fusion").status is Status.PASS
        harsh = assess(shoot, VIEW, 0.0, (0.8, 15.0), ComfortLimits())
        assert verdict(harsh, "fusion").status is Status.FAIL
        assert harsh.worst is Status.FAIL

    def test_enlarging_range_never_improves(self):
        rng = random.Random(6)
        order = {Status.PASS: 0, Status.WARN: 1, Status.FAIL: 2}
        for _ in range(60):
            shoot = Geometry(
                rng.uniform(0.02, 0.2), rng.uniform(2.0, 30.0), rng.uniform(1.0, 15.0)
            )
            near = rng.uniform(0.5, shoot.convergence)
            far = rng.uniform(shoot.convergence, 200.0)
            small = assess(shoot, VIEW, 0.0, (near, far), ComfortLimits())
            big = assess(shoot, VIEW, 0.0, (near * 0.7, far * 2.0), ComfortLimits())
            assert order[big.worst] >= order[small.worst]

    def test_rejects_inverted_scene(self):
        with pytest.raises(DomainError):
            assess(VIEW, VIEW, 0.0, (10.0, 5.0), ComfortLimits())

    def test_screen_plane_conflict_is_zero(self):
        rng = random.Random(7)
        for _ in range(20):
            view = Geometry(rng.uniform(0.05, 0.07), rng.uniform(1.0, 25.0), rng.uniform(1.0, 12.0))
            assert diopter_conflict(view, view.convergence) == 0.0


class TestLimitsValidation:
    def test_defaults_are_valid(self):
        limits = ComfortLimits()
        assert limits.dof_diopters == 0.2
        assert limits.percival_deg == 1.0
        assert limits.fusion_deg == 2.0
        assert limits.easy_arcmin == 35.0
        assert limits.min_roundness == 0.2

    def test_percival_cannot_exceed_fusion(self):
        with pytest.raises(DomainError):
            ComfortLimits(percival_deg=3.0, fusion_deg=2.0)

    def test_all_positive(self):
        with pytest.raises(DomainError):
            ComfortLimits(dof_diopters=0.0)

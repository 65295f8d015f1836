import numpy as np
import pytest

from retargetkit.plan import (
    RetargetParams,
    adjust_plan_for_width,
    choose_orientation,
    make_plan,
)


class TestRetargetParams:
    def test_defaults(self):
        p = RetargetParams(ratio=1.0)
        assert (p.lam, p.window, p.eta) == (0.3, 25, 15)

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"ratio": 0.0},
            {"ratio": -2.0},
            {"ratio": 1.0, "lam": 1.0},
            {"ratio": 1.0, "lam": -0.1},
            {"ratio": 1.0, "window": 24},
            {"ratio": 1.0, "window": 1},
            {"ratio": 1.0, "eta": 0},
            {"ratio": 1.0, "eta": 26},
        ],
    )
    def test_invalid_rejected(self, kwargs):
        with pytest.raises(ValueError):
            RetargetParams(**kwargs)


class TestChooseOrientation:
    def test_wide_image_square_target_shrinks_width(self):
        assert choose_orientation(160, 90, 1.0) == "columns"

    def test_tall_image_wide_target_shrinks_height(self):
        assert choose_orientation(90, 160, 16 / 9) == "rows"

    def test_exact_ratio_takes_rows_branch(self):
        assert choose_orientation(160, 90, 160 / 90) == "rows"


class TestMakePlan:
    def test_saliency_floor_branch_with_padding(self):
        p = RetargetParams(ratio=1.0, lam=0.3)
        plan = make_plan(300, 100, 200, p)
        assert plan.w_t == 100
        assert plan.w_f == 140  # 200 * 0.7 > 100
        assert plan.h_f == 140
        assert (plan.pad_top, plan.pad_bottom) == (20, 20)

    def test_target_width_branch_no_padding(self):
        p = RetargetParams(ratio=1.0, lam=0.3)
        plan = make_plan(300, 100, 100, p)
        assert plan.w_f == 100  # 70 <= 100
        assert plan.h_f == 100
        assert plan.pad_total == 0

    def test_empty_saliency(self):
        p = RetargetParams(ratio=16 / 9)
        plan = make_plan(200, 90, 0, p)
        assert plan.w_t == 160
        assert (plan.w_f, plan.h_f, plan.pad_total) == (160, 90, 0)

    def test_floor_clamped_to_original_width(self):
        p = RetargetParams(ratio=1.0, lam=0.1)
        plan = make_plan(120, 100, 200, p)  # 180 > 120
        assert plan.w_f == 120

    def test_branch_exclusivity_and_floor(self, rng):
        for _ in range(200):
            w = int(rng.integers(20, 400))
            h = int(rng.integers(20, 400))
            ratio = float(rng.uniform(0.5, 2.0))
            ws = int(rng.integers(0, w + 1))
            lam = float(rng.uniform(0.0, 0.9))
            p = RetargetParams(ratio=ratio, lam=lam)
            plan = make_plan(w, h, ws, p)
            assert plan.w_f >= min(plan.w_t, w)
            assert plan.w_f <= w or plan.w_t > w
            # padding conservation
            assert plan.pad_top + plan.pad_bottom + h == plan.h_f
            assert 0 <= plan.pad_bottom - plan.pad_top <= 1
            # canvas ratio within one-pixel rounding slack
            assert abs(plan.w_f / plan.h_f - ratio) <= ratio / (2 * plan.h_f) + 1e-9 \
                or plan.h_f == h

    def test_ratio_slack_when_height_clamped(self, rng):
        # h_f never drops below h; the w_t rounding keeps the slack
        for _ in range(100):
            h = int(rng.integers(20, 300))
            ratio = float(rng.uniform(0.5, 2.0))
            p = RetargetParams(ratio=ratio)
            plan = make_plan(10_000, h, 0, p)
            assert plan.h_f >= h
            assert abs(plan.w_f / plan.h_f - ratio) <= 1.0 / plan.h_f + 1e-9


class TestAdjustPlanForWidth:
    def test_same_width_is_identity(self):
        p = RetargetParams(ratio=1.0)
        plan = make_plan(200, 100, 0, p)
        assert adjust_plan_for_width(plan, plan.w_f, 100) is plan

    def test_rederives_height_and_padding(self):
        p = RetargetParams(ratio=1.0, lam=0.3)
        plan = make_plan(300, 100, 200, p)  # w_f 140
        adjusted = adjust_plan_for_width(plan, 151, 100)
        assert adjusted.w_f == 151
        assert adjusted.h_f == 151
        assert adjusted.pad_total == 51
        assert (adjusted.pad_top, adjusted.pad_bottom) == (25, 26)

    def test_smaller_width_rejected(self):
        p = RetargetParams(ratio=1.0)
        plan = make_plan(200, 100, 0, p)
        with pytest.raises(ValueError):
            adjust_plan_for_width(plan, plan.w_f - 1, 100)

import numpy as np
import pytest

from retargetkit.pipeline import retarget
from retargetkit.plan import RetargetParams
from retargetkit.raster import transpose
from retargetkit.saliency import binarize, stats

from conftest import block_saliency, random_image


class TestIdentityPaths:
    def test_exact_ratio_is_noop(self, rng):
        img = random_image(rng, 40, 80)
        sal = block_saliency(40, 80, 10, 30, 20, 40)
        result = retarget(img, sal, RetargetParams(ratio=2.0))
        assert (result.output == img).all()
        assert result.carve.seams_removed == 0
        assert (result.repaint_mask == 1).all()
        assert result.propagated_width_out == result.saliency_width_in

    def test_no_seams_no_padding_mask_all_ones(self, rng):
        img = random_image(rng, 30, 30)
        result = retarget(img, np.zeros((30, 30)), RetargetParams(ratio=1.0))
        assert (result.repaint_mask == 1).all()
        assert (result.output == img).all()


class TestOrientation:
    def test_tall_image_wide_ratio_runs_transposed(self, rng):
        img = random_image(rng, 80, 40)  # taller than wide
        sal = block_saliency(80, 40, 30, 50, 10, 30)
        result = retarget(img, sal, RetargetParams(ratio=16 / 9))
        assert result.orientation == "rows"
        h, w = result.output.shape[:2]
        assert abs(w / h - 16 / 9) <= 1.0 / h
        # saliency is measured in the final orientation
        assert result.propagated_bits.shape == (h, w)

    def test_wide_image_narrow_ratio_stays_columns(self, rng):
        img = random_image(rng, 40, 80)
        result = retarget(img, np.zeros((40, 80)), RetargetParams(ratio=1.0))
        assert result.orientation == "columns"
        assert result.output.shape[:2] == (40, 40)


class TestPaddingAndReplan:
    def test_wide_salient_block_expands_height(self):
        # saliency floor 0.7*100=70 > w_t=36 at ratio 9:16 -> padded canvas
        rng = np.random.default_rng(5)
        img = np.full((64, 128, 3), 90, np.uint8)
        img[:, :, 0] = rng.integers(80, 100, (64, 128))
        sal = block_saliency(64, 128, 2, 62, 10, 110)
        params = RetargetParams(ratio=9 / 16)
        result = retarget(img, sal, params)
        plan = result.plan
        assert plan.w_f >= 70
        assert plan.pad_total == plan.h_f - 64 > 0
        h, w = result.output.shape[:2]
        assert (h, w) == (plan.h_f, plan.w_f)
        assert abs(w / h - 9 / 16) <= 1.0 / h
        # padding rows were repaint regions
        assert (result.repaint_mask[: plan.pad_top] == 0).all()
        # budget honored even under forced crossings
        budget = int(np.floor(params.lam * stats(binarize(sal)).union_width))
        assert result.carve.salient_seams_removed <= budget

    def test_budget_halt_rederives_canvas(self, rng):
        # block nearly spans the image; tiny lam forces an early halt
        img = random_image(rng, 32, 64)
        sal = block_saliency(32, 64, 0, 32, 2, 62)
        params = RetargetParams(ratio=1.0, lam=0.05)
        result = retarget(img, sal, params)
        assert result.carve.halted
        achieved = 64 - result.carve.seams_removed
        assert result.plan.w_f == achieved
        h, w = result.output.shape[:2]
        assert w == achieved
        assert abs(w / h - 1.0) <= 1.0 / h


class TestRepaintRegions:
    def test_background_region_repaints_non_salient(self, rng):
        img = random_image(rng, 24, 48)
        sal = block_saliency(24, 48, 4, 20, 10, 30)
        result = retarget(img, sal, RetargetParams(ratio=48 / 24), repaint_region="background")
        # identity geometry, so the mask equals the binarized saliency
        assert (result.repaint_mask == binarize(sal)).all()

    def test_unknown_region_rejected(self, rng):
        img = random_image(rng, 16, 16)
        with pytest.raises(ValueError):
            retarget(img, np.zeros((16, 16)), RetargetParams(ratio=1.0), repaint_region="all")

    def test_dilation_grows_repaint(self, rng):
        img = random_image(rng, 24, 64)
        sal = np.zeros((24, 64))
        base = retarget(img, sal, RetargetParams(ratio=1.5, window=9, eta=6))
        grown = retarget(img, sal, RetargetParams(ratio=1.5, window=9, eta=6), dilate=2)
        assert int((grown.repaint_mask == 0).sum()) >= int((base.repaint_mask == 0).sum())


class TestPropagatedSaliency:
    def test_budget_bounds_propagated_loss(self, rng):
        for _ in range(10):
            h, w = 24, 48
            x0 = int(rng.integers(4, 20))
            bw = int(rng.integers(6, 16))
            img = random_image(rng, h, w)
            sal = block_saliency(h, w, 4, h - 4, x0, x0 + bw)
            lam = float(rng.uniform(0.1, 0.6))
            params = RetargetParams(ratio=1.0, lam=lam)
            result = retarget(img, sal, params)
            w_in = result.saliency_width_in
            loss = (w_in - result.propagated_width_out) / w_in
            assert loss <= lam + 1.0 / w_in + 1e-9

    def test_mismatched_saliency_rejected(self, rng):
        img = random_image(rng, 16, 16)
        with pytest.raises(ValueError):
            retarget(img, np.zeros((16, 17)), RetargetParams(ratio=1.0))

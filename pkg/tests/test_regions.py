import numpy as np
import pytest

from retargetkit.plan import RetargetParams, make_plan
from retargetkit.regions import (
    abruptness,
    background_field,
    dilate_repaint,
    merge_outpaint,
    place_on_canvas,
    repaint_field_from_carve,
)

from conftest import random_image


def scalar_window_counts(mask, window):
    """Independent clamped-window tally with border rescaling."""
    h, w = mask.shape
    half = window // 2
    out = np.zeros((h, w))
    for y in range(h):
        for x in range(w):
            lo, hi = max(0, x - half), min(w, x + half + 1)
            out[y, x] = sum(mask[y][lo:hi]) * window / (hi - lo)
    return out


class TestAbruptness:
    def test_all_ones_saturates(self):
        counts = abruptness(np.ones((3, 40), np.uint8), 25)
        assert np.allclose(counts, 25.0)

    def test_all_zeros(self):
        assert (abruptness(np.zeros((2, 30), np.uint8), 25) == 0).all()

    def test_centered_window_tally(self, rng):
        row = np.zeros((1, 25), np.uint8)
        ones = rng.choice(25, size=12, replace=False)
        row[0, ones] = 1
        counts = abruptness(row, 25)
        assert counts[0, 12] == 12.0  # full window centered mid-row

    def test_matches_scalar_oracle(self, rng):
        mask = (rng.uniform(0, 1, (4, 31)) < 0.6).astype(np.uint8)
        assert np.allclose(abruptness(mask, 7), scalar_window_counts(mask, 7))

    def test_even_window_rejected(self):
        with pytest.raises(ValueError):
            abruptness(np.ones((2, 10), np.uint8), 8)


class TestRepaintFieldFromCarve:
    def test_identity_retarget_all_preserved(self):
        mask = np.ones((4, 60), np.uint8)
        field = repaint_field_from_carve(mask, abruptness(mask, 25), 15)
        assert field.shape == (4, 60)
        assert (field == 1).all()

    def test_ten_column_cut_marks_flanking_survivors(self):
        # columns 25..34 deleted in every row; window 25, threshold 15.
        # Survivors within 3 columns of the cut see exactly 10 deletions in
        # their window (count 15 <= 15) and are marked for repainting.
        mask = np.ones((2, 60), np.uint8)
        mask[:, 25:35] = 0
        field = repaint_field_from_carve(mask, abruptness(mask, 25), 15)
        assert field.shape == (2, 50)
        zeros = set(np.nonzero(field[0] == 0)[0].tolist())
        assert zeros == {22, 23, 24, 25, 26, 27}

    def test_single_isolated_deletion_no_repaint(self):
        mask = np.ones((1, 60), np.uint8)
        mask[0, 30] = 0
        field = repaint_field_from_carve(mask, abruptness(mask, 25), 15)
        assert (field == 1).all()  # neighbors keep counts >= 24 > 15

    def test_compaction_matches_popcount(self, rng):
        mask = np.ones((3, 40), np.uint8)
        for y in range(3):
            dead = rng.choice(40, size=12, replace=False)
            mask[y, dead] = 0
        field = repaint_field_from_carve(mask, abruptness(mask, 9), 5)
        assert field.shape == (3, 28)

    def test_lower_eta_never_adds_repaint(self, rng):
        row = np.zeros(50, np.uint8)
        row[rng.choice(50, size=35, replace=False)] = 1
        mask = np.tile(row, (3, 1))
        counts = abruptness(mask, 25)
        zeros_prev = None
        for eta in (25, 20, 15, 10, 5, 1):
            field = repaint_field_from_carve(mask, counts, eta)
            zeros = int((field == 0).sum())
            if zeros_prev is not None:
                assert zeros <= zeros_prev
            zeros_prev = zeros


class TestMergeOutpaint:
    def test_no_padding_no_marks(self):
        p = RetargetParams(ratio=1.0)
        plan = make_plan(80, 50, 0, p)  # w_t = w_f = 50, no pads
        field = np.ones((50, 50), np.uint8)
        mask = merge_outpaint(field, plan)
        assert mask.shape == (50, 50)
        assert (mask == 1).all()

    def test_padding_rows_all_zero(self):
        p = RetargetParams(ratio=1.0, lam=0.3)
        plan = make_plan(300, 100, 200, p)  # 140x140 canvas, pads 20/20
        field = np.ones((100, 140), np.uint8)
        mask = merge_outpaint(field, plan)
        assert mask.shape == (140, 140)
        assert int((mask == 0).sum()) == 40 * 140
        assert (mask[:20] == 0).all() and (mask[-20:] == 0).all()

    def test_combined_zero_count_is_sum_of_parts(self, rng):
        p = RetargetParams(ratio=1.0, lam=0.3)
        plan = make_plan(300, 100, 200, p)
        field = (rng.uniform(0, 1, (100, 140)) < 0.9).astype(np.uint8)
        field_zeros = int((field == 0).sum())
        mask = merge_outpaint(field, plan)
        assert int((mask == 0).sum()) == field_zeros + 40 * 140

    def test_wider_field_triggers_replan(self):
        p = RetargetParams(ratio=1.0, lam=0.3)
        plan = make_plan(300, 100, 200, p)  # w_f 140
        field = np.ones((100, 150), np.uint8)  # early-halt width
        mask = merge_outpaint(field, plan)
        assert mask.shape == (150, 150)

    def test_narrower_field_rejected(self):
        p = RetargetParams(ratio=1.0)
        plan = make_plan(300, 100, 200, p)
        with pytest.raises(ValueError):
            merge_outpaint(np.ones((100, 120), np.uint8), plan)

    def test_wrong_height_rejected(self):
        p = RetargetParams(ratio=1.0)
        plan = make_plan(300, 100, 0, p)
        with pytest.raises(ValueError):
            merge_outpaint(np.ones((90, plan.w_f), np.uint8), plan)


class TestPlaceOnCanvas:
    def test_zero_padding_identity(self, rng):
        p = RetargetParams(ratio=1.0)
        plan = make_plan(80, 50, 0, p)
        img = random_image(rng, 50, 50)
        assert (place_on_canvas(img, plan) == img).all()

    def test_single_pad_row_replicates(self, rng):
        p = RetargetParams(ratio=1.0, lam=0.0)
        plan = make_plan(6, 2, 4, p)  # w_f 4, h_f 4, pads 1/1
        img = random_image(rng, 2, 4)
        canvas = place_on_canvas(img, plan)
        assert (canvas[0] == img[0]).all()
        assert (canvas[-1] == img[-1]).all()

    def test_labeled_rows_replicate_into_pads(self):
        p = RetargetParams(ratio=1.0, lam=0.3)
        plan = make_plan(300, 100, 200, p)  # pads 20/20, interior 100x140
        img = np.zeros((100, 140, 3), np.uint8)
        img[:] = np.arange(100, dtype=np.uint8)[:, None, None]
        canvas = place_on_canvas(img, plan)
        assert (canvas[:20] == img[0]).all()
        assert (canvas[-20:] == img[-1]).all()
        assert (canvas[20:120] == img).all()

    def test_dimension_mismatch_rejected(self, rng):
        p = RetargetParams(ratio=1.0)
        plan = make_plan(80, 50, 0, p)
        with pytest.raises(ValueError):
            place_on_canvas(random_image(rng, 50, 49), plan)


class TestBackgroundField:
    def test_all_salient_all_preserved(self):
        bits = np.ones((3, 10), np.uint8)
        mask = np.ones((3, 10), np.uint8)
        assert (background_field(bits, mask) == 1).all()

    def test_all_background_all_repaint(self):
        bits = np.zeros((3, 10), np.uint8)
        mask = np.ones((3, 10), np.uint8)
        assert (background_field(bits, mask) == 0).all()

    def test_split_counts_surviving_background(self, rng):
        bits = np.zeros((4, 12), np.uint8)
        bits[:, :6] = 1
        mask = np.ones((4, 12), np.uint8)
        mask[:, [2, 9]] = 0  # one salient and one background column deleted
        field = background_field(bits, mask)
        assert field.shape == (4, 10)
        assert int((field == 0).sum()) == 4 * 5  # 6-1 background survivors per row


class TestDilateRepaint:
    def test_zero_radius_noop(self, rng):
        field = (rng.uniform(0, 1, (5, 9)) < 0.8).astype(np.uint8)
        assert dilate_repaint(field, 0) is field

    def test_radius_grows_zero_region(self):
        field = np.ones((5, 9), np.uint8)
        field[2, 4] = 0
        out = dilate_repaint(field, 1)
        assert (out[1:4, 3:6] == 0).all()
        assert out[0, 0] == 1

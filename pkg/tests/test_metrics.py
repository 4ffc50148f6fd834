import numpy as np
import pytest

from skinmap import ConfusionCounts, aggregate, score_mask, to_rates
from skinmap.metrics import format_rate


def counts_from(tp, tn, fp, fn):
    return ConfusionCounts(tp=tp, tn=tn, fp=fp, fn=fn)


class TestScoreMask:
    def make_pair(self):
        truth = np.zeros((10, 10), dtype=bool)
        truth.flat[:10] = True
        return truth

    def test_perfect_prediction(self):
        truth = self.make_pair()
        c = score_mask(truth, truth)
        assert (c.tp, c.tn, c.fp, c.fn) == (10, 90, 0, 0)

    def test_inverted_prediction(self):
        truth = self.make_pair()
        c = score_mask(~truth, truth)
        assert (c.tp, c.tn, c.fp, c.fn) == (0, 0, 90, 10)

    def test_partial_overlap(self):
        truth = self.make_pair()
        predicted = truth.copy()
        predicted.flat[9] = False  # miss one skin pixel
        predicted.flat[10:15] = True  # five false alarms
        c = score_mask(predicted, truth)
        assert (c.tp, c.fn, c.fp, c.tn) == (9, 1, 5, 85)

    def test_dimension_mismatch_is_error(self):
        with pytest.raises(ValueError, match="dimensions"):
            score_mask(np.zeros((2, 3), bool), np.zeros((3, 2), bool))

    def test_total_equals_pixel_count(self, rng):
        for _ in range(10):
            shape = (int(rng.integers(1, 20)), int(rng.integers(1, 20)))
            predicted = rng.random(shape) < 0.5
            truth = rng.random(shape) < 0.3
            c = score_mask(predicted, truth)
            assert c.total == shape[0] * shape[1]
            assert c.tp + c.fn == int(np.count_nonzero(truth))
            assert c.tn + c.fp == int(np.count_nonzero(~truth))

    def test_swapping_arguments_swaps_fp_fn(self, rng):
        predicted = rng.random((8, 8)) < 0.5
        truth = rng.random((8, 8)) < 0.5
        a = score_mask(predicted, truth)
        b = score_mask(truth, predicted)
        assert (a.tp, a.tn) == (b.tp, b.tn)
        assert (a.fp, a.fn) == (b.fn, b.fp)

    def test_self_score_has_no_errors(self, rng):
        m = rng.random((7, 5)) < 0.4
        c = score_mask(m, m)
        assert c.fp == 0 and c.fn == 0


class TestToRates:
    def test_direct_ratios(self):
        r = to_rates(counts_from(tp=9, tn=85, fp=5, fn=1))
        assert r.tp_pct == pytest.approx(90.0)
        assert r.tn_pct == pytest.approx(94.444444444, abs=1e-6)
        assert r.fp_pct == pytest.approx(5.555555555, abs=1e-6)
        assert r.fn_pct == pytest.approx(10.0)

    def test_absent_negative_class_is_not_applicable(self):
        r = to_rates(counts_from(tp=50, tn=0, fp=0, fn=10))
        assert r.tn_pct is None and r.fp_pct is None
        assert r.tp_pct is not None

    def test_reference_row_rendering(self):
        r = to_rates(counts_from(tp=911, fn=89, tn=881, fp=119))
        rendered = [format_rate(x) for x in (r.tp_pct, r.tn_pct, r.fp_pct, r.fn_pct)]
        assert rendered == ["91.1", "88.1", "11.9", "8.9"]

    def test_pairs_sum_to_100(self, rng):
        for _ in range(20):
            tp, tn, fp, fn = (int(x) for x in rng.integers(0, 500, size=4))
            r = to_rates(counts_from(tp, tn, fp, fn))
            if r.tp_pct is not None:
                assert r.tp_pct + r.fn_pct == pytest.approx(100.0, abs=1e-9)
            if r.tn_pct is not None:
                assert r.tn_pct + r.fp_pct == pytest.approx(100.0, abs=1e-9)


class TestAggregate:
    def test_single_element_identity(self):
        c = counts_from(tp=3, tn=5, fp=2, fn=1)
        assert aggregate([c], "micro") == to_rates(c)
        assert aggregate([c], "macro") == to_rates(c)

    def test_micro_pools_pixels(self):
        a = counts_from(tp=10, tn=5, fp=5, fn=0)
        b = counts_from(tp=0, tn=5, fp=5, fn=10)
        r = aggregate([a, b], "micro")
        assert r.tp_pct == pytest.approx(50.0)

    def test_macro_averages_rates(self):
        a = counts_from(tp=10, tn=5, fp=5, fn=0)
        b = counts_from(tp=0, tn=5, fp=5, fn=10)
        r = aggregate([a, b], "macro")
        assert r.tp_pct == pytest.approx(50.0)

    def test_macro_skips_not_applicable_pairs(self):
        all_skin = counts_from(tp=80, tn=0, fp=0, fn=20)  # no negative class
        mixed = counts_from(tp=50, tn=60, fp=40, fn=50)
        r = aggregate([all_skin, mixed], "macro")
        assert r.tn_pct == pytest.approx(60.0)  # only the mixed image counts
        assert r.tp_pct == pytest.approx((80.0 + 50.0) / 2)

    def test_micro_of_identical_copies_is_identity(self):
        c = counts_from(tp=7, tn=11, fp=3, fn=2)
        assert aggregate([c] * 5, "micro") == to_rates(c)

    def test_empty_list_is_error(self):
        with pytest.raises(ValueError, match="empty"):
            aggregate([], "micro")

    def test_unknown_mode_is_error(self):
        with pytest.raises(ValueError, match="mode"):
            aggregate([counts_from(1, 1, 1, 1)], "pooled")


class TestConfusionCounts:
    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            counts_from(tp=-1, tn=0, fp=0, fn=0)

    def test_addition(self):
        a = counts_from(1, 2, 3, 4)
        b = counts_from(10, 20, 30, 40)
        assert a + b == counts_from(11, 22, 33, 44)

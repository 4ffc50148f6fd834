"""Pixel-level confusion counts and percentage rate summaries.

Rates follow the usual two-pair structure: tp/fn are percentages of the
ground-truth skin pixels, tn/fp of the ground-truth non-skin pixels. When
a class is absent its pair is reported as None (not-applicable) rather
than 0 or 100, so all-skin and no-skin images never distort the other
pair. Reports render rates with one decimal place; internal arithmetic
keeps full precision.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    tn: int
    fp: int
    fn: int

    def __post_init__(self):
        for name in ("tp", "tn", "fp", "fn"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")

    @property
    def total(self):
        return self.tp + self.tn + self.fp + self.fn

    def __add__(self, other):
        return ConfusionCounts(
            self.tp + other.tp,
            self.tn + other.tn,
            self.fp + other.fp,
            self.fn + other.fn,
        )


@dataclass(frozen=True)
class RateSummary:
    """Percentage rates; a pair is None when its class has no pixels."""

    tp_pct: float | None
    tn_pct: float | None
    fp_pct: float | None
    fn_pct: float | None


def score_mask(predicted, truth):
    """Tally a predicted mask against ground truth of identical shape."""
    predicted = np.asarray(predicted, dtype=bool)
    truth = np.asarray(truth, dtype=bool)
    if predicted.shape != truth.shape:
        raise ValueError(
            f"mask dimensions differ: predicted {predicted.shape}, truth {truth.shape}"
        )
    tp = int(np.count_nonzero(predicted & truth))
    fp = int(np.count_nonzero(predicted & ~truth))
    fn = int(np.count_nonzero(~predicted & truth))
    tn = int(np.count_nonzero(~predicted & ~truth))
    return ConfusionCounts(tp=tp, tn=tn, fp=fp, fn=fn)


def to_rates(counts):
    """Percentage rates of one ConfusionCounts; absent classes give None."""
    tp_pct = fn_pct = None
    tn_pct = fp_pct = None
    positives = counts.tp + counts.fn
    negatives = counts.tn + counts.fp
    if positives > 0:
        tp_pct = 100.0 * counts.tp / positives
        fn_pct = 100.0 * counts.fn / positives
    if negatives > 0:
        tn_pct = 100.0 * counts.tn / negatives
        fp_pct = 100.0 * counts.fp / negatives
    return RateSummary(tp_pct=tp_pct, tn_pct=tn_pct, fp_pct=fp_pct, fn_pct=fn_pct)


def aggregate(counts, mode="micro"):
    """Combine per-image counts into one RateSummary.

    micro pools the pixel counts and takes rates of the sum; macro averages
    per-image rates, skipping not-applicable pairs image by image.
    """
    counts = list(counts)
    if not counts:
        raise ValueError("cannot aggregate an empty list of counts")
    if mode == "micro":
        total = counts[0]
        for c in counts[1:]:
            total = total + c
        return to_rates(total)
    if mode == "macro":
        rates = [to_rates(c) for c in counts]
        pos = [(r.tp_pct, r.fn_pct) for r in rates if r.tp_pct is not None]
        neg = [(r.tn_pct, r.fp_pct) for r in rates if r.tn_pct is not None]
        tp_pct = fn_pct = None
        tn_pct = fp_pct = None
        if pos:
            tp_pct = sum(p[0] for p in pos) / len(pos)
            fn_pct = sum(p[1] for p in pos) / len(pos)
        if neg:
            tn_pct = sum(n[0] for n in neg) / len(neg)
            fp_pct = sum(n[1] for n in neg) / len(neg)
        return RateSummary(tp_pct=tp_pct, tn_pct=tn_pct, fp_pct=fp_pct, fn_pct=fn_pct)
    raise ValueError(f"unknown aggregation mode {mode!r}; expected 'micro' or 'macro'")


def format_rate(value):
    """One-decimal rendering used by all reports; None renders as n/a."""
    return "n/a" if value is None else f"{value:.1f}"

"""Grid-search threshold tuning and dataset evaluation.

A grid assigns candidate values to every threshold parameter of a model
(axes as lo/hi/step ranges or explicit value lists), or lists explicit
candidate tuples directly. The search exhaustively scores every valid
candidate on the train split and ranks rows by an objective:

    youden      (tp_pct + tn_pct) / 100 - 1
    weighted:W  W * tp_pct + (1 - W) * tn_pct, W in [0, 1] (default 0.5)

Candidates whose rates are not-applicable (a pixel class absent from the
dataset) have no objective and rank last. Ranking is deterministic: ties
break on the lexicographic threshold tuple, so the report is independent
of grid enumeration order and of any parallelism.
"""

import itertools
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import astuple, dataclass

from . import classify, metrics

GRID_CAP = 10_000_000

PARAM_NAMES = {
    "hsv": ("hue_lo", "hue_hi"),
    "yuv": ("y_lo", "y_hi", "u_lo", "u_hi", "v_lo", "v_hi"),
    "yuvyiq": ("y_lo", "y_hi", "i_lo", "i_hi", "theta_lo", "theta_hi"),
}

RANGE_SYMBOLS = {
    "hsv": ("h",),
    "yuv": ("y", "u", "v"),
    "yuvyiq": ("y", "I", "theta"),
}


@dataclass(frozen=True)
class GridAxis:
    """Candidate values for one threshold parameter."""

    values: tuple

    @classmethod
    def from_range(cls, lo, hi, step):
        if step <= 0:
            raise ValueError(f"grid step must be > 0, got {step}")
        if lo > hi:
            raise ValueError(f"grid range must satisfy lo <= hi, got ({lo}, {hi})")
        count = int(math.floor((hi - lo) / step + 1e-9)) + 1
        return cls(tuple(lo + k * step for k in range(count)))


@dataclass(frozen=True)
class GridSpec:
    """Candidate threshold tuples for one model.

    Either axes (a value set per parameter, combined as a product) or an
    explicit tuple list. Tuples violating the model's threshold invariants
    (lo > hi, hue outside [0, 360), theta outside (-180, 180]) are skipped
    during the search rather than treated as errors.
    """

    model: str
    axes: dict | None = None
    candidates: tuple | None = None

    def __post_init__(self):
        if self.model not in PARAM_NAMES:
            raise ValueError(f"unknown model {self.model!r}")
        if (self.axes is None) == (self.candidates is None):
            raise ValueError("grid needs exactly one of axes or candidates")
        names = PARAM_NAMES[self.model]
        if self.axes is not None:
            missing = [n for n in names if n not in self.axes]
            if missing:
                raise ValueError(f"grid is missing axes for {', '.join(missing)}")
            extra = [n for n in self.axes if n not in names]
            if extra:
                raise ValueError(f"grid has unknown axes {', '.join(extra)}")
        else:
            for tup in self.candidates:
                if len(tup) != len(names):
                    raise ValueError(
                        f"candidate {tup} has {len(tup)} values; "
                        f"model {self.model!r} needs {len(names)}"
                    )

    @property
    def size(self):
        if self.candidates is not None:
            return len(self.candidates)
        total = 1
        for name in PARAM_NAMES[self.model]:
            total *= len(self.axes[name].values)
        return total

    def iter_candidates(self):
        if self.candidates is not None:
            yield from (tuple(t) for t in self.candidates)
            return
        axes = [self.axes[name].values for name in PARAM_NAMES[self.model]]
        yield from itertools.product(*axes)


def parse_grid(text, model):
    """Parse a JSON grid file.

    {"axes": {"hue_lo": {"lo": 0, "hi": 20, "step": 5},
              "hue_hi": {"values": [20, 30, 40]}}}
    or
    {"candidates": [[2, 45], [4, 40], [5, 35], [10, 30]]}
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValueError(f"grid file is not valid JSON: {e}") from e
    if not isinstance(doc, dict):
        raise ValueError("grid file must contain a JSON object")
    if ("axes" in doc) == ("candidates" in doc):
        raise ValueError("grid file needs exactly one of 'axes' or 'candidates'")
    if "candidates" in doc:
        cands = doc["candidates"]
        if not isinstance(cands, list):
            raise ValueError("'candidates' must be a list of threshold tuples")
        return GridSpec(model=model, candidates=tuple(tuple(c) for c in cands))
    axes_doc = doc["axes"]
    if not isinstance(axes_doc, dict):
        raise ValueError("'axes' must be an object mapping parameter to spec")
    axes = {}
    for name, spec in axes_doc.items():
        if not isinstance(spec, dict):
            raise ValueError(f"axis {name!r} must be an object")
        if "values" in spec:
            axes[name] = GridAxis(tuple(float(x) for x in spec["values"]))
        elif {"lo", "hi", "step"} <= spec.keys():
            axes[name] = GridAxis.from_range(
                float(spec["lo"]), float(spec["hi"]), float(spec["step"])
            )
        else:
            raise ValueError(
                f"axis {name!r} needs either 'values' or 'lo'/'hi'/'step'"
            )
    return GridSpec(model=model, axes=axes)


def make_thresholds(model, values):
    """Thresholds instance from a parameter tuple, or None if invalid."""
    try:
        return classify.THRESHOLD_TYPES[model](*values)
    except ValueError:
        return None


def threshold_tuple(model, thresholds):
    return astuple(thresholds)


def parse_objective(objective):
    """Split an objective id into (kind, weight)."""
    if objective == "youden":
        return "youden", None
    if objective == "weighted":
        return "weighted", 0.5
    if objective.startswith("weighted:"):
        try:
            w = float(objective.split(":", 1)[1])
        except ValueError as e:
            raise ValueError(f"bad weight in objective {objective!r}") from e
        if not 0.0 <= w <= 1.0:
            raise ValueError(f"objective weight must be in [0, 1], got {w}")
        return "weighted", w
    raise ValueError(
        f"unknown objective {objective!r}; expected 'youden' or 'weighted:<w>'"
    )


def objective_score(rates, objective="youden"):
    """Score a RateSummary; requires defined tp and tn rates."""
    kind, w = parse_objective(objective)
    if rates.tp_pct is None or rates.tn_pct is None:
        raise ValueError("objective undefined: not-applicable rates")
    if kind == "youden":
        return (rates.tp_pct + rates.tn_pct) / 100.0 - 1.0
    return w * rates.tp_pct + (1.0 - w) * rates.tn_pct


@dataclass(frozen=True)
class TuneRow:
    thresholds: object
    rates: metrics.RateSummary
    objective_score: float | None


@dataclass(frozen=True)
class TuneReport:
    model: str
    objective: str
    rows: tuple
    dataset_fingerprint: str


def evaluate_thresholds(manifest, model, thresholds, mode="micro", workers=1):
    """Detect and score every manifest entry, then aggregate.

    The manifest is taken as-is; filter splits with manifest.filtered().
    """
    classify.check_model_thresholds(model, thresholds)
    if not manifest.entries:
        raise ValueError("manifest has no entries to evaluate")
    counts = []
    for entry in manifest.entries:
        image, truth = manifest.load_entry(entry)
        mask = classify.detect_mask(image, model, thresholds, workers=workers)
        counts.append(metrics.score_mask(mask, truth))
    return metrics.aggregate(counts, mode)


def grid_search(manifest, model, grid, objective="youden", top_k=10, mode="micro",
                workers=1):
    """Exhaustively score a threshold grid on the manifest's train split.

    Returns a TuneReport with the top_k rows ranked by objective
    (not-applicable candidates last, ties broken by threshold tuple).
    Identical inputs give an identical report at any worker count.
    """
    if grid.model != model:
        raise ValueError(f"grid is for model {grid.model!r}, search asked for {model!r}")
    parse_objective(objective)  # fail early on bad ids
    if top_k < 1:
        raise ValueError(f"top_k must be >= 1, got {top_k}")
    if grid.size == 0:
        raise ValueError("empty grid: no candidate thresholds")
    if grid.size > GRID_CAP:
        raise ValueError(
            f"grid has {grid.size} candidates, exceeding the cap of {GRID_CAP}"
        )
    train = manifest.filtered("train")
    if not train.entries:
        raise ValueError("manifest has no train entries to tune on")

    cached = []
    for entry in train.entries:
        image, truth = train.load_entry(entry)
        cached.append((classify.compute_features(image, model), truth))

    def eval_candidate(values):
        thresholds = make_thresholds(model, values)
        if thresholds is None:
            return None
        counts = []
        for features, truth in cached:
            mask = classify.apply_thresholds(features, model, thresholds)
            counts.append(metrics.score_mask(mask, truth))
        rates = metrics.aggregate(counts, mode)
        try:
            score = objective_score(rates, objective)
        except ValueError:
            score = None
        return TuneRow(thresholds=thresholds, rates=rates, objective_score=score)

    if workers <= 1:
        rows = [eval_candidate(v) for v in grid.iter_candidates()]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(eval_candidate, grid.iter_candidates()))
    rows = [r for r in rows if r is not None]
    if not rows:
        raise ValueError("empty effective grid: every candidate tuple was invalid")

    def sort_key(row):
        return (
            row.objective_score is None,
            -(row.objective_score if row.objective_score is not None else 0.0),
            threshold_tuple(model, row.thresholds),
        )

    rows.sort(key=sort_key)
    return TuneReport(
        model=model,
        objective=objective,
        rows=tuple(rows[:top_k]),
        dataset_fingerprint=train.fingerprint(),
    )


def _fmt_bound(x):
    return f"{x:g}"


def range_str(model, thresholds):
    """Human-readable bound string, e.g. '5 <= h <= 35'."""
    values = threshold_tuple(model, thresholds)
    parts = []
    for symbol, lo, hi in zip(RANGE_SYMBOLS[model], values[0::2], values[1::2]):
        parts.append(f"{_fmt_bound(lo)} <= {symbol} <= {_fmt_bound(hi)}")
    return " & ".join(parts)


def report_to_csv(report):
    """Render a TuneReport in its CSV form."""
    lines = [
        f"# model={report.model} objective={report.objective} "
        f"dataset={report.dataset_fingerprint}",
        "Range,True Positive,True Negative,False Positive,False Negative,Objective",
    ]
    for row in report.rows:
        r = row.rates
        score = "n/a" if row.objective_score is None else f"{row.objective_score:.4f}"
        lines.append(
            ",".join(
                [
                    range_str(report.model, row.thresholds),
                    metrics.format_rate(r.tp_pct),
                    metrics.format_rate(r.tn_pct),
                    metrics.format_rate(r.fp_pct),
                    metrics.format_rate(r.fn_pct),
                    score,
                ]
            )
        )
    return "\n".join(lines) + "\n"

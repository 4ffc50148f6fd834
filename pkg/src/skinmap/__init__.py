"""Pixel-based skin detection toolkit.

Three per-pixel classifiers over different color representations (hue
band, YUV box, combined YUV luma / YIQ chroma axis / chroma angle), plus
confusion-matrix evaluation against ground-truth masks, grid-search
threshold tuning, cluster statistics and a bit-exact 24-bit BMP codec.

Images are (height, width, 3) uint8 RGB numpy arrays with top-left
origin; masks are (height, width) bool arrays.
"""

from .classify import (
    MODELS,
    PAPER_OPTIMIZED,
    HsvThresholds,
    YuvThresholds,
    YuvYiqThresholds,
    classify_hsv,
    classify_yuv,
    classify_yuv_yiq,
    detect_mask,
)
from .colorspace import rgb_to_hue, rgb_to_yiq, rgb_to_yuv, uv_to_polar
from .imgio import (
    ALL_SKIN,
    NO_SKIN,
    BmpError,
    DatasetManifest,
    ManifestEntry,
    ManifestError,
    load_manifest,
    read_bmp,
    read_manifest,
    read_mask,
    write_bmp,
    write_mask,
)
from .metrics import ConfusionCounts, RateSummary, aggregate, score_mask, to_rates
from .stats import ClusterStats, collect_cluster_stats
from .tune import (
    GridAxis,
    GridSpec,
    TuneReport,
    TuneRow,
    evaluate_thresholds,
    grid_search,
    objective_score,
    parse_grid,
    report_to_csv,
)

__version__ = "0.1.0"

__all__ = [
    "MODELS",
    "PAPER_OPTIMIZED",
    "HsvThresholds",
    "YuvThresholds",
    "YuvYiqThresholds",
    "classify_hsv",
    "classify_yuv",
    "classify_yuv_yiq",
    "detect_mask",
    "rgb_to_hue",
    "rgb_to_yuv",
    "rgb_to_yiq",
    "uv_to_polar",
    "ALL_SKIN",
    "NO_SKIN",
    "BmpError",
    "ManifestError",
    "DatasetManifest",
    "ManifestEntry",
    "load_manifest",
    "read_bmp",
    "write_bmp",
    "read_mask",
    "write_mask",
    "read_manifest",
    "ConfusionCounts",
    "RateSummary",
    "score_mask",
    "to_rates",
    "aggregate",
    "ClusterStats",
    "collect_cluster_stats",
    "GridAxis",
    "GridSpec",
    "TuneRow",
    "TuneReport",
    "evaluate_thresholds",
    "grid_search",
    "objective_score",
    "parse_grid",
    "report_to_csv",
    "__version__",
]

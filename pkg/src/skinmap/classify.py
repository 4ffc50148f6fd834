"""Per-pixel skin classifiers and whole-image mask generation.

Three models, identified by the strings in MODELS:
    hsv    -- hue band test; pixels with no defined hue never match
    yuv    -- box test on (y, u, v)
    yuvyiq -- box test on luma y (from YUV), the red-orange chroma axis i
              (from YIQ) and the chroma angle theta (degrees, from
              centered u/v)

All threshold bounds are inclusive. Hue bands may not wrap around 360.
Masks are (height, width) bool arrays aligned pixel-for-pixel with the
image; classification depends only on each pixel's own color.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, astuple

import numpy as np

from . import colorspace

MODELS = ("hsv", "yuv", "yuvyiq")


@dataclass(frozen=True)
class HsvThresholds:
    """Inclusive hue band in degrees; 0 <= hue_lo <= hue_hi < 360."""

    hue_lo: float
    hue_hi: float

    def __post_init__(self):
        if not 0.0 <= self.hue_lo <= self.hue_hi < 360.0:
            raise ValueError(
                f"hue band must satisfy 0 <= lo <= hi < 360, "
                f"got ({self.hue_lo}, {self.hue_hi})"
            )


@dataclass(frozen=True)
class YuvThresholds:
    """Inclusive box on the offset-scale (y, u, v) components."""

    y_lo: float
    y_hi: float
    u_lo: float
    u_hi: float
    v_lo: float
    v_hi: float

    def __post_init__(self):
        for name in ("y", "u", "v"):
            lo = getattr(self, name + "_lo")
            hi = getattr(self, name + "_hi")
            if not lo <= hi:
                raise ValueError(f"{name} interval must satisfy lo <= hi, got ({lo}, {hi})")


@dataclass(frozen=True)
class YuvYiqThresholds:
    """Inclusive box on YUV luma y, YIQ chroma axis i and chroma angle theta.

    theta bounds are degrees within (-180, 180].
    """

    y_lo: float
    y_hi: float
    i_lo: float
    i_hi: float
    theta_lo: float
    theta_hi: float

    def __post_init__(self):
        for name in ("y", "i", "theta"):
            lo = getattr(self, name + "_lo")
            hi = getattr(self, name + "_hi")
            if not lo <= hi:
                raise ValueError(f"{name} interval must satisfy lo <= hi, got ({lo}, {hi})")
        if not (-180.0 < self.theta_lo and self.theta_hi <= 180.0):
            raise ValueError(
                f"theta bounds must lie in (-180, 180], "
                f"got ({self.theta_lo}, {self.theta_hi})"
            )


THRESHOLD_TYPES = {
    "hsv": HsvThresholds,
    "yuv": YuvThresholds,
    "yuvyiq": YuvYiqThresholds,
}

# Built-in reference thresholds, selectable as --preset paper-optimized.
PAPER_OPTIMIZED = {
    "hsv": HsvThresholds(5.0, 35.0),
    "yuv": YuvThresholds(70.0, 175.0, 95.0, 145.0, 95.0, 170.0),
    "yuvyiq": YuvYiqThresholds(70.0, 175.0, 20.0, 102.0, -48.0, 150.0),
}


def classify_hsv(pixel, thresholds):
    """True iff the pixel's hue is defined and inside the band."""
    r, g, b = pixel
    h = colorspace.rgb_to_hue(r, g, b)
    return h is not None and thresholds.hue_lo <= h <= thresholds.hue_hi


def classify_yuv(pixel, thresholds):
    """True iff the pixel's (y, u, v) lies inside the box."""
    r, g, b = pixel
    y, u, v = colorspace.rgb_to_yuv(r, g, b)
    return (
        thresholds.y_lo <= y <= thresholds.y_hi
        and thresholds.u_lo <= u <= thresholds.u_hi
        and thresholds.v_lo <= v <= thresholds.v_hi
    )


def classify_yuv_yiq(pixel, thresholds):
    """True iff y, i and theta all lie inside their intervals.

    Zero-chroma pixels use theta = 0; their i is exactly 0, which falls
    outside every useful i band, so grays do not match under the shipped
    preset.
    """
    r, g, b = pixel
    y, u, v = colorspace.rgb_to_yuv(r, g, b)
    _, i, _ = colorspace.rgb_to_yiq(r, g, b)
    _, theta = colorspace.uv_to_polar((y, u, v))
    return (
        thresholds.y_lo <= y <= thresholds.y_hi
        and thresholds.i_lo <= i <= thresholds.i_hi
        and thresholds.theta_lo <= theta <= thresholds.theta_hi
    )


CLASSIFIERS = {
    "hsv": classify_hsv,
    "yuv": classify_yuv,
    "yuvyiq": classify_yuv_yiq,
}


def check_model_thresholds(model, thresholds):
    """Reject unknown models and mismatched model/threshold pairings."""
    if model not in MODELS:
        raise ValueError(f"unknown model {model!r}; expected one of {MODELS}")
    expected = THRESHOLD_TYPES[model]
    if not isinstance(thresholds, expected):
        raise ValueError(
            f"model {model!r} needs {expected.__name__}, "
            f"got {type(thresholds).__name__}"
        )


def compute_features(pixels, model):
    """Per-pixel decision features for a model, as a tuple of float64 arrays.

    hsv: (hue,) with NaN where achromatic; yuv: (y, u, v);
    yuvyiq: (y, i, theta). Values are elementwise, so they do not depend
    on how the pixel array is partitioned; caching them across repeated
    threshold evaluations is transparent.
    """
    if model == "hsv":
        return (colorspace.rgb_to_hue_array(pixels),)
    if model == "yuv":
        return colorspace.rgb_to_yuv_array(pixels)
    if model == "yuvyiq":
        y, u, v = colorspace.rgb_to_yuv_array(pixels)
        _, i, _ = colorspace.rgb_to_yiq_array(pixels)
        _, theta = colorspace.uv_to_polar_array(u, v)
        return y, i, theta
    raise ValueError(f"unknown model {model!r}; expected one of {MODELS}")


def apply_thresholds(features, model, thresholds):
    """Boolean mask from precomputed features (see compute_features)."""
    check_model_thresholds(model, thresholds)
    if model == "hsv":
        (h,) = features
        # NaN compares false on both sides, so achromatic pixels drop out.
        return (h >= thresholds.hue_lo) & (h <= thresholds.hue_hi)
    lo = astuple(thresholds)[0::2]
    hi = astuple(thresholds)[1::2]
    mask = (features[0] >= lo[0]) & (features[0] <= hi[0])
    for comp, comp_lo, comp_hi in zip(features[1:], lo[1:], hi[1:]):
        mask &= (comp >= comp_lo) & (comp <= comp_hi)
    return mask


def _validate_image(image):
    a = np.asarray(image)
    if a.ndim != 3 or a.shape[2] != 3:
        raise ValueError(f"expected (height, width, 3) image, got shape {a.shape}")
    if a.shape[0] < 1 or a.shape[1] < 1:
        raise ValueError(f"empty image with shape {a.shape}")
    if a.dtype != np.uint8:
        raise ValueError(f"expected uint8 image, got dtype {a.dtype}")
    return a


def detect_mask(image, model, thresholds, workers=1):
    """Classify every pixel of an image.

    Args:
        image: (height, width, 3) uint8 RGB array.
        model: one of MODELS.
        thresholds: matching thresholds instance.
        workers: number of threads; the image is split into row bands.
            Output is bitwise identical at any worker count.

    Returns:
        (height, width) bool mask.
    """
    check_model_thresholds(model, thresholds)
    image = _validate_image(image)

    def band_mask(band):
        return apply_thresholds(compute_features(band, model), model, thresholds)

    if workers <= 1 or image.shape[0] < 2:
        return band_mask(image)
    bands = np.array_split(image, min(workers, image.shape[0]), axis=0)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(band_mask, bands))
    return np.concatenate(parts, axis=0)

"""Color space conversions used by the pixel classifiers and cluster stats.

Scalar functions take one pixel's channel values and return plain floats.
The ``*_array`` variants take whole images (or flat pixel lists) as numpy
arrays and perform the same operations in the same order, so both paths
produce bitwise-identical values for the linear components.

Conventions:
    - RGB channels are 8-bit values in [0, 255].
    - Images are (height, width, 3) uint8 arrays, row-major, top-left origin;
      array functions accept any (..., 3) shape.
    - Hue is in degrees [0, 360). Achromatic pixels (r == g == b) have no
      hue: scalar code returns None, array code returns NaN.
    - The chroma rows of the YUV/YIQ transforms are evaluated in a factored
      form whose terms cancel exactly when r == g == b (u = v = 128.0 and
      i = q = 0.0 exactly); the factored values stay within 6e-14 of a
      direct evaluation of the matrix rows.
"""

import math

import numpy as np

_RAD2DEG = 180.0 / math.pi


def rgb_to_hue(r, g, b):
    """Hue angle of one RGB pixel.

    Args:
        r, g, b: channel values in [0, 255].

    Returns:
        Hue in degrees [0, 360), or None when the pixel is achromatic
        (r == g == b), in which case hue is undefined.
    """
    mx = max(r, g, b)
    mn = min(r, g, b)
    delta = mx - mn
    if delta == 0:
        return None
    if mx == r:
        h = (g - b) / delta
    elif mx == g:
        h = 2.0 + (b - r) / delta
    else:
        h = 4.0 + (r - g) / delta
    h = h * 60.0
    if h < 0:
        h = h + 360.0
    return h


def rgb_to_yuv(r, g, b):
    """RGB to YUV on the offset 8-bit scale.

    y = 0.257 R + 0.504 G + 0.098 B + 16
    u = -0.148 R - 0.291 G + 0.439 B + 128
    v =  0.439 R - 0.368 G - 0.071 B + 128

    Returns:
        (y, u, v) floats. Over the full RGB cube y lies in [16, 235.045]
        and u, v in [16.055, 239.945]; achromatic input gives u = v = 128.0
        exactly.
    """
    y = 0.257 * r + 0.504 * g + 0.098 * b + 16.0
    u = -0.148 * (r - b) - 0.291 * (g - b) + 128.0
    v = 0.439 * (r - g) - 0.071 * (b - g) + 128.0
    return y, u, v


def rgb_to_yiq(r, g, b):
    """RGB to YIQ (no offsets).

    y = 0.299 R + 0.587 G + 0.114 B
    i = 0.596 R - 0.274 G - 0.322 B
    q = 0.211 R - 0.523 G + 0.312 B

    Returns:
        (y, i, q) floats; achromatic input gives i = q = 0.0 exactly.
    """
    y = 0.299 * r + 0.587 * g + 0.114 * b
    i = 0.596 * (r - b) - 0.274 * (g - b)
    q = 0.211 * (r - g) + 0.312 * (b - g)
    return y, i, q


def uv_to_polar(yuv):
    """Chroma magnitude and angle of a YUV triple.

    Works on the centered chroma (u - 128, v - 128).

    Args:
        yuv: (y, u, v) sequence; y is ignored.

    Returns:
        (ch, theta): ch >= 0 is the chroma magnitude, theta the
        full-quadrant angle in degrees in (-180, 180]. Zero chroma
        reports theta = 0 by convention.
    """
    _, u, v = yuv
    cu = u - 128.0
    cv = v - 128.0
    if cu == 0.0 and cv == 0.0:
        return 0.0, 0.0
    ch = math.hypot(cu, cv)
    theta = math.atan2(cv, cu) * _RAD2DEG
    if theta == -180.0:
        theta = 180.0
    return ch, theta


def _channels(pixels):
    a = np.asarray(pixels)
    if a.ndim < 1 or a.shape[-1] != 3:
        raise ValueError(f"expected (..., 3) pixel array, got shape {a.shape}")
    # contiguous per-channel copies; strided views slow every later op down
    return (
        a[..., 0].astype(np.float64),
        a[..., 1].astype(np.float64),
        a[..., 2].astype(np.float64),
    )


def rgb_to_hue_array(pixels):
    """Hue of every pixel in an (..., 3) array; NaN where achromatic.

    Per-element arithmetic and its order match rgb_to_hue exactly, so the
    two paths agree bitwise. The branch structure is folded into one
    division: h = offset + numerator / delta, with offset 0/2/4 and the
    numerator picked by the same max-priority (r, then g, then b).
    """
    rf, gf, bf = _channels(pixels)
    mx = np.maximum(rf, gf)
    np.maximum(mx, bf, out=mx)
    mn = np.minimum(rf, gf)
    np.minimum(mn, bf, out=mn)
    delta = mx - mn
    defined = delta != 0.0
    is_r = mx == rf
    is_g = mx == gf
    num = np.where(is_r, gf - bf, np.where(is_g, bf - rf, rf - gf))
    offset = np.where(is_r, 0.0, np.where(is_g, 2.0, 4.0))
    np.divide(num, np.where(defined, delta, 1.0), out=num)
    # offset + x is bitwise x for offset 0 (our quotients are never -0.0)
    np.add(offset, num, out=num)
    num *= 60.0
    h = np.where(num < 0, num + 360.0, num)
    h[~defined] = np.nan
    return h


def rgb_to_yuv_array(pixels):
    """Per-pixel YUV of an (..., 3) array; returns (y, u, v) float64 arrays."""
    rf, gf, bf = _channels(pixels)
    y = 0.257 * rf + 0.504 * gf + 0.098 * bf + 16.0
    u = -0.148 * (rf - bf) - 0.291 * (gf - bf) + 128.0
    v = 0.439 * (rf - gf) - 0.071 * (bf - gf) + 128.0
    return y, u, v


def rgb_to_yiq_array(pixels):
    """Per-pixel YIQ of an (..., 3) array; returns (y, i, q) float64 arrays."""
    rf, gf, bf = _channels(pixels)
    y = 0.299 * rf + 0.587 * gf + 0.114 * bf
    i = 0.596 * (rf - bf) - 0.274 * (gf - bf)
    q = 0.211 * (rf - gf) + 0.312 * (bf - gf)
    return y, i, q


def uv_to_polar_array(u, v):
    """Vectorized chroma magnitude/angle from u, v arrays (offset scale).

    Same conventions as uv_to_polar: centered chroma, theta in degrees in
    (-180, 180], theta = 0 where chroma is zero.
    """
    cu = np.asarray(u, dtype=np.float64) - 128.0
    cv = np.asarray(v, dtype=np.float64) - 128.0
    ch = np.hypot(cu, cv)
    theta = np.arctan2(cv, cu) * _RAD2DEG
    theta = np.where(theta == -180.0, 180.0, theta)
    return ch, np.where(ch == 0.0, 0.0, theta)

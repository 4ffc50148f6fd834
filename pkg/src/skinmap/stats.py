"""Color-cluster statistics over ground-truth skin pixels.

Collects, across a manifest's labeled skin pixels only:
    - a hue histogram with 360 one-degree bins (achromatic skin pixels
      have no hue; they are excluded from the histogram but counted so
      data problems stay visible),
    - centered chroma (u - 128, v - 128) pairs,
    - (i, theta) pairs from the YIQ red-orange axis and the chroma angle.

The point lists are meant for external plotting; they are emitted as CSV
by the command-line front end.
"""

from dataclasses import dataclass

import numpy as np

from . import colorspace


@dataclass(frozen=True)
class ClusterStats:
    hue_histogram: np.ndarray  # (360,) int64, bin k counts hues in [k, k+1)
    achromatic_skin: int
    uv_points: np.ndarray  # (n, 2) float64 centered (u, v)
    itheta_points: np.ndarray  # (n, 2) float64 (i, theta)
    skin_pixels: int


def collect_cluster_stats(manifest, split="all"):
    """Gather cluster statistics for every skin pixel in the manifest."""
    entries = manifest.for_split(split)
    if not entries:
        raise ValueError(f"manifest has no entries for split {split!r}")
    histogram = np.zeros(360, dtype=np.int64)
    achromatic = 0
    uv_chunks = []
    itheta_chunks = []
    total = 0
    for entry in entries:
        image, truth = manifest.load_entry(entry)
        pixels = image[truth]
        if pixels.shape[0] == 0:
            continue
        total += pixels.shape[0]
        hue = colorspace.rgb_to_hue_array(pixels)
        defined = ~np.isnan(hue)
        achromatic += int(pixels.shape[0] - np.count_nonzero(defined))
        bins = np.floor(hue[defined]).astype(np.int64)
        histogram += np.bincount(bins, minlength=360)
        y, u, v = colorspace.rgb_to_yuv_array(pixels)
        uv_chunks.append(np.column_stack((u - 128.0, v - 128.0)))
        _, i, _ = colorspace.rgb_to_yiq_array(pixels)
        _, theta = colorspace.uv_to_polar_array(u, v)
        itheta_chunks.append(np.column_stack((i, theta)))
    if total == 0:
        raise ValueError("manifest contains no ground-truth skin pixels")
    return ClusterStats(
        hue_histogram=histogram,
        achromatic_skin=achromatic,
        uv_points=np.concatenate(uv_chunks, axis=0),
        itheta_points=np.concatenate(itheta_chunks, axis=0),
        skin_pixels=total,
    )

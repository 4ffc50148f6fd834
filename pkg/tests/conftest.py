import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

REPO_ROOT = Path(__file__).parent.parent
DATA_DIR = REPO_ROOT / "data"


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def synthetic_manifest():
    from skinmap import load_manifest

    return load_manifest(DATA_DIR / "synthetic" / "manifest.csv")


def random_image(rng, max_side=64):
    h = int(rng.integers(1, max_side + 1))
    w = int(rng.integers(1, max_side + 1))
    return rng.integers(0, 256, size=(h, w, 3), dtype=np.uint8)


def random_thresholds(rng, model):
    """Random valid thresholds, rounded to 3 decimals, biased to useful ranges."""
    from skinmap import HsvThresholds, YuvThresholds, YuvYiqThresholds

    def pair(lo_min, lo_max, width_max, cap):
        lo = round(float(rng.uniform(lo_min, lo_max)), 3)
        hi = round(min(lo + float(rng.uniform(0.0, width_max)), cap), 3)
        return lo, max(lo, hi)

    if model == "hsv":
        lo, hi = pair(0.0, 300.0, 90.0, 359.999)
        return HsvThresholds(lo, hi)
    if model == "yuv":
        y = pair(10.0, 200.0, 120.0, 250.0)
        u = pair(60.0, 180.0, 80.0, 245.0)
        v = pair(60.0, 180.0, 80.0, 245.0)
        return YuvThresholds(*y, *u, *v)
    y = pair(10.0, 200.0, 120.0, 250.0)
    i = pair(-80.0, 80.0, 90.0, 152.0)
    t = pair(-170.0, 90.0, 120.0, 180.0)
    return YuvYiqThresholds(*y, *i, *t)

#!/usr/bin/env python3
"""Generate the bundled synthetic dataset (run once; output is committed).

20 images of 64x64 in three classes, echoing the usual composition of
skin-detection benchmarks at desk scale:
    - 4 all-skin images (label ALL_SKIN)
    - 6 images with no skin at all (label NO_SKIN)
    - 10 mixed images with a rectangular skin region and a mask file

Skin pixels draw hue uniformly from [10, 30] degrees at moderate
saturation; backgrounds mix achromatic grays with blue noise. The split
is 12 train / 8 test. Everything is seeded, so reruns are byte-identical.
"""

import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from skinmap.imgio import write_bmp, write_mask  # noqa: E402

SIZE = 64
SEED = 20260809

# (index, kind, split); kinds: all_skin, no_skin, partial
PLAN = (
    [(i, "all_skin", "train") for i in (0, 1)]
    + [(i, "all_skin", "test") for i in (2, 3)]
    + [(i, "no_skin", "train") for i in (4, 5, 6, 7)]
    + [(i, "no_skin", "test") for i in (8, 9)]
    + [(i, "partial", "train") for i in range(10, 16)]
    + [(i, "partial", "test") for i in range(16, 20)]
)


def hsv_to_rgb(h_deg, s, v):
    """Standard hexcone HSV -> uint8 RGB; h in degrees, s/v in [0, 1]."""
    c = v * s
    hp = h_deg / 60.0
    x = c * (1.0 - np.abs(hp % 2.0 - 1.0))
    z = np.zeros_like(c)
    sector = np.floor(hp).astype(int) % 6
    r1 = np.choose(sector, [c, x, z, z, x, c])
    g1 = np.choose(sector, [x, c, c, x, z, z])
    b1 = np.choose(sector, [z, z, x, c, c, x])
    m = v - c
    rgb = np.stack([r1 + m, g1 + m, b1 + m], axis=-1)
    return np.clip(np.round(rgb * 255.0), 0, 255).astype(np.uint8)


def skin_pixels(rng, n):
    h = rng.uniform(10.0, 30.0, size=n)
    s = rng.uniform(0.35, 0.75, size=n)
    v = rng.uniform(0.45, 0.95, size=n)
    return hsv_to_rgb(h, s, v)


def background_pixels(rng, n):
    out = np.empty((n, 3), dtype=np.uint8)
    blue = rng.random(n) < 0.45
    n_blue = int(np.count_nonzero(blue))
    h = rng.uniform(200.0, 260.0, size=n_blue)
    s = rng.uniform(0.3, 0.8, size=n_blue)
    v = rng.uniform(0.3, 0.9, size=n_blue)
    out[blue] = hsv_to_rgb(h, s, v)
    grays = rng.integers(20, 236, size=n - n_blue, dtype=np.uint8)
    out[~blue] = grays[:, None]
    return out


def make_image(rng, kind):
    if kind == "all_skin":
        img = skin_pixels(rng, SIZE * SIZE).reshape(SIZE, SIZE, 3)
        return img, None
    if kind == "no_skin":
        img = background_pixels(rng, SIZE * SIZE).reshape(SIZE, SIZE, 3)
        return img, None
    img = background_pixels(rng, SIZE * SIZE).reshape(SIZE, SIZE, 3)
    w = int(rng.integers(16, 49))
    h = int(rng.integers(16, 49))
    x0 = int(rng.integers(0, SIZE - w + 1))
    y0 = int(rng.integers(0, SIZE - h + 1))
    mask = np.zeros((SIZE, SIZE), dtype=bool)
    mask[y0 : y0 + h, x0 : x0 + w] = True
    img[mask] = skin_pixels(rng, int(mask.sum()))
    return img, mask


def main():
    root = Path(__file__).parent.parent / "data" / "synthetic"
    (root / "images").mkdir(parents=True, exist_ok=True)
    (root / "masks").mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(SEED)

    lines = ["# bundled synthetic dataset; regenerate with tools/make_synthetic_dataset.py"]
    for index, kind, split in PLAN:
        name = f"img_{index:02d}.bmp"
        img, mask = make_image(rng, kind)
        (root / "images" / name).write_bytes(write_bmp(img))
        if kind == "all_skin":
            truth = "ALL_SKIN"
        elif kind == "no_skin":
            truth = "NO_SKIN"
        else:
            (root / "masks" / name).write_bytes(write_mask(mask))
            truth = f"masks/{name}"
        lines.append(f"images/{name},{truth},{split}")
    (root / "manifest.csv").write_text("\n".join(lines) + "\n")
    print(f"wrote {len(PLAN)} images under {root}")


if __name__ == "__main__":
    main()

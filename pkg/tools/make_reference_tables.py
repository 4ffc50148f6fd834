#!/usr/bin/env python3
"""Freeze the evaluation reference tables for the bundled dataset.

Deliberately standalone: decodes BMPs, classifies pixels, tallies counts
and formats rates with its own naive scalar code (no skinmap imports), so
the committed CSVs are an independent reference for the regression test.
Run once, review, commit the output under data/reference/.
"""

import math
import struct
from pathlib import Path

PRESETS = {
    "hsv": (5.0, 35.0),
    "yuv": (70.0, 175.0, 95.0, 145.0, 95.0, 170.0),
    "yuvyiq": (70.0, 175.0, 20.0, 102.0, -48.0, 150.0),
}


def read_bmp_pixels(path):
    data = path.read_bytes()
    assert data[:2] == b"BM", path
    offset = struct.unpack_from("<I", data, 10)[0]
    width, height = struct.unpack_from("<ii", data, 18)
    bits = struct.unpack_from("<H", data, 28)[0]
    assert bits == 24 and height > 0, path
    stride = (width * 3 + 3) // 4 * 4
    rows = []
    for file_row in range(height):
        base = offset + file_row * stride
        row = []
        for x in range(width):
            b, g, r = data[base + 3 * x : base + 3 * x + 3]
            row.append((r, g, b))
        rows.append(row)
    rows.reverse()  # bottom-up file order to top-left origin
    return rows


def classify(model, t, r, g, b):
    if model == "hsv":
        mx = max(r, g, b)
        mn = min(r, g, b)
        delta = mx - mn
        if delta == 0:
            return False
        if mx == r:
            h = (g - b) / delta
        elif mx == g:
            h = 2.0 + (b - r) / delta
        else:
            h = 4.0 + (r - g) / delta
        h = h * 60.0
        if h < 0:
            h = h + 360.0
        return t[0] <= h <= t[1]
    y = 0.257 * r + 0.504 * g + 0.098 * b + 16.0
    u = -0.148 * (r - b) - 0.291 * (g - b) + 128.0
    v = 0.439 * (r - g) - 0.071 * (b - g) + 128.0
    if model == "yuv":
        return t[0] <= y <= t[1] and t[2] <= u <= t[3] and t[4] <= v <= t[5]
    i = 0.596 * (r - b) - 0.274 * (g - b)
    cu = u - 128.0
    cv = v - 128.0
    if cu == 0.0 and cv == 0.0:
        theta = 0.0
    else:
        theta = math.atan2(cv, cu) * (180.0 / math.pi)
        if theta == -180.0:
            theta = 180.0
    return t[0] <= y <= t[1] and t[2] <= i <= t[3] and t[4] <= theta <= t[5]


def fmt(value):
    return "n/a" if value is None else f"{value:.1f}"


def rate_fields(tp, tn, fp, fn):
    pos = tp + fn
    neg = tn + fp
    tp_pct = 100.0 * tp / pos if pos else None
    fn_pct = 100.0 * fn / pos if pos else None
    tn_pct = 100.0 * tn / neg if neg else None
    fp_pct = 100.0 * fp / neg if neg else None
    return [fmt(tp_pct), fmt(tn_pct), fmt(fp_pct), fmt(fn_pct)]


def main():
    root = Path(__file__).parent.parent / "data"
    ds = root / "synthetic"
    out_dir = root / "reference"
    out_dir.mkdir(parents=True, exist_ok=True)

    entries = []
    for line in (ds / "manifest.csv").read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        image_path, truth, split = (f.strip() for f in line.split(","))
        entries.append((image_path, truth, split))

    for model, thresholds in PRESETS.items():
        lines = ["Image,True Positive,True Negative,False Positive,False Negative"]
        totals = [0, 0, 0, 0]
        for image_path, truth, _split in entries:
            pixels = read_bmp_pixels(ds / image_path)
            if truth == "ALL_SKIN":
                truth_rows = [[True] * len(row) for row in pixels]
            elif truth == "NO_SKIN":
                truth_rows = [[False] * len(row) for row in pixels]
            else:
                truth_rows = [
                    [p != (0, 0, 0) for p in row]
                    for row in read_bmp_pixels(ds / truth)
                ]
            tp = tn = fp = fn = 0
            for prow, trow in zip(pixels, truth_rows):
                for (r, g, b), truth_bit in zip(prow, trow):
                    predicted = classify(model, thresholds, r, g, b)
                    if predicted and truth_bit:
                        tp += 1
                    elif predicted:
                        fp += 1
                    elif truth_bit:
                        fn += 1
                    else:
                        tn += 1
            totals[0] += tp
            totals[1] += tn
            totals[2] += fp
            totals[3] += fn
            lines.append(",".join([image_path] + rate_fields(tp, tn, fp, fn)))
        lines.append(",".join(["AGGREGATE"] + rate_fields(*totals)))
        out = out_dir / f"evaluate_{model}.csv"
        out.write_text("\n".join(lines) + "\n")
        print(f"wrote {out}")
        print("  " + lines[-1])


if __name__ == "__main__":
    main()

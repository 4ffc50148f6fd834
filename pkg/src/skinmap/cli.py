"""Command-line front end.

Subcommands:
    detect    classify images and write one mask BMP per input + summary CSV
    evaluate  score a labeled dataset against ground truth
    tune      grid-search thresholds on a dataset's train split
    stats     emit skin-color cluster CSVs (hue histogram, u/v and i/theta)

Every command is deterministic: identical inputs and flags produce
byte-identical output files at any worker count. Exit codes: 0 success,
2 usage, 3 i/o failure, 4 validation failure.
"""

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import classify, imgio, metrics, stats, tune

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_VALIDATION = 4

RATE_HEADER = "True Positive,True Negative,False Positive,False Negative"


class UsageError(Exception):
    """Bad flag values (reported with exit code 2)."""


def _add_model_flags(sp, thresholds_required=True):
    sp.add_argument("--model", required=True, choices=classify.MODELS)
    if thresholds_required:
        group = sp.add_mutually_exclusive_group(required=True)
        group.add_argument(
            "--thresholds",
            metavar="T1,T2,...",
            help="comma-separated bounds: hsv lo,hi; yuv y_lo,y_hi,u_lo,u_hi,"
            "v_lo,v_hi; yuvyiq y_lo,y_hi,i_lo,i_hi,theta_lo,theta_hi",
        )
        group.add_argument(
            "--preset",
            choices=["paper-optimized"],
            help="use the built-in reference thresholds for the model",
        )


def _add_common_flags(sp):
    sp.add_argument("--workers", type=int, default=None,
                    help="worker threads (default: available cores)")
    sp.add_argument("--out", default=".", help="output directory")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="skinmap",
        description="Pixel-based skin detection, evaluation and threshold tuning.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", help="write skin masks for images")
    p.add_argument("images", nargs="+", help="input BMP files")
    _add_model_flags(p)
    _add_common_flags(p)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("evaluate", help="score a labeled dataset")
    p.add_argument("manifest", help="dataset manifest CSV")
    _add_model_flags(p)
    p.add_argument("--split", choices=["train", "test", "all"], default="all")
    p.add_argument("--mode", choices=["micro", "macro"], default="micro")
    _add_common_flags(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("tune", help="grid-search thresholds on the train split")
    p.add_argument("manifest", help="dataset manifest CSV")
    p.add_argument("--model", required=True, choices=classify.MODELS)
    p.add_argument("--grid", required=True, help="JSON grid file")
    p.add_argument("--objective", default="youden",
                   help="youden or weighted:<w> (default youden)")
    p.add_argument("--top-k", type=int, default=10)
    p.add_argument("--mode", choices=["micro", "macro"], default="micro")
    _add_common_flags(p)
    p.set_defaults(func=cmd_tune)

    p = sub.add_parser("stats", help="emit skin-color cluster CSVs")
    p.add_argument("manifest", help="dataset manifest CSV")
    p.add_argument("--split", choices=["train", "test", "all"], default="all")
    _add_common_flags(p)
    p.set_defaults(func=cmd_stats)

    return parser


def _resolve_workers(args):
    if args.workers is None:
        return os.cpu_count() or 1
    if args.workers < 1:
        raise UsageError(f"--workers must be >= 1, got {args.workers}")
    return args.workers


def _resolve_thresholds(args):
    if args.preset is not None:
        return classify.PAPER_OPTIMIZED[args.model]
    names = tune.PARAM_NAMES[args.model]
    parts = args.thresholds.split(",")
    if len(parts) != len(names):
        raise UsageError(
            f"--thresholds for model {args.model!r} needs {len(names)} values "
            f"({','.join(names)}), got {len(parts)}"
        )
    try:
        values = [float(p) for p in parts]
    except ValueError as e:
        raise UsageError(f"bad --thresholds value: {e}") from e
    try:
        return classify.THRESHOLD_TYPES[args.model](*values)
    except ValueError as e:
        raise UsageError(str(e)) from e


def _out_dir(args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _mask_names(paths):
    """Output file name per input, deduplicating repeated stems."""
    names = []
    used = {}
    for p in paths:
        stem = Path(p).stem
        n = used.get(stem, 0) + 1
        used[stem] = n
        names.append(f"{stem}_mask.bmp" if n == 1 else f"{stem}_{n}_mask.bmp")
    return names


def cmd_detect(args):
    thresholds = _resolve_thresholds(args)
    workers = _resolve_workers(args)
    out = _out_dir(args)
    names = _mask_names(args.images)

    def task(src, mask_name):
        image = imgio.read_bmp(Path(src).read_bytes())
        mask = classify.detect_mask(image, args.model, thresholds)
        (out / mask_name).write_bytes(imgio.write_mask(mask))
        skin = int(np.count_nonzero(mask))
        return skin, skin / mask.size

    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(task, s, n) for s, n in zip(args.images, names)]
        rows = []
        errors = []
        for src, future in zip(args.images, futures):
            try:
                skin, fraction = future.result()
                rows.append(f"{src},{skin},{fraction:.6f}")
                print(f"{src}: {skin} skin pixels ({fraction:.6f})")
            except OSError as e:
                errors.append((src, "i/o", e))
            except ValueError as e:
                errors.append((src, "validation", e))
    (out / "summary.csv").write_text(
        "\n".join(["Image,Skin Pixels,Skin Fraction"] + rows) + "\n"
    )
    for src, _, e in errors:
        print(f"error: {src}: {e}", file=sys.stderr)
    if any(kind == "i/o" for _, kind, _ in errors):
        return EXIT_IO
    if errors:
        return EXIT_VALIDATION
    return EXIT_OK


def _rate_fields(rates):
    return [
        metrics.format_rate(rates.tp_pct),
        metrics.format_rate(rates.tn_pct),
        metrics.format_rate(rates.fp_pct),
        metrics.format_rate(rates.fn_pct),
    ]


def cmd_evaluate(args):
    thresholds = _resolve_thresholds(args)
    workers = _resolve_workers(args)
    out = _out_dir(args)
    manifest = imgio.load_manifest(args.manifest)
    selected = manifest.filtered(args.split)
    if not selected.entries:
        raise ValueError(f"manifest has no entries for split {args.split!r}")

    def task(entry):
        image, truth = selected.load_entry(entry)
        mask = classify.detect_mask(image, args.model, thresholds)
        return metrics.score_mask(mask, truth)

    with ThreadPoolExecutor(max_workers=workers) as pool:
        counts = list(pool.map(task, selected.entries))

    lines = [f"Image,{RATE_HEADER}"]
    for entry, c in zip(selected.entries, counts):
        lines.append(",".join([entry.image_path] + _rate_fields(metrics.to_rates(c))))
    aggregate = metrics.aggregate(counts, args.mode)
    lines.append(",".join(["AGGREGATE"] + _rate_fields(aggregate)))
    (out / "evaluation.csv").write_text("\n".join(lines) + "\n")

    width = max(len(entry.image_path) for entry in selected.entries)
    width = max(width, len("AGGREGATE"))
    head = f"{'Image':<{width}}  {'TP%':>7} {'TN%':>7} {'FP%':>7} {'FN%':>7}"
    print(head)
    for entry, c in zip(selected.entries, counts):
        f_ = _rate_fields(metrics.to_rates(c))
        print(f"{entry.image_path:<{width}}  {f_[0]:>7} {f_[1]:>7} {f_[2]:>7} {f_[3]:>7}")
    f_ = _rate_fields(aggregate)
    print(f"{'AGGREGATE':<{width}}  {f_[0]:>7} {f_[1]:>7} {f_[2]:>7} {f_[3]:>7}")
    return EXIT_OK


def cmd_tune(args):
    try:
        tune.parse_objective(args.objective)
    except ValueError as e:
        raise UsageError(str(e)) from e
    if args.top_k < 1:
        raise UsageError(f"--top-k must be >= 1, got {args.top_k}")
    workers = _resolve_workers(args)
    out = _out_dir(args)
    manifest = imgio.load_manifest(args.manifest)
    grid = tune.parse_grid(Path(args.grid).read_text(), args.model)
    report = tune.grid_search(
        manifest,
        args.model,
        grid,
        objective=args.objective,
        top_k=args.top_k,
        mode=args.mode,
        workers=workers,
    )
    (out / "tune_report.csv").write_text(tune.report_to_csv(report))
    best = report.rows[0]
    fields = _rate_fields(best.rates)
    score = "n/a" if best.objective_score is None else f"{best.objective_score:.4f}"
    print(
        f"best: {tune.range_str(args.model, best.thresholds)}  "
        f"tp={fields[0]} tn={fields[1]} fp={fields[2]} fn={fields[3]} "
        f"objective={score}"
    )
    return EXIT_OK


def cmd_stats(args):
    out = _out_dir(args)
    manifest = imgio.load_manifest(args.manifest)
    result = stats.collect_cluster_stats(manifest, split=args.split)

    hist_lines = ["bin_deg,count"]
    hist_lines += [f"{k},{int(n)}" for k, n in enumerate(result.hue_histogram)]
    (out / "hue_histogram.csv").write_text("\n".join(hist_lines) + "\n")

    uv_lines = ["u,v"]
    uv_lines += [f"{u:.6f},{v:.6f}" for u, v in result.uv_points]
    (out / "uv_points.csv").write_text("\n".join(uv_lines) + "\n")

    it_lines = ["i,theta"]
    it_lines += [f"{i:.6f},{t:.6f}" for i, t in result.itheta_points]
    (out / "itheta_points.csv").write_text("\n".join(it_lines) + "\n")

    print(
        f"{result.skin_pixels} skin pixels "
        f"({result.achromatic_skin} achromatic, excluded from hue histogram)"
    )
    return EXIT_OK


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"i/o error: {e}", file=sys.stderr)
        return EXIT_IO
    except ValueError as e:
        print(f"validation error: {e}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())

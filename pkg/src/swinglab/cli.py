"""Command-line driver for the swing assessment pipeline.

Commands:
    synth          generate a labelled synthetic dataset
    extract        clips + ROIs -> feature CSV
    train          features + labels -> model JSON
    evaluate       model + features -> prediction CSV
    loocv          repeated leave-one-out cross-validation report
    sweep          loocv over a range of hidden-unit counts
    report         dimensionality-reduction arithmetic per ROI duration
    export-viewer  per-swing JSON bundles for the replay viewer

Options may come from a JSON config file (--config); explicit flags win.
Every command is a pure function of (inputs, config, seed): re-running
writes byte-identical artifacts, and structured outputs embed the resolved
configuration for replay. Exit codes: 0 success, 1 data/per-swing failures,
2 usage errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import replace

import numpy as np

from .errors import SwinglabError, TrainingRefusedError
from .evaluation import render_sweep_table, repeat_loocv, sweep_hidden_units
from .features import read_features, reduction_report, write_features
from .ioutil import atomic_open
from .mocap_io import (
    labels_by_criterion,
    load_labels,
    load_roi_file,
    parse_clip,
)
from .pipeline import (
    build_viewer_bundle,
    extract_swing_features,
    swing_kinematics,
    write_viewer_bundle,
)
from .rbfnet import (
    BAD,
    GOOD,
    TrainConfig,
    load_model,
    predict_score,
    save_model,
    train,
)
from .synthgen import default_preset, generate_dataset


class UsageError(Exception):
    """Bad invocation or config: maps to exit code 2."""


class DataError(Exception):
    """Bad input data: maps to exit code 1."""


def _load_config_file(path: str, allowed: set[str]) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as f:
            cfg = json.load(f)
    except FileNotFoundError:
        raise UsageError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"config file {path} is not valid JSON: {exc}") from None
    if not isinstance(cfg, dict):
        raise UsageError(f"config file {path} must hold a JSON object")
    unknown = sorted(set(cfg) - allowed)
    if unknown:
        raise UsageError(f"config file {path} has unknown keys {unknown} (allowed: {sorted(allowed)})")
    return cfg


def _resolve(args: argparse.Namespace, defaults: dict) -> dict:
    """defaults < config file < explicit CLI flags."""
    out = dict(defaults)
    if getattr(args, "config", None):
        out.update(_load_config_file(args.config, set(defaults)))
    for key in defaults:
        value = getattr(args, key, None)
        if value is not None:
            out[key] = value
    return out


def _require(resolved: dict, *keys: str) -> None:
    missing = [k for k in keys if resolved.get(k) is None]
    if missing:
        flags = ", ".join("--" + k.replace("_", "-") for k in missing)
        raise UsageError(f"missing required option(s): {flags} (flag or config key)")


def _parse_int_list(text: str) -> list[int]:
    """'2-6' -> [2..6]; '2,3,5' -> [2,3,5]; '4' -> [4]."""
    text = text.strip()
    try:
        if "-" in text and not text.startswith("-"):
            lo, hi = text.split("-", 1)
            lo_i, hi_i = int(lo), int(hi)
            if hi_i < lo_i:
                raise ValueError
            return list(range(lo_i, hi_i + 1))
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise UsageError(f"cannot parse integer list {text!r} (use '2-6' or '2,3,5')") from None


def _train_config(o: dict, hidden_units: int) -> TrainConfig:
    return TrainConfig(
        hidden_units=hidden_units,
        rng_seed=int(o["seed"]),
        max_epochs=int(o["max_epochs"]),
        convergence_tol=float(o["convergence_tol"]),
        width_heuristic=o["width_heuristic"],
        center_init=o["center_init"],
        output_solver=o["output_solver"],
    )


_MODEL_DEFAULTS = {
    "seed": 0,
    "max_epochs": 100,
    "convergence_tol": 1e-10,
    "width_heuristic": "global",
    "center_init": "sample",
    "output_solver": "least_squares",
}

_INGEST_DEFAULTS = {
    "source_convention": "canonical",
    "sample_rate_hz": 50.0,
    "scale": 1.0,
    "sweet_spot_method": "circumcenter",
}


def _labels_for_criterion(labels_path: str, criterion: str) -> dict[str, str]:
    by_criterion = labels_by_criterion(load_labels(labels_path))
    if criterion not in by_criterion:
        raise DataError(
            f"criterion {criterion!r} not present in {labels_path} "
            f"(has: {sorted(by_criterion)})"
        )
    return by_criterion[criterion]


# ---------------------------------------------------------------- commands


def cmd_synth(args: argparse.Namespace) -> int:
    o = _resolve(args, {"out_dir": None, "seed": 0, "noise": 0.004})
    _require(o, "out_dir")
    preset = default_preset(noise_amplitude=float(o["noise"]))
    manifest = generate_dataset([(a, 1) for a in preset], int(o["seed"]), o["out_dir"])
    print(f"wrote {manifest['swing_count']} synthetic swings to {o['out_dir']}")
    return 0


def _iter_swings(o: dict):
    """Yield (roi, clip_or_none, error_or_none) for each ROI entry."""
    rois = load_roi_file(o["roi_file"])
    if not rois:
        raise UsageError(f"ROI file {o['roi_file']} is empty")
    for roi in sorted(rois, key=lambda r: r.clip_id):
        clip_path = os.path.join(o["clips_dir"], f"{roi.clip_id}.csv")
        try:
            clip = parse_clip(
                clip_path,
                source_convention=o["source_convention"],
                sample_rate_hz=float(o["sample_rate_hz"]),
                scale=float(o["scale"]),
                clip_id=roi.clip_id,
            )
        except (SwinglabError, OSError, ValueError) as exc:
            yield roi, None, f"{roi.clip_id}: {exc}"
            continue
        yield roi, clip, None


def cmd_extract(args: argparse.Namespace) -> int:
    o = _resolve(
        args,
        {"clips_dir": None, "roi_file": None, "out": None, "strict": False, **_INGEST_DEFAULTS},
    )
    _require(o, "clips_dir", "roi_file", "out")
    vectors = []
    failures: list[str] = []
    for roi, clip, err in _iter_swings(o):
        if err is None:
            try:
                vectors.append(extract_swing_features(clip, roi, o["sweet_spot_method"]))
                continue
            except SwinglabError as exc:
                err = f"{roi.clip_id}: {exc}"
        failures.append(err)
        print(f"skipped {err}", file=sys.stderr)
        if o["strict"]:
            print("aborting (--strict): no output written", file=sys.stderr)
            return 1
    write_features(vectors, o["out"])
    print(f"wrote {len(vectors)} feature vectors to {o['out']}")
    if failures:
        print(f"{len(failures)} swing(s) failed", file=sys.stderr)
        return 1
    return 0


def cmd_train(args: argparse.Namespace) -> int:
    o = _resolve(
        args,
        {
            "features": None,
            "labels": None,
            "criterion": None,
            "out": None,
            "hidden_units": 4,
            **_MODEL_DEFAULTS,
        },
    )
    _require(o, "features", "labels", "criterion", "out")
    vectors = read_features(o["features"])
    labels = _labels_for_criterion(o["labels"], o["criterion"])
    missing = sorted({v.swing_id for v in vectors} - set(labels))
    if missing:
        raise DataError(f"labels missing for swings {missing}")
    ordered = sorted(vectors, key=lambda v: v.swing_id)
    X = np.vstack([v.values for v in ordered])
    y = [labels[v.swing_id] for v in ordered]
    config = _train_config(o, int(o["hidden_units"]))
    try:
        model = train(X, y, config)
    except TrainingRefusedError as exc:
        print(f"training refused: {exc}", file=sys.stderr)
        return 1
    save_model(model, o["out"])
    print(
        f"trained {config.hidden_units}-unit model on {len(ordered)} swings "
        f"({o['criterion']}); wrote {o['out']}"
    )
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    o = _resolve(
        args,
        {"model": None, "features": None, "out": None, "labels": None, "criterion": None},
    )
    _require(o, "model", "features", "out")
    model = load_model(o["model"])
    vectors = sorted(read_features(o["features"]), key=lambda v: v.swing_id)
    labels: dict[str, str] | None = None
    if o["labels"] is not None:
        if o["criterion"] is None:
            raise UsageError("--labels needs --criterion")
        labels = _labels_for_criterion(o["labels"], o["criterion"])

    rows = []
    errors = 0
    for v in vectors:
        score = float(predict_score(model, v.values))
        predicted = BAD if score >= 0.5 else GOOD
        actual = labels.get(v.swing_id, "") if labels is not None else ""
        if actual and predicted != actual:
            errors += 1
        rows.append([v.swing_id, repr(score), predicted, actual])
    with atomic_open(o["out"], newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["swing_id", "score", "predicted", "actual"])
        writer.writerows(rows)
    print(f"wrote {len(rows)} predictions to {o['out']}")
    if labels is not None and rows:
        pct = round((1.0 - errors / len(rows)) * 100.0, 1)
        print(f"accuracy vs {o['criterion']!r}: {pct}% ({len(rows) - errors}/{len(rows)})")
    return 0


def _write_json_report(payload: dict, path: str) -> None:
    with atomic_open(path) as f:
        json.dump(payload, f, indent=2, sort_keys=True, allow_nan=False)
        f.write("\n")


# Output destinations don't affect the analysis, so they stay out of the
# config echoed into report artifacts — the same analysis written to two
# different paths must produce byte-identical files.
_NON_ANALYSIS_KEYS = frozenset({"out", "out_dir", "out_json", "out_table"})


def _echo_config(o: dict) -> dict:
    return {k: o[k] for k in sorted(o) if k not in _NON_ANALYSIS_KEYS}


def cmd_loocv(args: argparse.Namespace) -> int:
    o = _resolve(
        args,
        {
            "features": None,
            "labels": None,
            "criterion": None,
            "out_json": None,
            "out_table": None,
            "hidden_units": 4,
            "repeats": 12,
            **_MODEL_DEFAULTS,
        },
    )
    _require(o, "features", "labels", "criterion", "out_json")
    vectors = read_features(o["features"])
    labels = _labels_for_criterion(o["labels"], o["criterion"])
    config = _train_config(o, int(o["hidden_units"]))
    report = repeat_loocv(
        vectors,
        labels,
        config,
        repeats=int(o["repeats"]),
        master_seed=int(o["seed"]),
        criterion=o["criterion"],
    )
    payload = {"config": _echo_config(o), "report": report.to_dict()}
    _write_json_report(payload, o["out_json"])
    table = render_sweep_table([report])
    if o["out_table"]:
        with atomic_open(o["out_table"]) as f:
            f.write(table + "\n")
    print(table)
    acc = "N/A" if report.all_folds_refused else f"{report.mean_accuracy:.1f}"
    print(
        f"mean accuracy over {report.repeats} repeats: {acc} "
        f"(per-repeat: {', '.join(f'{a:.1f}' for a in report.accuracies)})"
    )
    print(f"wrote {o['out_json']}")
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    o = _resolve(
        args,
        {
            "features": None,
            "labels": None,
            "hidden_units": "2-6",
            "repeats": 12,
            "out_json": None,
            "out_table": None,
            **_MODEL_DEFAULTS,
        },
    )
    _require(o, "features", "labels", "out_json")
    vectors = read_features(o["features"])
    by_criterion = labels_by_criterion(load_labels(o["labels"]))
    h_values = _parse_int_list(str(o["hidden_units"]))
    base = _train_config(o, h_values[0])
    reports = sweep_hidden_units(
        vectors,
        by_criterion,
        h_values,
        repeats=int(o["repeats"]),
        master_seed=int(o["seed"]),
        base_config=base,
    )
    payload = {
        "config": _echo_config(o),
        "reports": [r.to_dict() for r in reports],
    }
    _write_json_report(payload, o["out_json"])
    table = render_sweep_table(reports)
    if o["out_table"]:
        with atomic_open(o["out_table"]) as f:
            f.write(table + "\n")
    print(table)
    print(f"wrote {o['out_json']}")
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    o = _resolve(
        args,
        {"durations": "13,10,7", "marker_count": 22, "out_json": None, "seed": None},
    )
    rows = [reduction_report(d, int(o["marker_count"])) for d in _parse_int_list(str(o["durations"]))]
    header = f"{'ROI frames':>12}{'input dim':>12}{'output dim':>12}{'reduction %':>13}"
    lines = [header, "-" * len(header)]
    for r in rows:
        lines.append(
            f"{r['roi_duration']:>12d}{r['input_dim']:>12d}{r['output_dim']:>12d}"
            f"{r['reduction_percent']:>13.1f}"
        )
    print("\n".join(lines))
    if o["out_json"]:
        _write_json_report({"config": _echo_config(o), "rows": rows}, o["out_json"])
        print(f"wrote {o['out_json']}")
    return 0


def cmd_export_viewer(args: argparse.Namespace) -> int:
    o = _resolve(
        args,
        {
            "clips_dir": None,
            "roi_file": None,
            "labels": None,
            "out_dir": None,
            "clip_id": None,
            "strict": False,
            **_INGEST_DEFAULTS,
        },
    )
    _require(o, "clips_dir", "roi_file", "out_dir")
    label_records = load_labels(o["labels"]) if o["labels"] else []
    os.makedirs(o["out_dir"], exist_ok=True)
    written = 0
    failures: list[str] = []
    for roi, clip, err in _iter_swings(o):
        if o["clip_id"] is not None and roi.clip_id != o["clip_id"]:
            continue
        if err is not None:
            failures.append(err)
            print(f"skipped {err}", file=sys.stderr)
            if o["strict"]:
                print("aborting (--strict)", file=sys.stderr)
                return 1
            continue
        try:
            kin = swing_kinematics(clip, roi, o["sweet_spot_method"])
        except SwinglabError as exc:
            kin = None  # bundle still useful for replay without the overlay
            print(f"{roi.clip_id}: no kinematics overlay ({exc})", file=sys.stderr)
        bundle = build_viewer_bundle(clip, roi=roi, labels=label_records, kinematics=kin)
        write_viewer_bundle(bundle, os.path.join(o["out_dir"], f"{roi.clip_id}.viewer.json"))
        written += 1
    print(f"wrote {written} viewer bundle(s) to {o['out_dir']}")
    if failures:
        print(f"{len(failures)} swing(s) failed", file=sys.stderr)
        return 1
    return 0


# ---------------------------------------------------------------- parser


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file; explicit flags override it")


def _add_model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, help="master RNG seed (default 0)")
    p.add_argument("--max-epochs", type=int, dest="max_epochs")
    p.add_argument("--convergence-tol", type=float, dest="convergence_tol")
    p.add_argument(
        "--width-heuristic", choices=["nearest-center", "global"], dest="width_heuristic"
    )
    p.add_argument("--center-init", choices=["sample", "spread"], dest="center_init")
    p.add_argument(
        "--output-solver", choices=["least_squares", "gradient"], dest="output_solver"
    )


def _add_ingest_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--source-convention",
        choices=["canonical", "rh-xyz-zup", "lh-xzy"],
        dest="source_convention",
    )
    p.add_argument("--sample-rate", type=float, dest="sample_rate_hz", help="Hz (default 50)")
    p.add_argument("--scale", type=float, help="coordinate scale factor at ingestion")
    p.add_argument(
        "--sweet-spot-method", choices=["circumcenter", "centroid"], dest="sweet_spot_method"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="swinglab", description="Racquet-swing assessment pipeline"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate the labelled synthetic dataset")
    _add_common(p)
    p.add_argument("--out-dir", dest="out_dir")
    p.add_argument("--seed", type=int)
    p.add_argument("--noise", type=float, help="marker noise amplitude in metres")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("extract", help="clips + ROIs -> feature CSV")
    _add_common(p)
    p.add_argument("--clips-dir", dest="clips_dir")
    p.add_argument("--roi-file", dest="roi_file")
    p.add_argument("--out")
    p.add_argument("--strict", action="store_true", default=None,
                   help="abort on the first per-swing failure instead of skipping")
    _add_ingest_flags(p)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("train", help="features + labels -> model JSON")
    _add_common(p)
    p.add_argument("--features")
    p.add_argument("--labels")
    p.add_argument("--criterion")
    p.add_argument("--out")
    p.add_argument("--hidden-units", type=int, dest="hidden_units")
    _add_model_flags(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="model + features -> prediction CSV")
    _add_common(p)
    p.add_argument("--model")
    p.add_argument("--features")
    p.add_argument("--out")
    p.add_argument("--labels", help="optional labels CSV for accuracy reporting")
    p.add_argument("--criterion")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("loocv", help="repeated leave-one-out cross-validation")
    _add_common(p)
    p.add_argument("--features")
    p.add_argument("--labels")
    p.add_argument("--criterion")
    p.add_argument("--hidden-units", type=int, dest="hidden_units")
    p.add_argument("--repeats", type=int)
    p.add_argument("--out-json", dest="out_json")
    p.add_argument("--out-table", dest="out_table")
    _add_model_flags(p)
    p.set_defaults(func=cmd_loocv)

    p = sub.add_parser("sweep", help="loocv over a hidden-unit range, all criteria")
    _add_common(p)
    p.add_argument("--features")
    p.add_argument("--labels")
    p.add_argument("--hidden-units", dest="hidden_units", help="range '2-6' or list '2,3,5'")
    p.add_argument("--repeats", type=int)
    p.add_argument("--out-json", dest="out_json")
    p.add_argument("--out-table", dest="out_table")
    _add_model_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("report", help="dimensionality-reduction table")
    _add_common(p)
    p.add_argument("--durations", help="ROI durations, e.g. '13,10,7'")
    p.add_argument("--marker-count", type=int, dest="marker_count")
    p.add_argument("--out-json", dest="out_json")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("export-viewer", help="per-swing viewer bundle JSONs")
    _add_common(p)
    p.add_argument("--clips-dir", dest="clips_dir")
    p.add_argument("--roi-file", dest="roi_file")
    p.add_argument("--labels")
    p.add_argument("--out-dir", dest="out_dir")
    p.add_argument("--clip-id", dest="clip_id", help="export only this clip")
    p.add_argument("--strict", action="store_true", default=None)
    _add_ingest_flags(p)
    p.set_defaults(func=cmd_export_viewer)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (DataError, SwinglabError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

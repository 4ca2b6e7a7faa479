"""Command-line entry point: index, preprocess, bench, eval, compare."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .annotations import (
    format_ground_truth,
    load_label_map,
    parse_detections,
    parse_ground_truth,
    write_detections,
)
from .bench import (
    BenchPlan,
    aggregate,
    backend_from_spec,
    order_by_pixels,
    run_benchmark,
    runnable_fraction,
    write_samples,
)
from .config import build_manifest, load_config
from .dataset import index_dataset
from .errors import EvaluationError
from .evaluate import MatchConfig, accuracy_count, evaluate, format_report, summary_dict
from .figures import build_time_scatter, render_time_scatter
from .pipeline import (
    ScaleSpec,
    TileSpec,
    clip_annotations_to_tile,
    drop_alpha,
    load_image,
    save_image,
    scale_image,
    split_into_squares,
    transform_annotations_scale,
)


def _load_labels(path: str | None):
    if path is None:
        return None
    return load_label_map(Path(path).read_text(encoding="utf-8"))


def cmd_index(args) -> int:
    labels = _load_labels(args.labels)
    ds = index_dataset(args.root, labels)
    index = ds.index
    n = len(index.images)
    print(f"images: {n}")
    print(f"instances: {index.instance_count}")
    annotated = [i for i in index.annotations if index.annotations[i]]
    if annotated:
        mean_boxes = index.instance_count / len(index.annotations) if index.annotations else 0.0
        print(f"mean boxes/image: {mean_boxes:.2f}")
    ordered = order_by_pixels(index)
    if ordered:
        smallest = index.record(ordered[0])
        largest = index.record(ordered[-1])
        print(f"smallest: {smallest.id} ({smallest.width}x{smallest.height} = {smallest.total_pixels} px)")
        print(f"largest: {largest.id} ({largest.width}x{largest.height} = {largest.total_pixels} px)")
    if ds.missing_labels:
        print(f"missing labels ({len(ds.missing_labels)}): {', '.join(ds.missing_labels)}")
    return 0


def _manifest_line(derived_id, parent_id, op, params, width, height, size) -> str:
    return f"{derived_id}\t{parent_id}\t{op}\t{params}\t{width}\t{height}\t{size}\n"


def _parse_list(arg: str | None, fallback, conv):
    if arg is None:
        return list(fallback)
    return [conv(v) for v in arg.split(",") if v.strip()]


def cmd_preprocess(args) -> int:
    config = load_config(args.config)
    percents = _parse_list(args.percents, config["scale_percents"], float)
    efforts = _parse_list(args.efforts, config["compress_efforts"], int)
    algorithm = args.algorithm or str(config["scale_algorithm"])
    tile_side = args.tile_side if args.tile_side is not None else int(config["tile_side"])
    overlap = args.overlap if args.overlap is not None else float(config["tile_overlap"])
    keep_fraction = float(config["tile_keep_fraction"])

    ds = index_dataset(args.root)
    out = Path(args.out)
    images_dir = out / "images"
    labels_dir = out / "labelTxt"
    try:
        images_dir.mkdir(parents=True, exist_ok=True)
        labels_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"error: cannot create output directory: {exc}", file=sys.stderr)
        return 2

    manifest_rows: list[str] = []
    derived = 0

    def _emit(derived_id, parent_id, op, params, img, boxes):
        nonlocal derived
        size = save_image(images_dir / f"{derived_id}.png", img)
        (labels_dir / f"{derived_id}.txt").write_text(format_ground_truth(boxes), encoding="utf-8")
        manifest_rows.append(_manifest_line(derived_id, parent_id, op, params, img.width, img.height, size))
        derived += 1

    for rec in ds.index.images:
        img = drop_alpha(load_image(ds.image_paths[rec.id]))
        boxes = list(ds.index.boxes(rec.id))
        for percent in percents:
            spec = ScaleSpec(percent=percent, algorithm=algorithm)
            scaled = scale_image(img, spec)
            scaled_boxes = transform_annotations_scale(boxes, percent)
            _emit(
                f"{rec.id}__scale{percent:g}_{algorithm}",
                rec.id,
                "scale",
                f"percent={percent:g},algorithm={algorithm}",
                scaled,
                scaled_boxes,
            )
        for effort in efforts:
            derived_id = f"{rec.id}__recomp{effort}"
            size = save_image(images_dir / f"{derived_id}.png", img, effort=effort)
            (labels_dir / f"{derived_id}.txt").write_text(format_ground_truth(boxes), encoding="utf-8")
            manifest_rows.append(
                _manifest_line(derived_id, rec.id, "recompress", f"effort={effort}", img.width, img.height, size)
            )
            derived += 1
        if tile_side > 0:
            tiles = split_into_squares(img, TileSpec(tile_side=tile_side, overlap_fraction=overlap))
            for patch, ox, oy in tiles:
                side = min(tile_side, patch.width)
                clipped = clip_annotations_to_tile(boxes, ox, oy, side, keep_fraction)
                _emit(
                    f"{rec.id}__tile{ox}_{oy}",
                    rec.id,
                    "tile",
                    f"offset_x={ox},offset_y={oy},side={side},overlap={overlap:g}",
                    patch,
                    clipped,
                )

    (out / "manifest.tsv").write_text(
        "# derived_id\tparent_id\toperation\tparams\twidth\theight\tfile_size\n" + "".join(manifest_rows),
        encoding="utf-8",
    )
    print(f"derived images: {derived}")
    print(f"manifest: {out / 'manifest.tsv'}")
    return 0


def cmd_bench(args) -> int:
    config = load_config(args.config)
    ds = index_dataset(args.root)
    backend = backend_from_spec(args.backend)
    if args.repetitions is not None:
        repetitions = args.repetitions
    else:
        repetitions = int(config["repetitions_baseline"] if args.baseline else config["repetitions_modified"])
    ordered = order_by_pixels(ds.index)
    warmup = args.warmup or ordered[0]
    plan = BenchPlan(
        dataset=ds.index,
        backend=backend,
        repetitions=repetitions,
        warmup_image=warmup,
        order="by_total_pixels_asc" if args.order == "pixels" else "as_listed",
        image_paths=ds.image_paths,
    )
    samples = run_benchmark(plan)
    stats = aggregate(samples)
    fraction = runnable_fraction(samples)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_samples(samples, out / "samples.tsv")

    det_dir = out / "detections"
    det_dir.mkdir(exist_ok=True)
    first_ok: dict[str, tuple] = {}
    for s in samples:
        if not s.discarded and s.outcome == "ok" and s.image_id not in first_ok:
            first_ok[s.image_id] = s.detections
    for image_id, dets in first_ok.items():
        (det_dir / f"{image_id}.txt").write_text(write_detections(list(dets)), encoding="utf-8")

    accuracy_cfg = MatchConfig(
        iou_threshold=float(config["iou_threshold"]),
        min_confidence=float(config["accuracy_min_confidence"]),
        require_class_match=bool(config["require_class_match"]),
        iou_floor_for_enumeration=float(config["iou_floor"]),
    )
    mode = "persistent" if getattr(backend, "persistent", False) else "per-invocation"
    per_image = {}
    for image_id in ordered:
        st = stats.get(image_id)
        rec = ds.index.record(image_id)
        boxes = ds.index.boxes(image_id)
        accuracy = None
        if boxes and image_id in first_ok:
            accuracy = accuracy_count(list(boxes), list(first_ok[image_id]), accuracy_cfg)[0]
        per_image[image_id] = {
            "total_pixels": rec.total_pixels,
            "mean_wall_time_s": st.mean_wall_time_s if st else None,
            "mean_peak_rss_bytes": st.mean_peak_rss_bytes if st else None,
            "mean_final_swap_bytes": st.mean_final_swap_bytes if st else None,
            "oom": st.oom if st else False,
            "error": st.error if st else False,
            "runs_ok": st.runs_ok if st else 0,
            "accuracy": accuracy,
        }
    report = {
        "manifest": build_manifest(config, ds.index, backend_id=backend.id),
        "backend_mode": mode,
        "repetitions": repetitions,
        "warmup_image": warmup,
        "runnable_fraction": fraction,
        "per_image": per_image,
    }
    (out / "report.json").write_text(json.dumps(report, indent=2), encoding="utf-8")

    print(f"{'image':<16}{'pixels':>14}{'mean time [s]':>16}{'peak RSS [B]':>16}")
    for image_id in ordered:
        entry = per_image[image_id]
        time_cell = "X" if entry["oom"] else (
            f"{entry['mean_wall_time_s']:.4f}" if entry["mean_wall_time_s"] is not None else "-"
        )
        rss = entry["mean_peak_rss_bytes"]
        rss_cell = f"{rss:.0f}" if rss is not None else "-"
        print(f"{image_id:<16}{entry['total_pixels']:>14}{time_cell:>16}{rss_cell:>16}")
    print(f"runnable fraction: {fraction:.4f}")
    print(f"backend mode: {mode}")
    return 0


def _read_dir_texts(directory: Path) -> dict[str, str]:
    return {p.stem: p.read_text(encoding="utf-8") for p in sorted(directory.glob("*.txt"))}


def cmd_eval(args) -> int:
    config = load_config(args.config)
    labels = _load_labels(args.labels)
    gt_dir = Path(args.gt)
    if (gt_dir / "labelTxt").is_dir():
        gt_dir = gt_dir / "labelTxt"
    det_dir = Path(args.det)

    gt_texts = _read_dir_texts(gt_dir)
    if not gt_texts:
        print(f"error: no ground-truth files under {gt_dir}", file=sys.stderr)
        return 2
    gts = {}
    for image_id, text in gt_texts.items():
        boxes = parse_ground_truth(text, labels)
        if bool(config["exclude_difficult"]):
            boxes = [b for b in boxes if b.difficulty == 0]
        gts[image_id] = boxes
    dets = {}
    for image_id in sorted(gts):
        det_path = det_dir / f"{image_id}.txt"
        if not det_path.is_file():
            print(f"warning: no detections for {image_id}, treating as zero detections", file=sys.stderr)
            dets[image_id] = []
            continue
        dets[image_id] = parse_detections(det_path.read_text(encoding="utf-8"), labels)

    cfg = MatchConfig(
        iou_threshold=float(config["iou_threshold"]),
        min_confidence=float(config["pr_min_confidence"]),
        require_class_match=bool(config["require_class_match"]),
        iou_floor_for_enumeration=float(config["iou_floor"]),
    )
    accuracy_cfg = MatchConfig(
        iou_threshold=float(config["iou_threshold"]),
        min_confidence=float(config["accuracy_min_confidence"]),
        require_class_match=bool(config["require_class_match"]),
        iou_floor_for_enumeration=float(config["iou_floor"]),
    )
    try:
        report = evaluate(gts, dets, cfg, accuracy_cfg)
    except EvaluationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    manifest = build_manifest(config)
    text = format_report(report, manifest={"toolkit_version": manifest["toolkit_version"]})
    summary = summary_dict(report, manifest)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.txt").write_text(text, encoding="utf-8")
    (out / "summary.json").write_text(json.dumps(summary, indent=2), encoding="utf-8")

    accurate, total = report.accuracy
    print(text, end="")
    print(f"-> mAP {report.map_value:.4f} | coco AP {report.coco.ap:.4f} | accurate {accurate}/{total}")
    return 0


def cmd_compare(args) -> int:
    report_a = json.loads(Path(args.report_a).read_text(encoding="utf-8"))
    report_b = json.loads(Path(args.report_b).read_text(encoding="utf-8"))
    per_a = report_a.get("per_image", {})
    per_b = report_b.get("per_image", {})
    shared = sorted(set(per_a) & set(per_b))
    if not shared:
        print("error: reports share no image ids", file=sys.stderr)
        return 2

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    def _delta(a, b):
        if a is None or b is None:
            return None
        return b - a

    rows = ["image_id\tdelta_mean_time_s\tdelta_peak_rss_bytes\tdelta_accuracy"]
    print(f"{'image':<16}{'Δ time [s]':>14}{'Δ RSS [B]':>16}{'Δ accuracy':>12}")
    for image_id in shared:
        a, b = per_a[image_id], per_b[image_id]
        dt = _delta(a.get("mean_wall_time_s"), b.get("mean_wall_time_s"))
        dr = _delta(a.get("mean_peak_rss_bytes"), b.get("mean_peak_rss_bytes"))
        da = _delta(a.get("accuracy"), b.get("accuracy"))
        fmt = lambda v, spec: ("-" if v is None else format(v, spec))
        rows.append(f"{image_id}\t{fmt(dt, '.6f')}\t{fmt(dr, '.0f')}\t{fmt(da, 'd') if isinstance(da, int) else fmt(da, '.4f') if da is not None else '-'}")
        print(f"{image_id:<16}{fmt(dt, '.4f'):>14}{fmt(dr, '.0f'):>16}{fmt(da, '.4f') if da is not None else '-':>12}")
    (out / "deltas.tsv").write_text("\n".join(rows) + "\n", encoding="utf-8")

    fig_data = build_time_scatter({"A": per_a, "B": per_b})
    render_time_scatter(fig_data, out / "compare.svg")
    print(f"figure: {out / 'compare.svg'}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="detbench", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("index", help="index a dataset root and print stats")
    p.add_argument("root")
    p.add_argument("--labels", help="label map file for category validation")
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("preprocess", help="derive scaled/recompressed/tiled images")
    p.add_argument("root")
    p.add_argument("--out", required=True)
    p.add_argument("--percents", help="comma-separated scale percents (default from config)")
    p.add_argument("--efforts", help="comma-separated encoder effort levels")
    p.add_argument("--algorithm", choices=["bilinear", "nearest-neighbor"])
    p.add_argument("--tile-side", type=int)
    p.add_argument("--overlap", type=float)
    p.add_argument("--config")
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("bench", help="run the measurement protocol")
    p.add_argument("root")
    p.add_argument("--backend", required=True, help="synthetic[:opts] | replay:<dir> | process:<cmd>")
    p.add_argument("--out", required=True)
    p.add_argument("--repetitions", type=int)
    p.add_argument("--baseline", action="store_true", help="use the baseline repetition count")
    p.add_argument("--order", choices=["pixels", "listed"], default="pixels")
    p.add_argument("--warmup", help="warm-up image id (default: smallest)")
    p.add_argument("--config")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("eval", help="evaluate detections against ground truth")
    p.add_argument("--gt", required=True)
    p.add_argument("--det", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--labels")
    p.add_argument("--config")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("compare", help="delta table and figures for two bench reports")
    p.add_argument("report_a")
    p.add_argument("report_b")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_compare)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

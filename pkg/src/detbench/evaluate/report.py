"""Evaluation report: per-class/threshold records plus a JSON summary.

The structured text carries one record per class and per IoU threshold and
one line per matched pair; the JSON summary is the machine-readable
counterpart. Both embed the run manifest that produced them.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import EvaluationError
from .matching import MatchConfig
from .metrics import (
    COCO_LADDER,
    CocoApSuite,
    MatchPool,
    build_match_pool,
    class_aps,
    interpolated_ap,
    mean_ap,
    pr_curve,
)


@dataclass(frozen=True)
class EvalReport:
    pool: MatchPool
    accuracy_pool: MatchPool
    aps: dict[str, float | None]
    map_value: float
    coco: CocoApSuite
    accuracy: tuple[int, int]


def evaluate(gts, dets, cfg: MatchConfig | None = None, accuracy_cfg: MatchConfig | None = None) -> EvalReport:
    """Run the full metric suite over per-image ground truths and detections."""
    cfg = cfg or MatchConfig(min_confidence=0.01)
    accuracy_cfg = accuracy_cfg or MatchConfig(
        iou_threshold=cfg.iou_threshold,
        min_confidence=0.5,
        require_class_match=cfg.require_class_match,
        iou_floor_for_enumeration=cfg.iou_floor_for_enumeration,
    )
    pool = build_match_pool(gts, dets, cfg)
    aps = class_aps(pool)
    map_value = mean_ap(aps)

    per_threshold = {t: mean_ap(class_aps(pool, iou_threshold=t)) for t in COCO_LADDER}
    coco = CocoApSuite(
        ap=sum(per_threshold.values()) / len(per_threshold),
        ap50=per_threshold[0.50],
        ap75=per_threshold[0.75],
        per_threshold=per_threshold,
    )

    acc_pool = build_match_pool(gts, dets, accuracy_cfg)
    accurate = sum(res.tp for res in acc_pool.per_image.values())
    total = sum(acc_pool.gt_counts.values())
    return EvalReport(
        pool=pool,
        accuracy_pool=acc_pool,
        aps=aps,
        map_value=map_value,
        coco=coco,
        accuracy=(accurate, total),
    )


def format_report(report: EvalReport, manifest: dict | None = None) -> str:
    """Structured text: class/threshold records, pair listings, summary lines."""
    lines: list[str] = []
    if manifest:
        for key in sorted(manifest):
            lines.append(f"# manifest {key}={manifest[key]}")
    cfg = report.pool.config
    for category in sorted(report.aps):
        for t in dict.fromkeys((cfg.iou_threshold, *COCO_LADDER)):
            ap = interpolated_ap(pr_curve(report.pool, category, iou_threshold=t))
            ap_text = "undefined" if ap is None else f"{ap:.6f}"
            lines.append(f"class={category}\tiou={t:.2f}\tap={ap_text}")
    for image_id in sorted(report.pool.per_image):
        result = report.pool.per_image[image_id]
        categories = report.pool.gt_categories.get(image_id, ())
        for p in result.pairs:
            category = categories[p.gt_index] if p.gt_index < len(categories) else "?"
            lines.append(
                f"image={image_id}\tgt={p.gt_index}\tdet={p.det_index}\tclass={category}"
                f"\tiou={p.iou:.4f}\tconfidence={p.confidence:.4f}"
            )
    accurate, total = report.accuracy
    lines.append(f"map={report.map_value:.6f}")
    lines.append(f"coco_ap={report.coco.ap:.6f}\tap50={report.coco.ap50:.6f}\tap75={report.coco.ap75:.6f}")
    lines.append(f"accurate={accurate}\ttotal={total}")
    return "\n".join(lines) + "\n"


def summary_dict(report: EvalReport, manifest: dict | None = None) -> dict:
    """Machine-readable summary, JSON-serializable."""
    accurate, total = report.accuracy
    per_image = {}
    for image_id, result in report.pool.per_image.items():
        categories = report.pool.gt_categories.get(image_id, ())
        per_image[image_id] = {
            "tp": result.tp,
            "fp": result.fp,
            "fn": result.fn,
            "pairs": [
                {
                    "gt": p.gt_index,
                    "det": p.det_index,
                    "category": categories[p.gt_index] if p.gt_index < len(categories) else "?",
                    "iou": p.iou,
                    "confidence": p.confidence,
                }
                for p in result.pairs
            ],
        }
    acc_by_image = {
        image_id: {"accurate": res.tp, "total": sum(res.fn_by_class.values()) + res.tp}
        for image_id, res in report.accuracy_pool.per_image.items()
    }
    return {
        "manifest": manifest or {},
        "map": report.map_value,
        "class_ap": {c: v for c, v in report.aps.items()},
        "coco": {
            "ap": report.coco.ap,
            "ap50": report.coco.ap50,
            "ap75": report.coco.ap75,
            "per_threshold": {f"{t:.2f}": v for t, v in report.coco.per_threshold.items()},
        },
        "accuracy": {"accurate": accurate, "total": total, "per_image": acc_by_image},
        "per_image": per_image,
    }


__all__ = ["EvalReport", "EvaluationError", "evaluate", "format_report", "summary_dict"]

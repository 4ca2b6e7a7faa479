"""Accuracy metrics: precision/recall, 11-point AP, mAP, COCO ladder, accuracy count.

Everything here is pure computation over match results; per-image work may
run in parallel upstream and is reduced deterministically in fixed class
order.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from ..core import Detection, GroundTruthBox
from ..errors import EvaluationError
from .matching import MatchConfig, MatchResult, match_detections

log = logging.getLogger(__name__)

COCO_LADDER = tuple(round(0.50 + 0.05 * i, 2) for i in range(10))  # 0.50 .. 0.95
ELEVEN_POINT_GRID = tuple(i / 10 for i in range(11))

GtsByImage = dict[str, list[GroundTruthBox]]
DetsByImage = dict[str, list[Detection]]


def precision(tp: int, fp: int) -> float:
    """TP / (TP + FP); 0 when the denominator is 0."""
    return tp / (tp + fp) if tp + fp > 0 else 0.0


def recall(tp: int, fn: int) -> float:
    """TP / (TP + FN); 0 when the denominator is 0."""
    return tp / (tp + fn) if tp + fn > 0 else 0.0


def _normalize(gts, dets) -> tuple[GtsByImage, DetsByImage]:
    if not isinstance(gts, dict):
        gts = {"": list(gts)}
    if not isinstance(dets, dict):
        dets = {"": list(dets)}
    return gts, dets


@dataclass(frozen=True)
class DetRecord:
    """One retained detection with the IoU of its winning pair, if any."""

    image_id: str
    det_index: int
    category: str
    confidence: float
    pair_iou: float | None
    pair_class_ok: bool

    def is_tp(self, iou_threshold: float) -> bool:
        return self.pair_iou is not None and self.pair_iou >= iou_threshold and self.pair_class_ok


@dataclass(frozen=True)
class PRCurve:
    """Cumulative (precision, recall) points along the confidence ranking."""

    category: str
    num_gt: int
    points: tuple[tuple[float, float], ...]


@dataclass(frozen=True)
class MatchPool:
    """Matching output pooled across images, reusable at any IoU threshold.

    Candidate selection only depends on the enumeration floor, so one
    matching pass serves every threshold in a ladder.
    """

    per_image: dict[str, MatchResult]
    records: tuple[DetRecord, ...]
    gt_counts: dict[str, int]
    config: MatchConfig
    gt_categories: dict[str, tuple[str, ...]]


def build_match_pool(gts, dets, cfg: MatchConfig) -> MatchPool:
    gts_by_image, dets_by_image = _normalize(gts, dets)
    per_image: dict[str, MatchResult] = {}
    records: list[DetRecord] = []
    gt_counts: dict[str, int] = {}
    gt_categories: dict[str, tuple[str, ...]] = {}

    for image_id in sorted(set(gts_by_image) | set(dets_by_image)):
        img_gts = list(gts_by_image.get(image_id, []))
        img_dets = list(dets_by_image.get(image_id, []))
        result = match_detections(img_gts, img_dets, cfg)
        per_image[image_id] = result
        gt_categories[image_id] = tuple(gt.category for gt in img_gts)
        for gt in img_gts:
            gt_counts[gt.category] = gt_counts.get(gt.category, 0) + 1
        pair_by_det = {p.det_index: p for p in result.pairs}
        for d in result.retained_det:
            det = img_dets[d]
            pair = pair_by_det.get(d)
            records.append(
                DetRecord(
                    image_id=image_id,
                    det_index=d,
                    category=det.category,
                    confidence=det.confidence,
                    pair_iou=pair.iou if pair is not None else None,
                    pair_class_ok=(img_gts[pair.gt_index].category == det.category) if pair is not None else False,
                )
            )
    return MatchPool(
        per_image=per_image,
        records=tuple(records),
        gt_counts=gt_counts,
        config=cfg,
        gt_categories=gt_categories,
    )


def pr_curve(pool: MatchPool, category: str, iou_threshold: float | None = None) -> PRCurve:
    """Build the confidence-ranked cumulative PR curve for one class."""
    threshold = pool.config.iou_threshold if iou_threshold is None else iou_threshold
    recs = [r for r in pool.records if r.category == category]
    recs.sort(key=lambda r: (-r.confidence, r.image_id, r.det_index))
    num_gt = pool.gt_counts.get(category, 0)
    tp = fp = 0
    points = []
    for r in recs:
        if r.is_tp(threshold):
            tp += 1
        else:
            fp += 1
        points.append((precision(tp, fp), tp / num_gt if num_gt > 0 else 0.0))
    return PRCurve(category=category, num_gt=num_gt, points=tuple(points))


def interpolated_ap(curve: PRCurve) -> float | None:
    """11-point interpolated average precision.

    p_interp(r) is the maximum precision among curve points whose recall is
    at least r, or 0 when no such point exists; AP averages p_interp over
    r in {0.0, 0.1, ..., 1.0}. A class with zero ground truths has no
    defined AP and returns None.
    """
    if curve.num_gt == 0:
        return None
    total = 0.0
    for r in ELEVEN_POINT_GRID:
        best = 0.0
        for p, rec in curve.points:
            if rec >= r and p > best:
                best = p
        total += best
    return total / 11.0


def class_aps(pool: MatchPool, iou_threshold: float | None = None) -> dict[str, float | None]:
    """AP per class over every class present in ground truth or detections."""
    categories = sorted(set(pool.gt_counts) | {r.category for r in pool.records})
    return {c: interpolated_ap(pr_curve(pool, c, iou_threshold)) for c in categories}


def mean_ap(aps: dict[str, float | None]) -> float:
    """Unweighted mean over classes with a defined AP.

    Mirrors the convention of reporting a single number with no distinction
    between AP and mAP once categories are averaged.
    """
    defined = {c: v for c, v in aps.items() if v is not None}
    skipped = sorted(set(aps) - set(defined))
    if skipped:
        log.warning("classes without ground truths excluded from mAP: %s", ", ".join(skipped))
    if not defined:
        raise EvaluationError("no class has a defined AP (no ground truths at all)")
    return sum(defined.values()) / len(defined)


@dataclass(frozen=True)
class CocoApSuite:
    """AP over the 0.50:0.05:0.95 ladder plus the two fixed thresholds."""

    ap: float
    ap50: float
    ap75: float
    per_threshold: dict[float, float]


def coco_ap_suite(gts, dets, cfg: MatchConfig | None = None) -> CocoApSuite:
    cfg = cfg or MatchConfig(min_confidence=0.01)
    pool = build_match_pool(gts, dets, cfg)
    per_threshold = {}
    for t in COCO_LADDER:
        per_threshold[t] = mean_ap(class_aps(pool, iou_threshold=t))
    ladder_mean = sum(per_threshold.values()) / len(per_threshold)
    return CocoApSuite(
        ap=ladder_mean,
        ap50=per_threshold[0.50],
        ap75=per_threshold[0.75],
        per_threshold=per_threshold,
    )


def accuracy_count(gts, dets, cfg: MatchConfig | None = None) -> tuple[int, int]:
    """(accurately detected objects, total ground truths), classes pooled.

    An object counts as accurately detected when its winning pair clears
    the IoU threshold at the default 50%-or-more confidence cut.
    """
    cfg = cfg or MatchConfig()
    pool = build_match_pool(gts, dets, cfg)
    accurate = sum(res.tp for res in pool.per_image.values())
    total = sum(pool.gt_counts.values())
    return accurate, total

"""IoU-based matching of detections to ground truths.

Candidates are every (gt, det) pair at or above the enumeration floor;
when several detections compete for a ground truth, the pair with the
highest product of IoU and confidence wins. Ground truths are resolved in
descending best-candidate product order, which makes the rule
deterministic when detections compete for multiple ground truths.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..core import Detection, GroundTruthBox, iou


@dataclass(frozen=True)
class MatchConfig:
    """Thresholds steering matching and the derived tallies."""

    iou_threshold: float = 0.5
    min_confidence: float = 0.5
    require_class_match: bool = True
    iou_floor_for_enumeration: float = 0.1

    def __post_init__(self) -> None:
        if not 0 < self.iou_threshold <= 1:
            raise ValueError(f"iou_threshold must be in (0, 1], got {self.iou_threshold}")
        if not 0 <= self.min_confidence <= 1:
            raise ValueError(f"min_confidence must be in [0, 1], got {self.min_confidence}")
        if not 0 <= self.iou_floor_for_enumeration <= 1:
            raise ValueError(f"iou floor must be in [0, 1], got {self.iou_floor_for_enumeration}")


# PR curves enumerate almost everything; the accuracy count uses the stricter default.
PR_CURVE_CONFIG = MatchConfig(min_confidence=0.01)


@dataclass(frozen=True)
class MatchedPair:
    gt_index: int
    det_index: int
    iou: float
    confidence: float


@dataclass(frozen=True)
class MatchResult:
    """Assignment outcome for one image.

    Indices refer to the input lists. ``pairs`` holds the product-rule
    winners (IoU at or above the floor, not necessarily the TP threshold).
    A pair is a true positive when its IoU reaches the threshold and the
    classes agree; every retained non-TP detection is a false positive;
    every ground truth without a TP pair is a false negative.
    """

    pairs: tuple[MatchedPair, ...]
    unmatched_gt: tuple[int, ...]
    unmatched_det: tuple[int, ...]
    retained_det: tuple[int, ...]
    tp_by_class: dict[str, int] = field(default_factory=dict)
    fp_by_class: dict[str, int] = field(default_factory=dict)
    fn_by_class: dict[str, int] = field(default_factory=dict)
    fn_misclassified: int = 0
    tp_det_indices: frozenset[int] = frozenset()

    @property
    def tp(self) -> int:
        return sum(self.tp_by_class.values())

    @property
    def fp(self) -> int:
        return sum(self.fp_by_class.values())

    @property
    def fn(self) -> int:
        return sum(self.fn_by_class.values())


def _candidates(
    gts: list[GroundTruthBox], dets: list[Detection], retained: list[int], cfg: MatchConfig
) -> list[tuple[float, float, int, int]]:
    """All (product, confidence, det_index, gt_index) pairs above the floor."""
    out = []
    for g, gt in enumerate(gts):
        for d in retained:
            det = dets[d]
            if cfg.require_class_match and det.category != gt.category:
                continue
            overlap = iou(gt.hbb, det.hbb)
            if overlap >= cfg.iou_floor_for_enumeration:
                out.append((overlap * det.confidence, det.confidence, d, g))
    return out


def match_detections(gts: list[GroundTruthBox], dets: list[Detection], cfg: MatchConfig) -> MatchResult:
    """Assign detections to ground truths by the highest-product rule.

    Detections below ``cfg.min_confidence`` are dropped before matching.
    The assignment is a partial injection both ways: no ground truth or
    detection is used twice. Ties on the product break toward higher
    confidence, then lower detection index, then lower ground-truth index.
    """
    retained = [d for d, det in enumerate(dets) if det.confidence >= cfg.min_confidence]
    candidates = _candidates(gts, dets, retained, cfg)
    # Descending product; ties by confidence, then det index, then gt index.
    candidates.sort(key=lambda c: (-c[0], -c[1], c[2], c[3]))

    pair_by_gt: dict[int, MatchedPair] = {}
    used_det: set[int] = set()
    for product, conf, d, g in candidates:
        if g in pair_by_gt or d in used_det:
            continue
        pair_by_gt[g] = MatchedPair(g, d, product / conf if conf > 0 else 0.0, conf)
        used_det.add(d)

    # Recompute the stored IoU directly (product/conf loses precision).
    pairs = tuple(
        MatchedPair(p.gt_index, p.det_index, iou(gts[p.gt_index].hbb, dets[p.det_index].hbb), p.confidence)
        for p in sorted(pair_by_gt.values(), key=lambda p: p.gt_index)
    )

    tp_by_class: dict[str, int] = {}
    fp_by_class: dict[str, int] = {}
    fn_by_class: dict[str, int] = {}
    fn_misclassified = 0
    tp_dets: set[int] = set()

    for p in pairs:
        gt_cat = gts[p.gt_index].category
        det_cat = dets[p.det_index].category
        if p.iou >= cfg.iou_threshold and det_cat == gt_cat:
            tp_by_class[gt_cat] = tp_by_class.get(gt_cat, 0) + 1
            tp_dets.add(p.det_index)
        elif p.iou >= cfg.iou_threshold:
            # Overlap clears the threshold but the label is wrong: tallied as a miss.
            fn_misclassified += 1

    for g, gt in enumerate(gts):
        p = pair_by_gt.get(g)
        if p is None or p.det_index not in tp_dets:
            fn_by_class[gt.category] = fn_by_class.get(gt.category, 0) + 1

    for d in retained:
        if d not in tp_dets:
            cat = dets[d].category
            fp_by_class[cat] = fp_by_class.get(cat, 0) + 1

    unmatched_gt = tuple(g for g in range(len(gts)) if g not in pair_by_gt)
    unmatched_det = tuple(d for d in retained if d not in used_det)
    return MatchResult(
        pairs=pairs,
        unmatched_gt=unmatched_gt,
        unmatched_det=unmatched_det,
        retained_det=tuple(retained),
        tp_by_class=tp_by_class,
        fp_by_class=fp_by_class,
        fn_by_class=fn_by_class,
        fn_misclassified=fn_misclassified,
        tp_det_indices=frozenset(tp_dets),
    )

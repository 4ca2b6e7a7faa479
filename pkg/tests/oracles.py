"""Independent reference implementations used to cross-check the toolkit.

These deliberately share no code with the production paths: exact rational
arithmetic for IoU, a recompute-every-round assignment loop for matching,
and a threshold-sweep for interpolated AP.
"""

from __future__ import annotations

from fractions import Fraction

from detbench.core import Detection, GroundTruthBox
from detbench.evaluate import MatchConfig


def iou_rational(a: tuple[int, int, int, int], b: tuple[int, int, int, int]) -> Fraction:
    """IoU via explicit per-axis interval overlap in exact rationals."""
    ax0, ay0, ax1, ay1 = (Fraction(v) for v in a)
    bx0, by0, bx1, by1 = (Fraction(v) for v in b)
    overlap_x = min(ax1, bx1) - max(ax0, bx0)
    overlap_y = min(ay1, by1) - max(ay0, by0)
    if overlap_x <= 0 or overlap_y <= 0:
        return Fraction(0)
    inter = overlap_x * overlap_y
    union = (ax1 - ax0) * (ay1 - ay0) + (bx1 - bx0) * (by1 - by0) - inter
    if union <= 0:
        return Fraction(0)
    return inter / union


def match_assignment_oracle(
    gts: list[GroundTruthBox], dets: list[Detection], cfg: MatchConfig
) -> dict[int, tuple[int, float, float]]:
    """Greedy product-rule assignment, re-enumerating candidates each round.

    Returns gt_index -> (det_index, iou, confidence). Ties break toward
    higher confidence, then lower detection index, then lower ground-truth
    index, mirroring the documented precedence.
    """
    from detbench.core import iou as iou_float

    retained = [d for d, det in enumerate(dets) if det.confidence >= cfg.min_confidence]
    candidates: dict[tuple[int, int], tuple[float, float]] = {}
    for g, gt in enumerate(gts):
        for d in retained:
            det = dets[d]
            if cfg.require_class_match and det.category != gt.category:
                continue
            overlap = iou_float(gt.hbb, det.hbb)
            if overlap >= cfg.iou_floor_for_enumeration:
                candidates[(g, d)] = (overlap, det.confidence)

    assigned: dict[int, tuple[int, float, float]] = {}
    used: set[int] = set()
    while True:
        best_key = None
        best = None
        for (g, d), (overlap, conf) in candidates.items():
            if g in assigned or d in used:
                continue
            key = (overlap * conf, conf, -d, -g)
            if best_key is None or key > best_key:
                best_key = key
                best = (g, d, overlap, conf)
        if best is None:
            return assigned
        g, d, overlap, conf = best
        assigned[g] = (d, overlap, conf)
        used.add(d)


def match_tallies_oracle(
    gts: list[GroundTruthBox], dets: list[Detection], cfg: MatchConfig
) -> tuple[dict[int, int], int, int, int]:
    """(pairs as gt->det, tp, fp, fn) derived from the assignment oracle."""
    assigned = match_assignment_oracle(gts, dets, cfg)
    retained = [d for d, det in enumerate(dets) if det.confidence >= cfg.min_confidence]
    tp_pairs = {
        g: d
        for g, (d, overlap, _) in assigned.items()
        if overlap >= cfg.iou_threshold and dets[d].category == gts[g].category
    }
    tp = len(tp_pairs)
    fp = len(retained) - tp
    fn = len(gts) - tp
    return {g: d for g, (d, _, _) in assigned.items()}, tp, fp, fn


def ap_threshold_sweep_oracle(scored_flags: list[tuple[float, bool]], num_gt: int) -> float:
    """11-point AP via a brute-force sweep over all confidence thresholds.

    For every distinct confidence: keep detections at or above it, compute
    that set's precision and recall from scratch, then interpolate the
    maximum precision at recall >= r over the 11-point grid.
    """
    points = []
    for t in sorted({c for c, _ in scored_flags}, reverse=True):
        kept = [flag for conf, flag in scored_flags if conf >= t]
        tp = sum(kept)
        fp = len(kept) - tp
        p = tp / (tp + fp) if (tp + fp) > 0 else 0.0
        r = tp / num_gt if num_gt > 0 else 0.0
        points.append((p, r))
    total = 0.0
    for i in range(11):
        grid_r = i / 10
        eligible = [p for p, r in points if r >= grid_r]
        total += max(eligible) if eligible else 0.0
    return total / 11.0


def tiling_coverage_ok(length: int, side: int, offsets: list[int]) -> bool:
    """Check every pixel of an axis is covered by at least one tile interval."""
    covered = bytearray(length)
    for off in offsets:
        if off < 0 or off + side > length:
            return False
        for p in range(off, off + side):
            covered[p] = 1
    return all(covered)

"""Accuracy evaluation: matching, precision/recall, AP/mAP, accuracy counts."""

from .matching import PR_CURVE_CONFIG, MatchConfig, MatchedPair, MatchResult, match_detections
from .metrics import (
    COCO_LADDER,
    ELEVEN_POINT_GRID,
    CocoApSuite,
    DetRecord,
    MatchPool,
    PRCurve,
    accuracy_count,
    build_match_pool,
    class_aps,
    coco_ap_suite,
    interpolated_ap,
    mean_ap,
    pr_curve,
    precision,
    recall,
)
from .report import EvalReport, evaluate, format_report, summary_dict

__all__ = [
    "PR_CURVE_CONFIG",
    "MatchConfig",
    "MatchedPair",
    "MatchResult",
    "match_detections",
    "COCO_LADDER",
    "ELEVEN_POINT_GRID",
    "CocoApSuite",
    "DetRecord",
    "MatchPool",
    "PRCurve",
    "accuracy_count",
    "build_match_pool",
    "class_aps",
    "coco_ap_suite",
    "interpolated_ap",
    "mean_ap",
    "pr_curve",
    "precision",
    "recall",
    "EvalReport",
    "evaluate",
    "format_report",
    "summary_dict",
]

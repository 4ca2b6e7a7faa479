"""detbench: speed/memory/accuracy benchmarking for object detection on constrained devices."""

from .annotations import (
    DOTA_CLASS_NAMES,
    DOTA_LABEL_MAP,
    DatasetIndex,
    LabelMap,
    format_ground_truth,
    load_label_map,
    parse_detections,
    parse_ground_truth,
    write_detections,
)
from .core import (
    Detection,
    GroundTruthBox,
    HBB,
    ImageRecord,
    Quad,
    hbb_from_quad,
    iou,
    total_pixels,
)
from .errors import BackendStartError, EvaluationError, MalformedAnnotationError, ProtocolError

__version__ = "0.1.0"

__all__ = [
    "DOTA_CLASS_NAMES",
    "DOTA_LABEL_MAP",
    "DatasetIndex",
    "LabelMap",
    "format_ground_truth",
    "load_label_map",
    "parse_detections",
    "parse_ground_truth",
    "write_detections",
    "Detection",
    "GroundTruthBox",
    "HBB",
    "ImageRecord",
    "Quad",
    "hbb_from_quad",
    "iou",
    "total_pixels",
    "BackendStartError",
    "EvaluationError",
    "MalformedAnnotationError",
    "ProtocolError",
    "__version__",
]

"""Toolkit configuration and run manifests.

Config files are plain ``key = value`` text with ``#`` comments; every
threshold and spec the toolkit consumes has a documented key here, with
the defaults below. Every emitted report embeds the manifest snapshot that
produced it.
"""

from __future__ import annotations

import time
from pathlib import Path

from .annotations import DatasetIndex

TOOLKIT_VERSION = "0.1.0"

DEFAULTS: dict[str, object] = {
    # evaluation thresholds
    "iou_threshold": 0.5,
    "iou_floor": 0.1,
    "pr_min_confidence": 0.01,
    "accuracy_min_confidence": 0.5,
    "require_class_match": True,
    "exclude_difficult": False,
    # preprocessing
    "scale_percents": [80.0, 50.0, 30.0],
    "scale_algorithm": "bilinear",
    "compress_efforts": [3, 6, 9],
    "tile_side": 0,  # 0 disables tiling
    "tile_overlap": 0.10,
    "tile_keep_fraction": 0.5,
    # benchmarking
    "repetitions_baseline": 5,
    "repetitions_modified": 3,
    "sample_interval_ms": 50,
}


def _coerce(key: str, raw: str) -> object:
    default = DEFAULTS[key]
    raw = raw.strip()
    if isinstance(default, bool):
        if raw.lower() in ("true", "1", "yes"):
            return True
        if raw.lower() in ("false", "0", "no"):
            return False
        raise ValueError(f"config key {key}: expected a boolean, got {raw!r}")
    if isinstance(default, list):
        element = type(default[0])
        return [element(v) for v in raw.split(",") if v.strip()]
    if isinstance(default, int):
        return int(raw)
    if isinstance(default, float):
        return float(raw)
    return raw


def load_config(path: str | Path | None = None) -> dict[str, object]:
    """Defaults merged with overrides from a key=value file."""
    config = dict(DEFAULTS)
    if path is None:
        return config
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in DEFAULTS:
            raise ValueError(f"config line {lineno}: unknown key {key!r}")
        config[key] = _coerce(key, value)
    return config


def build_manifest(
    config: dict[str, object],
    dataset: DatasetIndex | None = None,
    backend_id: str | None = None,
) -> dict[str, object]:
    """Config snapshot + dataset fingerprint + timestamp + version."""
    manifest: dict[str, object] = {
        "toolkit_version": TOOLKIT_VERSION,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
        "config": {k: config[k] for k in sorted(config)},
    }
    if backend_id is not None:
        manifest["backend_id"] = backend_id
    if dataset is not None and dataset.images:
        by_pixels = sorted(dataset.images, key=lambda r: (r.total_pixels, r.id))
        manifest["dataset"] = {
            "image_count": len(dataset.images),
            "instance_count": dataset.instance_count,
            "smallest_image": {"id": by_pixels[0].id, "total_pixels": by_pixels[0].total_pixels},
            "largest_image": {"id": by_pixels[-1].id, "total_pixels": by_pixels[-1].total_pixels},
        }
    return manifest

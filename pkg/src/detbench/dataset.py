"""Filesystem indexing of a dataset root into records and annotations.

Two layouts are accepted: the devkit layout (``images/`` and ``labelTxt/``
siblings) and a flat directory with ``.png`` and ``.txt`` files side by
side. Image headers are read lazily, so indexing never decodes pixels.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from PIL import Image

from .annotations import DatasetIndex, LabelMap, parse_ground_truth
from .core import GroundTruthBox, ImageRecord


@dataclass(frozen=True)
class IndexedDataset:
    index: DatasetIndex
    image_paths: dict[str, Path]
    label_paths: dict[str, Path]
    missing_labels: tuple[str, ...]


def _discover(root: Path) -> tuple[list[Path], dict[str, Path]]:
    image_dir = root / "images" if (root / "images").is_dir() else root
    label_dir = root / "labelTxt" if (root / "labelTxt").is_dir() else root
    images = sorted(p for p in image_dir.glob("*.png"))
    labels = {p.stem: p for p in label_dir.glob("*.txt")}
    return images, labels


def index_dataset(root: str | Path, label_map: LabelMap | None = None) -> IndexedDataset:
    """Build a DatasetIndex from a directory tree.

    Images without a label file are indexed anyway and reported in
    ``missing_labels`` rather than failing the run.
    """
    root = Path(root)
    if not root.is_dir():
        raise FileNotFoundError(f"dataset root {root} is not a directory")
    image_files, label_files = _discover(root)

    records: list[ImageRecord] = []
    annotations: dict[str, tuple[GroundTruthBox, ...]] = {}
    image_paths: dict[str, Path] = {}
    label_paths: dict[str, Path] = {}
    missing: list[str] = []

    for path in image_files:
        with Image.open(path) as im:
            width, height = im.size
            bit_depth = 32 if im.mode == "RGBA" else 24
        rec = ImageRecord(
            id=path.stem,
            width=width,
            height=height,
            file_size=path.stat().st_size,
            bit_depth=bit_depth,
        )
        records.append(rec)
        image_paths[rec.id] = path
        label_path = label_files.get(rec.id)
        if label_path is None:
            missing.append(rec.id)
            continue
        label_paths[rec.id] = label_path
        boxes = parse_ground_truth(label_path.read_text(encoding="utf-8"), label_map)
        annotations[rec.id] = tuple(boxes)

    index = DatasetIndex(images=tuple(records), annotations=annotations)
    return IndexedDataset(
        index=index,
        image_paths=image_paths,
        label_paths=label_paths,
        missing_labels=tuple(missing),
    )

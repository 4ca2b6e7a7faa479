"""Parsers for ground-truth label files, detection files, and label maps.

All functions here are pure text-in / objects-out and safe to call
concurrently on different inputs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .core import Detection, GroundTruthBox, HBB, ImageRecord, Quad
from .errors import MalformedAnnotationError

# DOTA-v1.0 category names, in devkit order.
DOTA_CLASS_NAMES = (
    "plane",
    "baseball-diamond",
    "bridge",
    "ground-track-field",
    "small-vehicle",
    "large-vehicle",
    "ship",
    "tennis-court",
    "basketball-court",
    "storage-tank",
    "soccer-ball-field",
    "roundabout",
    "harbor",
    "swimming-pool",
    "helicopter",
)


@dataclass(frozen=True)
class LabelMap:
    """Ordered id -> name mapping for the class vocabulary."""

    entries: tuple[tuple[int, str], ...]

    def __post_init__(self) -> None:
        ids = [i for i, _ in self.entries]
        names = [n for _, n in self.entries]
        if len(set(ids)) != len(ids):
            raise MalformedAnnotationError("duplicate ids in label map")
        if len(set(names)) != len(names):
            raise MalformedAnnotationError("duplicate names in label map")
        if sorted(ids) != list(range(1, len(ids) + 1)):
            raise MalformedAnnotationError(
                f"label map ids must be contiguous from 1, got {sorted(ids)}"
            )

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, name: str) -> bool:
        return any(n == name for _, n in self.entries)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for _, n in self.entries)

    def id_of(self, name: str) -> int:
        for i, n in self.entries:
            if n == name:
                return i
        raise KeyError(name)

    def name_of(self, label_id: int) -> str:
        for i, n in self.entries:
            if i == label_id:
                return n
        raise KeyError(label_id)


DOTA_LABEL_MAP = LabelMap(tuple(enumerate(DOTA_CLASS_NAMES, start=1)))

_ITEM_BLOCK = re.compile(r"item\s*\{(.*?)\}", re.DOTALL)
_ID_FIELD = re.compile(r"\bid\s*:\s*(\d+)")
_NAME_FIELD = re.compile(r"\bname\s*:\s*['\"]([^'\"]+)['\"]")
# DOTA label files start with metadata lines like "imagesource:GoogleEarth".
_HEADER_LINE = re.compile(r"^[A-Za-z_][\w\-.]*:\S*$")


def load_label_map(text: str) -> LabelMap:
    """Parse a label map in either the item-block or plain two-column format.

    The format is auto-detected: the presence of an ``item {`` block selects
    the block layout, anything else is treated as ``id<TAB>name`` lines.
    Ids must be unique and contiguous from 1; names must be unique.
    """
    if "item" in text and "{" in text:
        entries: list[tuple[int, str]] = []
        for block in _ITEM_BLOCK.finditer(text):
            body = block.group(1)
            id_m = _ID_FIELD.search(body)
            name_m = _NAME_FIELD.search(body)
            if id_m is None or name_m is None:
                raise MalformedAnnotationError(f"item block missing id or name: {body!r}")
            entries.append((int(id_m.group(1)), name_m.group(1)))
        if not entries:
            raise MalformedAnnotationError("no item blocks found in label map")
        return LabelMap(tuple(entries))

    entries = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 2:
            raise MalformedAnnotationError(f"label map line {lineno}: expected 'id name', got {line!r}")
        try:
            label_id = int(fields[0])
        except ValueError as exc:
            raise MalformedAnnotationError(f"label map line {lineno}: bad id {fields[0]!r}") from exc
        entries.append((label_id, fields[1]))
    if not entries:
        raise MalformedAnnotationError("empty label map")
    return LabelMap(tuple(entries))


def parse_ground_truth(text: str, label_map: LabelMap | None = None) -> list[GroundTruthBox]:
    """Parse a DOTA-format label file into ground-truth boxes.

    Record lines carry 10 whitespace-separated fields: eight quad
    coordinates, a category token, and a 0/1 difficulty flag. Metadata
    header lines (``imagesource:...``, ``gsd:...``) and blank lines are
    skipped; every other line must parse or raise, so parsed records plus
    raised errors account for all content lines.
    """
    boxes: list[GroundTruthBox] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or _HEADER_LINE.match(line):
            continue
        fields = line.split()
        if len(fields) != 10:
            raise MalformedAnnotationError(
                f"line {lineno}: expected 10 fields (8 coords, category, difficulty), got {len(fields)}"
            )
        try:
            coords = [float(v) for v in fields[:8]]
        except ValueError as exc:
            raise MalformedAnnotationError(f"line {lineno}: bad coordinate in {line!r}") from exc
        category = fields[8]
        if label_map is not None and category not in label_map:
            raise MalformedAnnotationError(f"line {lineno}: unknown category {category!r}")
        if fields[9] not in ("0", "1"):
            raise MalformedAnnotationError(f"line {lineno}: difficulty must be 0 or 1, got {fields[9]!r}")
        try:
            box = GroundTruthBox.from_quad(Quad.from_flat(coords), category, int(fields[9]))
        except (MalformedAnnotationError, ValueError) as exc:
            raise MalformedAnnotationError(f"line {lineno}: {exc}") from exc
        boxes.append(box)
    return boxes


def _coord(v: float) -> str:
    if v == int(v) and abs(v) < 2**53:
        return str(int(v))
    return repr(v)


def format_ground_truth(boxes: list[GroundTruthBox]) -> str:
    """Serialize ground truths back to the quad-record line format."""
    lines = []
    for gt in boxes:
        coords = " ".join(_coord(c) for point in gt.quad.points for c in point)
        lines.append(f"{coords} {gt.category} {gt.difficulty}\n")
    return "".join(lines)


def write_detections(dets: list[Detection], label_map: LabelMap | None = None) -> str:
    """Serialize detections, one per line: category confidence xmin ymin xmax ymax.

    Floats are written with shortest round-trip precision so
    ``parse_detections(write_detections(d)) == d`` holds bit-exactly.
    """
    lines = []
    for det in dets:
        if label_map is not None and det.category not in label_map:
            raise MalformedAnnotationError(f"category {det.category!r} not in label map")
        b = det.hbb
        coords = " ".join(repr(float(v)) for v in (b.xmin, b.ymin, b.xmax, b.ymax))
        lines.append(f"{det.category} {float(det.confidence)!r} {coords}\n")
    return "".join(lines)


def parse_detections(text: str, label_map: LabelMap | None = None) -> list[Detection]:
    """Parse a detection file written by :func:`write_detections`.

    Lines starting with ``#`` and blank lines are ignored.
    """
    dets: list[Detection] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 6:
            raise MalformedAnnotationError(
                f"line {lineno}: expected 6 fields (category confidence xmin ymin xmax ymax), got {len(fields)}"
            )
        category = fields[0]
        if label_map is not None and category not in label_map:
            raise MalformedAnnotationError(f"line {lineno}: unknown category {category!r}")
        try:
            confidence, xmin, ymin, xmax, ymax = (float(v) for v in fields[1:])
            det = Detection(HBB(xmin, ymin, xmax, ymax), category, confidence)
        except ValueError as exc:
            raise MalformedAnnotationError(f"line {lineno}: {exc}") from exc
        dets.append(det)
    return dets


@dataclass(frozen=True)
class DatasetIndex:
    """All indexed images plus their ground-truth annotations."""

    images: tuple[ImageRecord, ...]
    annotations: dict[str, tuple[GroundTruthBox, ...]]

    def __post_init__(self) -> None:
        known = {rec.id for rec in self.images}
        if len(known) != len(self.images):
            raise ValueError("duplicate image ids in dataset index")
        stray = set(self.annotations) - known
        if stray:
            raise ValueError(f"annotations reference unknown images: {sorted(stray)}")

    def record(self, image_id: str) -> ImageRecord:
        for rec in self.images:
            if rec.id == image_id:
                return rec
        raise KeyError(image_id)

    def boxes(self, image_id: str) -> tuple[GroundTruthBox, ...]:
        return self.annotations.get(image_id, ())

    @property
    def instance_count(self) -> int:
        return sum(len(v) for v in self.annotations.values())

"""Shared domain types and geometric primitives.

Everything here is immutable after construction and safe to share across
threads; the free functions are pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import MalformedAnnotationError


@dataclass(frozen=True, order=True)
class HBB:
    """Horizontal (axis-aligned) bounding box.

    Coordinates are continuous pixel positions, so ``area`` is plain
    ``width * height`` with no +1 pixel-index convention. The canonical
    field order is (xmin, ymin, xmax, ymax); parsers that meet other
    orderings on disk normalize at the boundary.
    """

    xmin: float
    ymin: float
    xmax: float
    ymax: float

    def __post_init__(self) -> None:
        if not all(math.isfinite(v) for v in (self.xmin, self.ymin, self.xmax, self.ymax)):
            raise ValueError(f"non-finite box coordinates: {self}")
        if self.xmin > self.xmax or self.ymin > self.ymax:
            raise ValueError(f"inverted box: {self}")

    @property
    def width(self) -> float:
        return self.xmax - self.xmin

    @property
    def height(self) -> float:
        return self.ymax - self.ymin

    @property
    def area(self) -> float:
        return self.width * self.height


@dataclass(frozen=True)
class Quad:
    """Four corner points of an annotated instance, in source order.

    No ordering or convexity constraint is imposed; only the axis-aligned
    envelope is ever evaluated.
    """

    points: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        if len(self.points) != 4:
            raise ValueError(f"quad needs exactly 4 points, got {len(self.points)}")

    @classmethod
    def from_flat(cls, coords: tuple[float, ...] | list[float]) -> Quad:
        """Build from the flat (x1, y1, ..., x4, y4) coordinate layout."""
        if len(coords) != 8:
            raise ValueError(f"expected 8 coordinates, got {len(coords)}")
        return cls(tuple((coords[i], coords[i + 1]) for i in range(0, 8, 2)))


def hbb_from_quad(quad: Quad) -> HBB:
    """Axis-aligned envelope of a quadrilateral annotation."""
    xs = [p[0] for p in quad.points]
    ys = [p[1] for p in quad.points]
    if not all(math.isfinite(v) for v in xs + ys):
        raise MalformedAnnotationError(f"non-finite quad coordinates: {quad.points}")
    return HBB(min(xs), min(ys), max(xs), max(ys))


@dataclass(frozen=True)
class GroundTruthBox:
    """One annotated instance: source quad, derived envelope, class, difficulty."""

    quad: Quad
    hbb: HBB
    category: str
    difficulty: int = 0

    def __post_init__(self) -> None:
        if self.difficulty not in (0, 1):
            raise ValueError(f"difficulty must be 0 or 1, got {self.difficulty}")

    @classmethod
    def from_quad(cls, quad: Quad, category: str, difficulty: int = 0) -> GroundTruthBox:
        return cls(quad=quad, hbb=hbb_from_quad(quad), category=category, difficulty=difficulty)


@dataclass(frozen=True)
class Detection:
    """One predicted instance."""

    hbb: HBB
    category: str
    confidence: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.confidence <= 1.0):
            raise ValueError(f"confidence {self.confidence} outside [0, 1]")


def iou(a: HBB, b: HBB) -> float:
    """Intersection over union of two boxes.

    Degenerate (zero-area) boxes are legal and contribute zero intersection;
    a zero-area union yields 0 rather than an error so whole-image
    evaluation never aborts on a broken annotation.
    """
    iw = min(a.xmax, b.xmax) - max(a.xmin, b.xmin)
    ih = min(a.ymax, b.ymax) - max(a.ymin, b.ymin)
    if iw <= 0.0 or ih <= 0.0:
        return 0.0
    inter = iw * ih
    union = a.area + b.area - inter
    if union <= 0.0:
        return 0.0
    return inter / union


# Image provenance: how a record came to exist.


@dataclass(frozen=True)
class Original:
    kind: str = field(default="original", init=False)


@dataclass(frozen=True)
class Scaled:
    percent: float
    algorithm: str
    parent_id: str
    kind: str = field(default="scaled", init=False)


@dataclass(frozen=True)
class Recompressed:
    level: int
    parent_id: str
    kind: str = field(default="recompressed", init=False)


@dataclass(frozen=True)
class Tile:
    parent_id: str
    offset_x: int
    offset_y: int
    kind: str = field(default="tile", init=False)


Provenance = Original | Scaled | Recompressed | Tile


@dataclass(frozen=True)
class ImageRecord:
    """An image's identity, pixel geometry, and provenance.

    ``file_size`` is the on-disk encoded size in bytes; ``bit_depth`` is bits
    per pixel (24 for RGB, 32 for RGBA). Derived records must not name
    themselves as their own ancestor.
    """

    id: str
    width: int
    height: int
    file_size: int = 0
    bit_depth: int = 24
    provenance: Provenance = Original()

    def __post_init__(self) -> None:
        if self.width < 1 or self.height < 1:
            raise ValueError(f"image {self.id}: dimensions must be >= 1")
        if self.bit_depth not in (24, 32):
            raise ValueError(f"image {self.id}: bit depth must be 24 or 32")
        parent = getattr(self.provenance, "parent_id", None)
        if parent == self.id:
            raise ValueError(f"image {self.id}: provenance cycles onto itself")

    @property
    def total_pixels(self) -> int:
        return self.width * self.height


def total_pixels(rec: ImageRecord) -> int:
    """Pixel count of an image: width times height."""
    return rec.total_pixels

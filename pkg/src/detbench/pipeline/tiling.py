"""Square tiling with overlap, plus ground-truth clipping into tiles."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..core import GroundTruthBox, HBB, Quad
from .raster import RasterImage


@dataclass(frozen=True)
class TileSpec:
    """Square tile side plus the fractional overlap between neighbors."""

    tile_side: int
    overlap_fraction: float = 0.10

    def __post_init__(self) -> None:
        if self.tile_side < 1:
            raise ValueError(f"tile side must be >= 1, got {self.tile_side}")
        if not 0.0 <= self.overlap_fraction < 1.0:
            raise ValueError(f"overlap fraction must be in [0, 1), got {self.overlap_fraction}")

    @property
    def stride(self) -> int:
        return max(1, math.floor(self.tile_side * (1.0 - self.overlap_fraction)))


def tile_offsets(length: int, spec: TileSpec) -> list[int]:
    """Tile origins along one axis.

    Origins advance by the stride; the final tile is shifted back so it ends
    exactly at the image edge (never padded), which guarantees full coverage
    with only real pixels.
    """
    side = spec.tile_side
    if side >= length:
        return [0]
    offsets: list[int] = []
    k = 0
    while True:
        o = k * spec.stride
        if o + side >= length:
            offsets.append(length - side)
            return offsets
        offsets.append(o)
        k += 1


def split_into_squares(img: RasterImage, spec: TileSpec) -> list[tuple[RasterImage, int, int]]:
    """Cut an image into overlapping square tiles.

    Returns (tile, offset_x, offset_y) triples. An image smaller than the
    tile side in either axis yields a single whole-image tile at (0, 0).
    """
    side = spec.tile_side
    if side > min(img.width, img.height):
        return [(img, 0, 0)]
    tiles = []
    for oy in tile_offsets(img.height, spec):
        for ox in tile_offsets(img.width, spec):
            patch = RasterImage(img.pixels[oy : oy + side, ox : ox + side].copy())
            tiles.append((patch, ox, oy))
    return tiles


def clip_annotations_to_tile(
    boxes: list[GroundTruthBox],
    offset_x: float,
    offset_y: float,
    tile_side: float,
    keep_fraction: float = 0.5,
) -> list[GroundTruthBox]:
    """Intersect ground truths with a tile and shift them to tile coordinates.

    A box survives when its clipped area is at least ``keep_fraction`` of the
    original area (>= comparison, so an exactly-half box is kept). Quads are
    replaced by the clipped envelope rectangle.
    """
    x_lo, y_lo = offset_x, offset_y
    x_hi, y_hi = offset_x + tile_side, offset_y + tile_side
    kept: list[GroundTruthBox] = []
    for gt in boxes:
        b = gt.hbb
        cx0 = max(b.xmin, x_lo)
        cy0 = max(b.ymin, y_lo)
        cx1 = min(b.xmax, x_hi)
        cy1 = min(b.ymax, y_hi)
        if cx0 > cx1 or cy0 > cy1:
            continue
        clipped_area = (cx1 - cx0) * (cy1 - cy0)
        if clipped_area < keep_fraction * b.area:
            continue
        local = HBB(cx0 - offset_x, cy0 - offset_y, cx1 - offset_x, cy1 - offset_y)
        quad = Quad(
            (
                (local.xmin, local.ymin),
                (local.xmax, local.ymin),
                (local.xmax, local.ymax),
                (local.xmin, local.ymax),
            )
        )
        kept.append(GroundTruthBox(quad=quad, hbb=local, category=gt.category, difficulty=gt.difficulty))
    return kept

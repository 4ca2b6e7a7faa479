"""Lossless recompression, alpha handling, tiling, annotation transforms."""

import numpy as np
import pytest

from detbench.core import GroundTruthBox, HBB, Quad
from detbench.pipeline import (
    RasterImage,
    TileSpec,
    clip_annotations_to_tile,
    decode_png,
    drop_alpha,
    encode_png,
    recompress_lossless,
    split_into_squares,
    tile_offsets,
    transform_annotations_scale,
)

from conftest import random_image
from oracles import tiling_coverage_ok


def gt_box(x0, y0, x1, y1, category="plane", difficulty=0):
    quad = Quad(((x0, y0), (x1, y0), (x1, y1), (x0, y1)))
    return GroundTruthBox.from_quad(quad, category, difficulty)


class TestDropAlpha:
    def test_rgba_to_rgb(self):
        px = np.array([[[10, 20, 30, 128]]], dtype=np.uint8)
        out = drop_alpha(RasterImage(px))
        assert out.channels == 3
        assert out.pixels.tolist() == [[[10, 20, 30]]]

    def test_rgb_passthrough(self, rng):
        img = random_image(rng)
        assert drop_alpha(img) is img

    def test_idempotent_and_rgb_preserving(self, rng):
        img = random_image(rng, channels=4)
        once = drop_alpha(img)
        twice = drop_alpha(once)
        assert np.array_equal(once.pixels, twice.pixels)
        assert np.array_equal(once.pixels, img.pixels[:, :, :3])


class TestLosslessRecompression:
    def test_round_trip_exact(self, rng):
        for _ in range(10):
            img = random_image(rng)
            data = recompress_lossless(img, effort=6)
            assert np.array_equal(decode_png(data).pixels, img.pixels)

    def test_one_pixel_black(self):
        img = RasterImage(np.zeros((1, 1, 3), dtype=np.uint8))
        data = recompress_lossless(img, effort=9)
        assert np.array_equal(decode_png(data).pixels, img.pixels)

    def test_requires_rgb(self, rng):
        with pytest.raises(ValueError):
            recompress_lossless(random_image(rng, channels=4), effort=3)

    def test_effort_range(self, rng):
        with pytest.raises(ValueError):
            encode_png(random_image(rng), effort=10)

    def test_deterministic_encoding(self, rng):
        img = random_image(rng)
        assert encode_png(img, 6) == encode_png(img, 6)

    def test_effort_levels_recorded_not_asserted(self, rng):
        # all three configured effort levels must round-trip; sizes may differ
        img = random_image(rng, max_side=48)
        sizes = set()
        for effort in (3, 6, 9):
            data = recompress_lossless(img, effort)
            sizes.add(len(data))
            assert np.array_equal(decode_png(data).pixels, img.pixels)
        assert all(s > 0 for s in sizes)


class TestTileOffsets:
    def test_reference_wide_axis(self):
        spec = TileSpec(tile_side=4287, overlap_fraction=0.10)
        assert spec.stride == 3858
        assert tile_offsets(13383, spec) == [0, 3858, 7716, 9096]

    def test_single_tile_when_exact(self):
        assert tile_offsets(4287, TileSpec(4287, 0.10)) == [0]

    def test_axis_shorter_than_side(self):
        assert tile_offsets(100, TileSpec(512, 0.10)) == [0]

    def test_coverage_random(self, rng):
        for _ in range(100):
            length = int(rng.integers(1, 3000))
            side = int(rng.integers(1, max(2, length + 1)))
            spec = TileSpec(side, 0.10)
            offsets = tile_offsets(length, spec)
            if side >= length:
                assert offsets == [0]
            else:
                assert tiling_coverage_ok(length, side, offsets)
                assert offsets == sorted(set(offsets))

    def test_overlap_lower_bound(self, rng):
        for _ in range(50):
            length = int(rng.integers(200, 5000))
            side = int(rng.integers(50, 200))
            spec = TileSpec(side, 0.10)
            offsets = tile_offsets(length, spec)
            if len(offsets) < 2:
                continue
            min_overlap = min(
                offsets[i] + side - offsets[i + 1] for i in range(len(offsets) - 1)
            )
            assert min_overlap >= int(np.floor(side * 0.10)) - 1


class TestSplitIntoSquares:
    def test_square_image_single_tile(self, rng):
        img = RasterImage(rng.integers(0, 256, (32, 32, 3), dtype=np.uint8))
        tiles = split_into_squares(img, TileSpec(32, 0.10))
        assert len(tiles) == 1
        patch, ox, oy = tiles[0]
        assert (ox, oy) == (0, 0)
        assert np.array_equal(patch.pixels, img.pixels)

    def test_tiles_are_square_and_match_source(self, rng):
        img = RasterImage(rng.integers(0, 256, (50, 90, 3), dtype=np.uint8))
        spec = TileSpec(40, 0.10)
        for patch, ox, oy in split_into_squares(img, spec):
            assert patch.width == patch.height == 40
            assert np.array_equal(patch.pixels, img.pixels[oy : oy + 40, ox : ox + 40])

    def test_small_image_passthrough(self, rng):
        img = RasterImage(rng.integers(0, 256, (10, 500, 3), dtype=np.uint8))
        tiles = split_into_squares(img, TileSpec(64, 0.10))
        assert len(tiles) == 1
        assert tiles[0][0] is img

    def test_invalid_side(self):
        with pytest.raises(ValueError):
            TileSpec(0)


class TestClipAnnotations:
    def test_fully_inside_shifted(self):
        boxes = clip_annotations_to_tile([gt_box(110, 120, 150, 160)], 100, 100, 200)
        assert len(boxes) == 1
        assert boxes[0].hbb == HBB(10, 20, 50, 60)
        assert boxes[0].category == "plane"

    def test_fully_outside_dropped(self):
        assert clip_annotations_to_tile([gt_box(500, 500, 600, 600)], 0, 0, 200) == []

    def test_exactly_half_kept(self):
        # box [150, 250] x [0, 10] against tile x < 200: clipped area = half
        boxes = clip_annotations_to_tile([gt_box(150, 0, 250, 10)], 0, 0, 200)
        assert len(boxes) == 1
        assert boxes[0].hbb == HBB(150, 0, 200, 10)

    def test_just_under_half_dropped(self):
        boxes = clip_annotations_to_tile([gt_box(151, 0, 251, 10)], 0, 0, 200)
        assert boxes == []

    def test_keep_fraction_configurable(self):
        boxes = clip_annotations_to_tile([gt_box(151, 0, 251, 10)], 0, 0, 200, keep_fraction=0.2)
        assert len(boxes) == 1

    def test_quad_replaced_by_clipped_envelope(self):
        boxes = clip_annotations_to_tile([gt_box(150, 0, 250, 10)], 0, 0, 200)
        xs = [p[0] for p in boxes[0].quad.points]
        assert max(xs) == 200


class TestTransformAnnotationsScale:
    def test_identity_at_100(self):
        boxes = [gt_box(0, 0, 10, 10), gt_box(5, 5, 9, 9, "ship")]
        assert transform_annotations_scale(boxes, 100) == boxes

    def test_linear_halving(self):
        out = transform_annotations_scale([gt_box(0, 0, 10, 10)], 50)
        assert out[0].hbb == HBB(0, 0, 5, 5)

    def test_area_scales_quadratically(self, rng):
        boxes = [
            gt_box(float(x), float(y), float(x + w), float(y + h))
            for x, y, w, h in rng.integers(1, 200, (50, 4))
        ]
        percent = 37.0
        out = transform_annotations_scale(boxes, percent)
        for before, after in zip(boxes, out):
            assert after.hbb.area == pytest.approx(before.hbb.area * (percent / 100) ** 2, rel=1e-12)

    def test_count_and_category_multiset_preserved(self, rng):
        boxes = [gt_box(0, 0, 10, 10, c) for c in ("plane", "ship", "ship", "harbor")]
        out = transform_annotations_scale(boxes, 30)
        assert len(out) == len(boxes)
        assert sorted(b.category for b in out) == sorted(b.category for b in boxes)
        assert [b.difficulty for b in out] == [b.difficulty for b in boxes]

    def test_invalid_percent(self):
        with pytest.raises(ValueError):
            transform_annotations_scale([], 0)
        with pytest.raises(ValueError):
            transform_annotations_scale([], 101)

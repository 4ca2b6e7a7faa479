"""Scaling: output dimensions, kernel correctness, backend equivalence."""

import numpy as np
import pytest

from detbench.pipeline import (
    KERNEL_BACKEND,
    RasterImage,
    ScaleSpec,
    available_backends,
    scale_image,
    scaled_dims,
)
from detbench.pipeline import resample_np

from conftest import random_image

needs_compiled = pytest.mark.skipif(
    KERNEL_BACKEND != "compiled", reason="compiled kernels not built"
)


class TestScaledDims:
    def test_59_percent_reference(self):
        assert scaled_dims(13383, 4287, 59) == (7896, 2529)

    def test_half_rounds_away_from_zero(self):
        # 475 * 0.5 = 237.5 rounds to 238
        assert scaled_dims(475, 546, 50) == (238, 273)

    def test_clamped_to_one(self):
        assert scaled_dims(3, 3, 1) == (1, 1)

    def test_invalid_percent(self):
        with pytest.raises(ValueError):
            ScaleSpec(0)
        with pytest.raises(ValueError):
            ScaleSpec(-5)
        with pytest.raises(ValueError):
            ScaleSpec(120)

    def test_unknown_algorithm(self):
        with pytest.raises(ValueError):
            ScaleSpec(50, "bicubic")


class TestScaleImage:
    def test_identity_at_100_nearest(self, rng):
        for _ in range(10):
            img = random_image(rng)
            out = scale_image(img, ScaleSpec(100, "nearest-neighbor"))
            assert np.array_equal(out.pixels, img.pixels)

    def test_identity_at_100_bilinear(self, rng):
        img = random_image(rng)
        out = scale_image(img, ScaleSpec(100, "bilinear"))
        assert np.array_equal(out.pixels, img.pixels)

    def test_aspect_ratio_preserved_up_to_rounding(self):
        img = RasterImage(np.zeros((546, 475, 3), dtype=np.uint8))
        out = scale_image(img, ScaleSpec(30, "nearest-neighbor"))
        assert (out.width, out.height) == scaled_dims(475, 546, 30)
        assert abs(out.width / out.height - 475 / 546) < 0.02

    def test_bilinear_matches_direct_reimplementation(self, rng):
        # Scalar re-derivation of the centered mapping, independent of both kernels.
        img = random_image(rng, max_side=12)
        spec = ScaleSpec(47.0, "bilinear")
        out = scale_image(img, spec)
        src = img.pixels.astype(np.float64)
        h, w = img.pixels.shape[:2]
        for yy in range(out.height):
            for xx in range(out.width):
                sy = (yy + 0.5) * (h / out.height) - 0.5
                sx = (xx + 0.5) * (w / out.width) - 0.5
                y0, x0 = int(np.floor(sy)), int(np.floor(sx))
                fy, fx = sy - np.floor(sy), sx - np.floor(sx)
                y0c, y1c = max(0, min(y0, h - 1)), max(0, min(y0 + 1, h - 1))
                x0c, x1c = max(0, min(x0, w - 1)), max(0, min(x0 + 1, w - 1))
                for ch in range(img.channels):
                    top = (1 - fx) * src[y0c, x0c, ch] + fx * src[y0c, x1c, ch]
                    bot = (1 - fx) * src[y1c, x0c, ch] + fx * src[y1c, x1c, ch]
                    expected = np.floor((1 - fy) * top + fy * bot + 0.5)
                    assert out.pixels[yy, xx, ch] == expected

    def test_nearest_picks_closest_source_pixel(self):
        img = RasterImage(np.arange(16, dtype=np.uint8).reshape(4, 4, 1).repeat(3, axis=2))
        out = scale_image(img, ScaleSpec(50, "nearest-neighbor"))
        # centers 0.5 and 2.5 map to source rows/cols 0.5 and 2.5 -> floor(+0.5) = 1 and 3
        assert out.pixels[:, :, 0].tolist() == [[5, 7], [13, 15]]

    def test_rgba_supported(self, rng):
        img = random_image(rng, channels=4)
        out = scale_image(img, ScaleSpec(50, "bilinear"))
        assert out.channels == 4


@needs_compiled
class TestBackendEquivalence:
    def test_both_backends_listed(self):
        assert available_backends() == ("compiled", "numpy")

    def test_bilinear_identical(self, rng):
        for _ in range(25):
            img = random_image(rng)
            percent = float(rng.uniform(1, 100))
            a = scale_image(img, ScaleSpec(percent, "bilinear"), backend="compiled")
            b = scale_image(img, ScaleSpec(percent, "bilinear"), backend="numpy")
            assert np.array_equal(a.pixels, b.pixels)

    def test_nearest_identical(self, rng):
        for _ in range(25):
            img = random_image(rng)
            percent = float(rng.uniform(1, 100))
            a = scale_image(img, ScaleSpec(percent, "nearest-neighbor"), backend="compiled")
            b = scale_image(img, ScaleSpec(percent, "nearest-neighbor"), backend="numpy")
            assert np.array_equal(a.pixels, b.pixels)

    def test_numpy_module_usable_directly(self, rng):
        img = random_image(rng)
        out = resample_np.resize_nearest_u8(img.pixels, 5, 7)
        assert out.shape == (5, 7, 3)

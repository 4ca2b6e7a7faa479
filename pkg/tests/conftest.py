"""Shared fixtures: synthetic datasets and random raster images."""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from detbench.pipeline import RasterImage, save_image

FIXTURES = Path(__file__).parent / "data" / "fixtures"


def random_image(rng: np.random.Generator, max_side: int = 64, channels: int = 3) -> RasterImage:
    h = int(rng.integers(1, max_side + 1))
    w = int(rng.integers(1, max_side + 1))
    return RasterImage(rng.integers(0, 256, (h, w, channels), dtype=np.uint8))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)


@pytest.fixture
def tiny_dataset(tmp_path: Path) -> Path:
    """Three small images with one annotated box each, devkit layout."""
    root = tmp_path / "dataset"
    (root / "images").mkdir(parents=True)
    (root / "labelTxt").mkdir()
    generator = np.random.default_rng(7)
    sizes = {"A0001": (40, 30), "A0002": (24, 24), "A0003": (60, 16)}
    for image_id, (w, h) in sizes.items():
        img = RasterImage(generator.integers(0, 256, (h, w, 3), dtype=np.uint8))
        save_image(root / "images" / f"{image_id}.png", img)
        (root / "labelTxt" / f"{image_id}.txt").write_text(
            "imagesource:fixture\ngsd:1.0\n2 2 10 2 10 9 2 9 plane 0\n",
            encoding="utf-8",
        )
    return root

"""Image scaling: linear per-axis resize via bilinear or nearest-neighbor.

The hot per-pixel kernels live in the compiled extension when it built,
with the NumPy fallback selected at import otherwise; both produce
identical bytes. ``KERNEL_BACKEND`` names the one in use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import resample_np

try:
    from . import _resample as _impl

    KERNEL_BACKEND = "compiled"
except ImportError:  # extension not built; NumPy path is exact, just slower
    _impl = resample_np
    KERNEL_BACKEND = "numpy"

from .raster import RasterImage

ALGORITHMS = ("bilinear", "nearest-neighbor")


@dataclass(frozen=True)
class ScaleSpec:
    """Linear scale factor in percent plus the interpolation algorithm."""

    percent: float
    algorithm: str = "bilinear"

    def __post_init__(self) -> None:
        if not self.percent > 0:
            raise ValueError(f"scale percent must be > 0, got {self.percent}")
        if self.percent > 100:
            raise ValueError(f"upscaling is excluded, got {self.percent}%")
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {ALGORITHMS}, got {self.algorithm!r}")


def scaled_dim(dim: int, percent: float) -> int:
    """One axis of the output size: round half away from zero, floor 1."""
    return max(1, math.floor(dim * percent / 100.0 + 0.5))


def scaled_dims(width: int, height: int, percent: float) -> tuple[int, int]:
    return scaled_dim(width, percent), scaled_dim(height, percent)


def scale_image(img: RasterImage, spec: ScaleSpec, backend: str | None = None) -> RasterImage:
    """Resize with the centered source mapping src = (dst + 0.5)*scale - 0.5.

    Bilinear averages the four nearest source pixels; nearest-neighbor
    picks the closest one. 100% nearest-neighbor is the pixel identity.
    """
    out_w, out_h = scaled_dims(img.width, img.height, spec.percent)
    kernels = _select(backend)
    if spec.algorithm == "bilinear":
        out = kernels.resize_bilinear_u8(img.pixels, out_h, out_w)
    else:
        out = kernels.resize_nearest_u8(img.pixels, out_h, out_w)
    return RasterImage(np.asarray(out))


def _select(backend: str | None):
    if backend is None:
        return _impl
    if backend == "numpy":
        return resample_np
    if backend == "compiled":
        if KERNEL_BACKEND != "compiled":
            raise RuntimeError("compiled resample kernels are not available")
        return _impl
    raise ValueError(f"unknown kernel backend {backend!r}")


def available_backends() -> tuple[str, ...]:
    return ("compiled", "numpy") if KERNEL_BACKEND == "compiled" else ("numpy",)

"""In-memory raster images and lossless PNG encode/decode.

The PNG container with DEFLATE is the interchange format for every pipeline
stage; Pillow provides the codec while all pixel manipulation stays in
NumPy. A RasterImage is never mutated in place.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image


@dataclass(frozen=True, eq=False)
class RasterImage:
    """8-bit interleaved RGB or RGBA pixels, row-major."""

    pixels: np.ndarray

    def __post_init__(self) -> None:
        px = self.pixels
        if px.dtype != np.uint8:
            raise ValueError(f"pixel dtype must be uint8, got {px.dtype}")
        if px.ndim != 3 or px.shape[2] not in (3, 4):
            raise ValueError(f"pixels must be HxWx3 or HxWx4, got shape {px.shape}")
        if not px.flags["C_CONTIGUOUS"]:
            object.__setattr__(self, "pixels", np.ascontiguousarray(px))

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def channels(self) -> int:
        return self.pixels.shape[2]

    @property
    def bit_depth(self) -> int:
        return 8 * self.channels

    @property
    def total_pixels(self) -> int:
        return self.width * self.height


def drop_alpha(img: RasterImage) -> RasterImage:
    """Discard the alpha plane, keeping RGB bytes untouched.

    RGB input is returned unchanged; the operation is idempotent.
    """
    if img.channels == 3:
        return img
    return RasterImage(np.ascontiguousarray(img.pixels[:, :, :3]))


def encode_png(img: RasterImage, effort: int = 6) -> bytes:
    """Encode to PNG at the given DEFLATE effort level (0-9)."""
    if not 0 <= effort <= 9:
        raise ValueError(f"effort must be in 0..9, got {effort}")
    mode = "RGB" if img.channels == 3 else "RGBA"
    buf = io.BytesIO()
    try:
        Image.fromarray(img.pixels, mode=mode).save(buf, format="PNG", compress_level=effort)
    except OSError as exc:
        raise IOError(f"PNG encode failed: {exc}") from exc
    return buf.getvalue()


def decode_png(data: bytes) -> RasterImage:
    with Image.open(io.BytesIO(data)) as im:
        if im.mode not in ("RGB", "RGBA"):
            im = im.convert("RGB")
        return RasterImage(np.asarray(im, dtype=np.uint8))


def recompress_lossless(img: RasterImage, effort: int) -> bytes:
    """Re-encode an RGB image losslessly; decoding recovers every pixel.

    Higher effort levels usually shrink the file but are not required to;
    achieved sizes are recorded by callers, never asserted.
    """
    if img.channels != 3:
        raise ValueError("recompression expects 24-bit RGB input; drop alpha first")
    return encode_png(img, effort)


def load_image(path: str | Path) -> RasterImage:
    return decode_png(Path(path).read_bytes())


def save_image(path: str | Path, img: RasterImage, effort: int = 6) -> int:
    """Write a PNG and return the encoded byte count."""
    data = encode_png(img, effort)
    Path(path).write_bytes(data)
    return len(data)

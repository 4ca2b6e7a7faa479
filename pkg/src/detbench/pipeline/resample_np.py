"""Pure-NumPy resampling kernels, used when the compiled extension is absent.

The arithmetic here mirrors the compiled kernels expression-for-expression
(same centered source mapping, same float64 evaluation order, same
floor(v + 0.5) rounding) so both backends produce byte-identical output.
"""

from __future__ import annotations

import numpy as np


def _axis_coords(src_dim: int, dst_dim: int) -> np.ndarray:
    scale = src_dim / dst_dim
    return (np.arange(dst_dim, dtype=np.float64) + 0.5) * scale - 0.5


def resize_nearest_u8(src: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    h, w = src.shape[:2]
    ys = _axis_coords(h, out_h)
    xs = _axis_coords(w, out_w)
    yi = np.clip(np.floor(ys + 0.5).astype(np.int64), 0, h - 1)
    xi = np.clip(np.floor(xs + 0.5).astype(np.int64), 0, w - 1)
    return np.ascontiguousarray(src[yi][:, xi])


def resize_bilinear_u8(src: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    h, w = src.shape[:2]
    ys = _axis_coords(h, out_h)
    xs = _axis_coords(w, out_w)
    y0f = np.floor(ys)
    x0f = np.floor(xs)
    fy = (ys - y0f)[:, None, None]
    fx = (xs - x0f)[None, :, None]
    y0 = np.clip(y0f.astype(np.int64), 0, h - 1)
    y1 = np.clip(y0f.astype(np.int64) + 1, 0, h - 1)
    x0 = np.clip(x0f.astype(np.int64), 0, w - 1)
    x1 = np.clip(x0f.astype(np.int64) + 1, 0, w - 1)

    rows0 = src[y0]
    rows1 = src[y1]
    p00 = rows0[:, x0].astype(np.float64)
    p01 = rows0[:, x1].astype(np.float64)
    p10 = rows1[:, x0].astype(np.float64)
    p11 = rows1[:, x1].astype(np.float64)

    t0 = (1.0 - fx) * p00 + fx * p01
    t1 = (1.0 - fx) * p10 + fx * p11
    v = (1.0 - fy) * t0 + fy * t1
    return np.floor(v + 0.5).astype(np.uint8)

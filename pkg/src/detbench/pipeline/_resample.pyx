# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled resampling kernels for 8-bit interleaved images.

Arithmetic must stay expression-identical to resample_np.py: same centered
source mapping, float64 throughout, floor(v + 0.5) rounding. No fast-math,
no FMA contraction.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport floor

cnp.import_array()


cdef inline Py_ssize_t _clamp(Py_ssize_t v, Py_ssize_t lo, Py_ssize_t hi) nogil:
    if v < lo:
        return lo
    if v > hi:
        return hi
    return v


def resize_nearest_u8(const unsigned char[:, :, ::1] src, Py_ssize_t out_h, Py_ssize_t out_w):
    cdef Py_ssize_t h = src.shape[0]
    cdef Py_ssize_t w = src.shape[1]
    cdef Py_ssize_t c = src.shape[2]
    cdef double sy = h / <double> out_h
    cdef double sx = w / <double> out_w

    out_arr = np.empty((out_h, out_w, c), dtype=np.uint8)
    cdef unsigned char[:, :, ::1] out = out_arr
    yi_arr = np.empty(out_h, dtype=np.intp)
    xi_arr = np.empty(out_w, dtype=np.intp)
    cdef Py_ssize_t[::1] yi = yi_arr
    cdef Py_ssize_t[::1] xi = xi_arr

    cdef Py_ssize_t i, j, k
    cdef double s
    for i in range(out_h):
        s = (i + 0.5) * sy - 0.5
        yi[i] = _clamp(<Py_ssize_t> floor(s + 0.5), 0, h - 1)
    for j in range(out_w):
        s = (j + 0.5) * sx - 0.5
        xi[j] = _clamp(<Py_ssize_t> floor(s + 0.5), 0, w - 1)

    with nogil:
        for i in range(out_h):
            for j in range(out_w):
                for k in range(c):
                    out[i, j, k] = src[yi[i], xi[j], k]
    return out_arr


def resize_bilinear_u8(const unsigned char[:, :, ::1] src, Py_ssize_t out_h, Py_ssize_t out_w):
    cdef Py_ssize_t h = src.shape[0]
    cdef Py_ssize_t w = src.shape[1]
    cdef Py_ssize_t c = src.shape[2]
    cdef double sy = h / <double> out_h
    cdef double sx = w / <double> out_w

    out_arr = np.empty((out_h, out_w, c), dtype=np.uint8)
    cdef unsigned char[:, :, ::1] out = out_arr

    y0_arr = np.empty(out_h, dtype=np.intp)
    y1_arr = np.empty(out_h, dtype=np.intp)
    x0_arr = np.empty(out_w, dtype=np.intp)
    x1_arr = np.empty(out_w, dtype=np.intp)
    fy_arr = np.empty(out_h, dtype=np.float64)
    fx_arr = np.empty(out_w, dtype=np.float64)
    cdef Py_ssize_t[::1] y0 = y0_arr
    cdef Py_ssize_t[::1] y1 = y1_arr
    cdef Py_ssize_t[::1] x0 = x0_arr
    cdef Py_ssize_t[::1] x1 = x1_arr
    cdef double[::1] fy = fy_arr
    cdef double[::1] fx = fx_arr

    cdef Py_ssize_t i, j, k
    cdef double s, f
    for i in range(out_h):
        s = (i + 0.5) * sy - 0.5
        f = floor(s)
        fy[i] = s - f
        y0[i] = _clamp(<Py_ssize_t> f, 0, h - 1)
        y1[i] = _clamp(<Py_ssize_t> f + 1, 0, h - 1)
    for j in range(out_w):
        s = (j + 0.5) * sx - 0.5
        f = floor(s)
        fx[j] = s - f
        x0[j] = _clamp(<Py_ssize_t> f, 0, w - 1)
        x1[j] = _clamp(<Py_ssize_t> f + 1, 0, w - 1)

    cdef double p00, p01, p10, p11, t0, t1, v
    with nogil:
        for i in range(out_h):
            for j in range(out_w):
                for k in range(c):
                    p00 = src[y0[i], x0[j], k]
                    p01 = src[y0[i], x1[j], k]
                    p10 = src[y1[i], x0[j], k]
                    p11 = src[y1[i], x1[j], k]
                    t0 = (1.0 - fx[j]) * p00 + fx[j] * p01
                    t1 = (1.0 - fx[j]) * p10 + fx[j] * p11
                    v = (1.0 - fy[i]) * t0 + fy[i] * t1
                    out[i, j, k] = <unsigned char> floor(v + 0.5)
    return out_arr

"""Times the compiled resampling kernels against the NumPy fallback.

Usage: python benchmarks/resample_benchmark.py [--side 2048] [--repeats 3]

Both backends produce identical bytes; this only compares speed. The
compiled rows are skipped when the extension is not built.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from detbench.pipeline import KERNEL_BACKEND, RasterImage, ScaleSpec, scale_image


def time_case(img: RasterImage, spec: ScaleSpec, backend: str, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        scale_image(img, spec, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--side", type=int, default=2048, help="square test image side in pixels")
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    img = RasterImage(rng.integers(0, 256, (args.side, args.side, 3), dtype=np.uint8))
    backends = ["numpy"] + (["compiled"] if KERNEL_BACKEND == "compiled" else [])
    cases = [ScaleSpec(59, "bilinear"), ScaleSpec(59, "nearest-neighbor"), ScaleSpec(30, "bilinear")]

    print(f"input: {args.side}x{args.side} RGB, best of {args.repeats}")
    print(f"{'case':<28}{'backend':<12}{'seconds':>10}{'Mpx/s':>10}")
    for spec in cases:
        results = {}
        for backend in backends:
            elapsed = time_case(img, spec, backend, args.repeats)
            results[backend] = elapsed
            mpix = img.total_pixels / elapsed / 1e6
            label = f"{spec.percent:g}% {spec.algorithm}"
            print(f"{label:<28}{backend:<12}{elapsed:>10.4f}{mpix:>10.1f}")
        if len(results) == 2:
            print(f"{'':<28}{'speedup':<12}{results['numpy'] / results['compiled']:>10.2f}x")


if __name__ == "__main__":
    main()

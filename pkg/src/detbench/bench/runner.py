"""Measurement protocol: warm-up, repetitions, ordering, OOM handling.

Execution is strictly sequential (one backend invocation at a time) so
timings stay uncontaminated; aggregation happens after the run.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from ..annotations import DatasetIndex
from ..core import Detection, ImageRecord
from .backends import BackendResult, DetectorBackend

ORDER_BY_PIXELS = "by_total_pixels_asc"
ORDER_AS_LISTED = "as_listed"


@dataclass(frozen=True)
class BenchPlan:
    """What to run: dataset, backend, repetitions, warm-up, ordering."""

    dataset: DatasetIndex
    backend: DetectorBackend
    repetitions: int
    warmup_image: str
    order: str = ORDER_BY_PIXELS
    image_paths: dict[str, Path] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.repetitions < 1:
            raise ValueError(f"repetitions must be >= 1, got {self.repetitions}")
        if self.order not in (ORDER_BY_PIXELS, ORDER_AS_LISTED):
            raise ValueError(f"unknown order {self.order!r}")
        self.dataset.record(self.warmup_image)  # raises KeyError when absent
        if not self.dataset.images:
            raise ValueError("dataset is empty")


@dataclass(frozen=True)
class BenchSample:
    """One measured run of one image."""

    image_id: str
    run_index: int
    outcome: str  # ok | oom | backend-error
    wall_time_s: float | None = None
    peak_rss_bytes: int | None = None
    final_swap_bytes: int | None = None
    discarded: bool = False
    detections: tuple[Detection, ...] = ()
    time_source: str = "backend"
    harness_time_s: float | None = None
    message: str = ""

    def __post_init__(self) -> None:
        if self.outcome == "ok" and not (self.wall_time_s and self.wall_time_s > 0):
            raise ValueError(f"ok sample for {self.image_id} needs wall_time > 0")
        if self.outcome == "oom" and self.detections:
            raise ValueError(f"oom sample for {self.image_id} must carry no detections")


def order_by_pixels(dataset: DatasetIndex) -> list[str]:
    """Image ids ascending by total pixels, ties broken lexicographically."""
    return [rec.id for rec in sorted(dataset.images, key=lambda r: (r.total_pixels, r.id))]


def _to_sample(rec: ImageRecord, run_index: int, result: BackendResult, discarded: bool) -> BenchSample:
    if result.backend_time_s is not None:
        wall, source = result.backend_time_s, "backend"
    else:
        wall, source = result.harness_time_s, "harness"
    return BenchSample(
        image_id=rec.id,
        run_index=run_index,
        outcome=result.outcome,
        wall_time_s=wall,
        peak_rss_bytes=result.peak_rss_bytes,
        final_swap_bytes=result.final_swap_bytes,
        discarded=discarded,
        detections=result.detections if result.outcome == "ok" else (),
        time_source=source,
        harness_time_s=result.harness_time_s,
        message=result.message,
    )


def run_benchmark(plan: BenchPlan) -> list[BenchSample]:
    """Execute the measurement protocol and return every sample.

    The warm-up image runs once first and its sample is flagged discarded;
    it never contributes to any aggregate. Every image then runs
    ``plan.repetitions`` times in plan order. The first non-ok outcome for
    an image marks it not-runnable and skips its remaining repetitions; the
    run itself continues with the next image.
    """
    dataset = plan.dataset
    if plan.order == ORDER_BY_PIXELS:
        ids = order_by_pixels(dataset)
    else:
        ids = [rec.id for rec in dataset.images]

    backend = plan.backend
    backend.start()
    samples: list[BenchSample] = []
    try:
        warm_rec = dataset.record(plan.warmup_image)
        result = _detect_guarded(backend, warm_rec, plan.image_paths.get(warm_rec.id))
        samples.append(_to_sample(warm_rec, 0, result, discarded=True))

        for image_id in ids:
            rec = dataset.record(image_id)
            path = plan.image_paths.get(image_id)
            for k in range(plan.repetitions):
                result = _detect_guarded(backend, rec, path)
                samples.append(_to_sample(rec, k, result, discarded=False))
                if result.outcome != "ok":
                    break
    finally:
        backend.stop()
    return samples


def _detect_guarded(backend: DetectorBackend, rec: ImageRecord, path: Path | None) -> BackendResult:
    try:
        return backend.detect(rec, path)
    except Exception as exc:  # per-image failures are recorded, the run continues
        return BackendResult("backend-error", message=f"{type(exc).__name__}: {exc}")


def runnable_fraction(samples: list[BenchSample]) -> float:
    """Share of attempted images whose runs all completed, warm-up excluded."""
    measured = [s for s in samples if not s.discarded]
    if not measured:
        raise ValueError("no measured samples")
    attempted: dict[str, bool] = {}
    for s in measured:
        attempted[s.image_id] = attempted.get(s.image_id, True) and s.outcome == "ok"
    return sum(attempted.values()) / len(attempted)


@dataclass(frozen=True)
class ImageStats:
    """Per-image aggregate over non-discarded repetitions."""

    image_id: str
    runs_ok: int
    mean_wall_time_s: float | None
    mean_peak_rss_bytes: float | None
    mean_final_swap_bytes: float | None
    oom: bool
    error: bool


def aggregate(samples: list[BenchSample]) -> dict[str, ImageStats]:
    """Reduce samples to per-image means; invariant under sample permutation."""
    by_image: dict[str, list[BenchSample]] = {}
    for s in samples:
        if s.discarded:
            continue
        by_image.setdefault(s.image_id, []).append(s)

    def _mean(values: list[float]) -> float | None:
        return sum(values) / len(values) if values else None

    stats = {}
    for image_id, group in by_image.items():
        ok = [s for s in group if s.outcome == "ok"]
        stats[image_id] = ImageStats(
            image_id=image_id,
            runs_ok=len(ok),
            mean_wall_time_s=_mean([s.wall_time_s for s in ok if s.wall_time_s is not None]),
            mean_peak_rss_bytes=_mean([float(s.peak_rss_bytes) for s in ok if s.peak_rss_bytes is not None]),
            mean_final_swap_bytes=_mean([float(s.final_swap_bytes) for s in ok if s.final_swap_bytes is not None]),
            oom=any(s.outcome == "oom" for s in group),
            error=any(s.outcome == "backend-error" for s in group),
        )
    return stats

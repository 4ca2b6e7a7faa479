"""Benchmark harness: backends, measurement protocol, sample persistence."""

from .backends import (
    BackendResult,
    DetectorBackend,
    ExternalProcessBackend,
    ReplayBackend,
    SyntheticBackend,
    backend_from_spec,
)
from .memory import MemorySampler, sample_memory
from .runner import (
    ORDER_AS_LISTED,
    ORDER_BY_PIXELS,
    BenchPlan,
    BenchSample,
    ImageStats,
    aggregate,
    order_by_pixels,
    run_benchmark,
    runnable_fraction,
)
from .samples_io import format_samples, parse_samples, read_samples, write_samples

__all__ = [
    "BackendResult",
    "DetectorBackend",
    "ExternalProcessBackend",
    "ReplayBackend",
    "SyntheticBackend",
    "backend_from_spec",
    "MemorySampler",
    "sample_memory",
    "ORDER_AS_LISTED",
    "ORDER_BY_PIXELS",
    "BenchPlan",
    "BenchSample",
    "ImageStats",
    "aggregate",
    "order_by_pixels",
    "run_benchmark",
    "runnable_fraction",
    "format_samples",
    "parse_samples",
    "read_samples",
    "write_samples",
]

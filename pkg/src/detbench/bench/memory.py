"""Memory observation for measured processes.

A sampler thread polls the target's resident set and the system swap while
the measured process runs; the harness reads back the peak RSS and the
final swap level. Missing metrics degrade to None instead of aborting a
run.
"""

from __future__ import annotations

import threading

import psutil


class MemorySampler:
    """Polls one process at a fixed interval until stopped.

    Peak RSS is the maximum observed resident size; final swap is the last
    system swap-in-use reading taken before the process went idle or
    exited. Both are None when the platform never yielded the metric.
    """

    def __init__(self, pid: int, interval_s: float = 0.05) -> None:
        self.pid = pid
        self.interval_s = interval_s
        self._peak_rss: int | None = None
        self._final_swap: int | None = None
        self._stop = threading.Event()
        self._thread = threading.Thread(target=self._run, daemon=True)

    def start(self) -> "MemorySampler":
        self._thread.start()
        return self

    def _sample_once(self) -> bool:
        try:
            rss = psutil.Process(self.pid).memory_info().rss
        except (psutil.NoSuchProcess, psutil.AccessDenied):
            return False
        if self._peak_rss is None or rss > self._peak_rss:
            self._peak_rss = rss
        try:
            self._final_swap = psutil.swap_memory().used
        except (RuntimeError, OSError):
            pass
        return True

    def _run(self) -> None:
        while not self._stop.is_set():
            if not self._sample_once():
                return
            self._stop.wait(self.interval_s)

    def stop(self) -> tuple[int | None, int | None]:
        """Take a last sample, stop the thread, return (peak_rss, final_swap)."""
        self._sample_once()
        self._stop.set()
        self._thread.join(timeout=5.0)
        return self._peak_rss, self._final_swap

    @property
    def peak_rss(self) -> int | None:
        return self._peak_rss


def sample_memory(process, interval_s: float = 0.05) -> tuple[int | None, int | None]:
    """Sample a Popen-like handle until it exits; returns (peak_rss, final_swap)."""
    sampler = MemorySampler(process.pid, interval_s).start()
    process.wait()
    return sampler.stop()

"""Detector backends: synthetic model, detection replay, external process.

The external-process backend speaks a line protocol over the child's
stdin/stdout (UTF-8, LF):

    harness -> backend:  DETECT <image-path>
    backend -> harness:  TIME <seconds>  then zero or more
                         DET <category> <confidence> <xmin> <ymin> <xmax> <ymax>
                         then END
    on failure:          OOM  or  ERR <message>,  then END
    shutdown:            harness sends QUIT, backend exits 0

Any deviation from the grammar marks the sample backend-error.
"""

from __future__ import annotations

import os
import select
import shlex
import subprocess
import time
from dataclasses import dataclass
from pathlib import Path

from ..annotations import parse_detections
from ..core import Detection, HBB, ImageRecord
from ..errors import BackendStartError, MalformedAnnotationError, ProtocolError
from .memory import MemorySampler

SYNTHETIC_BYTES_PER_PIXEL = 4


@dataclass(frozen=True)
class BackendResult:
    """Outcome of one detect call, before it becomes a BenchSample."""

    outcome: str  # ok | oom | backend-error
    backend_time_s: float | None = None
    harness_time_s: float | None = None
    detections: tuple[Detection, ...] = ()
    peak_rss_bytes: int | None = None
    final_swap_bytes: int | None = None
    message: str = ""


class DetectorBackend:
    """Base class; subclasses implement detect()."""

    id: str = "backend"
    model_input_side: int | None = None

    def start(self) -> None:
        pass

    def stop(self) -> None:
        pass

    def detect(self, rec: ImageRecord, image_path: Path | None = None) -> BackendResult:
        raise NotImplementedError


class SyntheticBackend(DetectorBackend):
    """Closed-form backend: time = overhead + coeff * pixels, OOM above a pixel limit.

    Deterministic by construction, so protocol invariants (ordering,
    monotonicity, runnable fractions) can be asserted exactly.
    """

    def __init__(
        self,
        backend_id: str = "synthetic",
        memory_limit_pixels: int = 2**62,
        seconds_per_pixel: float = 1e-8,
        overhead_seconds: float = 0.05,
        model_input_side: int | None = None,
    ) -> None:
        if seconds_per_pixel <= 0 or overhead_seconds < 0:
            raise ValueError("synthetic model needs coeff > 0 and overhead >= 0")
        self.id = backend_id
        self.memory_limit_pixels = memory_limit_pixels
        self.seconds_per_pixel = seconds_per_pixel
        self.overhead_seconds = overhead_seconds
        self.model_input_side = model_input_side

    def detect(self, rec: ImageRecord, image_path: Path | None = None) -> BackendResult:
        pixels = rec.total_pixels
        rss = SYNTHETIC_BYTES_PER_PIXEL * pixels
        if pixels > self.memory_limit_pixels:
            swap = SYNTHETIC_BYTES_PER_PIXEL * (pixels - self.memory_limit_pixels)
            return BackendResult("oom", peak_rss_bytes=rss, final_swap_bytes=swap)
        t = self.overhead_seconds + self.seconds_per_pixel * pixels
        return BackendResult("ok", backend_time_s=t, peak_rss_bytes=rss, final_swap_bytes=0)


class ReplayBackend(DetectorBackend):
    """Replays recorded detection files, one <image-id>.txt per image."""

    def __init__(self, directory: str | Path, backend_id: str = "replay") -> None:
        self.id = backend_id
        self.directory = Path(directory)

    def detection_path(self, image_id: str) -> Path:
        return self.directory / f"{image_id}.txt"

    def detect(self, rec: ImageRecord, image_path: Path | None = None) -> BackendResult:
        t0 = time.perf_counter()
        path = self.detection_path(rec.id)
        if not path.is_file():
            return BackendResult("backend-error", message=f"no recorded detections for {rec.id}")
        try:
            dets = tuple(parse_detections(path.read_text(encoding="utf-8")))
        except MalformedAnnotationError as exc:
            return BackendResult("backend-error", message=str(exc))
        elapsed = max(time.perf_counter() - t0, 1e-9)
        return BackendResult("ok", harness_time_s=elapsed, detections=dets)


class _LineReader:
    """Reads LF-terminated lines from a pipe fd with a timeout."""

    def __init__(self, fd: int) -> None:
        self.fd = fd
        self.buf = b""
        self.eof = False

    def readline(self, timeout_s: float) -> str | None:
        deadline = time.monotonic() + timeout_s
        while b"\n" not in self.buf:
            if self.eof:
                return None
            remaining = deadline - time.monotonic()
            if remaining <= 0:
                raise ProtocolError(f"backend response timed out after {timeout_s}s")
            ready, _, _ = select.select([self.fd], [], [], remaining)
            if not ready:
                continue
            chunk = os.read(self.fd, 65536)
            if not chunk:
                self.eof = True
                if b"\n" not in self.buf:
                    return None
                break
            self.buf += chunk
        line, self.buf = self.buf.split(b"\n", 1)
        return line.decode("utf-8", errors="replace").rstrip("\r")


def _parse_det_line(fields: list[str]) -> Detection:
    if len(fields) != 7:
        raise ProtocolError(f"DET line needs 7 fields, got {len(fields)}")
    try:
        conf, xmin, ymin, xmax, ymax = (float(v) for v in fields[2:])
        return Detection(HBB(xmin, ymin, xmax, ymax), fields[1], conf)
    except ValueError as exc:
        raise ProtocolError(f"bad DET line: {exc}") from exc


@dataclass
class _Response:
    outcome: str
    time_s: float | None = None
    detections: tuple[Detection, ...] = ()
    message: str = ""


class ExternalProcessBackend(DetectorBackend):
    """Drives a detector child process over the line protocol.

    Default mode starts a fresh process per image run, mirroring the
    isolate-every-measurement discipline; persistent mode keeps one child
    for the whole benchmark (faster, but warm-up behaves differently and
    reports label the mode). A protocol violation leaves the child's
    output stream in an unknown state, so the session is torn down and
    respawned before the next request.
    """

    def __init__(
        self,
        command: str | list[str],
        backend_id: str = "process",
        persistent: bool = False,
        sample_interval_s: float = 0.05,
        response_timeout_s: float = 120.0,
        model_input_side: int | None = None,
    ) -> None:
        self.id = backend_id
        self.argv = shlex.split(command) if isinstance(command, str) else list(command)
        self.persistent = persistent
        self.sample_interval_s = sample_interval_s
        self.response_timeout_s = response_timeout_s
        self.model_input_side = model_input_side
        self._proc: subprocess.Popen | None = None
        self._reader: _LineReader | None = None

    def _spawn(self) -> None:
        try:
            self._proc = subprocess.Popen(
                self.argv,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                stderr=subprocess.PIPE,
            )
        except OSError as exc:
            raise BackendStartError(f"cannot start backend {self.argv!r}: {exc}") from exc
        assert self._proc.stdout is not None
        self._reader = _LineReader(self._proc.stdout.fileno())

    def start(self) -> None:
        if self.persistent:
            self._spawn()

    def stop(self) -> None:
        self._shutdown()

    def _shutdown(self) -> None:
        proc = self._proc
        if proc is None:
            return
        try:
            if proc.poll() is None and proc.stdin is not None:
                proc.stdin.write(b"QUIT\n")
                proc.stdin.flush()
            proc.wait(timeout=10.0)
        except (OSError, subprocess.TimeoutExpired):
            proc.kill()
            proc.wait()
        finally:
            for stream in (proc.stdin, proc.stdout, proc.stderr):
                if stream is not None:
                    stream.close()
            self._proc = None
            self._reader = None

    def _send(self, line: str) -> None:
        assert self._proc is not None and self._proc.stdin is not None
        try:
            self._proc.stdin.write(line.encode("utf-8") + b"\n")
            self._proc.stdin.flush()
        except (BrokenPipeError, OSError) as exc:
            raise ProtocolError(f"backend pipe closed: {exc}") from exc

    def _read_response(self) -> _Response:
        assert self._reader is not None
        first = self._reader.readline(self.response_timeout_s)
        if first is None:
            raise ProtocolError("backend closed its output mid-request")
        fields = first.split()
        if not fields:
            raise ProtocolError("blank line where a response header was expected")
        if fields[0] == "TIME" and len(fields) == 2:
            try:
                t = float(fields[1])
            except ValueError as exc:
                raise ProtocolError(f"bad TIME value {fields[1]!r}") from exc
            if t <= 0:
                raise ProtocolError(f"non-positive TIME {t}")
            dets: list[Detection] = []
            while True:
                line = self._reader.readline(self.response_timeout_s)
                if line is None:
                    raise ProtocolError("EOF before END")
                if line == "END":
                    return _Response("ok", time_s=t, detections=tuple(dets))
                parts = line.split()
                if parts and parts[0] == "DET":
                    dets.append(_parse_det_line(parts))
                else:
                    raise ProtocolError(f"unexpected line in detection block: {line!r}")
        if fields[0] == "OOM":
            self._expect_end()
            return _Response("oom")
        if fields[0] == "ERR":
            msg = first[4:].strip()
            self._expect_end()
            return _Response("backend-error", message=msg or "backend error")
        raise ProtocolError(f"unexpected response header: {first!r}")

    def _expect_end(self) -> None:
        assert self._reader is not None
        line = self._reader.readline(self.response_timeout_s)
        if line != "END":
            raise ProtocolError(f"expected END, got {line!r}")

    def _classify_failure(self, exc: ProtocolError) -> BackendResult:
        proc = self._proc
        rc = proc.poll() if proc is not None else None
        stderr_tail = ""
        if proc is not None and rc is not None and proc.stderr is not None:
            try:
                stderr_tail = proc.stderr.read().decode("utf-8", errors="replace")[-2000:]
            except (OSError, ValueError):
                pass
        # Killed by the OS, or died complaining about memory: count as OOM.
        if rc is not None and rc < 0:
            return BackendResult("oom", message=f"killed by signal {-rc}")
        blob = stderr_tail.lower()
        if rc not in (None, 0) and ("out of memory" in blob or "oom" in blob or "resource exhaust" in blob):
            return BackendResult("oom", message=stderr_tail.strip()[-500:])
        return BackendResult("backend-error", message=str(exc))

    def detect(self, rec: ImageRecord, image_path: Path | None = None) -> BackendResult:
        if image_path is None:
            return BackendResult("backend-error", message=f"no image path for {rec.id}")
        fresh = not self.persistent
        if fresh or self._proc is None or self._proc.poll() is not None:
            # persistent sessions are respawned after a death or a poisoning
            self._shutdown()
            self._spawn()
        assert self._proc is not None
        sampler = MemorySampler(self._proc.pid, self.sample_interval_s).start()
        t0 = time.perf_counter()
        poisoned = False
        try:
            self._send(f"DETECT {image_path}")
            resp = self._read_response()
        except ProtocolError as exc:
            result = self._classify_failure(exc)
            # a protocol violation leaves the stream in an unknown state
            poisoned = True
        else:
            result = BackendResult(
                resp.outcome,
                backend_time_s=resp.time_s,
                detections=resp.detections,
                message=resp.message,
            )
        harness_time = max(time.perf_counter() - t0, 1e-9)
        if fresh or poisoned:
            self._shutdown()
        peak_rss, final_swap = sampler.stop()
        return BackendResult(
            result.outcome,
            backend_time_s=result.backend_time_s,
            harness_time_s=harness_time,
            detections=result.detections,
            peak_rss_bytes=peak_rss,
            final_swap_bytes=final_swap,
            message=result.message,
        )


def backend_from_spec(spec: str) -> DetectorBackend:
    """Build a backend from a CLI spec string.

    Forms: ``synthetic[:limit=N,coeff=F,overhead=F]``, ``replay:<dir>``,
    ``process:<command line>``, ``process-persistent:<command line>``.
    """
    kind, _, arg = spec.partition(":")
    if kind == "synthetic":
        kwargs: dict[str, float | int] = {}
        if arg:
            for item in arg.split(","):
                key, _, val = item.partition("=")
                key = key.strip()
                if key == "limit":
                    kwargs["memory_limit_pixels"] = int(float(val))
                elif key == "coeff":
                    kwargs["seconds_per_pixel"] = float(val)
                elif key == "overhead":
                    kwargs["overhead_seconds"] = float(val)
                else:
                    raise ValueError(f"unknown synthetic backend option {key!r}")
        return SyntheticBackend(**kwargs)  # type: ignore[arg-type]
    if kind == "replay":
        if not arg:
            raise ValueError("replay backend needs a directory: replay:<dir>")
        return ReplayBackend(arg)
    if kind in ("process", "process-persistent"):
        if not arg:
            raise ValueError("process backend needs a command line")
        return ExternalProcessBackend(arg, persistent=(kind == "process-persistent"))
    raise ValueError(f"unknown backend spec {spec!r}")

"""Line-delimited persistence for benchmark samples.

One sample per line, tab-separated, fixed field order:

    image_id  run_index  outcome  wall_time_s  peak_rss_bytes  final_swap_bytes  discarded_flag  message

Missing numeric fields are written as "-"; the message is "-" when empty.
Floats use shortest round-trip formatting, so parse(write(s)) == s for the
persisted fields. Detections are not stored here (they live in per-image
detection files).
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable

from .runner import BenchSample

_HEADER = "# image_id\trun_index\toutcome\twall_time_s\tpeak_rss_bytes\tfinal_swap_bytes\tdiscarded_flag\tmessage"


def _opt(value) -> str:
    return "-" if value is None else repr(value) if isinstance(value, float) else str(value)


def format_samples(samples: Iterable[BenchSample]) -> str:
    lines = [_HEADER]
    for s in samples:
        msg = s.message.replace("\t", " ").replace("\n", " ") if s.message else "-"
        lines.append(
            "\t".join(
                (
                    s.image_id,
                    str(s.run_index),
                    s.outcome,
                    _opt(s.wall_time_s),
                    _opt(s.peak_rss_bytes),
                    _opt(s.final_swap_bytes),
                    "1" if s.discarded else "0",
                    msg,
                )
            )
        )
    return "\n".join(lines) + "\n"


def parse_samples(text: str) -> list[BenchSample]:
    samples = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\n")
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 8:
            raise ValueError(f"samples line {lineno}: expected 8 tab-separated fields, got {len(fields)}")
        image_id, run_index, outcome, wall, rss, swap, discarded, msg = fields
        samples.append(
            BenchSample(
                image_id=image_id,
                run_index=int(run_index),
                outcome=outcome,
                wall_time_s=None if wall == "-" else float(wall),
                peak_rss_bytes=None if rss == "-" else int(rss),
                final_swap_bytes=None if swap == "-" else int(swap),
                discarded=discarded == "1",
                message="" if msg == "-" else msg,
            )
        )
    return samples


def write_samples(samples: Iterable[BenchSample], path: str | Path) -> None:
    Path(path).write_text(format_samples(samples), encoding="utf-8")


def read_samples(path: str | Path) -> list[BenchSample]:
    return parse_samples(Path(path).read_text(encoding="utf-8"))

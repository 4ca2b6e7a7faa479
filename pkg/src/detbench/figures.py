"""Static vector figures for benchmark comparisons.

Figure content is built as plain data first so tests can assert on marker
counts without parsing SVG; rendering happens through the Agg backend.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


@dataclass(frozen=True)
class ScatterPoint:
    image_id: str
    total_pixels: int
    time_s: float | None
    oom: bool


@dataclass(frozen=True)
class ScatterFigure:
    series: dict[str, tuple[ScatterPoint, ...]]

    def oom_points(self) -> list[tuple[str, ScatterPoint]]:
        return [(label, p) for label, pts in self.series.items() for p in pts if p.oom]


def build_time_scatter(per_image_by_label: dict[str, dict[str, dict]]) -> ScatterFigure:
    """Arrange per-image stats into scatter series of pixels vs mean time.

    Input maps a series label to {image_id: {"total_pixels", "mean_wall_time_s",
    "oom"}} entries, the shape stored in bench report JSON.
    """
    series = {}
    for label, per_image in per_image_by_label.items():
        pts = []
        for image_id in sorted(per_image):
            entry = per_image[image_id]
            pts.append(
                ScatterPoint(
                    image_id=image_id,
                    total_pixels=int(entry["total_pixels"]),
                    time_s=entry.get("mean_wall_time_s"),
                    oom=bool(entry.get("oom")),
                )
            )
        series[label] = tuple(pts)
    return ScatterFigure(series=series)


def render_time_scatter(fig_data: ScatterFigure, path: str | Path) -> None:
    """Draw total pixels vs mean time; OOM images get a red X at the top."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    finite_times = [
        p.time_s for pts in fig_data.series.values() for p in pts if p.time_s is not None
    ]
    oom_y = max(finite_times, default=1.0) * 1.05
    for label, pts in fig_data.series.items():
        xs = [p.total_pixels for p in pts if not p.oom and p.time_s is not None]
        ys = [p.time_s for p in pts if not p.oom and p.time_s is not None]
        ax.scatter(xs, ys, s=18, label=label)
        oom_xs = [p.total_pixels for p in pts if p.oom]
        if oom_xs:
            ax.scatter(oom_xs, [oom_y] * len(oom_xs), marker="x", c="red", s=48, label=f"{label} OOM")
    ax.set_xlabel("total pixels")
    ax.set_ylabel("mean detection time [s]")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(str(path), format="svg")
    plt.close(fig)

"""Annotation transforms matching the image-modification steps."""

from __future__ import annotations

from ..core import GroundTruthBox, Quad, hbb_from_quad


def transform_annotations_scale(boxes: list[GroundTruthBox], percent: float) -> list[GroundTruthBox]:
    """Scale every coordinate by percent/100, keeping classes and flags.

    Box count is preserved; areas scale by (percent/100)^2.
    """
    if not 0 < percent <= 100:
        raise ValueError(f"scale percent must be in (0, 100], got {percent}")
    factor = percent / 100.0
    out = []
    for gt in boxes:
        quad = Quad(tuple((x * factor, y * factor) for x, y in gt.quad.points))
        out.append(
            GroundTruthBox(
                quad=quad,
                hbb=hbb_from_quad(quad),
                category=gt.category,
                difficulty=gt.difficulty,
            )
        )
    return out

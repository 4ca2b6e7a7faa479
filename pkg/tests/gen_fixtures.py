"""Regenerates the bundled accuracy fixtures under tests/data/fixtures/.

The fixtures mirror the class compositions and accuracy outcomes of three
reference scenes: a harbor scene (54 ships of which 25 are found, 90 small
vehicles none of which are found, one ground-track-field found at IoU
0.8219 / confidence 0.9684), a square-tiled airfield (32 of 74 planes
found), and a wide airfield strip at 80% scale where elongated predicted
boxes leave only 1 of 221 planes found. Deterministic; run from the repo
root: python tests/gen_fixtures.py
"""

from __future__ import annotations

from pathlib import Path

from detbench.annotations import format_ground_truth, write_detections
from detbench.core import Detection, GroundTruthBox, HBB, Quad

DATA = Path(__file__).parent / "data" / "fixtures"


def _gt(x0: float, y0: float, w: float, h: float, category: str) -> GroundTruthBox:
    quad = Quad(((x0, y0), (x0 + w, y0), (x0 + w, y0 + h), (x0, y0 + h)))
    return GroundTruthBox.from_quad(quad, category)


def _det(gt: GroundTruthBox, conf: float, shift_x: float = 0.0, widen: float = 0.0) -> Detection:
    b = gt.hbb
    return Detection(HBB(b.xmin + shift_x - widen, b.ymin, b.xmax + shift_x + widen, b.ymax), gt.category, conf)


def harbor_scene() -> tuple[list[GroundTruthBox], list[Detection]]:
    gts: list[GroundTruthBox] = []
    dets: list[Detection] = []

    # 54 ships on a 9x6 grid; the first 25 get exact detections, the next 8
    # get drifted boxes at IoU 1/3 (kept as false positives), the rest none.
    ships = [_gt(100 + (k % 9) * 200, 100 + (k // 9) * 200, 60, 25, "ship") for k in range(54)]
    gts.extend(ships)
    dets.extend(_det(g, 0.9) for g in ships[:25])
    dets.extend(_det(g, 0.8, shift_x=30) for g in ships[25:33])

    # 90 small vehicles; every detection drifts to IoU 1/3, so none count.
    vehicles = [_gt(2000 + (k % 10) * 100, 1500 + (k // 10) * 60, 12, 8, "small-vehicle") for k in range(90)]
    gts.extend(vehicles)
    dets.extend(_det(g, 0.7, shift_x=6) for g in vehicles[:12])

    # One ground-track-field, found with IoU (w-s)/(w+s) = 0.8219.
    field = _gt(3200, 1400, 480, 375, "ground-track-field")
    gts.append(field)
    shift = 480 * (1 - 0.8219) / (1 + 0.8219)
    dets.append(_det(field, 0.9684, shift_x=shift))
    return gts, dets


def square_airfield() -> tuple[list[GroundTruthBox], list[Detection]]:
    # 74 planes inside a 4287x4287 tile; 32 exact hits, 30 boxes widened to
    # 3x their width (IoU 1/3), 12 planes missed outright.
    gts = [_gt(200 + (k % 9) * 400, 200 + (k // 9) * 400, 80, 80, "plane") for k in range(74)]
    dets = [_det(g, 0.92) for g in gts[:32]]
    dets += [_det(g, 0.77, widen=80) for g in gts[32:62]]
    return gts, dets


def strip_airfield() -> tuple[list[GroundTruthBox], list[Detection]]:
    # 221 planes across a wide 80%-scaled strip; the detector draws
    # rectangle-shaped boxes (3x too wide, IoU 1/3) everywhere except one.
    gts = [_gt(150 + (k % 15) * 250, 150 + (k // 15) * 250, 64, 64, "plane") for k in range(221)]
    dets = [_det(gts[0], 0.95)]
    dets += [_det(g, 0.85, widen=64) for g in gts[1:201]]
    return gts, dets


def write_scene(name: str, header: str, gts: list[GroundTruthBox], dets: list[Detection]) -> None:
    gt_dir = DATA / "gt"
    det_dir = DATA / "det"
    gt_dir.mkdir(parents=True, exist_ok=True)
    det_dir.mkdir(parents=True, exist_ok=True)
    (gt_dir / f"{name}.txt").write_text(header + format_ground_truth(gts), encoding="utf-8")
    (det_dir / f"{name}.txt").write_text(write_detections(dets), encoding="utf-8")


def main() -> None:
    write_scene("harbor", "imagesource:fixture\ngsd:0.5\n", *harbor_scene())
    write_scene("square_airfield", "imagesource:fixture\ngsd:0.3\n", *square_airfield())
    write_scene("strip_airfield", "imagesource:fixture\ngsd:0.3\n", *strip_airfield())
    print(f"fixtures written under {DATA}")


if __name__ == "__main__":
    main()

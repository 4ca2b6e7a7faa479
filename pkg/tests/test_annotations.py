"""Label, detection, and label-map parsing."""

from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from detbench.annotations import (
    DOTA_CLASS_NAMES,
    DOTA_LABEL_MAP,
    DatasetIndex,
    LabelMap,
    format_ground_truth,
    load_label_map,
    parse_detections,
    parse_ground_truth,
    write_detections,
)
from detbench.core import Detection, HBB, ImageRecord
from detbench.errors import MalformedAnnotationError

FIXTURES = Path(__file__).parent / "data" / "fixtures"

BLOCK_MAP = """
item {
  id: 1
  name: 'plane'
}
item {
  id: 2
  name: "ship"
}
"""


class TestLabelMap:
    def test_dota_map_has_15_classes(self):
        assert len(DOTA_LABEL_MAP) == 15
        assert len(DOTA_CLASS_NAMES) == 15
        assert "ground-track-field" in DOTA_LABEL_MAP

    def test_block_format(self):
        lm = load_label_map(BLOCK_MAP)
        assert lm.entries == ((1, "plane"), (2, "ship"))

    def test_plain_format(self):
        lm = load_label_map("1\tplane\n2\tship\n")
        assert lm.names == ("plane", "ship")
        assert lm.id_of("ship") == 2
        assert lm.name_of(1) == "plane"

    def test_single_entry(self):
        assert len(load_label_map("1 plane\n")) == 1

    def test_duplicate_name_rejected(self):
        with pytest.raises(MalformedAnnotationError):
            load_label_map("1 plane\n2 plane\n")

    def test_duplicate_id_rejected(self):
        with pytest.raises(MalformedAnnotationError):
            LabelMap(((1, "a"), (1, "b")))

    def test_non_contiguous_ids_rejected(self):
        with pytest.raises(MalformedAnnotationError):
            load_label_map("1 plane\n3 ship\n")


class TestParseGroundTruth:
    def test_single_record(self):
        boxes = parse_ground_truth("0 0 10 0 10 10 0 10 plane 0")
        assert len(boxes) == 1
        gt = boxes[0]
        assert gt.category == "plane"
        assert gt.hbb == HBB(0, 0, 10, 10)
        assert gt.difficulty == 0

    def test_empty_file(self):
        assert parse_ground_truth("") == []

    def test_headers_skipped(self):
        text = "imagesource:GoogleEarth\ngsd:0.146\n0 0 4 0 4 4 0 4 ship 1\n"
        boxes = parse_ground_truth(text)
        assert len(boxes) == 1
        assert boxes[0].difficulty == 1

    def test_wrong_field_count_names_line(self):
        text = "0 0 4 0 4 4 0 4 ship 1\n1 2 3\n"
        with pytest.raises(MalformedAnnotationError, match="line 2"):
            parse_ground_truth(text)

    def test_unknown_category_listed(self):
        with pytest.raises(MalformedAnnotationError, match="spaceship"):
            parse_ground_truth("0 0 4 0 4 4 0 4 spaceship 0", DOTA_LABEL_MAP)

    def test_bad_difficulty(self):
        with pytest.raises(MalformedAnnotationError, match="difficulty"):
            parse_ground_truth("0 0 4 0 4 4 0 4 ship 7")

    def test_harbor_fixture_composition(self):
        text = (FIXTURES / "gt" / "harbor.txt").read_text()
        boxes = parse_ground_truth(text, DOTA_LABEL_MAP)
        by_class = {}
        for b in boxes:
            by_class[b.category] = by_class.get(b.category, 0) + 1
        assert by_class == {"ship": 54, "small-vehicle": 90, "ground-track-field": 1}

    def test_no_silent_drops(self):
        # parsed records + raised errors account for every content line
        text = "imagesource:x\n\n0 0 4 0 4 4 0 4 ship 0\n0 0 4 0 4 4 0 4 ship 0\n"
        content_lines = [
            l for l in text.splitlines() if l.strip() and ":" not in l.split()[0]
        ]
        assert len(parse_ground_truth(text)) == len(content_lines)

    def test_round_trip_through_formatter(self):
        boxes = parse_ground_truth("1 2 10 2 10 9 1 9 harbor 1\n")
        assert parse_ground_truth(format_ground_truth(boxes)) == boxes


def detection_strategy():
    coords = st.floats(0, 4000, allow_nan=False, allow_infinity=False)
    return st.builds(
        lambda x0, y0, dx, dy, conf, cat: Detection(HBB(x0, y0, x0 + dx, y0 + dy), cat, conf),
        coords,
        coords,
        st.floats(0, 500, allow_nan=False, allow_infinity=False),
        st.floats(0, 500, allow_nan=False, allow_infinity=False),
        st.floats(0, 1),
        st.sampled_from(DOTA_CLASS_NAMES),
    )


class TestDetectionFiles:
    def test_empty_round_trip(self):
        assert write_detections([]) == ""
        assert parse_detections("") == []

    def test_single_detection_bit_exact(self):
        det = Detection(HBB(10.25, 20.5, 330.125, 440.75), "ground-track-field", 0.9684)
        text = write_detections([det], DOTA_LABEL_MAP)
        assert text == "ground-track-field 0.9684 10.25 20.5 330.125 440.75\n"
        assert parse_detections(text, DOTA_LABEL_MAP) == [det]

    def test_comments_ignored(self):
        text = "# produced by a detector\nplane 0.5 0 0 1 1\n"
        assert len(parse_detections(text)) == 1

    def test_confidence_out_of_range_rejected(self):
        with pytest.raises(MalformedAnnotationError, match="line 1"):
            parse_detections("plane 1.5 0 0 1 1")

    def test_inverted_box_rejected(self):
        with pytest.raises(MalformedAnnotationError):
            parse_detections("plane 0.5 10 0 1 1")

    def test_unknown_category_rejected_on_write(self):
        det = Detection(HBB(0, 0, 1, 1), "spaceship", 0.5)
        with pytest.raises(MalformedAnnotationError):
            write_detections([det], DOTA_LABEL_MAP)

    @given(st.lists(detection_strategy(), max_size=20))
    def test_round_trip_identity(self, dets):
        assert parse_detections(write_detections(dets)) == dets

    def test_round_trip_1000_random(self, rng):
        dets = []
        for _ in range(1000):
            x0, y0 = rng.uniform(0, 5000, 2)
            w, h = rng.uniform(0, 800, 2)
            dets.append(
                Detection(
                    HBB(float(x0), float(y0), float(x0 + w), float(y0 + h)),
                    str(rng.choice(DOTA_CLASS_NAMES)),
                    float(rng.uniform(0, 1)),
                )
            )
        assert parse_detections(write_detections(dets)) == dets


class TestDatasetIndex:
    def test_stray_annotation_rejected(self):
        rec = ImageRecord("A", 10, 10)
        with pytest.raises(ValueError):
            DatasetIndex(images=(rec,), annotations={"B": ()})

    def test_duplicate_ids_rejected(self):
        rec = ImageRecord("A", 10, 10)
        with pytest.raises(ValueError):
            DatasetIndex(images=(rec, rec), annotations={})

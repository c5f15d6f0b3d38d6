import json

import pytest

from fractent.errors import RegionParseError
from fractent.families import chessboard, sierpinski
from fractent.io import read_region, region_from_ascii, region_to_ascii, sidecar_path, write_region
from fractent.region import Region, count_features


def test_ascii_top_row_first():
    r = Region.from_cells([(0, 0), (1, 0), (0, 1)])
    assert region_to_ascii(r) == "#.\n##\n"
    assert region_from_ascii("#.\n##\n") == r


def test_round_trip_keeps_origin_and_label(tmp_path):
    r = Region.from_cells([(-3, 5), (-2, 5), (-2, 6)], label="hook")
    path, side = write_region(tmp_path / "hook.txt", r, family=None, n=None)
    meta = json.loads(side.read_text())
    assert meta["origin_x"] == -3 and meta["origin_y"] == 5
    back, meta2 = read_region(path)
    assert back == r and back.label == "hook" and meta2 == meta


def test_round_trip_family_counts(tmp_path):
    r = sierpinski(3)
    path, _ = write_region(tmp_path / "s3.txt", r, family="sierpinski", n=3)
    back, meta = read_region(path)
    assert meta["family"] == "sierpinski" and meta["n"] == 3
    assert count_features(back) == count_features(r)


def test_periodic_round_trip(tmp_path):
    r = chessboard(6)
    path, _ = write_region(tmp_path / "c.txt", r)
    back, meta = read_region(path)
    assert meta["period"] == 6 and back.period == 6
    assert count_features(back) == count_features(r)


def test_missing_sidecar_defaults_to_origin(tmp_path):
    p = tmp_path / "x.txt"
    p.write_text("##\n")
    r, meta = read_region(p)
    assert meta == {} and r.origin == (0, 0) and len(r) == 2


def test_leading_dots_are_kept_as_offset():
    r = region_from_ascii("..#\n...\n")
    assert r.cells() == {(2, 1)}


def test_empty_text_is_empty_region():
    assert len(region_from_ascii("")) == 0
    assert len(region_from_ascii("\n\n")) == 0


@pytest.mark.parametrize("text,line", [
    ("##\n#x\n", 2),
    ("###\n##\n", 2),
    ("##\n\n##\n", 2),
    ("ab\n", 1),
])
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(RegionParseError) as exc:
        region_from_ascii(text)
    assert exc.value.lineno == line
    assert f"line {line}" in str(exc.value)


def test_bad_sidecar_is_a_parse_error(tmp_path):
    p = tmp_path / "r.txt"
    p.write_text("#\n")
    (tmp_path / "r.json").write_text("{not json")
    with pytest.raises(RegionParseError):
        read_region(p)


def test_binary_file_is_a_parse_error(tmp_path):
    p = tmp_path / "r.txt"
    p.write_bytes(b"\xff\xfe\x00")
    with pytest.raises(RegionParseError):
        read_region(p)


def test_periodic_shape_checked():
    with pytest.raises(RegionParseError):
        region_from_ascii("##\n##\n", period=3)


def test_sidecar_path_rejects_json_region():
    assert sidecar_path("a/b.txt").name == "b.json"
    with pytest.raises(ValueError):
        sidecar_path("region.json")

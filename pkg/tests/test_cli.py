import json
import subprocess
import sys

import pytest

from fractent.cli import main
from fractent.families import get_family
from fractent.io import read_region
from fractent.region import count_features


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_generate_to_stdout(capsys):
    code, out, _ = run(capsys, "generate", "--family", "sierpinski", "--n", "2")
    assert code == 0
    rows = out.splitlines()
    assert len(rows) == 9 and all(len(r) == 9 for r in rows)
    assert rows[4] == "#.#...#.#"


def test_generate_chessboard(capsys):
    code, out, _ = run(capsys, "generate", "--family", "chessboard", "--n", "1")
    assert code == 0 and out == ".#\n#.\n"


def test_generate_cap_exit_code(capsys):
    code, _, err = run(capsys, "generate", "--family", "koch", "--n", "9")
    assert code == 3 and "cap" in err


def test_bad_flags_exit_two(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["generate", "--family", "dragon", "--n", "1"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["analyze", "x.txt", "--bogus"])
    assert exc.value.code == 2
    assert run(capsys, "generate", "--family", "sierpinski", "--n", "0")[0] == 2


def test_round_trip_through_files(tmp_path, capsys):
    path = tmp_path / "s1.txt"
    assert run(capsys, "generate", "--family", "sierpinski", "--n", "1", "--out", str(path))[0] == 0
    code, out, _ = run(capsys, "analyze", str(path))
    data = json.loads(out)
    assert code == 0
    assert (data["p"], data["alpha"], data["holes"], data["s_direct"]) == (16, 0, 1, 13)
    region, _ = read_region(path)
    assert count_features(region) == get_family("sierpinski").features(1)


def test_analyze_single_cell(tmp_path, capsys):
    p = tmp_path / "one.txt"
    p.write_text("#\n")
    data = json.loads(run(capsys, "analyze", str(p), "--turns")[1])
    assert data["p"] == 4 and data["s_direct"] == 4 and data["alpha_turns"] == 0


def test_analyze_parse_error(tmp_path, capsys):
    p = tmp_path / "bad.txt"
    p.write_text("##\n#?\n")
    code, _, err = run(capsys, "analyze", str(p))
    assert code == 4 and "line 2" in err


def test_missing_file_is_usage_error(tmp_path, capsys):
    assert run(capsys, "analyze", str(tmp_path / "none.txt"))[0] == 2


def test_oracle_square(tmp_path, capsys):
    p = tmp_path / "sq.txt"
    p.write_text("###\n###\n###\n")
    data = json.loads(run(capsys, "oracle", str(p), "--L", "8")[1])
    assert data["log2_GAB"] == 11 and data["correction"] == 1
    code, _, _ = run(capsys, "oracle", str(p), "--L", "4")
    assert code == 5


def test_oracle_empty_region(tmp_path, capsys):
    p = tmp_path / "empty.txt"
    p.write_text("")
    assert json.loads(run(capsys, "oracle", str(p), "--L", "8")[1])["log2_GAB"] == 0


def test_oracle_small_torus_with_tension(tmp_path, capsys):
    p = tmp_path / "pair.txt"
    p.write_text("##\n")
    data = json.loads(run(capsys, "oracle", str(p), "--L", "3", "--margin", "0", "--mu", "1")[1])
    assert abs(data["statevector_entropy"] - data["gstate_entropy"]) < 1e-9


def test_table1_csv_and_bounds(tmp_path, capsys):
    out = tmp_path / "t.csv"
    args = ["table1", "--n", "sierpinski=2", "--n", "greek_cross=3", "--n", "minkowski=2",
            "--n", "vicsek=2", "--n", "koch=2", "--n", "moore=2", "--n", "t_square=2",
            "--n", "chessboard=2", "--out", str(out)]
    assert run(capsys, *args)[0] == 0
    first = out.read_bytes()
    assert run(capsys, *args)[0] == 0
    assert out.read_bytes() == first
    assert first.splitlines()[0].startswith(b"family,n,p_measured")
    bounds = json.loads(run(capsys, "table1", "--bounds")[1])
    assert [b["family"] for b in bounds if b["equality"]] == ["greek_cross", "t_square"]


def test_table1_bad_size(capsys):
    assert run(capsys, "table1", "--n", "dragon=3")[0] == 2
    assert run(capsys, "table1", "--n", "sierpinski")[0] == 2
    assert run(capsys, "table1", "--n", "sierpinski=9")[0] == 3


def test_render_svg_and_pgm(tmp_path, capsys):
    region = tmp_path / "v.txt"
    run(capsys, "generate", "--family", "vicsek", "--n", "2", "--out", str(region))
    svg = tmp_path / "v.svg"
    pgm = tmp_path / "v.pgm"
    assert run(capsys, "render", str(region), "--out", str(svg), "--mark-adjacent")[0] == 0
    assert svg.read_text().startswith("<svg")
    assert run(capsys, "render", str(region), "--format", "pgm", "--out", str(pgm))[0] == 0
    assert pgm.read_bytes().startswith(b"P5")
    bad = tmp_path / "bad.txt"
    bad.write_text("x\n")
    assert run(capsys, "render", str(bad))[0] == 4


def test_lsys_moore_word(capsys):
    code, out, _ = run(capsys, "lsys", "--system", "moore", "--steps", "1", "--close-moore")
    assert code == 0 and out.strip() == "-bF+aFa+Fb-F-bF+aFa+FbFbF+aFa+Fb-F-bF+aFa+FbF"
    data = json.loads(run(capsys, "lsys", "--system", "moore", "--steps", "3", "--show", "count")[1])
    assert data["F"] == 4**4 - 1


def test_lsys_path_and_region(capsys):
    data = json.loads(run(capsys, "lsys", "--system", "moore", "--steps", "2",
                          "--close-moore", "--show", "path")[1])
    assert data["closed"] and len(data["steps"]) == 64
    code, out, _ = run(capsys, "lsys", "--system", "koch", "--steps", "0", "--show", "word")
    assert out.strip() == "F"


def test_lsys_file_and_parse_error(tmp_path, capsys):
    good = tmp_path / "k.lsys"
    good.write_text("vars: F\nconsts: + -\naxiom: F\nrule: F -> F+F-F-F+F\n")
    assert run(capsys, "lsys", "--file", str(good), "--steps", "1")[1].strip() == "F+F-F-F+F"
    bad = tmp_path / "bad.lsys"
    bad.write_text("vars: F\naxiom: Q\n")
    code, _, err = run(capsys, "lsys", "--file", str(bad), "--steps", "1")
    assert code == 4 and "line 2" in err


def test_lsys_word_cap(capsys):
    assert run(capsys, "lsys", "--system", "koch", "--steps", "14")[0] == 3


def test_console_script_entry_point():
    res = subprocess.run([sys.executable, "-m", "fractent.cli", "generate", "--family", "vicsek",
                          "--n", "1"], capture_output=True, text=True, check=True)
    assert res.stdout == "#.#\n.#.\n#.#\n"

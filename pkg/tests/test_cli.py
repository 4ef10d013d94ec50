import json
import xml.etree.ElementTree as ET
from pathlib import Path

import pytest

from conftest import torus
from veechpoints.cli import main
from veechpoints.numfield import Quad
from veechpoints.serialize import dump_surface

PRYM17 = Path(__file__).parents[1] / "demos" / "data" / "prym_aplus_17.json"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_decompose_golden(capsys):
    code, out, _ = run(capsys, "decompose", "--family", "h2", "--disc", "5", "--direction", "1,0")
    assert code == 0
    rep = json.loads(out)
    assert len(rep["cylinders"]) == 2
    m1, m2 = [Quad.from_ints(c["modulus"], 5) for c in rep["cylinders"]]
    assert (m1 / m2).is_rational()


def test_decompose_prym_parabolic(capsys):
    code, out, _ = run(capsys, "decompose", "--family", "prym-aplus", "--disc", "17")
    assert code == 0
    assert json.loads(out)["parabolic"] == [[[1, 1, 0, 1], [2, 1, 0, 1]], [[0, 1, 0, 1], [1, 1, 0, 1]]]


def test_decompose_vertical(capsys):
    code, out, _ = run(capsys, "decompose", "--family", "h2", "--disc", "5", "--direction", "0,1")
    assert code == 0
    rep = json.loads(out)
    assert rep["direction"] == [[0, 1, 0, 1], [1, 1, 0, 1]]
    # a vertical parabolic is lower triangular
    assert rep["parabolic"][0][1] == [0, 1, 0, 1]


def test_periodic_points_from_file(capsys, tmp_path):
    svg = tmp_path / "p.svg"
    code, out, _ = run(capsys, "periodic-points", "--surface", str(PRYM17), "--verify-orbits", "2",
                       "--render", str(svg))
    assert code == 0
    res = json.loads(out)
    assert res["verified"] is True
    assert [p["singular"] for p in res["points"]].count(False) == 3
    root = ET.parse(svg).getroot()
    assert root.get("version") == "1.1"
    groups = {g.get("id"): g for g in root.iter("{http://www.w3.org/2000/svg}g")}
    assert len(groups["periodic-points"]) == 3 and len(groups["cone-points"]) == 1
    assert len(groups["triangles"]) == 10


def test_render_to_stdout(capsys):
    code, out, _ = run(capsys, "render", "--surface", str(PRYM17))
    assert code == 0
    assert out.startswith("<?xml") and "<svg" in out


def test_cache_hit_is_byte_identical(capsys, caplog, tmp_path):
    args = ["candidates", "--surface", str(PRYM17), "--cache-dir", str(tmp_path), "-v"]
    code1, out1, _ = run(capsys, *args)
    first_log = caplog.text
    code2, out2, _ = run(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2
    assert "cache hit" not in first_log and "cache hit" in caplog.text
    files = list(tmp_path.iterdir())
    assert len(files) == 1 and files[0].read_text() == out1


def test_output_flag(capsys, tmp_path):
    dest = tmp_path / "out" / "dec.json"
    code, out, _ = run(capsys, "decompose", "--family", "h2", "--disc", "5", "-o", str(dest))
    assert code == 0 and out == ""
    assert json.loads(dest.read_text())["t"]


def test_config_precedence(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"family": "h2", "disc": 5, "direction": "0,1"}))
    _, from_cfg, _ = run(capsys, "decompose", "--config", str(cfg))
    assert json.loads(from_cfg)["direction"] == [[0, 1, 0, 1], [1, 1, 0, 1]]
    _, from_flag, _ = run(capsys, "decompose", "--config", str(cfg), "--direction", "1,0")
    assert json.loads(from_flag)["direction"] == [[1, 1, 0, 1], [0, 1, 0, 1]]
    cfg.write_text(json.dumps({"colour": "red"}))
    code, _, err = run(capsys, "decompose", "--config", str(cfg))
    assert code == 2 and "colour" in err


def test_square_torus_exit_code(capsys, tmp_path):
    path = tmp_path / "torus.json"
    dump_surface(torus(), path)
    code, out, err = run(capsys, "periodic-points", "--surface", str(path))
    assert code == 3
    assert out == "" and "square-tiled" in err


@pytest.mark.parametrize("argv", [
    ["decompose"],
    ["decompose", "--family", "h2"],
    ["decompose", "--family", "h2", "--disc", "9"],
    ["decompose", "--family", "prym-aplus", "--disc", "15"],
    ["decompose", "--family", "h2", "--disc", "5", "--direction", "0,0"],
    ["periodic-points", "--family", "h2", "--disc", "5", "--no-search"],
])
def test_invalid_input_exit_code(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code in (2, 3)
    assert err


def test_bad_surface_file(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    assert run(capsys, "segments", "--surface", str(path))[0] == 2


def test_cap_exit_code(capsys):
    code, _, err = run(capsys, "decompose", "--family", "h2", "--disc", "5", "--direction", "1,2",
                       "--max-contractions", "0")
    assert code == 4 and "cap" in err


def test_segments_command(capsys):
    code, out, _ = run(capsys, "segments", "--family", "h2", "--disc", "5")
    assert code == 0
    rep = json.loads(out)
    assert rep["segments"] and rep["regions"]

import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from voxtopo import cli, shapes
from voxtopo.io import load_volume, save_volume

GOLDEN = Path(__file__).parent / "data"
SUBCOMMANDS = ["info", "components", "repair", "analyze", "mesh", "gen"]


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def help_text(name=None):
    parser = cli.build_parser()
    if name is None:
        return parser.format_help()
    sub = next(a for a in parser._actions if a.dest == "command")
    return sub.choices[name].format_help()


@pytest.fixture(autouse=True)
def fixed_width(monkeypatch):
    monkeypatch.setenv("COLUMNS", "100")


@pytest.mark.parametrize("name", [None] + SUBCOMMANDS)
def test_help_golden(name):
    golden = GOLDEN / f"help_{name or 'main'}.txt"
    assert help_text(name) == golden.read_text()


def test_help_lists_every_flag():
    parser = cli.build_parser()
    sub = next(a for a in parser._actions if a.dest == "command")
    for name, sp in sub.choices.items():
        text = sp.format_help()
        for action in sp._actions:
            for flag in action.option_strings:
                assert flag in text, (name, flag)


@pytest.fixture
def ring_file(tmp_path):
    p = tmp_path / "ring.voxlist"
    save_volume(shapes.ring(3, 3), p)
    return p


def test_analyze_ring(ring_file, capsys):
    code, out, _ = run(["analyze", str(ring_file)], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["components"][0]["surfaces"][0]["genus"] == 1
    assert data["status"]["code"] == "ok"


def test_analyze_corner_pair_zero_budget(tmp_path, capsys):
    p = tmp_path / "corner_pair.voxlist"
    p.write_text("0 0 0\n1 1 1\n")
    code, out, err = run(["analyze", str(p), "--budget", "0"], capsys)
    assert code == 2
    assert json.loads(out)["status"]["code"] == "repair_aborted"
    assert "repair_aborted" in err


def test_gen_then_analyze(tmp_path, capsys):
    p = tmp_path / "ring.voxlist"
    assert run(["gen", "--shape", "ring", "--out", str(p)], capsys)[0] == 0
    code, out, _ = run(["analyze", str(p), "--report", "text"], capsys)
    assert code == 0
    assert "genus 1" in out


def test_gen_dvol_and_seed(tmp_path, capsys):
    a, b = tmp_path / "a.dvol", tmp_path / "b.dvol"
    run(["gen", "--shape", "random:8,8,8,0.4", "--seed", "5", "-o", str(a)], capsys)
    run(["gen", "--shape", "random:8,8,8,0.4", "--seed", "5", "-o", str(b)], capsys)
    assert a.read_bytes() == b.read_bytes() and a.read_bytes()[:4] == b"DVOL"


def test_info_and_components(ring_file, capsys):
    code, out, _ = run(["info", str(ring_file)], capsys)
    info = json.loads(out)
    assert code == 0 and info["voxels"] == 8 and info["well_composed"] is True
    code, out, _ = run(["components", str(ring_file), "--adjacency", "6"], capsys)
    comps = json.loads(out)
    assert comps["components"] == 1 and comps["cavities"] == 0
    code, out, _ = run(["info", str(ring_file), "--report", "text"], capsys)
    assert "voxels: 8" in out


def test_repair_writes_volume(tmp_path, capsys):
    src = tmp_path / "pair.voxlist"
    src.write_text("0 0 0\n1 1 1\n")
    before = src.read_bytes()
    dst = tmp_path / "fixed.dvol"
    code, out, _ = run(["repair", str(src), "-o", str(dst), "--budget", "unlimited"], capsys)
    assert code == 0
    assert json.loads(out)["deletions"] == [[0, 0, 0]]
    assert load_volume(dst).count == 1
    assert src.read_bytes() == before


def test_repair_to_stdout_and_abort(tmp_path, capsys):
    src = tmp_path / "pair.voxlist"
    src.write_text("0 0 0\n1 1 1\n")
    code, out, err = run(["repair", str(src), "--budget", "0"], capsys)
    assert code == 2
    assert out == "0 0 0\n1 1 1\n"
    assert "aborted" in err


def test_mesh(ring_file, tmp_path, capsys):
    off = tmp_path / "ring.off"
    assert run(["mesh", str(ring_file), "-o", str(off)], capsys)[0] == 0
    lines = off.read_text().splitlines()
    assert lines[0] == "OFF" and lines[1] == "32 32 0"
    pair = tmp_path / "pair.voxlist"
    pair.write_text("0 0 0\n1 1 0\n")
    assert run(["mesh", str(pair)], capsys)[0] == 2
    code, out, _ = run(["mesh", str(pair), "--repair"], capsys)
    assert code == 0 and out.startswith("OFF\n8 6 0\n")


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["bogus"],
        ["analyze"],
        ["analyze", "x.voxlist", "--budget", "-3"],
        ["analyze", "x.voxlist", "--report", "xml"],
        ["analyze", "x.unknown"],
        ["gen", "--shape", "torus:3"],
        ["gen", "--shape", "cuboid:0,1,1"],
    ],
)
def test_usage_errors(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        raise SystemExit(cli.main(argv))
    assert exc.value.code == 1


def test_flags_validated_before_reading(tmp_path, capsys):
    # the input does not exist, yet the bad flag wins
    with pytest.raises(SystemExit) as exc:
        cli.main(["analyze", str(tmp_path / "missing.voxlist"), "--adjacency", "18"])
    assert exc.value.code == 1


def test_refuses_to_overwrite_input(ring_file, capsys):
    before = ring_file.read_bytes()
    code, _, err = run(["repair", str(ring_file), "-o", str(ring_file)], capsys)
    assert code == 1 and ring_file.read_bytes() == before


def test_io_errors(tmp_path, capsys):
    assert run(["analyze", str(tmp_path / "missing.voxlist")], capsys)[0] == 3
    bad = tmp_path / "bad.voxlist"
    bad.write_text("1 2\n")
    code, _, err = run(["info", str(bad)], capsys)
    assert code == 3 and "line 1" in err
    bad = tmp_path / "bad.dvol"
    bad.write_bytes(b"nope")
    assert run(["info", str(bad)], capsys)[0] == 3


def test_json_byte_identical_across_processes(tmp_path):
    p = tmp_path / "r.dvol"
    save_volume(shapes.random_volume((10, 10, 10), 0.5, seed=11), p)
    cmd = [sys.executable, "-m", "voxtopo", "analyze", str(p), "--budget", "unlimited"]
    env = dict(os.environ, VOXTOPO_THREADS="2")
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True, env=env).stdout
    assert a == b and json.loads(a)["status"]["code"] == "ok"

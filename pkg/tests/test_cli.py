"""Command-line interface: exit codes, text and JSON output, file writing."""

import json
import subprocess
import sys

import pytest

from flatkit import cli, flatcore

from conftest import DATA, build_bad_square


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_analyze_surface_text(capsys):
    code, out, err = run_cli(capsys, "analyze", str(DATA / "octagon.json"))
    assert code == 0
    assert err == ""
    assert "stratum: H(2)" in out
    assert "genus: 2" in out
    assert "cone angles: 6pi" in out
    assert "period rank: 4" in out


def test_analyze_surface_json(capsys):
    code, out, _ = run_cli(capsys, "analyze", str(DATA / "decagon.json"), "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["genus"] == 2
    assert payload["stratum_orders"] == [1, 1]
    assert payload["period_rank"] == 5
    assert payload["kind"] == "surface"


def test_analyze_origami(capsys):
    code, out, _ = run_cli(capsys, "analyze", str(DATA / "l5.origami"))
    assert code == 0
    assert "degree: 5" in out
    assert "stratum: H(2)" in out
    assert "spin parity: 1" in out
    assert "component: connected" in out


def test_analyze_invalid_surface(tmp_path, capsys):
    path = tmp_path / "bad.json"
    flatcore.dump_surface(build_bad_square(), str(path))
    code, out, err = run_cli(capsys, "analyze", str(path))
    assert code == 1
    assert "invalid:" in err
    assert "not opposite" in err


def test_analyze_unreadable_input(tmp_path, capsys):
    path = tmp_path / "garbage.json"
    path.write_text("{ not json")
    code, _, err = run_cli(capsys, "analyze", str(path))
    assert code == 1
    assert "error:" in err
    code, _, err = run_cli(capsys, "analyze", str(tmp_path / "missing.json"))
    assert code == 1
    assert "error:" in err


def test_orbit_command(capsys):
    code, out, _ = run_cli(capsys, "orbit", str(DATA / "l3.origami"), "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["orbit_size"] == 3
    assert sorted(payload["cusp_widths"]) == [1, 2]
    assert len(payload["elements"]) == 3


def test_orbit_budget_error(capsys):
    code, _, err = run_cli(capsys, "orbit", str(DATA / "l5.origami"), "--max", "2")
    assert code == 1
    assert "budget exceeded" in err


def test_spin_command(capsys):
    code, out, _ = run_cli(capsys, "spin", str(DATA / "l5.origami"))
    assert code == 0
    assert "spin parity: 1" in out


def test_spin_undefined(tmp_path, capsys):
    path = tmp_path / "h11.origami"
    path.write_text("d: 4\nh: (2,3)\nv: (1,2)(3,4)\n")
    code, _, err = run_cli(capsys, "spin", str(path))
    assert code == 1
    assert "spin undefined" in err


def test_spin_rejects_surface(capsys):
    code, _, err = run_cli(capsys, "spin", str(DATA / "octagon.json"))
    assert code == 1
    assert "requires an origami" in err


def test_act_roundtrip(tmp_path, capsys):
    out_path = tmp_path / "sheared.json"
    code, out, _ = run_cli(
        capsys, "act", str(DATA / "octagon.json"), "--matrix", "1", "1", "0", "1",
        "-o", str(out_path),
    )
    assert code == 0
    image = flatcore.load_surface(str(out_path))
    assert flatcore.validate(image).ok
    assert str(flatcore.stratum(image)) == "H(2)"


def test_act_comma_matrix_with_negatives(capsys):
    code, out, _ = run_cli(
        capsys, "act", str(DATA / "octagon.json"), "--matrix", "3/5,-4/5,4/5,3/5"
    )
    assert code == 0
    payload = json.loads(out)
    image = flatcore.surface_from_json(payload)
    assert flatcore.validate(image).ok


def test_act_rejects_bad_matrix(capsys):
    code, _, err = run_cli(
        capsys, "act", str(DATA / "octagon.json"), "--matrix", "1", "0", "0", "-1"
    )
    assert code == 1
    assert "orientation-reversing" in err
    code, _, err = run_cli(
        capsys, "act", str(DATA / "octagon.json"), "--matrix", "1", "2", "3"
    )
    assert code == 1
    assert "4 entries" in err


def test_strata_command(capsys):
    code, out, _ = run_cli(capsys, "strata", "--genus", "3")
    assert code == 0
    assert "H(4)" in out
    assert "H(2,2)" in out
    assert "H(1,1,1,1)" in out
    assert "hyperelliptic" in out
    code, out, _ = run_cli(capsys, "strata", "--genus", "3", "--json")
    payload = json.loads(out)
    assert payload["genus"] == 3
    assert len(payload["strata"]) == 5


def test_divisor_command(capsys):
    code, out, _ = run_cli(
        capsys, "divisor", "--branch", "0,1,2,-1,3,-2", "--form", "z"
    )
    assert code == 0
    assert "W(0): order 2" in out
    assert "total order: 2" in out
    assert "holomorphic: yes" in out
    code, out, _ = run_cli(
        capsys, "divisor", "--branch", "0,1,2,-1,3,-2", "--form", "(z-10)^3", "--json"
    )
    payload = json.loads(out)
    assert payload["holomorphic"] is False
    assert payload["total_order"] == 2


def test_divisor_genus_mismatch(capsys):
    code, _, err = run_cli(
        capsys, "divisor", "--branch", "0,1,2,3", "--form", "z", "--genus", "2"
    )
    assert code == 1
    assert "genus 1" in err


def test_render_writes_svg(tmp_path, capsys):
    out_path = tmp_path / "picture.svg"
    code, out, _ = run_cli(capsys, "render", str(DATA / "octagon.json"), "-o", str(out_path))
    assert code == 0
    blob = out_path.read_text()
    assert blob.startswith("<svg")
    assert "<polygon" in blob
    assert "<circle" in blob


def test_render_default_output_name(tmp_path, capsys):
    src = tmp_path / "torus.json"
    src.write_text((DATA / "torus.json").read_text())
    code, out, _ = run_cli(capsys, "render", str(src))
    assert code == 0
    assert (tmp_path / "torus.svg").exists()


def test_console_script_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "flatkit.cli", "analyze", str(DATA / "l3.origami")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "stratum: H(2)" in proc.stdout

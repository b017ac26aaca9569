"""Command-line client: output text, formats, files, and exit codes."""

import json

import pytest
from click.testing import CliRunner

from cayenc import service
from cayenc.cli import main
from cayenc.core import parse_basis
from cayenc.engine import (
    explore,
    gf_equal,
    gf_from_json,
    make_gf,
    poly,
    rule_system_from_json,
)
from cayenc.service import VerifyResponse, VerifyRow
from cayenc.tilings import root_tiling, tiling_from_json

HARE = ["231", "312", "2121"]


@pytest.fixture()
def runner():
    return CliRunner()


def test_classify_both(runner):
    result = runner.invoke(main, ["classify", *HARE])
    assert result.exit_code == 0
    assert result.output == "vertical regular: yes\nhorizontal regular: yes\n"


def test_classify_reports_missing_classes(runner):
    result = runner.invoke(main, ["classify", "211", "312", "--mode", "vertical"])
    assert result.exit_code == 0
    assert result.output == "regular: no (missing juxtaposition classes: DI, DC)\n"


def test_gf_text(runner):
    result = runner.invoke(main, ["gf", *HARE, "--terms", "6"])
    assert result.exit_code == 0
    assert result.output == (
        "mode: vertical\n"
        "states: 9\n"
        "gf: (x - 2x^2 + 2x^3)/(1 - 5x + 6x^2 - 4x^3)\n"
        "terms: 1, 3, 11, 41, 151, 553\n"
    )


def test_gf_json_roundtrip(runner):
    result = runner.invoke(main, ["gf", *HARE, "--format", "json"])
    assert result.exit_code == 0
    g = gf_from_json(result.output)
    assert gf_equal(g, make_gf(poly((0, 1, -2, 2)), poly((1, -5, 6, -4))))
    assert json.loads(result.output)["mode"] == "vertical"


def test_count(runner):
    result = runner.invoke(main, ["count", "211", "312", "--terms", "6"])
    assert result.exit_code == 0
    assert result.output == "1, 3, 11, 45, 197, 903\n"


def test_encode(runner):
    result = runner.invoke(main, ["encode", "31232"])
    assert result.exit_code == 0
    assert result.output == "m1,1 l2,1 r2,0 f1,1 f1,0\n"
    result = runner.invoke(main, ["encode", "31232", "--mode", "both"])
    assert result.exit_code == 0
    lines = result.output.splitlines()
    assert lines[0] == "vertical: m1,1 l2,1 r2,0 f1,1 f1,0"
    assert lines[1].startswith("horizontal: ")


def test_decode(runner):
    result = runner.invoke(main, ["decode", "m1,1", "l2,1", "r2,0", "f1,1", "f1,0"])
    assert result.exit_code == 0
    assert result.output == "31232\n"


def test_survey(runner):
    result = runner.invoke(main, ["survey"])
    assert result.exit_code == 0
    lines = result.output.splitlines()
    assert lines[0] == "size  bases  vertical  horizontal  either"
    assert len(lines) == 15
    assert lines[-1] == "total either-regular: 7294"
    result = runner.invoke(main, ["survey", "--format", "json"])
    assert json.loads(result.output)["total_either"] == 7294


def test_verify_ok(runner):
    result = runner.invoke(main, ["verify", *HARE, "--mode", "vertical", "--terms", "5"])
    assert result.exit_code == 0
    lines = result.output.splitlines()
    assert lines[0] == "mode: vertical"
    assert lines[1] == "n=1: gf=1 brute=1 ok"
    assert lines[-1] == "agree: yes"


def test_verify_mismatch_exits_4(runner, monkeypatch):
    fake = VerifyResponse(
        basis="11",
        mode="vertical",
        rows=[VerifyRow(n=1, from_gf=1, brute=2, match=False)],
        agree=False,
    )
    monkeypatch.setattr(service, "handle_verify", lambda req: fake)
    result = runner.invoke(main, ["verify", "11"])
    assert result.exit_code == 4
    assert "n=1: gf=1 brute=2 MISMATCH" in result.output
    assert "agree: no" in result.output


def test_export_grammar(runner):
    result = runner.invoke(main, ["export", "grammar", *HARE])
    assert result.exit_code == 0
    assert result.output.startswith("S -> f1,1 P | l1,1 P A | r1,1 P B | m1,1 P C\n")
    result = runner.invoke(main, ["export", "grammar", *HARE, "--format", "json"])
    assert rule_system_from_json(result.output) == explore(parse_basis(HARE), "vertical")
    result = runner.invoke(main, ["export", "grammar", *HARE, "--format", "dot"])
    assert result.output.startswith("digraph rules {")


def test_export_tiling(runner):
    result = runner.invoke(main, ["export", "tiling", "123"])
    assert result.exit_code == 0
    assert result.output == (
        "dimensions: 1x1\n"
        "point rows: none\n"
        "obstructions:\n"
        "  123 @ (0,0),(0,0),(0,0)\n"
        "requirements:\n"
        "  1 @ (0,0)\n"
    )
    result = runner.invoke(main, ["export", "tiling", "123", "--format", "json"])
    assert tiling_from_json(result.output) == root_tiling(parse_basis(["123"]))
    result = runner.invoke(main, ["export", "tiling", "123", "--format", "dot"])
    assert result.exit_code == 1
    assert "error: tilings have no dot form" in result.output


def test_exit_code_2_not_slot_bounded(runner):
    result = runner.invoke(main, ["gf", "211", "312", "--mode", "both"])
    assert result.exit_code == 2
    assert "error: Av(211 312) is not slot-bounded in either mode" in result.output


def test_exit_code_3_caps(runner):
    result = runner.invoke(main, ["count", "11", "--terms", "12"])
    assert result.exit_code == 3
    assert "error: size cap exceeded: 12 > 10" in result.output
    result = runner.invoke(main, ["gf", *HARE, "--max-states", "3"])
    assert result.exit_code == 3
    assert "error: state cap exceeded: more than 3 states" in result.output


def test_exit_code_1_invalid_input(runner):
    result = runner.invoke(main, ["count", "2x1"])
    assert result.exit_code == 1
    assert "error: bad pattern token: '2x1'" in result.output
    result = runner.invoke(main, ["decode", "zz"])
    assert result.exit_code == 1
    assert "error: bad letter token: 'zz'" in result.output
    result = runner.invoke(main, ["gf", *HARE, "--terms", "0"])
    assert result.exit_code == 1
    assert "error:" in result.output


def test_out_writes_file(runner, tmp_path):
    target = tmp_path / "seq.txt"
    result = runner.invoke(main, ["count", "211", "312", "--terms", "4", "--out", str(target)])
    assert result.exit_code == 0
    assert result.output == ""
    assert target.read_text() == "1, 3, 11, 45\n"


def test_help_lists_subcommands(runner):
    result = runner.invoke(main, ["--help"])
    assert result.exit_code == 0
    for name in ("classify", "gf", "count", "encode", "decode", "survey", "verify", "export"):
        assert name in result.output

from __future__ import annotations

import csv
import json

import pytest

from muwm import formats
from muwm.cli import main, parse_range
from muwm.errors import EXIT_BUDGET, EXIT_FORMAT, EXIT_INVALID, EXIT_USAGE


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("what, flag, value, stem, size", [
    ("binary-mquwm", "--m", 3, "binary-mquwm-m3", 8),
    ("z4-mquwm", "--m", 2, "z4-mquwm-m2", 4),
    ("d-frames", "--d", 6, "d-frames-d6", 5),
    ("weight4", "--d", 7, "weight4-d7", 8),
])
def test_construct_then_verify(capsys, tmp_path, what, flag, value, stem, size):
    code, out, _ = run(capsys, "construct", what, flag, value, "--out", tmp_path)
    assert code == 0
    assert f"members: {size}" in out
    fam = tmp_path / f"{stem}.family.json"
    cert = json.loads((tmp_path / f"{stem}.cert.json").read_text())
    assert cert["kind"] == "pipeline"
    assert cert["inputs"][fam.name] == formats.file_digest(fam)
    code, out, _ = run(capsys, "verify", fam)
    assert code == 0
    assert json.loads(out)["payload"]["members"] == size


def test_construct_is_deterministic(capsys, tmp_path):
    for sub in ("a", "b"):
        run(capsys, "construct", "binary-mquwm", "--m", 3, "--out", tmp_path / sub,
            "--workers", 1 if sub == "a" else 4)
    for p in (tmp_path / "a").iterdir():
        assert p.read_bytes() == (tmp_path / "b" / p.name).read_bytes()


def test_flipped_entry_fails(capsys, tmp_path):
    run(capsys, "construct", "binary-mquwm", "--m", 3, "--out", tmp_path)
    fam = json.loads((tmp_path / "binary-mquwm-m3.family.json").read_text())
    fam["matrices"][2][3][1] *= -1
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(fam))
    code, _, err = run(capsys, "verify", bad)
    assert code == EXIT_INVALID
    assert "NonDiagonalProduct" in err


def test_derive_then_verify(capsys, tmp_path):
    run(capsys, "construct", "binary-mquwm", "--m", 3, "--out", tmp_path)
    derived = tmp_path / "derived.json"
    code, out, _ = run(capsys, "derive-muwm", tmp_path / "binary-mquwm-m3.family.json",
                       "-o", derived)
    assert code == 0 and "members: 7" in out
    code, _, _ = run(capsys, "verify", derived, "--params", 8, 4, 4, 4)
    assert code == 0
    code, _, err = run(capsys, "derive-muwm", tmp_path / "binary-mquwm-m3.family.json",
                       "--transpose")
    assert code == EXIT_INVALID and "NotMuwmParams" in err


def test_roots_and_decompose(capsys, tmp_path):
    code, out, _ = run(capsys, "roots", "--family", "E8")
    assert code == 0 and out.splitlines()[0] == "8 8 240"
    code, out, _ = run(capsys, "decompose", "--family", "E7", "--frame-size", 7, "--out", tmp_path)
    assert code == 0 and "frames: 9" in out
    dec = json.loads((tmp_path / "E7-frames.decomposition.json").read_text())
    assert dec["frame_size"] == 7 and len(dec["parts"]) == 9
    # the decomposition indexes the dumped code file
    cf = formats.read_code((tmp_path / "E7.code.txt").read_text())
    formats.read_decomposition((tmp_path / "E7-frames.decomposition.json").read_text(), cf)
    code, out, _ = run(capsys, "decompose", "--family", "E6", "--out", tmp_path)
    cert = json.loads((tmp_path / "E6-frames.cert.json").read_text())
    assert code == 0 and cert["kind"] == "exhaustion" and cert["payload"]["clique_number"] == 4


def test_decompose_code_file(capsys, tmp_path):
    run(capsys, "construct", "binary-mquwm", "--m", 3, "--out", tmp_path)
    code, out, _ = run(capsys, "decompose", "--code", tmp_path / "binary-mquwm-m3.code.txt",
                       "--frame-size", 8, "--out", tmp_path)
    assert code == 0 and "frames: 8" in out


def test_bounds_json(capsys):
    code, out, err = run(capsys, "bound", "lp", "--d", 8)
    body = json.loads(out)
    assert code == 0 and body["conclusion"] == "f <= 8"
    assert body["coefficients"][:4] == ["1/8"] * 4
    code, out, _ = run(capsys, "bound", "count", "--d", 6)
    assert json.loads(out)["conclusion"] == "f <= 5"
    code, _, err = run(capsys, "bound", "lp", "--d", 8, "--strict-coefficients")
    assert code == EXIT_INVALID and "ExpansionMismatch" in err
    code, _, _ = run(capsys, "bound", "lp", "--d", 7)
    assert code == EXIT_USAGE


def test_screen(capsys):
    code, out, _ = run(capsys, "screen", 7, 6, 9)
    body = json.loads(out)
    assert body["verdict"] == "INFEASIBLE" and body["violations"][0]["rule"] == "odd-order"
    code, out, _ = run(capsys, "screen", 7, 2, 1, "--size", 9)
    assert "counting-bound" in [v["rule"] for v in json.loads(out)["violations"]]


def test_table_small(capsys, tmp_path):
    code, out, _ = run(capsys, "table", "--d", "9..11", "--format", "csv", "--out", tmp_path)
    assert code == 0
    rows = list(csv.DictReader((tmp_path / "table.csv").open()))
    assert [(r["d"], r["m"], r["status"]) for r in rows] == [
        ("9", "0", "CONFIRMED"), ("10", "8", "CONFIRMED"), ("11", "2", "CONFIRMED")]
    assert rows[2]["lattice"] == "D4+E7"
    assert (tmp_path / "table.png").stat().st_size > 0
    assert (tmp_path / "witness" / "weight4-d11.family.json").exists()


def test_table_budget_unconfirmed(capsys, tmp_path):
    code, out, _ = run(capsys, "table", "--d", "7", "--node-budget", 1, "--out", tmp_path)
    rows = list(csv.DictReader((tmp_path / "table.tsv").open(), delimiter="\t"))
    assert rows[0]["status"] == "UNCONFIRMED"


def test_errors_map_to_codes(capsys, tmp_path):
    bad = tmp_path / "x.json"
    bad.write_text("{}\n")
    assert run(capsys, "verify", bad)[0] == EXIT_FORMAT
    assert run(capsys, "construct", "binary-mquwm", "--m", 4)[0] == EXIT_USAGE
    assert run(capsys, "decompose", "--family", "E8", "--node-budget", 2,
               "--out", tmp_path)[0] == EXIT_BUDGET
    with pytest.raises(SystemExit):
        main(["construct", "binary-mquwm"])


def test_parse_range():
    assert parse_range("4..6") == [4, 5, 6]
    assert parse_range("7") == [7]
    assert parse_range("4,8") == [4, 8]

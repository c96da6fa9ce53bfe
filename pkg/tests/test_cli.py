import json
import subprocess
import sys

import pytest

from cusplab.cli import main
from cusplab.report import CheckRow, emit, summarize


def test_checkrow_status_from_equality():
    r = CheckRow.make("x", {"q": 2}, 4, 4, "TRIVIAL")
    assert r.status == "pass"
    r2 = CheckRow.make("x", {"q": 2}, 4, 5, "TRIVIAL")
    assert r2.status == "fail"
    r3 = CheckRow.skipped("x", {"q": 2}, 4, "DERIVED")
    assert r3.status == "skipped"


def test_emit_formats_and_determinism(tmp_path):
    rows = [CheckRow.make("b.check", {"q": 3, "n": 2}, 1, 1, "PAPER", millis=7),
            CheckRow.make("a.check", {"q": 2}, "x", "x", "TRIVIAL", millis=3)]
    txt = emit(rows, "json-lines")
    lines = txt.strip().split("\n")
    assert len(lines) == 2
    first = json.loads(lines[0])
    assert list(first) == ["check_id", "params", "expected", "computed",
                           "provenance", "status", "millis"]
    assert first["check_id"] == "a.check"     # sorted
    assert first["millis"] == 0               # zeroed for reproducibility
    # identical bytes regardless of construction order
    assert emit(list(reversed(rows)), "json-lines") == txt
    tsv = emit(rows, "tsv")
    assert tsv.startswith("check_id\t")
    assert len(tsv.strip().split("\n")) == 3
    # empty row set -> empty output
    assert emit([], "json-lines") == ""
    out = tmp_path / "report.jsonl"
    emit(rows, "json-lines", str(out))
    assert out.read_text() == txt
    assert summarize(rows) == (2, 0, 0)


def test_cli_exit_codes(tmp_path, capsys):
    assert main(["fields", "--q", "2", "--n", "2", "--out", str(tmp_path / "f.jsonl")]) == 0
    capsys.readouterr()
    assert main(["fields", "--n", "1", "--q", "2"]) == 2
    assert main(["fields", "--q", "6", "--n", "2"]) == 2
    assert main(["fields", "--q", "2", "--n", "2", "--r0", "1"]) == 2
    assert main(["nosuchsuite"]) == 2
    capsys.readouterr()


def test_cli_reports_are_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    assert main(["geometry", "--q", "2", "--n", "2", "--seed", "5", "--out", str(a)]) == 0
    assert main(["geometry", "--q", "2", "--n", "2", "--seed", "5", "--out", str(b)]) == 0
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()
    row = json.loads(a.read_text().splitlines()[0])
    assert set(row) == {"check_id", "params", "expected", "computed",
                        "provenance", "status", "millis"}


def test_cli_config_file(tmp_path, capsys):
    cfg = tmp_path / "verify.cfg"
    cfg.write_text("q=2\nn=2\nseed=3\nbudget=1048576\n")
    out = tmp_path / "c.jsonl"
    assert main(["ring", "--config", str(cfg), "--out", str(out)]) == 0
    capsys.readouterr()
    text = out.read_text()
    assert '"status": "fail"' not in text
    assert "q=2" in text and "n=2" in text


def test_cli_tsv_format(tmp_path, capsys):
    out = tmp_path / "t.tsv"
    assert main(["infra", "--format", "tsv", "--out", str(out)]) == 0
    capsys.readouterr()
    assert out.read_text().startswith("check_id\t")


def test_cli_strict_with_tiny_budget(tmp_path, capsys):
    # a 2^4 budget forces skipped geometry rows; strict turns that into exit 1
    out = tmp_path / "s.jsonl"
    code = main(["geometry", "--q", "2", "--n", "3", "--budget", "16",
                 "--strict", "--out", str(out)])
    capsys.readouterr()
    assert code == 1
    assert '"status": "skipped"' in out.read_text()


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cusplab", "infra"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert '"status": "pass"' in proc.stdout

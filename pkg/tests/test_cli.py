from __future__ import annotations

import json
import subprocess
import sys

import pytest

from upb.cli import main, merge_catalogs
from upb.errors import MixedDimensions
from upb.search import full_search, read_catalog, write_catalog

SHIFTS = "000,1aA,A1a,aA1"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_upb(capsys):
    code, out, _ = run(capsys, "check", SHIFTS)
    lines = out.splitlines()
    assert code == 0 and lines[0] == "UPB"
    assert json.loads(lines[1])["graph"]["s"] == 4


def test_check_extendible(capsys):
    code, out, _ = run(capsys, "check", "000,1aA,A1a", "--crosscheck", "--seed", "3")
    lines = out.splitlines()
    assert code == 1 and lines[0] == "Extendible"
    doc = json.loads(lines[1])
    covered = set()
    for w in doc["witness"]:
        covered.update(w["region"])
    assert covered == {0, 1, 2}
    assert doc["crosscheck"]["agree"]


def test_check_not_orthogonal(capsys):
    code, out, _ = run(capsys, "check", "00,0a")
    assert code == 1 and out.splitlines()[0] == "NotPairwiseOrthogonal"
    assert json.loads(out.splitlines()[1])["missing"] == [[0, 1]]


def test_input_forms(capsys, tmp_path, monkeypatch):
    f = tmp_path / "s.ket"
    f.write_text(SHIFTS + "\n")
    assert run(capsys, "check", f"@{f}")[0] == 0
    code, out, _ = run(capsys, "parse", SHIFTS)
    doc = json.loads(out)
    assert doc["basis"] == SHIFTS
    record = json.dumps(doc["graph"])
    assert run(capsys, "check", record)[0] == 0
    import io

    monkeypatch.setattr(sys, "stdin", io.StringIO(SHIFTS))
    assert run(capsys, "check", "-")[0] == 0


def test_parse_pretty(capsys):
    code, out, _ = run(capsys, "parse", SHIFTS, "--pretty")
    assert out.splitlines()[0] == SHIFTS
    assert out.splitlines()[1].startswith("profile: K1,1")


def test_canon_and_equiv(capsys):
    code, out, _ = run(capsys, "canon", SHIFTS)
    key = json.loads(out)["key"]
    code, out2, _ = run(capsys, "canon", "000,aA1,1aA,A1a")
    assert json.loads(out2)["key"] == key
    code, out, _ = run(capsys, "equiv", SHIFTS, "000,aA1,1aA,A1a")
    assert code == 0 and out.strip() == "true"
    code, out, _ = run(capsys, "equiv", SHIFTS, "000,001,010,011,100,101,110,111")
    assert code == 1 and out.strip() == "false"


def test_syntax_error_exit(capsys):
    code, _, err = run(capsys, "check", "00,0#")
    assert code == 1 and "position 4" in err


def test_unknown_command_exit(capsys):
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2


def test_profiles_count(capsys):
    code, out, _ = run(capsys, "profiles", "--p", "3", "--s", "8", "--count")
    doc = json.loads(out)["summary"]
    assert code == 0 and doc["count"] == 67
    assert doc["constraints"]["use_lemma_A1"] is True


def test_profiles_listing(capsys):
    code, out, _ = run(capsys, "profiles", "--p", "3", "--s", "4", "--pretty")
    assert "K1,1 u K1,1 / K1,1 u K1,1 / K1,1 u K1,1" in out


def test_search_writes_catalog(capsys, tmp_path):
    out_path = tmp_path / "c.jsonl"
    report = tmp_path / "r.json"
    code, out, _ = run(capsys, "search", "--p", "3", "--s", "8", "-o", str(out_path), "--report", str(report))
    assert code == 0 and json.loads(out)["classes"] == 17
    header, entries = read_catalog(out_path)
    assert len(entries) == 17 and header["p"] == 3
    assert not (tmp_path / "c.jsonl.resume.jsonl").exists()
    assert json.loads(report.read_text())["classes"] == 17
    code, out, _ = run(capsys, "search", "--p", "3", "--s", "4", "-o", str(out_path), "--pretty")
    assert "classes" in out and "1" in out


def test_search_bad_workers(capsys, tmp_path):
    assert run(capsys, "search", "--p", "3", "--s", "4", "-o", str(tmp_path / "x"), "--workers", "0")[0] == 2


def test_construct(capsys):
    code, out, _ = run(capsys, "construct", "--method", "shifts", "--pretty")
    assert out.strip() == SHIFTS
    code, out, _ = run(capsys, "construct", "--method", "mult4", "--p", "4", "--s", "8")
    assert code == 0 and json.loads(out)["graph"]["s"] == 8
    code, _, err = run(capsys, "construct", "--method", "mult4", "--p", "9", "--s", "20")
    assert code == 1 and "Unsupported" in err
    code, out, _ = run(capsys, "construct", "--method", "combine", SHIFTS, SHIFTS, "--pretty")
    assert code == 0 and len(out.strip().split(",")) == 8
    code, out, _ = run(capsys, "construct", "--method", "mult4", "--p", "4", "--s", "8")
    record = json.dumps(json.loads(out)["graph"])
    code, out, _ = run(capsys, "construct", "--method", "split", record, "--qubit", "1")
    assert code == 0 and json.loads(out)["graph"]["p"] == 5
    assert run(capsys, "construct", "--method", "standard")[0] == 2
    assert run(capsys, "construct", "--method", "combine", SHIFTS, "000,1aA,A1a")[0] == 1


def test_sizes(capsys):
    code, out, _ = run(capsys, "sizes", "--p", "7", "--pretty")
    assert code == 0 and "16-18, 20-122, 124, 128" in out
    code, out, _ = run(capsys, "sizes", "--p", "4")
    assert json.loads(out)["attainable"] == ["6-10", "12", "16"]


def test_merge(capsys, tmp_path):
    catalog, _ = full_search(3, 8)
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    write_catalog(a, catalog[:10], 3, 8)
    write_catalog(b, catalog[5:], 3, 8)
    header, merged = merge_catalogs([a, b])
    assert len(merged) == 17
    header2, again = merge_catalogs([a, b, a])
    assert [e.multiplicity for e in again] == [e.multiplicity for e in merged]
    out = tmp_path / "m.jsonl"
    code, text, _ = run(capsys, "merge", str(a), str(b), "-o", str(out))
    assert code == 0 and json.loads(text)["classes"] == 17
    six, _ = full_search(4, 6)
    c = tmp_path / "c.jsonl"
    write_catalog(c, six, 4, 6)
    with pytest.raises(MixedDimensions):
        merge_catalogs([a, c])


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "upb.cli", "check", SHIFTS], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("UPB")

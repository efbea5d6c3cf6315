import json
import subprocess
import sys

import pytest

from pseudoknots.census import CensusConfig, census_record, dumps, read_census, run_census, shadows
from pseudoknots.cli import main
from pseudoknots.diagram import parse_gauss


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_prints_canonical(capsys):
    code, out, _ = run(capsys, "parse", "U1+O2+U3+O1+U2+O3+")
    assert code == 0
    assert out.strip() == "O1+U2+O3+U1+O2+U3+"
    code, out, _ = run(capsys, "parse", "--as-given", "U1+O2+U3+O1+U2+O3+")
    assert out.strip() == "U1+O2+U3+O1+U2+O3+"


def test_parse_error_exit_code(capsys):
    code, _, err = run(capsys, "parse", "O1+U2+")
    assert code == 2
    assert "O1+" in err


def test_invariants_json(capsys):
    code, out, _ = run(capsys, "invariants", "--json", "O1+U2+O3+U1+O2+U3+")
    obj = json.loads(out)
    assert code == 0
    assert obj["v2"] == 1 and obj["J"] == 0 and obj["seifert_circles"] == 2 and obj["genus"] == "1"
    assert obj["f"] == "1*A^-4 + 1*A^-12 + -1*A^-16"


def test_invariants_of_shadow(capsys):
    code, out, _ = run(capsys, "invariants", "P1+P2+P1+P2+")
    assert code == 0
    assert "carrier_genus = 1" in out
    assert "v2" not in out


def test_numbers_trefoil_shadow(capsys):
    code, out, _ = run(capsys, "numbers", "P1+P2-P3+P1+P2-P3+")
    assert code == 0
    assert "tr = 2" in out and "kn = 3" in out


def test_numbers_all_plus_shadow(capsys):
    # with these flat signs the three-chord shadow is virtual
    code, out, _ = run(capsys, "numbers", "--json", "P1+P2+P3+P1+P2+P3+")
    report = json.loads(out)["report"]
    assert report["tr"]["exact"] == 2


def test_bounds(capsys):
    code, out, _ = run(capsys, "bounds", "--json", "O1+U2+O3+U1+O2+U3+")
    reports = {r["quantity"]: r for r in json.loads(out)["bounds"]}
    assert code == 0
    assert reports["u"]["upper"] == 1 and reports["vu"]["upper"] == 2 and reports["g"]["upper"] == "1"
    code, _, err = run(capsys, "bounds", "P1+P1+")
    assert code == 2 and "resolved" in err


def test_file_input(capsys, tmp_path):
    path = tmp_path / "knot.txt"
    path.write_text("# a comment\ndiagram = O1+U2+O3+U1+O2+U3+\n")
    code, out, _ = run(capsys, "parse", f"@{path}")
    assert out.strip() == "O1+U2+O3+U1+O2+U3+"
    code, _, err = run(capsys, "parse", f"@{tmp_path / 'missing.txt'}")
    assert code == 2 and "cannot read" in err


def test_env_override(capsys, monkeypatch):
    monkeypatch.setenv("PSEUDOKNOTS_MAX_STATES", "lots")
    code, _, err = run(capsys, "numbers", "P1+P2+P1+P2+")
    assert code == 2 and "PSEUDOKNOTS_MAX_STATES" in err
    monkeypatch.setenv("PSEUDOKNOTS_MAX_STATES", "50")
    code, out, _ = run(capsys, "numbers", "P1+P2+P1+P2+")
    assert code == 0


def test_census_two(capsys):
    code, out, _ = run(capsys, "census", "--max-n", "2", "--canonical")
    lines = out.strip().splitlines()
    assert code == 0
    assert [json.loads(x)["n"] for x in lines] == [1, 2, 2]


def test_census_limit(capsys):
    code, _, err = run(capsys, "census", "--max-n", "9")
    assert code == 2 and "9" in err


def test_census_deterministic_across_workers(tmp_path):
    cfg = CensusConfig(max_n=4)
    one = list(run_census(cfg))
    again = list(run_census(cfg))
    two = list(run_census(CensusConfig(max_n=4, workers=2)))
    assert one == again == two
    codes = [json.loads(x)["canonical_code"] for x in one]
    by_n = {}
    for x in one:
        rec = json.loads(x)
        by_n.setdefault(rec["n"], []).append(rec["canonical_code"])
    assert all(v == sorted(v) for v in by_n.values())
    assert len(codes) == len(set(codes))


def test_census_resume(capsys, tmp_path):
    full = tmp_path / "full.jsonl"
    part = tmp_path / "part.jsonl"
    run(capsys, "census", "--max-n", "3", "-o", str(full))
    lines = full.read_text().splitlines(keepends=True)
    part.write_text("".join(lines[:3]) + lines[3][:10])
    code, _, _ = run(capsys, "census", "--max-n", "3", "-o", str(part), "--resume")
    assert code == 0
    assert part.read_text() == full.read_text()


def test_verify_realizable_six(capsys, tmp_path):
    path = tmp_path / "census.jsonl"
    code, _, _ = run(capsys, "census", "--max-n", "6", "--realizable", "-o", str(path))
    assert code == 0
    code, out, _ = run(capsys, "verify", str(path), "--realizable")
    assert code == 0
    assert "FAIL" not in out
    for name in ("thm:tr-even", "thm:basic-sets-even", "thm:u<=tr/2", "thm:vu<=min(tr,2u)", "thm:g<=tr/2"):
        assert name in out


def test_verify_detects_tampering(capsys, tmp_path):
    path = tmp_path / "census.jsonl"
    run(capsys, "census", "--max-n", "3", "-o", str(path))
    records = read_census(str(path))
    records[-1]["summary"]["tr"] = "1"
    path.write_text("".join(dumps(r) + "\n" for r in records))
    code, out, _ = run(capsys, "verify", str(path))
    assert code == 1
    assert "first failure: record-reproduces" in out


def test_verify_rejects_garbage(capsys, tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text("not json\n")
    code, _, err = run(capsys, "verify", str(path))
    assert code == 2


def test_record_witnesses_replay():
    cfg = CensusConfig(max_n=5, realizable=True)
    for s in shadows(cfg, 5):
        rec = census_record(s, cfg)
        checks = {c["check"]: c["ok"] for c in rec["bound_checks"]}
        # parallel shadows have no knotting witness; every other shadow has both
        assert checks["witness-tr"]
        assert ("witness-kn" in checks) == (rec["summary"]["kn"] != "inf")
        assert all(checks.values())


def test_virtual_shadow_record():
    rec = census_record(parse_gauss("P1+P2+P1+P2+"), CensusConfig(max_n=2))
    checks = {c["check"]: c["ok"] for c in rec["bound_checks"]}
    assert rec["realizable"] is False
    assert checks["prop:tr!=1"] and checks["virtr<=tr"]
    assert rec["evidence"]["ubtr=virtr=tr"] is False


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "pseudoknots", "parse", "P1+P2+P1+P2+"],
                         capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "P1+P2+P1+P2+"

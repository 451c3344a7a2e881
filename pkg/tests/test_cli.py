import json
import subprocess
import sys
from dataclasses import replace
from importlib import resources

import pytest

from selfref.cli import main, run_trace
from selfref.repro import builtin_scenarios, run_repro
from selfref.report import build_report, write_report
from selfref.scenario import VerdictExpectation, load_scenario, parse_scenario

SCENARIOS = resources.files("selfref") / "scenarios"


def scn(name):
    return str(SCENARIOS / name)


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_lagadonian_conflict(capsys):
    code, out, _ = run(["check", scn("lagadonian_csi.scn")], capsys)
    assert code == 2
    assert "1. leibniz on expression d [canonical]" in out
    assert "certificate: none" in out


def test_check_certificate(tmp_path, capsys):
    path = tmp_path / "ok.scn"
    path.write_text("name ok\nstipulate a -> obj v\nschema lagadonian\nmode csi\ndepth 3\n")
    code, out, _ = run(["check", str(path), "--format", "json"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert set(doc) == {"scenario", "table", "conflicts", "certificate", "policies", "traces", "version"}
    assert doc["conflicts"] == []
    assert doc["certificate"]["instances_checked"] == 4


def test_check_unstipulated_is_error(tmp_path, capsys):
    path = tmp_path / "bad.scn"
    path.write_text("name bad\nstipulate a -> obj v\nschema lagadonian\nuniverse a c\n")
    code, _, err = run(["check", str(path)], capsys)
    assert code == 1
    assert "'c'" in err


def test_check_missing_file(capsys):
    code, _, err = run(["check", "/nonexistent.scn"], capsys)
    assert code == 1 and err.startswith("error:")


def test_check_json_conflict_kind(capsys):
    code, out, _ = run(["check", scn("lagadonian_csi.scn"), "--format", "json"], capsys)
    assert code == 2
    doc = json.loads(out)
    assert [c["kind"] for c in doc["conflicts"]] == ["leibniz"]
    assert doc["conflicts"][0]["identity"] == {"identity": "d = 'd'", "justification": "DQ"}
    assert '"conflicts": [\n    {\n      "canonical": true,\n      "identity"' in out


def test_include_vacuous_flag(tmp_path, capsys):
    path = tmp_path / "p.scn"
    path.write_text("name p\nstipulate p -> obj v\nschema lagadonian\nmode all\ndepth 1\n")
    _, plain, _ = run(["check", str(path), "--format", "json"], capsys)
    _, loose, _ = run(["check", str(path), "--format", "json", "--include-vacuous"], capsys)
    assert len(json.loads(loose)["conflicts"]) > len(json.loads(plain)["conflicts"])


def test_trace(capsys):
    code, out, _ = run(["trace", scn("lagadonian_csi.scn"), "CSI(d)"], capsys)
    assert code == 0 and out.rstrip().endswith("verdict: True")
    _, out, _ = run(["trace", scn("lagadonian_csi.scn"), "Phi('d','d')"], capsys)
    assert "namely CSI(d)" in out and out.rstrip().endswith("verdict: True")
    _, out, _ = run(["trace", scn("lagadonian_csi.scn"), "CSI('d')"], capsys)
    assert "[first-term] expected d, found 'd': mismatch" in out
    assert out.rstrip().endswith("verdict: False")
    code, _, _ = run(["trace", scn("lagadonian_csi.scn"), "CSI(d"], capsys)
    assert code == 1
    code, _, _ = run(["trace", scn("lagadonian_csi.scn"), "CSI(zz)"], capsys)
    assert code == 1


def test_run_trace_function():
    text = run_trace(load_scenario(scn("laputan_csi.scn")), "CSI(b)")
    assert text.splitlines()[0].startswith("b is Laputan iff: 'a' is the first term")


def test_table(capsys):
    code, out, _ = run(["table", scn("laputan_csi.scn")], capsys)
    assert code == 0
    assert out.splitlines()[0] == "CSI(a)\tcsi\tTrue"


def test_repro_paper(capsys):
    code, out, _ = run(["repro-paper"], capsys)
    assert code == 0
    assert out.rstrip().endswith("28/28 checks match")


def test_repro_detects_tampering():
    scenarios = builtin_scenarios()
    sc = scenarios[1]
    tampered = tuple(
        replace(e, value="false") if isinstance(e, VerdictExpectation) and e.label == "(7)" else e
        for e in sc.expectations
    )
    scenarios[1] = replace(sc, expectations=tampered)
    result = run_repro(scenarios)
    assert result.exit_code != 0
    assert [(m.what, m.expected, m.actual) for m in result.mismatches] == [("verdict (7) CSI(d)", "false", "true")]
    assert b"DIFF [lagadonian-csi] verdict (7) CSI(d): expected false, got true" in result.render()


def test_repro_detects_wrong_conflict_expectation():
    sc = parse_scenario(
        "name wrong\nstipulate d -> term d\nschema lagadonian\nmode csi\ndepth 2\nexpect certificate\n"
    )
    result = run_repro([sc], deictic=())
    assert {m.what for m in result.mismatches} == {"canonical conflicts", "certificate"}


def test_repro_byte_identical():
    assert run_repro().render("json") == run_repro().render("json")
    assert run_repro().render("text") == run_repro().render("text")


def test_write_report_stable():
    report = build_report(load_scenario(scn("laputan_all.scn")))
    assert write_report(report, "json") == write_report(build_report(load_scenario(scn("laputan_all.scn"))), "json")
    with pytest.raises(ValueError):
        write_report(report, "xml")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "selfref", "repro-paper", "--format", "json"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["mismatches"] == []

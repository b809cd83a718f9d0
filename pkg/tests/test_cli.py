import io
import json
import math
import subprocess
import sys

import pytest

from pairwalk.cli import main, real_expr
from pairwalk.io import connected_graph6
from pairwalk.report import ReportDocument


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_real_expr():
    assert real_expr("pi/2") == pytest.approx(math.pi / 2)
    assert real_expr("pi/sqrt(2)") == pytest.approx(math.pi / math.sqrt(2))
    assert real_expr("-1/2") == -0.5
    for bad in ("__import__('os')", "x", "1/0", "sqrt(2, 3)"):
        with pytest.raises(Exception):
            real_expr(bad)


def test_analyze_cycle8_finds_exactly_the_two_families(capsys):
    code, out, _ = run(capsys, "analyze", "--family", "cycle(8)", "--json")
    assert code == 0
    doc = ReportDocument.from_json(out)
    psts = doc.results["pst"]
    assert {r["time_symbolic"] for r in psts} == {"pi/2", "pi/sqrt(2)"}
    plus = sorted((r["source"], r["target"]) for r in psts if r["s"] == 1.0)
    assert plus == [("e0+e4", "e2+e6"), ("e1+e5", "e3+e7")]
    assert len(psts) == 6


def test_analyze_complete_graph_periodic_no_transfer(capsys):
    code, out, _ = run(capsys, "analyze", "--family", "K5", "--json")
    doc = ReportDocument.from_json(out)
    assert "pst" not in doc.results
    periods = {round(r["time"], 12) for r in doc.results["periodic"]}
    assert periods == {round(2 * math.pi / 5, 12)}


def test_analyze_c4_plus_states(capsys):
    code, out, _ = run(capsys, "analyze", "--family", "C4", "--s", "1")
    assert code == 0
    assert "e0+e2 -> e1+e3  at 0.785398163397 = pi/4" in out
    assert out.count("PST") == 3


def test_analyze_cap_exit_code(capsys):
    code, _, err = run(capsys, "analyze", "--family", "Q4", "--cap", "8")
    assert code == 3 and "cap" in err


def test_parse_errors_exit_two(capsys):
    assert run(capsys, "analyze", "--graph6", "!!")[0] == 2
    assert run(capsys, "analyze", "--family", "bogus(1)")[0] == 2
    assert run(capsys, "evolve", "--family", "C4", "--state", "0+y*1", "--t", "1")[0] == 2
    assert run(capsys, "analyze", "--family", "C4", "--tol-sc", "0.5")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["analyze", "--family", "C4", "--s", "0"])
    assert exc.value.code == 2


def test_evolve_k2(capsys):
    code, out, _ = run(capsys, "evolve", "--family", "K2", "--state", "0", "--t", "pi/2", "--json")
    amps = ReportDocument.from_json(out).results["evolution"][0]["amplitudes"]
    assert amps == [[0.0, 0.0], [0.0, -1.0]]


def test_evolve_c4_fidelity_and_time_zero(capsys):
    code, out, _ = run(capsys, "evolve", "--family", "C4", "--state", "0+1*1", "--t", "pi/2", "--target", "2+1*3")
    assert "fidelity to e2+e3: 1.000000000000" in out
    code, out, _ = run(capsys, "evolve", "--family", "P3", "--state", "0+2*1", "--t", "0", "--json")
    amps = ReportDocument.from_json(out).results["evolution"][0]["amplitudes"]
    flat = [x for z in amps for x in z]
    assert flat == pytest.approx([1 / math.sqrt(5), 0, 2 / math.sqrt(5), 0, 0, 0], abs=1e-12)


def test_linegraph_modes(capsys, tmp_path):
    code, out, _ = run(capsys, "linegraph", "--family", "K2,4", "--json")
    doc = ReportDocument.from_json(out)
    pairs = doc.results["pairs"]
    assert ["0-2", "1-2"] in [r["edges"] for r in pairs]
    assert all(r["verdict"] == "PST" and r["time_symbolic"] == "pi/2" for r in pairs)

    code, out, _ = run(capsys, "linegraph", "--family", "Q3")
    assert "no line-graph perfect state transfer" in out

    code, out, _ = run(capsys, "linegraph", "--family", "K2 x K2", "--json")
    doc = ReportDocument.from_json(out)
    assert any("as printed" in d for d in doc.diagnostics)

    f = tmp_path / "w.txt"
    f.write_text("0 1 2.0\n1 2\n")
    assert run(capsys, "linegraph", "--edges", str(f))[0] == 2


def test_census_stream(capsys, monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO("C]\nnot-a-graph!\n\nCs\n"))
    code, out, err = run(capsys, "census")
    assert code == 1 and "line 2" in err
    recs = [json.loads(x) for x in out.splitlines()]
    assert [r["graph6"] for r in recs] == ["C]", "Cs"]
    c4 = recs[0]["hamiltonians"]["A"]
    assert c4["pst"] == 5
    assert {t["time_symbolic"] for t in c4["transfers"]} == {"pi/4", "pi/2"}


def test_census_empty_stream(capsys, monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO(""))
    assert run(capsys, "census") == (0, "", "")


def test_census_is_deterministic_across_workers(capsys, tmp_path):
    f = tmp_path / "g.txt"
    f.write_text("\n".join(connected_graph6(5)) + "\n")
    code1, out1, _ = run(capsys, "census", str(f), "--hamiltonians", "a,q")
    code2, out2, _ = run(capsys, "census", str(f), "--hamiltonians", "a,q", "--jobs", "3")
    assert code1 == code2 == 0
    assert out1 == out2
    for line in out1.splitlines():
        for kind in json.loads(line)["hamiltonians"].values():
            assert all(t["oracle_fidelity"] >= 1 - 1e-7 for t in kind["transfers"])


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "pairwalk", "evolve", "--family", "K2", "--state", "0", "--t", "0"],
                         capture_output=True, text=True, check=True)
    assert "+1.000000000000" in res.stdout


def test_tolerance_profile_env(capsys, monkeypatch):
    monkeypatch.setenv("PAIRWALK_TOLERANCE_PROFILE", "strict")
    code, out, _ = run(capsys, "analyze", "--family", "C4", "--json")
    assert ReportDocument.from_json(out).config["tolerances"]["fid_tol"] == 1e-9
    monkeypatch.setenv("PAIRWALK_TOLERANCE_PROFILE", "nonexistent")
    assert run(capsys, "analyze", "--family", "C4")[0] == 2

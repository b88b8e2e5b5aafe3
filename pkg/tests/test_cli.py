from __future__ import annotations

import csv
import json
import shutil
import subprocess
import sys

import pytest

from argugraph.cli import main
from argugraph.engine import PropagationConfig, propagate
from argugraph.serialize import load_graph_file

from conftest import FIXTURES, GOLDEN


@pytest.fixture(autouse=True)
def _mock_provider_env(monkeypatch):
    monkeypatch.setenv("ARGUGRAPH_LLM_PROVIDER", "mock")
    monkeypatch.delenv("ARGUGRAPH_LLM_ENDPOINT", raising=False)


def _run(capsys, *argv) -> tuple[int, str, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def _golden(name: str) -> str:
    return (GOLDEN / name).read_text()


def test_score_chain_golden(capsys):
    code, out, err = _run(capsys, "score", str(FIXTURES / "chain.json"))
    assert code == 0
    assert out == _golden("score_chain.txt")
    assert err == ""


def test_score_chain_json_golden(capsys):
    code, out, _ = _run(capsys, "score", str(FIXTURES / "chain.json"), "--json")
    assert code == 0
    assert out == _golden("score_chain.json")


def test_score_output_is_byte_stable(capsys):
    _, first, _ = _run(capsys, "score", str(FIXTURES / "demo.json"))
    _, second, _ = _run(capsys, "score", str(FIXTURES / "demo.json"))
    assert first == second


def test_validate_empty_golden(capsys):
    code, out, _ = _run(capsys, "validate", str(FIXTURES / "empty.json"))
    assert code == 0
    assert out == _golden("validate_empty.txt")


def test_validate_broken_graph_exits_one(capsys, tmp_path):
    doc = json.loads((FIXTURES / "chain.json").read_text())
    doc["nodes"][0]["credibility"] = 1.0
    broken = tmp_path / "broken.json"
    broken.write_text(json.dumps(doc))
    code, out, _ = _run(capsys, "validate", str(broken))
    assert code == 1
    assert "credibility_range" in out
    assert "1 violation(s)" in out


def test_critique_cycle_golden(capsys):
    code, out, _ = _run(capsys, "critique", str(FIXTURES / "cycle.json"))
    assert code == 0
    assert out == _golden("critique_cycle.txt")


def test_critique_semantic_golden(capsys):
    code, out, _ = _run(capsys, "critique", str(FIXTURES / "demo.json"), "--semantic")
    assert code == 0
    assert out == _golden("critique_demo_semantic.txt")


def test_critique_semantic_without_provider_exits_two(capsys, monkeypatch):
    monkeypatch.delenv("ARGUGRAPH_LLM_PROVIDER", raising=False)
    code, _, err = _run(capsys, "critique", str(FIXTURES / "demo.json"), "--semantic")
    assert code == 2
    assert "error:" in err


def test_bad_file_exits_two(capsys, tmp_path):
    mangled = tmp_path / "mangled.json"
    mangled.write_text('{"id": oops')
    code, _, err = _run(capsys, "score", str(mangled))
    assert code == 2
    assert "error:" in err

    code, _, err = _run(capsys, "score", str(tmp_path / "missing.json"))
    assert code == 2


def test_usage_error_exits_two(capsys):
    assert main(["score"]) == 2  # missing file argument
    capsys.readouterr()


def test_score_in_place_reloads_losslessly(capsys, tmp_path):
    target = tmp_path / "chain.json"
    shutil.copy(FIXTURES / "chain.json", target)
    code, _, _ = _run(capsys, "score", str(target), "--in-place")
    assert code == 0

    reloaded = load_graph_file(target)
    expected = propagate(load_graph_file(FIXTURES / "chain.json"), PropagationConfig())
    assert reloaded.nodes["A"].credibility == expected.scores["A"]
    assert reloaded.nodes["B"].credibility == expected.scores["B"]
    assert not any(n.credibility_stale for n in reloaded.nodes.values())
    # validate passes on the rewritten file
    code, out, _ = _run(capsys, "validate", str(target))
    assert code == 0


def test_score_non_convergence_warns_but_succeeds(capsys):
    code, out, err = _run(capsys, "score", str(FIXTURES / "chain.json"), "--max-iters", "2")
    assert code == 0
    assert "not converged" in out
    assert "warning" in err


def test_score_delta_flag_changes_scores(capsys):
    _, base, _ = _run(capsys, "score", str(FIXTURES / "chain.json"))
    _, scaled, _ = _run(capsys, "score", str(FIXTURES / "chain.json"), "--delta", "2.0")
    assert base != scaled


def test_custom_bank_flag(capsys, tmp_path):
    bank = tmp_path / "bank.yaml"
    bank.write_text(
        'version: "1"\n'
        "patterns:\n"
        "  - {id: only_cycles, name: c, category: fallacy, kind: structural, "
        "structural_signature: cycle, description: d, severity: critical}\n"
    )
    code, out, _ = _run(capsys, "critique", str(FIXTURES / "demo.json"), "--bank", str(bank))
    assert code == 0
    assert out == "0 finding(s)\n"


def test_report_writes_all_artifacts(capsys, tmp_path):
    out_dir = tmp_path / "out"
    code, out, _ = _run(capsys, "report", str(FIXTURES / "demo.json"), "-o", str(out_dir))
    assert code == 0

    report_json = out_dir / "demo-report.json"
    report_md = out_dir / "demo-report.md"
    scores_csv = out_dir / "demo-scores.csv"
    chart = out_dir / "demo-credibility.png"
    diagram = out_dir / "demo-graph.png"
    for path in (report_json, report_md, scores_csv, chart, diagram):
        assert path.exists() and path.stat().st_size > 0
        assert str(path) in out

    doc = json.loads(report_json.read_text())
    assert len(doc["sections"]) == 8
    assert doc["graph_id"] == "demo"
    assert report_md.read_text().startswith("# Argument analysis report: demo")
    with open(scores_csv, newline="") as handle:
        rows = list(csv.reader(handle))
    assert len(rows) == 5  # header + 4 claims
    # figures are PNGs
    assert chart.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
    assert diagram.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_console_entry_point_smoke():
    result = subprocess.run(
        [sys.executable, "-m", "argugraph.cli", "validate", str(FIXTURES / "empty.json")],
        capture_output=True,
        text=True,
    )
    assert result.returncode == 0
    assert "0 violation(s)" in result.stdout

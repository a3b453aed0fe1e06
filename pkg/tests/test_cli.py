"""Command-line interface: output formats, round-tripping, exit codes."""

from __future__ import annotations

import json

import pytest

from codedensity.cli import main
from codedensity.guards import ENV_GUARD


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_qbinom_plain_output(capsys):
    code, out, _ = run_cli(capsys, "qbinom", "4", "2", "2")
    assert code == 0 and out == "35\n"


def test_exact_density_plain_output(capsys):
    code, out, _ = run_cli(
        capsys, "exact", "--metric", "hamming", "--q", "2", "--ell", "1",
        "--s", "2", "--n", "2", "--k", "1", "--d", "2",
    )
    assert code == 0 and out == "3/5\n"


def test_volume_with_oracle(capsys):
    code, out, _ = run_cli(
        capsys, "volume", "--metric", "rank", "--q", "2", "--ell", "1", "--s", "2",
        "--n", "2", "--radius", "1", "--oracle",
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["result"] == {"volume": 10, "oracle": 10, "match": True}
    assert doc["tool"] == "codedensity"
    assert doc["version"]
    assert doc["config"]["metric"] == "rank"


def test_classify_document_and_roundtrip(capsys):
    code, out, _ = run_cli(
        capsys, "classify", "--family", "msrd", "--growing", "q", "--ell", "1",
        "--eta", "1", "--t", "10", "--d", "5", "--m", "1",
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["result"]["verdict"] == "dense"
    assert doc["result"]["cross_check"]["agrees"] is True
    # parsing then re-serializing is byte-identical
    assert json.dumps(doc, sort_keys=True, indent=2) + "\n" == out


def test_classify_not_dense_has_rational_upper(capsys):
    code, out, _ = run_cli(
        capsys, "classify", "--family", "mrd", "--growing", "s", "--q", "2",
        "--ell", "1", "--n", "3", "--d", "2",
    )
    doc = json.loads(out)
    assert doc["result"]["verdict"] == "not-dense"
    assert doc["result"]["upper_bound"] == "2/9"


def test_bound_density_bracket(capsys):
    code, out, _ = run_cli(
        capsys, "bound", "--kind", "density-bracket", "--metric", "hamming",
        "--q", "2", "--ell", "1", "--s", "2", "--n", "2", "--k", "1", "--d", "2",
    )
    doc = json.loads(out)
    assert doc["result"]["lower"] == "3/5"
    assert doc["result"]["upper"] == "3/5"
    assert doc["result"]["theta_bar"] == "1"


def test_bound_singleton_and_kstar(capsys):
    code, out, _ = run_cli(
        capsys, "bound", "--kind", "singleton", "--metric", "sumrank", "--q", "2",
        "--ell", "1", "--s", "2", "--n", "2", "--t", "2", "--d", "2",
    )
    assert json.loads(out)["result"]["max_cardinality"] == 4
    code, out, _ = run_cli(
        capsys, "bound", "--kind", "kstar", "--metric", "rank", "--q", "2",
        "--ell", "2", "--s", "1", "--n", "3", "--d", "2",
    )
    doc = json.loads(out)
    assert doc["result"] == {"k_star": 1, "extremal_is_singleton": False}


def test_region_csv(capsys):
    code, out, _ = run_cli(capsys, "region", "--t-max", "3", "--eta-max", "2")
    assert code == 0
    lines = [l for l in out.splitlines() if not l.startswith("#")]
    assert lines[0] == "t,eta,verdict"
    assert "1,1,dense" in lines
    assert "1,2,unclassified" in lines
    assert len(lines) == 1 + 6


def test_table1_csv(capsys):
    code, out, _ = run_cli(capsys, "table1")
    assert code == 0
    lines = [l for l in out.splitlines() if not l.startswith("#")]
    assert lines == [
        "eta,t,d,verdict",
        "1,10,5,dense",
        "2,>=1,2,not-dense",
        ">=2,10,5,sparse",
        "3,>=1,3,sparse",
    ]


def test_probe_csv(capsys):
    code, out, _ = run_cli(
        capsys, "probe", "--family", "mds", "--growing", "q", "--ell", "1",
        "--n", "4", "--s", "2", "--d", "2", "--probes", "5,7,11",
    )
    assert code == 0
    lines = [l for l in out.splitlines() if not l.startswith("#")]
    assert lines[0] == "probe,rho,bracket_lower,bracket_upper"
    assert len(lines) == 4


def test_estimate_stream_invariant_json(capsys):
    argv = [
        "estimate", "--metric", "hamming", "--q", "2", "--ell", "1", "--s", "2",
        "--n", "2", "--k", "1", "--d", "2", "--trials", "300", "--seed", "9",
    ]
    _, out1, _ = run_cli(capsys, *argv, "--streams", "1")
    _, out4, _ = run_cli(capsys, *argv, "--streams", "4")
    doc1, doc4 = json.loads(out1), json.loads(out4)
    assert doc1["result"] == doc4["result"]
    assert json.dumps(doc1["result"], sort_keys=True) == json.dumps(doc4["result"], sort_keys=True)
    assert doc1["config"]["streams"] == 1 and doc4["config"]["streams"] == 4
    assert doc1["seed"] == 9


def test_verify_micro_passes(capsys):
    code, out, _ = run_cli(capsys, "verify", "--grid", "micro")
    assert code == 0
    assert out.strip().endswith("PASS (micro grid)")


def test_verify_failure_exit_code(capsys, monkeypatch):
    from codedensity import cli as cli_module
    from codedensity.harness import Verdict

    monkeypatch.setattr(
        cli_module, "run_verification", lambda grid, guards: [Verdict("volume", False, {})]
    )
    code, out, _ = run_cli(capsys, "verify", "--grid", "micro")
    assert code == 1
    assert "FAIL" in out


def test_invalid_arguments_exit_two(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["volume", "--metric", "euclid", "--q", "2", "--n", "2", "--radius", "1"])
    assert exc.value.code == 2
    # semantic errors (not argparse-level) also map to exit 2
    code, _, err = run_cli(
        capsys, "volume", "--metric", "hamming", "--q", "6", "--ell", "1", "--s", "1",
        "--n", "2", "--radius", "1",
    )
    assert code == 2 and "error" in err


def test_guard_violation_exit_three(capsys, monkeypatch):
    monkeypatch.setenv(ENV_GUARD, "5")
    code, _, err = run_cli(
        capsys, "exact", "--metric", "hamming", "--q", "2", "--ell", "1", "--s", "1",
        "--n", "3", "--S", "3", "--d", "2",
    )
    assert code == 3
    assert "exceeds guard 5" in err


def test_approx_rendering(capsys):
    code, out, _ = run_cli(
        capsys, "exact", "--metric", "hamming", "--q", "2", "--ell", "1", "--s", "2",
        "--n", "2", "--k", "1", "--d", "2", "--approx", "4",
    )
    assert code == 0 and out == "0.6000\n"


def test_output_to_file(tmp_path, capsys):
    target = tmp_path / "grid.csv"
    code, out, _ = run_cli(capsys, "region", "--t-max", "2", "--eta-max", "2", "-o", str(target))
    assert code == 0 and out == ""
    text = target.read_text()
    assert "t,eta,verdict" in text

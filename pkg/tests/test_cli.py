import json

import pytest

from betaensemble.cli import main


def _read_csv(path):
    lines = path.read_text().splitlines()
    header = [l for l in lines if l.startswith("#")]
    body = [l for l in lines if not l.startswith("#")]
    return header, body


def test_sample_csv_and_summary(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["sample", "--n", "5", "--beta", "2", "--seed", "7", "--out", str(out)]) == 0
    header, body = _read_csv(out)
    assert "# status: ok" in header and "# seed: 7" in header
    assert body[0] == "index,diag,offdiag" and len(body) == 6
    summary = json.loads((tmp_path / "s.summary.json").read_text())
    assert summary["config"]["n"] == [5] and summary["status"] == "ok"


def test_same_seed_bit_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["spectrum", "--n", "30", "--seed", "3", "--out", str(a)])
    main(["spectrum", "--n", "30", "--seed", "3", "--out", str(b)])
    assert _read_csv(a)[1] == _read_csv(b)[1]


def test_usage_errors_exit_2(tmp_path, capsys):
    assert main(["local-law", "--beta", "-1"]) == 2
    assert "beta" in capsys.readouterr().err
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"n": [10], "bogus": 1}))
    assert main(["spectrum", "--config", str(cfg)]) == 2
    assert "bogus" in capsys.readouterr().err
    assert main(["spectrum", "--n", "abc"]) == 2
    assert main(["rigidity", "--n", "100"]) == 2
    with pytest.raises(SystemExit) as e:
        main(["spectrum", "--unknown-flag"])
    assert e.value.code == 2


def test_flags_override_config(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"experiment": "sample", "n": 9, "seed": 1, "format": "json"}))
    out = tmp_path / "o.json"
    assert main(["--config", str(cfg), "--n", "4", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["config"]["n"] == [4] and doc["config"]["seed"] == 1
    assert len(doc["result"]["rows"]) == 4


def test_nested_subcommands(tmp_path):
    out = tmp_path / "e.json"
    assert main(["special", "eval", "--k", "50", "--points", "7", "--format", "json", "--out", str(out)]) == 0
    rows = json.loads(out.read_text())["result"]["rows"]
    assert len(rows) == 7
    out2 = tmp_path / "x.csv"
    assert main(["resolvent", "expand", "--n", "60", "--trials", "3", "--out", str(out2)]) in (0, 1)
    assert json.loads((tmp_path / "x.summary.json").read_text())["result"]["trials"] == 3


def test_threshold_failure_exit_1(tmp_path):
    # c far below the achievable error at eta ~ n^{-0.9}: every trial exceeds
    out = tmp_path / "l.csv"
    code = main(["local-law", "--n", "50", "--trials", "4", "--c", "0.001", "--grid-re", "3",
                 "--grid-im", "3", "--out", str(out)])
    assert code == 1
    summary = json.loads((tmp_path / "l.summary.json").read_text())
    assert summary["result"]["passed"] is False


def test_runtime_failure_writes_failed_marker(tmp_path):
    out = tmp_path / "f.json"
    # degrees below the required partial-sum range trigger a runtime parameter error
    code = main(["partial-sum", "--n", "10", "--k", "3", "--l", "5", "--format", "json", "--out", str(out)])
    assert code == 2
    assert json.loads(out.read_text())["status"] == "failed"

from __future__ import annotations

import json

import pytest

from hyqbench.cli import EXIT_CONFIG, EXIT_OK, EXIT_RESOURCE, main, parse_overrides, read_csv


def test_print_defaults_lists_every_benchmark(capsys):
    assert main(["--print-defaults"]) == EXIT_OK
    cfg = json.loads(capsys.readouterr().out)
    assert set(cfg["specs"]) == {"state_transfer", "cat", "gkp", "qft", "vqe", "qaoa", "jch", "shor"}


def test_parse_overrides_aliases_and_types():
    got = parse_overrides(["--nd", "9", "--squeeze", "0.222", "--input-bits", "01"])
    assert got == {"n_d": 9, "squeeze": 0.222, "input_bits": "01"}


def test_run_writes_json_and_csv(tmp_path, capsys):
    assert main(["run", "cat", "--alpha", "2", "--out", str(tmp_path)]) == EXIT_OK
    payload = json.loads((tmp_path / "cat.json").read_text())
    assert payload["config"]["specs"]["cat"]["alpha"] == 2.0
    assert payload["result"]["fidelities"]["ideal"] > 0.9
    header, rows = read_csv(tmp_path / "cat_features.csv")
    assert header[0] == "benchmark" and rows[0][0] == "cat"
    assert (tmp_path / "cat_features.csv").read_text().startswith("# config:")


def test_bad_parameter_is_config_error(tmp_path):
    assert main(["run", "cat", "--bogus", "1", "--out", str(tmp_path)]) == EXIT_CONFIG
    assert main(["run", "cat", "--cutoff", "30", "--out", str(tmp_path)]) == EXIT_CONFIG


def test_missing_config_file_is_config_error(tmp_path):
    assert main(["run", "cat", "--config", str(tmp_path / "none.json")]) == EXIT_CONFIG


def test_dimension_cap_is_resource_error(tmp_path):
    assert main(["run", "cat", "--cutoff", str(2**27), "--out", str(tmp_path)]) == EXIT_RESOURCE


def test_wigner_named_state(tmp_path, capsys):
    assert main(["wigner", "--state", "fock:1", "--cutoff", "8", "--out", str(tmp_path)]) == EXIT_OK
    assert "integral=1.0000" in capsys.readouterr().out
    header, rows = read_csv(tmp_path / "wigner_fock_1.csv")
    assert header == ["x", "p", "W"] and len(rows) == 101 * 101


def test_wigner_unknown_state(tmp_path):
    assert main(["wigner", "--state", "squid", "--out", str(tmp_path)]) == EXIT_CONFIG


def test_cluster_reference(tmp_path, capsys):
    assert main(["cluster", "reference", "--out", str(tmp_path)]) == EXIT_OK
    assert "clusters:" in capsys.readouterr().out
    _, rows = read_csv(tmp_path / "linkage.csv")
    assert len(rows) == 7


def test_suite_subset_is_reproducible(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"benchmarks": ["cat", "gkp"], "metrics": {"wigner_points": 51}}))
    out = tmp_path / "out"
    outs = []
    for _ in range(2):
        assert main(["suite", "--config", str(cfg), "--out", str(out)]) == EXIT_OK
        outs.append([(out / f).read_bytes() for f in ("table2_features.csv", "table3_noisy.csv", "suite.json")])
    assert outs[0] == outs[1]
    _, rows = read_csv(out / "table3_noisy.csv")
    assert {r[0] for r in rows} == {"cat", "gkp"}


def test_usage_errors(tmp_path):
    with pytest.raises(SystemExit):
        main(["run"])
    assert main(["suite", "--jobs", "0", "--out", str(tmp_path)]) == EXIT_CONFIG

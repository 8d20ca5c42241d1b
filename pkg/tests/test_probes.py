"""
test_probes.py
--------------
Wordlab — Combinatorics-on-Words Workbench — Test Suite for the probes package
-----------------------------------------------------------------------------
Registry loading and validation, probe runs end to end, report saving,
and the YAML-driven census driver.

Tests cover:
    - load_registry: shipped registry, ConfigError with line numbers
    - run_probe: unknown id, out-of-scope entries, pass verdicts,
      missing parameters, saved reports
    - build_budget / list_probes / format_summary
    - census: count tables, min-density tables, empty ranges, bad configs,
      node limits

Run:
    pytest tests/test_probes.py -v --tb=short

Project: Wordlab — Combinatorics-on-Words Workbench
"""

import pytest
import sys
import os
import json

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from errors import ConfigError
from probes.census import census, format_table, load_census_config, run_census
from probes.registry import load_registry
from probes.run_probe import build_budget, format_summary, list_probes, run_probe


def _write(tmp_path, name: str, text: str) -> str:
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


# ── Registry ───────────────────────────────────────────────────────────────

def test_shipped_registry_loads():
    registry = load_registry()
    assert len(registry) > 50
    assert "1.4.09.1" in registry
    assert "1.3.05.1" in registry
    assert "1.6.13.9.2" in registry


def test_out_of_scope_entries_use_placeholder_runner():
    registry = load_registry()
    flagged = [p for p in registry if p.out_of_scope]
    assert flagged
    assert all(p.runner == "out_of_scope" and p.note for p in flagged)


def test_registry_bad_id_reports_line(tmp_path):
    path = _write(tmp_path, "registry.yaml", (
        "probes:\n"
        "  - id: \"1.1.1\"\n"
        "    title: fine\n"
        "    runner: out_of_scope\n"
        "  - id: \"1.2\"\n"
        "    title: too short\n"
        "    runner: growth\n"
    ))
    with pytest.raises(ConfigError) as exc:
        load_registry(path)
    assert exc.value.line == 5
    assert "line 5" in str(exc.value)


def test_registry_unknown_runner(tmp_path):
    path = _write(tmp_path, "registry.yaml", (
        "probes:\n"
        "  - id: \"1.1.1\"\n"
        "    title: nothing runs this\n"
        "    runner: no_such_runner\n"
    ))
    with pytest.raises(ConfigError) as exc:
        load_registry(path)
    assert exc.value.line == 2


def test_registry_duplicate_id(tmp_path):
    path = _write(tmp_path, "registry.yaml", (
        "probes:\n"
        "  - {id: \"1.1.1\", title: a, runner: growth}\n"
        "  - {id: \"1.1.1\", title: b, runner: growth}\n"
    ))
    with pytest.raises(ConfigError) as exc:
        load_registry(path)
    assert exc.value.line == 3


def test_registry_yaml_syntax_error(tmp_path):
    path = _write(tmp_path, "registry.yaml", "probes:\n  - id: [1.1.1\n")
    with pytest.raises(ConfigError):
        load_registry(path)


# ── run_probe ──────────────────────────────────────────────────────────────

def test_unknown_probe_lists_known_ids():
    report = run_probe("9.9.9", save=False)
    assert report["success"] is False
    assert report["exit_code"] == 1
    assert "1.4.09.1" in report["known_ids"]


def test_out_of_scope_probe():
    report = run_probe("1.1.03.2", save=False)
    assert report["success"] is True
    assert report["verdict"] == "out of scope"
    assert report["exit_code"] == 0
    assert report["note"]


def test_avoidance_probe_exhausts_xyx():
    report = run_probe("1.1.03.1", save=False)
    assert report["verdict"] == "exhausted"
    assert report["certificate"]["length"] == 4
    assert report["certificate"]["verified"] is True


def test_squares_census_probe_passes():
    report = run_probe("1.3.05.1", overrides={"max_length": 10, "random_samples": 20}, save=False)
    assert report["verdict"] == "pass"
    assert report["certificate"]["violations"] == {}
    assert report["exit_code"] == 0


def test_runs_census_probe_passes():
    report = run_probe("1.4.09.1", overrides={"max_length": 10}, save=False)
    assert report["verdict"] == "pass"
    assert report["certificate"]["per_length"]["8"] <= 8


def test_missing_parameter_is_reported(tmp_path):
    path = _write(tmp_path, "registry.yaml", (
        "probes:\n"
        "  - id: \"7.7.7\"\n"
        "    title: maximal words without a pattern\n"
        "    runner: maximal_pfree\n"
    ))
    report = run_probe("7.7.7", registry=load_registry(path), save=False)
    assert report["success"] is False
    assert report["exit_code"] == 1
    assert "pattern" in report["error"]


def test_budget_verdict_exit_code():
    report = run_probe("1.1.03.1", overrides={"alphabet": 3, "pattern": "XX"}, max_nodes=5, save=False)
    assert report["verdict"] == "budget"
    assert report["exit_code"] == 2


def test_saved_report(tmp_path):
    report = run_probe("1.1.03.1", results_dir=str(tmp_path))
    assert report["report_path"] is not None
    with open(report["report_path"], encoding="utf-8") as f:
        saved = json.load(f)
    assert saved["verdict"] == "exhausted"
    assert any(name.endswith(".txt") for name in os.listdir(tmp_path))


def test_report_inputs_reproduce_verdict():
    first = run_probe("1.4.09.1", overrides={"max_length": 8}, save=False)
    again = run_probe("1.4.09.1", overrides=first["inputs"], save=False)
    assert again["verdict"] == first["verdict"]
    assert again["certificate"] == first["certificate"]


def test_build_budget_overrides_win():
    budget = build_budget({"max_length": 10, "max_nodes": 100}, max_nodes=5, max_seconds=None)
    assert budget.max_length == 10
    assert budget.max_nodes == 5


def test_list_probes_rows():
    rows = list_probes()
    assert {"id", "title", "runner", "out_of_scope"} <= set(rows[0])


def test_format_summary_mentions_verdict():
    text = format_summary(run_probe("1.1.03.1", save=False))
    assert "verdict   exhausted" in text
    assert "certificate" in text


# ── Census ─────────────────────────────────────────────────────────────────

def test_census_ternary_square_free_counts(tmp_path):
    from patterns import growth_census

    path = _write(tmp_path, "census.yaml", "predicate: pattern\npattern: XX\nalphabet: 3\nmax_length: 6\n")
    result = run_census(load_census_config(path))
    counts = [row["count"] for row in result["rows"]]
    assert counts == [1, 3, 6, 12, 18, 30, 42]
    assert counts == growth_census("XX", 3, 6)["counts"]


def test_census_power_with_numeric_alpha(tmp_path):
    path = _write(tmp_path, "census.yaml", "predicate: power\nalpha: 2\nalphabet: 2\nmax_length: 4\n")
    outcome = census(path, fmt="tsv")
    assert outcome["success"] is True
    assert outcome["exit_code"] == 0
    assert outcome["table"] == "length\tcount\n0\t1\n1\t2\n2\t2\n3\t2\n4\t0\n"


def test_census_empty_range(tmp_path):
    path = _write(tmp_path, "census.yaml", "predicate: power\nalpha: 3\nalphabet: 2\nmin_length: 5\nmax_length: 4\n")
    outcome = census(path, fmt="json")
    assert outcome["success"] is True
    assert outcome["result"]["rows"] == []


def test_census_min_density(tmp_path):
    path = _write(tmp_path, "census.yaml", (
        "predicate: min-density\nalpha: 3\nalphabet: 2\nminority: 1\nmin_length: 4\nmax_length: 6\n"
    ))
    result = run_census(load_census_config(path))
    assert [row["count"] for row in result["rows"]] == [1, 1, 2]
    assert all(row["status"] == "exact" for row in result["rows"])


def test_census_min_density_infeasible_rows(tmp_path):
    path = _write(tmp_path, "census.yaml", "predicate: min-density\npattern: XX\nalphabet: 2\nmin_length: 3\nmax_length: 4\n")
    result = run_census(load_census_config(path))
    assert result["rows"][0]["status"] == "exact"
    assert result["rows"][1]["status"] == "infeasible"


def test_census_bad_predicate_reports_line(tmp_path):
    path = _write(tmp_path, "census.yaml", "alphabet: 2\npredicate: squares\nmax_length: 4\n")
    with pytest.raises(ConfigError) as exc:
        load_census_config(path)
    assert exc.value.line == 2


def test_census_bad_config_is_exit_one(tmp_path):
    path = _write(tmp_path, "census.yaml", "- just\n- a list\n")
    outcome = census(path)
    assert outcome["success"] is False
    assert outcome["exit_code"] == 1


def test_census_node_limit_is_exit_two(tmp_path):
    path = _write(tmp_path, "census.yaml", "predicate: pattern\npattern: XX\nalphabet: 3\nmax_length: 20\n")
    outcome = census(path, max_nodes=20)
    assert outcome["success"] is True
    assert outcome["exit_code"] == 2


def test_format_table_text_alignment():
    result = {"columns": ["length", "count"], "rows": [{"length": 9, "count": 1}, {"length": 10, "count": 120}]}
    assert format_table(result, "text") == "length  count\n     9      1\n    10    120\n"

"""
run_probe.py
------------
Wordlab — Combinatorics-on-Words Workbench — Probe runner
---------------------------------------------------------
Runs one registered probe: looks the id up in probe_registry.yaml, merges
the registered defaults with caller overrides, builds the search budget,
calls the mapped runner and writes a timestamped JSON report plus a
plain-text summary.

Exit codes carried in every report:
    0  — completed (any verdict except budget)
    2  — completed with a budget verdict
    1  — error (unknown id, bad parameters, runner failure)

Key functions:
    build_budget    — SearchBudget from merged parameters and overrides
    run_probe       — full runner returning the report dict, never raises
    list_probes     — id / title / runner rows for `wordlab probe --list`
    format_summary  — human-readable report text

Project: Wordlab — Combinatorics-on-Words Workbench
"""

import json
import logging
import os
import sys
import time
from datetime import datetime, timezone
from typing import Any, Dict, List, Optional

_REPO_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
try:
    from dotenv import load_dotenv
    load_dotenv(os.path.join(_REPO_ROOT, ".env"), override=False)
except ImportError:
    pass

sys.path.insert(0, _REPO_ROOT)

from errors import UnknownProbeError, WordLabError
from known_facts import DEFAULT_SEED
from probes.registry import ProbeRegistry, load_registry
from probes.runners import RUNNERS, ProbeContext
from schemas import SearchBudget, jsonable

logger = logging.getLogger(__name__)

DEFAULT_RESULTS_DIR = os.path.join(_REPO_ROOT, "results")

BUDGET_KEYS = ("max_length", "max_nodes", "max_seconds")


def results_dir_from_env() -> str:
    return os.getenv("WORDLAB_RESULTS_DIR") or DEFAULT_RESULTS_DIR


def build_budget(params: Dict[str, Any], **overrides: Any) -> SearchBudget:
    """
    Search budget for a probe run.

    Args:
        params: Merged probe parameters; max_length / max_nodes / max_seconds
                are read from here when present.
        **overrides: Caller limits (e.g. --max-nodes); None values are ignored
                     and win over the parameters otherwise.

    Returns:
        SearchBudget.
    """
    values = {key: params[key] for key in BUDGET_KEYS if params.get(key) is not None}
    values.update({k: v for k, v in overrides.items() if v is not None})
    return SearchBudget().with_overrides(**values)


def list_probes(registry: Optional[ProbeRegistry] = None) -> List[Dict[str, Any]]:
    registry = registry or load_registry()
    return [
        {"id": p.id, "title": p.title, "runner": p.runner, "out_of_scope": p.out_of_scope}
        for p in registry
    ]


# ── Report formatting ─────────────────────────────────────────────────────────

def format_summary(report: Dict[str, Any]) -> str:
    """Plain-text summary of a probe report (already JSON-ready)."""
    lines = [
        f"probe     {report.get('probe')}  {report.get('title') or ''}".rstrip(),
        f"runner    {report.get('runner')}",
        f"verdict   {report.get('verdict')}",
    ]
    if report.get("expected"):
        lines.append(f"expected  {report['expected']}")
    if report.get("note"):
        lines.append(f"note      {report['note']}")
    if report.get("error"):
        lines.append(f"error     {report['error']}")
    if report.get("runtime_seconds") is not None:
        lines.append(f"runtime   {report['runtime_seconds']}s")
    if report.get("inputs"):
        lines.append("inputs")
        for key, value in report["inputs"].items():
            lines.append(f"  {key} = {json.dumps(value)}")
    for section in ("certificate", "statistics"):
        body = report.get(section) or {}
        if body:
            lines.append(section)
            for key, value in body.items():
                text = json.dumps(value)
                if len(text) > 200:
                    text = text[:197] + "..."
                lines.append(f"  {key}: {text}")
    return "\n".join(lines) + "\n"


def _save(report: Dict[str, Any], results_dir: str, timestamp: str) -> Optional[str]:
    os.makedirs(results_dir, exist_ok=True)
    stem = f"probe_{report['probe']}_{timestamp}"
    json_path = os.path.join(results_dir, stem + ".json")
    try:
        with open(json_path, "w", encoding="utf-8") as f:
            json.dump(report, f, indent=2)
        with open(os.path.join(results_dir, stem + ".txt"), "w", encoding="utf-8") as f:
            f.write(format_summary(report))
    except OSError as e:
        logger.warning("run_probe: could not save report: %s", e)
        return None
    return json_path


# ── Runner ────────────────────────────────────────────────────────────────────

def run_probe(
    probe_id: str,
    overrides: Optional[Dict[str, Any]] = None,
    registry: Optional[ProbeRegistry] = None,
    results_dir: Optional[str] = None,
    save: bool = True,
    threads: int = 1,
    seed: int = DEFAULT_SEED,
    max_nodes: Optional[int] = None,
    max_seconds: Optional[float] = None,
) -> Dict[str, Any]:
    """
    Run a registered probe and return its report.

    Args:
        probe_id: Dotted problem id, e.g. "1.4.09.1".
        overrides: Parameter values replacing the registered defaults.
        registry: Pre-loaded registry (loaded from probe_registry.yaml if None).
        results_dir: Where reports go; WORDLAB_RESULTS_DIR or results/ by default.
        save: Whether to write the JSON report and text summary.
        threads: Worker threads for censuses that split their enumeration.
        seed: Seed for randomized parts (sampling).
        max_nodes: Node limit overriding the probe's own.
        max_seconds: Time limit overriding the probe's own.

    Returns:
        Dict: {success, probe, title, runner, inputs, verdict, certificate,
               statistics, runtime_seconds, timestamp, exit_code, error,
               report_path}. Unknown ids add known_ids.

    Raises:
        Never — every failure is reported in the returned dict.
    """
    timestamp = datetime.now(timezone.utc).strftime("%Y%m%d_%H%M%S")
    report: Dict[str, Any] = {
        "success": False,
        "probe": probe_id,
        "title": None,
        "runner": None,
        "inputs": {},
        "verdict": None,
        "certificate": {},
        "statistics": {},
        "runtime_seconds": None,
        "timestamp": timestamp,
        "exit_code": 1,
        "error": None,
        "report_path": None,
    }

    try:
        registry = registry or load_registry()
        probe = registry.get(probe_id)
    except UnknownProbeError as e:
        report.update(error=str(e), known_ids=e.known_ids)
        logger.warning("run_probe: %s", e)
        return report
    except WordLabError as e:
        report["error"] = str(e)
        return report

    params = dict(probe.defaults)
    params.update(overrides or {})
    report.update(title=probe.title, runner=probe.runner, inputs=jsonable(params),
                  expected=probe.expected, note=probe.note)

    start = time.time()
    try:
        budget = build_budget(params, max_nodes=max_nodes, max_seconds=max_seconds)
        ctx = ProbeContext(budget=budget, threads=threads, seed=seed)
        logger.info("run_probe: %s via %s", probe.id, probe.runner)
        result = RUNNERS[probe.runner](params, ctx)
    except (WordLabError, ValueError, KeyError, TypeError) as e:
        message = f"missing parameter {e.args[0]!r}" if isinstance(e, KeyError) else str(e)
        report.update(error=message, runtime_seconds=round(time.time() - start, 3))
        logger.warning("run_probe: %s failed: %s", probe.id, message)
    else:
        verdict = result["verdict"]
        report.update(
            success=True,
            verdict=verdict,
            certificate=jsonable(result.get("certificate", {})),
            statistics=jsonable(result.get("statistics", {})),
            runtime_seconds=round(time.time() - start, 3),
            exit_code=2 if verdict == "budget" else 0,
        )
        if verdict == "budget":
            logger.warning("run_probe: %s stopped on its budget", probe.id)

    if save:
        report["report_path"] = _save(report, results_dir or results_dir_from_env(), timestamp)
    return report


if __name__ == "__main__":
    if len(sys.argv) < 2:
        print("usage: python probes/run_probe.py <probe id>")
        sys.exit(1)
    outcome = run_probe(sys.argv[1])
    print(format_summary(outcome), end="")
    sys.exit(outcome["exit_code"])

"""
census.py
---------
Wordlab — Combinatorics-on-Words Workbench — Census driver
----------------------------------------------------------
Per-length tables read from a YAML config. A config names one predicate
family, an alphabet size and a length range:

    predicate: power          # pattern | power | abelian | k-abelian | additive | min-density
    alphabet: 2
    min_length: 0
    max_length: 20
    alpha: "3"                # power / min-density
    pattern: XX               # pattern / min-density (instead of alpha)
    n: 3                      # abelian family: power degree
    k: 2                      # k-abelian: factor length bound
    min_period: 1
    values: [0, 1, 2, 3]      # additive: digit value per letter
    minority: 1               # min-density: the letter being minimised
    max_nodes: 1000000
    threads: 1

Count censuses report the number of free words of each length (the same
table growth_census returns); min-density censuses report the fewest
occurrences of the minority letter with a witness, or "infeasible".
An empty length range gives an empty table.

Key functions:
    load_census_config  — parse + validate, ConfigError with the line
    run_census          — compute the table for a config
    format_table        — TSV / JSON / aligned text rendering
    census              — outer entry point, never raises

Project: Wordlab — Combinatorics-on-Words Workbench
"""

from __future__ import annotations

import json
import logging
from typing import Any, Dict, List, Optional

import yaml
from pydantic import ValidationError
from tqdm import tqdm

from abelian import AbelianPowerPredicate, letter_values
from complexity import min_letter_density
from errors import ConfigError, DomainError, InfeasibleError, WordLabError
from patterns import Pattern, as_predicate, growth_census
from repetitions import PowerFreePredicate
from schemas import CensusConfig, SearchBudget, jsonable
from search import FreenessPredicate
from word_core import Alphabet

logger = logging.getLogger(__name__)

COUNT_COLUMNS = ["length", "count"]
DENSITY_COLUMNS = ["length", "count", "density", "witness", "status"]


# ── Config ────────────────────────────────────────────────────────────────────

def _key_lines(text: str) -> Dict[str, int]:
    root = yaml.compose(text, Loader=yaml.SafeLoader)
    if not isinstance(root, yaml.MappingNode):
        return {}
    return {k.value: k.start_mark.line + 1 for k, _ in root.value}


def load_census_config(path: str) -> CensusConfig:
    """
    Read a census config.

    Args:
        path: YAML file holding one mapping.

    Returns:
        CensusConfig.

    Raises:
        ConfigError: unreadable file, YAML syntax error or invalid field,
                     with the line of the offending key.
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise ConfigError(f"cannot read {path}: {e.strerror or e}")
    try:
        data = yaml.safe_load(text)
        lines = _key_lines(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        problem = getattr(e, "problem", None) or str(e)
        raise ConfigError(f"{path}: {problem}", line=mark.line + 1 if mark else None)
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: a census config is a single mapping", line=1)
    if data.get("alpha") is not None:
        data["alpha"] = str(data["alpha"])
    try:
        return CensusConfig(**data)
    except ValidationError as e:
        first = e.errors()[0]
        key = str(first["loc"][0]) if first.get("loc") else ""
        logger.warning("load_census_config: %s rejected at %s", path, key or "top level")
        raise ConfigError(f"{path}: {key or 'config'}: {first['msg']}", line=lines.get(key, 1))


def _predicate(config: CensusConfig) -> FreenessPredicate:
    kind = config.predicate
    if kind == "pattern" or (kind == "min-density" and config.pattern):
        if not config.pattern:
            raise ConfigError("predicate 'pattern' needs a pattern")
        return as_predicate(Pattern.parse(config.pattern), config.alphabet)
    if kind in ("power", "min-density"):
        if config.alpha is None:
            raise ConfigError(f"predicate {kind!r} needs alpha (or a pattern)")
        return PowerFreePredicate(config.alpha, config.strict)
    values = config.values
    if kind == "additive" and values is None:
        values = list(letter_values(Alphabet.digits(config.alphabet)))
    if values is not None and len(values) != config.alphabet:
        raise ConfigError(f"values lists {len(values)} letters, alphabet has {config.alphabet}")
    return AbelianPowerPredicate(kind, config.n or 2, config.min_period, config.k, values)


# ── Census ────────────────────────────────────────────────────────────────────

def run_census(config: CensusConfig, progress: bool = False) -> Dict[str, Any]:
    """
    Compute the per-length table for a config.

    Returns:
        Dict: {predicate, alphabet, columns, rows, complete}. Rows are dicts
        keyed by the columns, one per length in [min_length, max_length].

    Raises:
        ConfigError / DomainError: when the config names an invalid predicate.
    """
    predicate = _predicate(config)
    lengths = list(range(config.min_length, config.max_length + 1))
    density = config.predicate == "min-density"
    result: Dict[str, Any] = {
        "predicate": str(predicate),
        "alphabet": config.alphabet,
        "columns": DENSITY_COLUMNS if density else COUNT_COLUMNS,
        "rows": [],
        "complete": True,
    }
    if not lengths:
        logger.info("run_census: empty length range")
        return result

    if not density:
        report = growth_census(predicate, config.alphabet, config.max_length, threads=config.threads,
                               max_nodes=config.max_nodes, progress=progress)
        result["rows"] = [{"length": n, "count": report["counts"][n]} for n in lengths]
        result["complete"] = report["complete"]
        result["growth"] = report["growth"]
        return result

    budget = SearchBudget().with_overrides(max_nodes=config.max_nodes, max_seconds=config.max_seconds)
    for length in tqdm(lengths, disable=not progress, desc=f"min density {predicate}"):
        try:
            row = min_letter_density(predicate, length, budget, config.alphabet, config.minority)
        except InfeasibleError:
            result["rows"].append({"length": length, "count": None, "density": None,
                                   "witness": None, "status": "infeasible"})
            continue
        status = row["verdict"]
        if status == "budget":
            result["complete"] = False
        result["rows"].append({"length": length, "count": row["count"], "density": row["density"],
                               "witness": row["witness"], "status": status})
    return result


def format_table(result: Dict[str, Any], fmt: str = "tsv") -> str:
    """Render a census result as TSV, JSON or aligned text."""
    if fmt == "json":
        return json.dumps(jsonable(result), indent=2) + "\n"
    columns = result["columns"]
    cells: List[List[str]] = [list(columns)]
    for row in jsonable(result["rows"]):
        cells.append(["" if row.get(c) is None else str(row[c]) for c in columns])
    if fmt == "tsv":
        return "".join("\t".join(r) + "\n" for r in cells)
    if fmt == "text":
        widths = [max(len(r[i]) for r in cells) for i in range(len(columns))]
        return "".join("  ".join(v.rjust(w) for v, w in zip(r, widths)).rstrip() + "\n" for r in cells)
    raise DomainError(f"unknown table format {fmt!r}")


def census(
    path: str,
    fmt: str = "tsv",
    progress: bool = False,
    threads: Optional[int] = None,
    max_nodes: Optional[int] = None,
) -> Dict[str, Any]:
    """
    Load a census config, run it and render the table.

    Args:
        path: Census YAML config.
        fmt: "tsv", "json" or "text".
        progress: Show a tqdm bar.
        threads: Overrides the config's thread count.
        max_nodes: Overrides the config's node limit.

    Returns:
        Dict: {success, table, result, error, exit_code}; exit_code is 2
        when a node limit cut the census short.

    Raises:
        Never — errors are returned in the dict.
    """
    try:
        config = load_census_config(path)
        updates = {k: v for k, v in {"threads": threads, "max_nodes": max_nodes}.items() if v is not None}
        if updates:
            config = config.model_copy(update=updates)
        result = run_census(config, progress=progress)
        table = format_table(result, fmt)
    except (WordLabError, ValueError) as e:
        logger.warning("census: %s", e)
        return {"success": False, "table": None, "result": None, "error": str(e), "exit_code": 1}
    return {
        "success": True,
        "table": table,
        "result": jsonable(result),
        "error": None,
        "exit_code": 0 if result["complete"] else 2,
    }

"""
registry.py
-----------
Wordlab — Combinatorics-on-Words Workbench — Probe registry loader
-----------------------------------------------------------------
Reads probe_registry.yaml into validated ProbeDescriptor entries. Every
problem id maps to exactly one runner; problems outside desk scale are
registered with out_of_scope: true and a note instead of being left out.

Malformed YAML, invalid entries, duplicate ids and unknown runner names
raise ConfigError carrying the YAML line number of the offending entry.

Key functions:
    - read_yaml_entries: YAML list under a top-level key, with line marks
    - ProbeRegistry: ids, get (UnknownProbeError), membership, size
    - load_registry: parse + validate the registry file

Project: Wordlab — Combinatorics-on-Words Workbench
"""

from __future__ import annotations

import logging
import os
from typing import Dict, Iterable, List, Optional, Tuple

import yaml
from pydantic import ValidationError

from errors import ConfigError, UnknownProbeError
from schemas import ProbeDescriptor

logger = logging.getLogger(__name__)

REGISTRY_PATH = os.path.join(os.path.dirname(os.path.abspath(__file__)), "probe_registry.yaml")


def _entry_lines(text: str, key: str) -> List[int]:
    """1-based start line of each item in the sequence under `key`."""
    root = yaml.compose(text, Loader=yaml.SafeLoader)
    if not isinstance(root, yaml.MappingNode):
        return []
    for k_node, v_node in root.value:
        if k_node.value == key and isinstance(v_node, yaml.SequenceNode):
            return [item.start_mark.line + 1 for item in v_node.value]
    return []


def read_yaml_entries(path: str, key: str) -> List[Tuple[int, Dict]]:
    """
    Load the list stored under `key` in a YAML file.

    Args:
        path: YAML file.
        key: Top-level key holding a list of mappings.

    Returns:
        List of (line number, entry dict) pairs.

    Raises:
        ConfigError: unreadable file, YAML syntax error, or wrong shape.
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise ConfigError(f"cannot read {path}: {e.strerror or e}")
    try:
        data = yaml.safe_load(text)
        lines = _entry_lines(text, key)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        problem = getattr(e, "problem", None) or str(e)
        raise ConfigError(f"{path}: {problem}", line=mark.line + 1 if mark else None)
    if not isinstance(data, dict) or not isinstance(data.get(key), list):
        raise ConfigError(f"{path}: expected a top-level '{key}:' list", line=1)
    entries = data[key]
    if len(lines) != len(entries):
        lines = [None] * len(entries)
    out = []
    for line, entry in zip(lines, entries):
        if not isinstance(entry, dict):
            raise ConfigError(f"{path}: each '{key}' item must be a mapping", line=line)
        out.append((line, entry))
    return out


# ── Registry ─────────────────────────────────────────────────────────────────

class ProbeRegistry:
    """Probe descriptors by id, in file order."""

    def __init__(self, probes: Iterable[ProbeDescriptor]):
        self._probes: Dict[str, ProbeDescriptor] = {}
        for probe in probes:
            self._probes[probe.id] = probe

    @property
    def ids(self) -> List[str]:
        return list(self._probes)

    def get(self, probe_id: str) -> ProbeDescriptor:
        try:
            return self._probes[probe_id]
        except KeyError:
            raise UnknownProbeError(probe_id, self.ids)

    def __contains__(self, probe_id: object) -> bool:
        return probe_id in self._probes

    def __len__(self) -> int:
        return len(self._probes)

    def __iter__(self):
        return iter(self._probes.values())


def load_registry(path: Optional[str] = None, runners: Optional[Iterable[str]] = None) -> ProbeRegistry:
    """
    Parse and validate the probe registry.

    Args:
        path: Registry YAML (defaults to probes/probe_registry.yaml).
        runners: Known runner names; defaults to the names in probes.runners.

    Returns:
        ProbeRegistry.

    Raises:
        ConfigError: with the line of the first bad entry.
    """
    path = path or REGISTRY_PATH
    if runners is None:
        from probes.runners import RUNNERS
        runners = RUNNERS
    known_runners = set(runners)
    seen: Dict[str, int] = {}
    probes = []
    for line, entry in read_yaml_entries(path, "probes"):
        entry = dict(entry)
        entry["id"] = str(entry.get("id", ""))
        if entry.get("out_of_scope"):
            entry.setdefault("runner", "out_of_scope")
        try:
            probe = ProbeDescriptor(**entry)
        except ValidationError as e:
            first = e.errors()[0]
            where = ".".join(str(p) for p in first.get("loc", ())) or "entry"
            raise ConfigError(f"probe {entry['id'] or '?'}: {where}: {first['msg']}", line=line)
        if probe.id in seen:
            raise ConfigError(f"duplicate probe id {probe.id} (first at line {seen[probe.id]})", line=line)
        if probe.runner not in known_runners:
            raise ConfigError(f"probe {probe.id}: unknown runner {probe.runner!r}", line=line)
        seen[probe.id] = line
        probes.append(probe)
    logger.info("load_registry: %d probes from %s", len(probes), path)
    return ProbeRegistry(probes)

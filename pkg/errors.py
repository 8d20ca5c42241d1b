"""
errors.py
---------
Wordlab — Combinatorics-on-Words Workbench — Exception hierarchy
---------------------------------------------------------------
Library operations raise these for contract violations. The outer
surfaces (probes/run_probe.py, probes/census.py, main.py) catch every
WordLabError and turn it into a structured {"success": False, "error": ...}
dict plus an exit code; they never raise to their caller.

Classes:
    - WordLabError: base class
    - DomainError: precondition on an input value failed (also a ValueError)
    - DomainMismatchError: letter outside a morphism's domain / alphabet
    - NotProlongableError: fixed point requested where none exists
    - UnsupportedError: valid request the chosen mode cannot answer
    - InfeasibleError: no object of the requested kind exists
    - BudgetError: enumeration would exceed the configured feasibility cap
    - ConfigError: malformed YAML / JSON configuration
    - UnknownProbeError: probe id not in the registry

Project: Wordlab — Combinatorics-on-Words Workbench
"""

from typing import List, Optional


class WordLabError(Exception):
    """Base class for every error raised by the workbench."""


class DomainError(WordLabError, ValueError):
    """An argument violates an operation's precondition."""


class DomainMismatchError(DomainError):
    """A letter does not belong to the alphabet it is used with."""


class NotProlongableError(DomainError):
    """The morphism has no fixed point starting with the requested letter."""


class UnsupportedError(WordLabError):
    """The request is well-formed but outside what the chosen mode supports."""


class InfeasibleError(WordLabError):
    """No word satisfying the constraints exists at the requested length."""


class BudgetError(WordLabError):
    """Exhaustive enumeration would exceed the configured size cap."""


class ConfigError(WordLabError):
    """A configuration file or document is malformed."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnknownProbeError(WordLabError):
    """The probe id is not registered."""

    def __init__(self, probe_id: str, known_ids: List[str]):
        self.probe_id = probe_id
        self.known_ids = known_ids
        super().__init__(
            f"unknown probe id {probe_id!r}; known ids: {', '.join(known_ids)}"
        )

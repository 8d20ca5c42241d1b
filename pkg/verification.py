"""
verification.py
---------------
Wordlab — Combinatorics-on-Words Workbench — Certificate verification layer
--------------------------------------------------------------------------
Independent re-checks of the certificates the searches and solvers emit:
encounter witnesses, runs, search outcomes, F-factorizations, word
equation solutions, PCP solutions and shuffles. Every check recomputes
from the definition rather than trusting the producer. Never raises
exceptions to caller — returns structured dicts.

Key functions:
    - verify_encounter: substitution of the assignment reproduces the factor
    - verify_runs: maximality + least period + agreement with brute force
    - verify_search_outcome: found/exhausted words satisfy the predicate
    - verify_factorization: concatenation, component membership, control word
    - verify_equation_solution: every equation holds
    - verify_pcp_solution: h(x) = g(x), x nonempty
    - verify_shuffle: w = u0 ⧢_β u1

Project: Wordlab — Combinatorics-on-Words Workbench
"""

from __future__ import annotations

import logging
from typing import Dict, Sequence

from factorizations import FFactorizationSpec, PcpInstance, WordEquation
from patterns import Pattern, shuffle, substitute
from repetitions import runs_bruteforce
from schemas import ConductionSequence, EncounterWitness, Run, SearchOutcome
from search import FreenessPredicate
from word_core import Word, coerce_word

logger = logging.getLogger(__name__)


def _failed(reason: str) -> dict:
    logger.warning("verification failed: %s", reason)
    return {"valid": False, "reason": reason}


def verify_encounter(w: Word, p: Pattern, witness: EncounterWitness) -> dict:
    """
    Check that substituting the witness assignment into p yields the factor
    of w at the witness position.

    Args:
        w: Host word.
        p: Pattern.
        witness: Assignment plus 1-indexed position.

    Returns:
        dict: {"valid": bool, "reason": str|None}.
    """
    try:
        if set(witness.assignment) != set(p.variables):
            return _failed(f"assignment covers {sorted(witness.assignment)}, pattern needs {list(p.variables)}")
        image = substitute(p, witness.assignment, w.alphabet)
        start = witness.position - 1
        factor = w.letters[start:start + len(image)]
        if factor != image.letters:
            return _failed(f"p under the assignment is {image}, w has {w.alphabet.render(factor)} at {witness.position}")
        if len(image) != witness.length:
            return _failed(f"witness length {witness.length} differs from image length {len(image)}")
        return {"valid": True, "reason": None}
    except Exception as e:
        return _failed(f"encounter check error: {e}")


def verify_runs(w: Word, runs: Sequence[Run]) -> dict:
    """
    Check every run is a maximal repetition with its least period and that
    the list matches the brute-force enumeration.

    Returns:
        dict: {"valid": bool, "reason": str|None, "count": int}.
    """
    try:
        letters = w.letters
        n = len(letters)
        for run in runs:
            s, e, p = run.start - 1, run.end, run.period
            if e > n:
                return _failed(f"run {run} leaves the word")
            block = letters[s:e]
            if any(block[i] != block[i + p] for i in range(len(block) - p)):
                return _failed(f"run {run} does not have period {p}")
            if s > 0 and letters[s - 1] == letters[s - 1 + p]:
                return _failed(f"run {run} extends to the left")
            if e < n and letters[e] == letters[e - p]:
                return _failed(f"run {run} extends to the right")
        expected = {(r.start, r.end, r.period) for r in runs_bruteforce(w)}
        given = {(r.start, r.end, r.period) for r in runs}
        if expected != given:
            return _failed(f"{len(given ^ expected)} runs differ from the brute-force list")
        return {"valid": True, "reason": None, "count": len(given)}
    except Exception as e:
        return _failed(f"runs check error: {e}")


def verify_search_outcome(outcome: SearchOutcome, predicate: FreenessPredicate) -> dict:
    """
    Check that the reported word satisfies the predicate and that a found
    verdict reached the recorded length.
    """
    try:
        if outcome.word is None:
            if outcome.verdict == "found":
                return _failed("found verdict without a word")
            return {"valid": True, "reason": None}
        if not predicate.holds(outcome.word.letters):
            return _failed(f"{outcome.word} violates {predicate}")
        if outcome.certificate.get("length", len(outcome.word)) != len(outcome.word):
            return _failed("certificate length disagrees with the word")
        return {"valid": True, "reason": None}
    except Exception as e:
        return _failed(f"search outcome check error: {e}")


def verify_factorization(
    w: Word,
    spec: FFactorizationSpec,
    factors: Sequence[str],
    indices: Sequence[int],
) -> dict:
    """Concatenation equals w, each factor lies in its component, and the index word lies in L."""
    try:
        rendered = "".join(spec.sigma.glyph(c) for c in coerce_word(w, spec.sigma).letters)
        if "".join(factors) != rendered:
            return _failed("factors do not concatenate to w")
        if len(factors) != len(indices):
            return _failed("one index per factor is required")
        for f, i in zip(factors, indices):
            if not f:
                return _failed("factors must be nonempty")
            comp = spec.components[i - 1]
            ok = comp.accepts(list(f)) if hasattr(comp, "accepts") else bool(comp(f))
            if not ok:
                return _failed(f"factor {f!r} is not in L_{i}")
        if not spec.control.accepts([str(i) for i in indices]):
            return _failed(f"index word {''.join(map(str, indices))} is not in L")
        return {"valid": True, "reason": None}
    except Exception as e:
        return _failed(f"factorization check error: {e}")


def verify_equation_solution(system: Sequence[WordEquation], assignment: Dict[str, str]) -> dict:
    try:
        for eq in system:
            if not eq.holds(assignment):
                return _failed(f"{eq} fails under {assignment}")
        return {"valid": True, "reason": None}
    except Exception as e:
        return _failed(f"equation check error: {e}")


def verify_pcp_solution(inst: PcpInstance, x: Word) -> dict:
    try:
        if len(x) == 0:
            return _failed("PCP solutions are nonempty")
        hx, gx = inst.h.apply(x), inst.g.apply(x)
        if hx != gx:
            return _failed(f"h(x) = {hx} but g(x) = {gx}")
        return {"valid": True, "reason": None, "image": str(hx)}
    except Exception as e:
        return _failed(f"PCP check error: {e}")


def verify_shuffle(u0: Word, u1: Word, beta: ConductionSequence, w: Word) -> dict:
    try:
        built = shuffle(u0, u1, beta)
        if built.letters != coerce_word(w, built.alphabet).letters:
            return _failed(f"u0 ⧢_β u1 is {built}, not {w}")
        return {"valid": True, "reason": None}
    except Exception as e:
        return _failed(f"shuffle check error: {e}")

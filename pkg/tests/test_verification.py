"""
test_verification.py
---------------------
Wordlab — Combinatorics-on-Words Workbench — Test Suite for verification.py
--------------------------------------------------------------------------
Independent re-checks of reported certificates. Each verifier returns
{"valid", "reason"} and never raises, so bad certificates must come
back as valid=False with a reason.

Tests cover:
    - verify_encounter: genuine and forged witnesses
    - verify_runs: complete list, missing run, non-maximal run
    - verify_search_outcome: valid outcome, tampered word
    - verify_factorization / verify_equation_solution / verify_pcp_solution
    - verify_shuffle

Run:
    pytest tests/test_verification.py -v --tb=short

Project: Wordlab — Combinatorics-on-Words Workbench
"""

import pytest
import sys
import os

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from patterns import Pattern, encounters, longest_avoiding
from repetitions import PowerFreePredicate, count_runs
from schemas import ConductionSequence, EncounterWitness, Run, SearchBudget
from verification import (
    verify_encounter,
    verify_equation_solution,
    verify_factorization,
    verify_pcp_solution,
    verify_runs,
    verify_search_outcome,
    verify_shuffle,
)
from word_core import Alphabet, Word


# ── Imports ────────────────────────────────────────────────────────────────

def test_verification_imports():
    """Every verifier should import without error."""
    for fn in (verify_encounter, verify_runs, verify_search_outcome, verify_factorization,
               verify_equation_solution, verify_pcp_solution, verify_shuffle):
        assert callable(fn)


# ── verify_encounter ───────────────────────────────────────────────────────

def test_verify_encounter_genuine_witness():
    w = Word.parse("abcabc")
    p = Pattern.parse("XX")
    result = verify_encounter(w, p, encounters(w, p))
    assert result == {"valid": True, "reason": None}


def test_verify_encounter_wrong_position():
    w = Word.parse("abcabc")
    witness = EncounterWitness(assignment={"X": Word.parse("abc")}, position=2, length=6)
    result = verify_encounter(w, Pattern.parse("XX"), witness)
    assert result["valid"] is False
    assert result["reason"]


def test_verify_encounter_missing_variable():
    w = Word.parse("aabba")
    witness = EncounterWitness(assignment={"X": Word.parse("a")}, position=1, length=3)
    assert verify_encounter(w, Pattern.parse("XYX"), witness)["valid"] is False


# ── verify_runs ────────────────────────────────────────────────────────────

def test_verify_runs_complete_list():
    w = Word.parse("aabaabaa")
    count, runs = count_runs(w)
    result = verify_runs(w, runs)
    assert result["valid"] is True
    assert result["count"] == count == 4


def test_verify_runs_missing_run():
    w = Word.parse("aabaabaa")
    _, runs = count_runs(w)
    assert verify_runs(w, runs[1:])["valid"] is False


def test_verify_runs_non_maximal():
    """[1, 6] with period 3 is not a run of aabaabaa: it extends right."""
    w = Word.parse("aabaabaa")
    result = verify_runs(w, [Run(start=1, end=6, period=3)])
    assert result["valid"] is False
    assert "extends" in result["reason"]


# ── verify_search_outcome ──────────────────────────────────────────────────

def test_verify_search_outcome_valid():
    outcome = longest_avoiding(Pattern.parse("XX"), 3, SearchBudget(max_length=40))
    assert verify_search_outcome(outcome, PowerFreePredicate(2))["valid"] is True


def test_verify_search_outcome_tampered_word():
    outcome = longest_avoiding(Pattern.parse("XX"), 3, SearchBudget(max_length=10))
    forged = outcome.model_copy(update={"word": Word.parse("aabcabcabc", Alphabet.default(3))})
    result = verify_search_outcome(forged, PowerFreePredicate(2))
    assert result["valid"] is False


# ── Factorizations, equations, PCP ─────────────────────────────────────────

def test_verify_factorization():
    from factorizations import FFactorizationSpec

    spec = FFactorizationSpec.from_json({"sigma": ["a", "b"], "components": [["a", "ab"], ["b"]]})
    w = Word.parse("abb")
    assert verify_factorization(w, spec, ["ab", "b"], [1, 2])["valid"] is True
    assert verify_factorization(w, spec, ["ab", "b"], [2, 2])["valid"] is False
    assert verify_factorization(w, spec, ["a", "b"], [1, 2])["valid"] is False


def test_verify_equation_solution():
    from factorizations import parse_system

    system = parse_system("xy = yx")
    assert verify_equation_solution(system, {"x": "ab", "y": "abab"})["valid"] is True
    assert verify_equation_solution(system, {"x": "a", "y": "b"})["valid"] is False


def test_verify_pcp_solution():
    from factorizations import PcpInstance

    inst = PcpInstance.parse("a->ab;b->a", "a->a;b->ba")
    good = verify_pcp_solution(inst, Word.parse("ab", inst.h.domain))
    assert good["valid"] is True
    assert good["image"] == "aba"
    assert verify_pcp_solution(inst, Word.parse("a", inst.h.domain))["valid"] is False
    assert verify_pcp_solution(inst, Word.parse("", inst.h.domain))["valid"] is False


# ── verify_shuffle ─────────────────────────────────────────────────────────

def test_verify_shuffle():
    u = Word.parse("abc")
    beta = ConductionSequence.parse("001011")
    assert verify_shuffle(u, u, beta, Word.parse("abacbc"))["valid"] is True
    assert verify_shuffle(u, u, beta, Word.parse("abcabc"))["valid"] is False


def test_verify_shuffle_bad_counts_is_reported_not_raised():
    u = Word.parse("abc")
    result = verify_shuffle(u, u, ConductionSequence.parse("0000"), Word.parse("abac"))
    assert result["valid"] is False
    assert "shuffle check error" in result["reason"]

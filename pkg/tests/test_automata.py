"""
test_automata.py
----------------
Wordlab — Combinatorics-on-Words Workbench — Test Suite for automata.py
----------------------------------------------------------------------
DFA construction and validation, runs, and the subset exploration that
finds the shortest word outside a substituted language.

Tests cover:
    - DFA.from_json / load: valid automata, ConfigError on bad input
    - from_words, cycle, universal, empty
    - first_rejected: universal and non-universal substitutions

Run:
    pytest tests/test_automata.py -v --tb=short

Project: Wordlab — Combinatorics-on-Words Workbench
"""

import pytest
import sys
import os
import json

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from automata import DEAD, DFA, first_rejected
from errors import ConfigError, DomainError


EVEN_A = {
    "alphabet": ["a", "b"],
    "states": ["even", "odd"],
    "initial": "even",
    "accepting": ["even"],
    "transitions": {
        "even": {"a": "odd", "b": "even"},
        "odd": {"a": "even", "b": "odd"},
    },
}


# ── Loading ────────────────────────────────────────────────────────────────

def test_from_json_even_number_of_a():
    dfa = DFA.from_json(EVEN_A)
    assert dfa.accepts("")
    assert dfa.accepts("abba")
    assert not dfa.accepts("ab")


def test_from_json_missing_field():
    data = {k: v for k, v in EVEN_A.items() if k != "initial"}
    with pytest.raises(ConfigError) as exc:
        DFA.from_json(data)
    assert "initial" in str(exc.value)


def test_from_json_partial_transition_table():
    """Every state needs a move on every symbol."""
    data = json.loads(json.dumps(EVEN_A))
    del data["transitions"]["odd"]["b"]
    with pytest.raises(ConfigError):
        DFA.from_json(data)


def test_from_json_unknown_target_state():
    data = json.loads(json.dumps(EVEN_A))
    data["transitions"]["odd"]["b"] = "nowhere"
    with pytest.raises(ConfigError):
        DFA.from_json(data)


def test_load_reports_json_line(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{\n  "alphabet": ["a"],\n  "states": [,]\n}\n', encoding="utf-8")
    with pytest.raises(ConfigError) as exc:
        DFA.load(str(path))
    assert exc.value.line == 3


def test_to_json_reloads_to_same_automaton():
    dfa = DFA.from_json(EVEN_A)
    assert DFA.from_json(dfa.to_json()) == dfa


# ── Constructions ──────────────────────────────────────────────────────────

def test_from_words_finite_language():
    dfa = DFA.from_words(["ab", "b"], "ab")
    assert dfa.accepts("ab")
    assert dfa.accepts("b")
    assert not dfa.accepts("")
    assert not dfa.accepts("a")
    assert not dfa.accepts("abb")
    assert DEAD in dfa.states


def test_from_words_rejects_foreign_symbol():
    with pytest.raises(DomainError):
        DFA.from_words(["ac"], "ab")


def test_cycle_language():
    dfa = DFA.cycle("12", "12")
    for word in ("", "12", "1212"):
        assert dfa.accepts(word)
    for word in ("1", "21", "121"):
        assert not dfa.accepts(word)


def test_universal_and_empty():
    assert DFA.universal("ab").accepts("abba")
    assert not DFA.empty("ab").accepts("")


def test_symbol_outside_alphabet_rejects():
    dfa = DFA.universal("ab")
    assert dfa.run("abc") is None
    assert not dfa.accepts("abc")


# ── Substitution ───────────────────────────────────────────────────────────

def test_first_rejected_universal_language():
    """Any word over {a, b} splits into single letters."""
    control = DFA.universal("12")
    components = [DFA.from_words(["a"], "ab"), DFA.from_words(["b"], "ab")]
    word, explored = first_rejected(control, components, "ab")
    assert word is None
    assert explored >= 1


def test_first_rejected_alternating_control():
    """(12)* with components {a}, {b} only covers (ab)*, so 'a' is the first miss."""
    control = DFA.cycle("12", "12")
    components = [DFA.from_words(["a"], "ab"), DFA.from_words(["b"], "ab")]
    word, _ = first_rejected(control, components, "ab")
    assert word == ("a",)


def test_first_rejected_empty_word_outside():
    control = DFA.from_words(["1"], "1")
    components = [DFA.universal("a")]
    word, explored = first_rejected(control, components, "a")
    assert word == ()
    assert explored == 1

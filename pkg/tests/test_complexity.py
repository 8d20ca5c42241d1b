"""
test_complexity.py
------------------
Wordlab — Combinatorics-on-Words Workbench — Test Suite for complexity.py
------------------------------------------------------------------------
Complexity functions measured on prefixes of infinite words, the
validity rule that limits them, minimal letter density and Rauzy graphs.

Tests cover:
    - factor_complexity: Sturmian n+1, Thue–Morse values, horizon limit
    - palindromic_complexity: Sturmian values and zero residual
    - recurrence_function: small values, quotient estimate
    - balance_function: balanced vs unbalanced words
    - min_letter_density / density_band
    - rauzy_graph: vertex and edge counts, horizon check

Run:
    pytest tests/test_complexity.py -v --tb=short

Project: Wordlab — Combinatorics-on-Words Workbench
"""

import pytest
import sys
import os
from fractions import Fraction

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from complexity import (
    balance_function,
    density_band,
    factor_complexity,
    min_letter_density,
    palindromic_complexity,
    rauzy_graph,
    recurrence_function,
)
from errors import DomainError, InfeasibleError
from repetitions import PowerFreePredicate
from schemas import SearchBudget
from word_core import Alphabet, PrefixOracle


@pytest.fixture
def fibonacci():
    return PrefixOracle.classic("fibonacci")


@pytest.fixture
def thue_morse():
    return PrefixOracle.classic("thue_morse")


# ── Factor complexity ──────────────────────────────────────────────────────

def test_fibonacci_factor_complexity_is_n_plus_one(fibonacci):
    profile = factor_complexity(fibonacci, 12, 1000)
    assert profile.valid_up_to == 12
    assert all(profile.values[n] == n + 1 for n in range(13))


def test_thue_morse_factor_complexity(thue_morse):
    profile = factor_complexity(thue_morse, 8, 1000)
    assert [profile.values[n] for n in range(9)] == [1, 2, 4, 6, 10, 12, 16, 20, 22]


def test_factor_complexity_marks_values_past_half_horizon(fibonacci):
    """Only n <= horizon // 2 is certified without doubling."""
    profile = factor_complexity(fibonacci, 10, 12)
    assert profile.valid_up_to == 6
    assert profile.values[7] is None
    assert 7 not in profile.valid()
    assert profile.extras["raw"][7] is not None


def test_factor_complexity_ratio(fibonacci):
    profile = factor_complexity(fibonacci, 4, 200)
    assert profile.extras["ratio"][4] == Fraction(5, 4)


def test_factor_complexity_rejects_short_horizon(fibonacci):
    with pytest.raises(DomainError):
        factor_complexity(fibonacci, 10, 5)


# ── Palindromic complexity ─────────────────────────────────────────────────

def test_fibonacci_palindromic_complexity(fibonacci):
    """Sturmian words have one palindrome of each even length, two of each odd length."""
    profile = palindromic_complexity(fibonacci, 8, 1000)
    assert profile.values[0] == 1
    for n in range(1, 9):
        assert profile.values[n] == (2 if n % 2 else 1)


def test_fibonacci_is_rich(fibonacci):
    residual = palindromic_complexity(fibonacci, 8, 1000).extras["residual"]
    assert all(residual[n] == 0 for n in range(9))


def test_thue_morse_residual_non_positive(thue_morse):
    residual = palindromic_complexity(thue_morse, 8, 1000).extras["residual"]
    assert all(v <= 0 for v in residual.values() if v is not None)


# ── Recurrence ─────────────────────────────────────────────────────────────

def test_recurrence_function_small_values(fibonacci, thue_morse):
    fib = recurrence_function(fibonacci, 4, 500)
    tm = recurrence_function(thue_morse, 4, 500)
    assert fib.values[1] == 3
    assert tm.values[1] == 3
    assert fib.values[0] == 0
    assert fib.extras["non_recurrent"] == []


def test_recurrence_quotient_is_an_estimate(fibonacci):
    profile = recurrence_function(fibonacci, 6, 500)
    valid = profile.valid()
    expected = max(Fraction(v, n) for n, v in valid.items() if n >= 1)
    assert profile.extras["quotient_estimate"] == expected


def test_recurrence_flags_non_recurrent_word():
    """a·b^ω: the factor 'a' never comes back."""
    oracle = PrefixOracle("ab_omega", Alphabet.default(2), lambda n: (0,) + (1,) * (n - 1))
    profile = recurrence_function(oracle, 1, 50)
    assert profile.extras["non_recurrent"] == [1]
    assert profile.values[1] is None


# ── Balance ────────────────────────────────────────────────────────────────

def test_fibonacci_is_balanced(fibonacci):
    profile = balance_function(fibonacci, 10, 500)
    assert all(profile.values[n] == 1 for n in range(1, 11))


def test_thue_morse_not_balanced(thue_morse):
    profile = balance_function(thue_morse, 4, 500)
    assert profile.values[1] == 1
    assert profile.values[2] == 2


# ── Minimal letter density ─────────────────────────────────────────────────

def test_min_density_cube_free():
    row = min_letter_density(PowerFreePredicate(3), 6, SearchBudget())
    assert row["count"] == 2
    assert row["density"] == Fraction(1, 3)
    assert str(row["witness"]) == "001001"
    assert row["verdict"] == "exact"


def test_min_density_infeasible():
    """Binary square-free words stop at length 3."""
    with pytest.raises(InfeasibleError):
        min_letter_density(PowerFreePredicate(2), 4, SearchBudget())


def test_min_density_empty_word():
    row = min_letter_density(PowerFreePredicate(3), 0, SearchBudget())
    assert row["count"] == 0


def test_min_density_bad_minority():
    with pytest.raises(DomainError):
        min_letter_density(PowerFreePredicate(3), 5, SearchBudget(), k=2, minority=2)


def test_density_band():
    band = density_band(3, 1, 3)
    assert band["density"] == Fraction(1, 3)
    assert band["above_lower"] is True
    assert band["upper_without_c"] == Fraction(1, 3) + Fraction(1, 27) + Fraction(1, 81)


# ── Rauzy graphs ───────────────────────────────────────────────────────────

def test_rauzy_graph_fibonacci(fibonacci):
    g = rauzy_graph(fibonacci, 1, 100)
    assert g.vertices == ["a", "b"]
    assert len(g) == 3
    assert [e[2] for e in g.edges] == ["aa", "ab", "ba"]


def test_rauzy_graph_thue_morse(thue_morse):
    g = rauzy_graph(thue_morse, 1, 100)
    assert len(g) == 4


def test_rauzy_graph_order_zero_edge_list(fibonacci):
    g = rauzy_graph(fibonacci, 0, 10)
    assert g.vertices == [""]
    assert "ε -> ε [a]" in g.edge_list()


def test_rauzy_graph_horizon_check(fibonacci):
    with pytest.raises(DomainError):
        rauzy_graph(fibonacci, 3, 7)

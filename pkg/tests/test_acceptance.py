"""
test_acceptance.py
------------------
Wordlab — Combinatorics-on-Words Workbench — Acceptance Suite
--------------------------------------------------------------
Settled quantitative facts reproduced at desk scale, plus randomized
property suites that pit the fast counters against their naive
references. Every search result is re-checked by the verification layer.

Tests cover:
    - Thue–Morse overlap-freeness, Thue ternary square-freeness
    - Binary square-free and XYX-free maxima (exhaustive)
    - Distinct squares and runs bounds on all binary words up to 16
    - Fibonacci distinct-square counts
    - Palindromic and Sturmian identities on infinite-word oracles
    - Ternary 7/4 repetition searches
    - Abelian square avoidance over 3 and 4 letters
    - k-abelian equivalence laws on random triples
    - Fast vs naive square / run counters on random words
    - Post Correspondence and commutation equation

Run:
    pytest tests/test_acceptance.py -v --tb=short

Project: Wordlab — Combinatorics-on-Words Workbench
"""

import pytest
import sys
import os
import random
from fractions import Fraction
from itertools import product

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from abelian import avoid_long_powers_search, kabelian_equiv
from complexity import balance_function, factor_complexity, palindromic_complexity
from factorizations import PcpInstance, bounded_pcp, parse_system, solve_word_equation
from known_facts import CLASSIC_MORPHISMS, DEFAULT_SEED
from patterns import Pattern, encounters, longest_avoiding
from repetitions import (
    PowerFreePredicate,
    count_distinct_squares,
    count_distinct_squares_fast,
    count_runs,
    count_runs_fast,
    distinct_square_census,
    is_alpha_free,
    least_period,
    max_runs_census,
    runs_bruteforce,
    sturmian_period_set,
)
from schemas import SearchBudget
from search import longest_free_word
from verification import verify_pcp_solution, verify_runs, verify_search_outcome
from word_core import Alphabet, PrefixOracle, Word, classic_word, factor_set, fixed_point_prefix, parse_morphism


def _random_word(rng: random.Random, k: int, n: int) -> Word:
    return Word.of(Alphabet.default(k), [rng.randrange(k) for _ in range(n)])


# ── Classic fixed points ───────────────────────────────────────────────────────

def test_thue_morse_is_overlap_free():
    m = parse_morphism(CLASSIC_MORPHISMS["thue_morse"])
    w = fixed_point_prefix(m, 0, 4096)
    assert len(w) == 4096
    assert is_alpha_free(w, 2, strict=True)
    assert not is_alpha_free(w, 2)


def test_thue_ternary_is_square_free():
    w = classic_word("thue_ternary", 4096)
    assert is_alpha_free(w, 2)


# ── Exhaustive maxima ──────────────────────────────────────────────────────────

def test_binary_square_free_maximum():
    outcome = longest_avoiding(Pattern.parse("XX"), 2, SearchBudget(max_length=20))
    assert outcome.verdict == "exhausted"
    assert outcome.length == 3
    assert verify_search_outcome(outcome, PowerFreePredicate(2))["valid"] is True


def test_every_binary_word_of_length_five_encounters_xyx():
    p = Pattern.parse("XYX")
    alphabet = Alphabet.default(2)
    for letters in product(range(2), repeat=5):
        assert encounters(Word.of(alphabet, letters), p) is not None


def test_binary_xyx_free_maximum():
    outcome = longest_avoiding(Pattern.parse("XYX"), 2, SearchBudget(max_length=20))
    assert outcome.verdict == "exhausted"
    assert outcome.length == 4


# ── Squares and runs bounds ────────────────────────────────────────────────────

def test_distinct_squares_at_most_length_up_to_16():
    for n, (count, witness) in distinct_square_census(2, 16).items():
        assert count <= n
        assert count <= Fraction(11 * n, 6)
        assert count_distinct_squares(witness) == count


def test_runs_at_most_length_up_to_16():
    for n, (count, witness) in max_runs_census(2, 16).items():
        assert count <= n
        assert count <= Fraction(1029, 1000) * n
        assert count_runs(witness)[0] == count


def test_fibonacci_distinct_squares():
    """
    Fibonacci words f_m have 2(F_{m-d} - 1) distinct squares; the offset d
    is calibrated on the first word long enough to hold a square pair,
    then five consecutive lengths must agree.
    """
    fib = [1, 1]
    while len(fib) < 12:
        fib.append(fib[-1] + fib[-2])
    first = fib.index(8)
    count = count_distinct_squares(classic_word("fibonacci", fib[first]))
    offsets = [d for d in range(1, first) if 2 * (fib[first - d] - 1) == count]
    assert offsets
    d = offsets[0]
    for m in range(first, first + 5):
        w = classic_word("fibonacci", fib[m])
        assert count_distinct_squares(w) == 2 * (fib[m - d] - 1)


# ── Infinite-word identities ───────────────────────────────────────────────────

def test_palindromic_equation():
    fibonacci = palindromic_complexity(PrefixOracle.classic("fibonacci"), 50, 100_000)
    thue_morse = palindromic_complexity(PrefixOracle.classic("thue_morse"), 50, 100_000)
    fib_residual = {n: v for n, v in fibonacci.extras["residual"].items() if v is not None}
    tm_residual = {n: v for n, v in thue_morse.extras["residual"].items() if v is not None}
    assert len(fib_residual) >= 50
    assert all(v == 0 for v in fib_residual.values())
    assert all(v <= 0 for v in tm_residual.values())


def test_fibonacci_is_sturmian():
    oracle = PrefixOracle.classic("fibonacci")
    p = factor_complexity(oracle, 50, 10_000)
    b = balance_function(oracle, 50, 10_000)
    assert all(p.values[n] == n + 1 for n in range(51))
    assert all(v <= 1 for v in b.valid().values())


def test_fibonacci_factor_periods_lie_in_period_set():
    w = classic_word("fibonacci", 2000)
    allowed = sturmian_period_set((1,), 150)
    for n in range(1, 151):
        factors = factor_set(w, n)
        assert len(factors) == n + 1
        for f in factors:
            assert least_period(f) in allowed


# ── Ternary repetition threshold ───────────────────────────────────────────────

def test_ternary_seven_fourths_plus_free_word_reaches_400():
    predicate = PowerFreePredicate("7/4", strict=True)
    outcome = longest_free_word(predicate, 3, SearchBudget(max_length=400, max_nodes=10 ** 8))
    assert outcome.verdict == "found"
    assert outcome.length == 400
    assert verify_search_outcome(outcome, predicate)["valid"] is True


def test_ternary_seven_fourths_free_words_are_finite():
    predicate = PowerFreePredicate("7/4")
    runs = [longest_free_word(predicate, 3, SearchBudget(max_length=100)) for _ in range(2)]
    assert all(o.verdict == "exhausted" for o in runs)
    assert runs[0].length == runs[1].length == 38
    assert str(runs[0].word) == str(runs[1].word)


# ── Abelian squares ────────────────────────────────────────────────────────────

def test_ternary_abelian_squares_unavoidable():
    outcome = avoid_long_powers_search(3, "abelian", 2, 1, SearchBudget(max_length=50))
    assert outcome.verdict == "exhausted"
    assert outcome.length == 7


def test_four_letter_abelian_square_free_reaches_100():
    budget = SearchBudget(max_length=100, max_nodes=10 ** 7)
    first = avoid_long_powers_search(4, "abelian", 2, 1, budget)
    second = avoid_long_powers_search(4, "abelian", 2, 1, budget)
    assert first.verdict == "found"
    assert first.length >= 100
    assert str(first.word) == str(second.word)


# ── Equivalence laws ───────────────────────────────────────────────────────────

def test_kabelian_equivalence_laws():
    rng = random.Random(DEFAULT_SEED)
    for _ in range(10_000):
        n = rng.randrange(1, 7)
        u, v, w = (_random_word(rng, 2, n) for _ in range(3))
        k = rng.randrange(1, 5)
        assert kabelian_equiv(u, u, k)
        assert kabelian_equiv(u, v, k) == kabelian_equiv(v, u, k)
        if kabelian_equiv(u, v, k) and kabelian_equiv(v, w, k):
            assert kabelian_equiv(u, w, k)
        if kabelian_equiv(u, v, k + 1):
            assert kabelian_equiv(u, v, k)
        assert kabelian_equiv(u, v, n) == (u.letters == v.letters)


# ── Fast counters against naive references ─────────────────────────────────────

def test_fast_counters_match_naive():
    rng = random.Random(DEFAULT_SEED)
    for _ in range(10_000):
        w = _random_word(rng, rng.choice((2, 3)), rng.randrange(0, 201))
        assert count_distinct_squares_fast(w) == count_distinct_squares(w)
        naive, naive_runs = count_runs(w)
        fast, fast_runs = count_runs_fast(w)
        assert fast == naive
        assert [(r.start, r.end, r.period) for r in fast_runs] == [(r.start, r.end, r.period) for r in naive_runs]


def test_runs_match_bruteforce_oracle():
    rng = random.Random(DEFAULT_SEED + 1)
    for _ in range(500):
        w = _random_word(rng, 2, rng.randrange(1, 41))
        _, runs = count_runs_fast(w)
        assert {(r.start, r.end, r.period) for r in runs} == {(r.start, r.end, r.period) for r in runs_bruteforce(w)}
        assert verify_runs(w, runs)["valid"] is True


# ── PCP and equations ──────────────────────────────────────────────────────────

def test_bounded_pcp_constructed_instance():
    inst = PcpInstance.parse("a->ab;b->a", "a->a;b->ba")
    outcome = bounded_pcp(inst, 6)
    assert outcome.verdict == "found"
    assert str(outcome.word) == "ab"
    assert verify_pcp_solution(inst, outcome.word)["valid"] is True


def test_commutation_equation_matches_substitution_oracle():
    result = solve_word_equation(parse_system("xy = yx"), 3, alphabet="ab")
    solved = {(s["assignment"]["x"], s["assignment"]["y"]) for s in result["solutions"]}
    words = ["".join(t) for n in range(4) for t in product("ab", repeat=n)]
    oracle = {(x, y) for x in words for y in words if x + y == y + x}
    assert result["verdict"] == "exhausted"
    assert solved == oracle
    assert result["count"] == len(oracle)

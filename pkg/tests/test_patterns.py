"""
test_patterns.py
----------------
Wordlab — Combinatorics-on-Words Workbench — Test Suite for patterns.py
----------------------------------------------------------------------
Pattern parsing and encounters, avoidance searches, maximal p-free
words, morphic evidence checks, censuses, prefix trees and shuffles.

Tests cover:
    - Pattern.parse: variables, constants, all-digit patterns
    - encounters: witness order and re-verification by substitution
    - encounters persist when a word is extended on both sides
    - longest_avoiding: XX and XYX over two letters
    - circular_avoiding_lengths, is_maximal_pfree, maximal_pfree_words
    - d0l_avoidance_check / hd0l_avoidance_check
    - growth_census counts and thread-count independence
    - growth_census known growth class for binary power-free languages
    - subtree_explore / subtree_isomorphic
    - palindrome_concat_avoider
    - shuffle, self-shuffles, conduction_count, shuffle_square_root

Run:
    pytest tests/test_patterns.py -v --tb=short

Project: Wordlab — Combinatorics-on-Words Workbench
"""

import pytest
import sys
import os
import random
from itertools import product

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from pydantic import ValidationError

from errors import DomainError
from patterns import (
    Pattern,
    circular_avoiding_lengths,
    conduction_count,
    count_self_shuffles,
    d0l_avoidance_check,
    encounters,
    growth_census,
    hd0l_avoidance_check,
    is_maximal_pfree,
    is_pfree,
    longest_avoiding,
    maximal_pfree_words,
    palindrome_concat_avoider,
    self_shuffle_squarefree_search,
    shuffle,
    shuffle_square_root,
    subtree_explore,
    subtree_isomorphic,
)
from repetitions import PowerFreePredicate, is_alpha_free
from schemas import ConductionSequence, SearchBudget
from verification import verify_encounter, verify_shuffle
from word_core import Alphabet, Word, parse_morphism, parse_word

BINARY = Alphabet.default(2)
TERNARY = Alphabet.default(3)


# ── Pattern parsing ────────────────────────────────────────────────────────

def test_parse_pattern_variables_and_constants():
    p = Pattern.parse("XaYX")
    assert p.variables == ("X", "Y")
    assert p.constants == ("a",)
    assert str(p) == "XaYX"


def test_parse_all_digit_pattern():
    """Digits are variables when the pattern has nothing else."""
    p = Pattern.parse("01020312")
    assert p.variables == ("0", "1", "2", "3")
    assert p.constants == ()


def test_parse_empty_pattern():
    with pytest.raises(DomainError):
        Pattern.parse("  ")


def test_pattern_rejects_unknown_symbol():
    with pytest.raises(ValidationError):
        Pattern(body=("X", "Z"), variables=("X",))


def test_pure_power():
    assert Pattern.parse("XXX").pure_power() == 3
    assert Pattern.parse("XYX").pure_power() is None


# ── Encounters ─────────────────────────────────────────────────────────────

def test_encounters_literal_square():
    w = Word.parse("abcabc")
    witness = encounters(w, Pattern.parse("XX"))
    assert str(witness.assignment["X"]) == "abc"
    assert witness.position == 1
    assert witness.length == 6


def test_encounters_none_on_square_free_word():
    assert encounters(Word.parse("abc"), Pattern.parse("XX")) is None


def test_encounters_xyx_witness_order():
    """Leftmost occurrence first, then shortest images in order of appearance."""
    w = Word.parse("aabba")
    p = Pattern.parse("XYX")
    witness = encounters(w, p)
    assert str(witness.assignment["X"]) == "a"
    assert str(witness.assignment["Y"]) == "abb"
    assert witness.position == 1
    assert verify_encounter(w, p, witness)["valid"] is True


def test_encounters_with_constant():
    witness = encounters(Word.parse("abab"), Pattern.parse("XaX"))
    assert str(witness.assignment["X"]) == "b"
    assert witness.position == 2


def test_encounters_constant_missing_from_alphabet():
    assert encounters(Word.parse("abab"), Pattern.parse("XcX")) is None


def test_encounters_persist_in_longer_words():
    """A word that encounters p keeps encountering it inside any u·w·v."""
    rng = random.Random(17)
    patterns = [Pattern.parse(text) for text in ("XX", "XYX", "XYXY", "XYYX", "XYZYX")]

    def draw(alphabet, low, high):
        return Word.of(alphabet, [rng.randrange(alphabet.size) for _ in range(rng.randint(low, high))])

    for _ in range(300):
        alphabet = rng.choice((BINARY, TERNARY))
        w = draw(alphabet, 1, 9)
        u = draw(alphabet, 0, 4)
        v = draw(alphabet, 0, 4)
        for p in patterns:
            if encounters(w, p) is None:
                continue
            longer = u + w + v
            witness = encounters(longer, p)
            assert witness is not None
            assert verify_encounter(longer, p, witness)["valid"] is True


def test_tampered_witness_fails_verification():
    w = Word.parse("aabba")
    p = Pattern.parse("XYX")
    witness = encounters(w, p)
    forged = witness.model_copy(update={"position": 2})
    assert verify_encounter(w, p, forged)["valid"] is False


def test_witnesses_reverify_on_all_short_words():
    p = Pattern.parse("XYX")
    for letters in product(range(2), repeat=6):
        w = Word.of(BINARY, letters)
        witness = encounters(w, p)
        if witness is not None:
            assert verify_encounter(w, p, witness)["valid"] is True


# ── Avoidance searches ─────────────────────────────────────────────────────

def test_longest_square_free_binary_word():
    outcome = longest_avoiding(Pattern.parse("XX"), 2, SearchBudget(max_length=50))
    assert outcome.verdict == "exhausted"
    assert outcome.length == 3
    assert str(outcome.word) == "aba"


def test_longest_xyx_free_binary_word():
    outcome = longest_avoiding(Pattern.parse("XYX"), 2, SearchBudget(max_length=50))
    assert outcome.verdict == "exhausted"
    assert outcome.length == 4
    assert str(outcome.word) == "aabb"


def test_longest_square_free_ternary_reaches_budget():
    outcome = longest_avoiding(Pattern.parse("XX"), 3, SearchBudget(max_length=200))
    assert outcome.verdict == "found"
    assert outcome.length == 200
    assert is_alpha_free(outcome.word, 2)


def test_longest_avoiding_zero_nodes_is_budget():
    outcome = longest_avoiding(Pattern.parse("XX"), 3, SearchBudget(max_nodes=0))
    assert outcome.verdict == "budget"


def test_circular_avoiding_lengths():
    assert circular_avoiding_lengths(Pattern.parse("XX"), 2, 6) == [1, 2]
    assert circular_avoiding_lengths(Pattern.parse("XX"), 1, 4) == [1]
    ternary = circular_avoiding_lengths(Pattern.parse("XX"), 3, 4)
    assert 3 in ternary and 4 in ternary


def test_circular_avoiding_lengths_needs_positive_bound():
    with pytest.raises(DomainError):
        circular_avoiding_lengths(Pattern.parse("XX"), 2, 0)


def test_is_maximal_pfree():
    xx = Pattern.parse("XX")
    assert is_maximal_pfree(Word.parse("aba", BINARY), xx) is True
    assert is_maximal_pfree(Word.parse("a", BINARY), xx) is False
    assert is_maximal_pfree(parse_word("", Alphabet.default(1)), xx) is True


def test_is_maximal_pfree_requires_free_word():
    with pytest.raises(DomainError):
        is_maximal_pfree(Word.parse("aa"), Pattern.parse("XX"))


def test_maximal_pfree_words_binary_squares():
    report = maximal_pfree_words(Pattern.parse("XX"), 2, 4)
    assert report["per_length"] == {0: 0, 1: 0, 2: 2, 3: 2, 4: 0}
    assert report["examples"] == ["ab", "ba", "aba", "bab"]


# ── Morphic evidence ───────────────────────────────────────────────────────

def test_d0l_thue_ternary_square_free():
    m = parse_morphism("a->abc;b->ac;c->b")
    report = d0l_avoidance_check(m, 0, Pattern.parse("XX"), 1024)
    assert report["free"] is True
    assert report["evidence"] == "finite prefix only"


def test_d0l_thue_morse_cube_free_but_not_square_free():
    m = parse_morphism("0->01;1->10")
    assert d0l_avoidance_check(m, 0, Pattern.parse("XXX"), 1024)["free"] is True
    report = d0l_avoidance_check(m, 0, Pattern.parse("XX"), 16)
    assert report["free"] is False
    assert report["violation_prefix"] == 3
    assert str(report["witness"].assignment["X"]) == "1"


def test_hd0l_letter_permutation_keeps_freeness():
    g = parse_morphism("a->abc;b->ac;c->b")
    f = parse_morphism("a->b;b->c;c->a")
    report = hd0l_avoidance_check(g, 0, f, Pattern.parse("XX"), 300)
    assert report["free"] is True
    assert report["checked_length"] == 300


# ── Censuses and prefix trees ──────────────────────────────────────────────

def test_growth_census_binary_square_free():
    report = growth_census("XX", 2, 4)
    assert report["counts"] == [1, 2, 2, 2, 0]
    assert report["complete"] is True
    assert report["growth"]["classification"] == "finite"


def test_growth_census_ternary_square_free():
    assert growth_census("XX", 3, 5)["counts"] == [1, 3, 6, 12, 18, 30]


def test_growth_census_unary_cube_free():
    assert growth_census("XXX", 1, 4)["counts"] == [1, 1, 1, 0, 0]


def test_growth_census_independent_of_threads():
    one = growth_census("XX", 3, 9, threads=1)["counts"]
    four = growth_census("XX", 3, 9, threads=4)["counts"]
    assert one == four


def test_growth_census_node_limit_marks_incomplete():
    report = growth_census("XX", 3, 20, max_nodes=30)
    assert report["complete"] is False


def test_growth_census_carries_known_binary_growth_class():
    def known(predicate, k=2, n=8):
        return growth_census(predicate, k, n)["growth"].get("known")

    assert known(PowerFreePredicate(2)) == "finite"
    assert known(PowerFreePredicate(2, strict=True)) == "polynomial"
    assert known(PowerFreePredicate("9/4")) == "polynomial"
    assert known(PowerFreePredicate("7/3")) == "polynomial"
    assert known(PowerFreePredicate("7/3", strict=True)) == "exponential"
    assert known(PowerFreePredicate(3)) == "exponential"
    assert known(PowerFreePredicate(3), k=3, n=4) is None
    assert known("XX") is None


def test_subtree_explore_finite():
    stats = subtree_explore(Word.parse("aba", BINARY), "XX", 3)
    assert stats["finite"] is True
    assert stats["frontier"] == 0


def test_subtree_explore_infinite_ternary():
    stats = subtree_explore(Word.parse("a", TERNARY), "XX", 10)
    assert stats["finite"] is False
    assert stats["frontier"] > 0


def test_subtree_explore_rejects_bad_root():
    with pytest.raises(DomainError):
        subtree_explore(Word.parse("aa"), "XX", 3)


def test_subtree_isomorphic_under_letter_swap():
    """Swapping letters maps a constant-free predicate's tree onto itself."""
    u = Word.parse("aab", BINARY)
    v = Word.parse("bba", BINARY)
    assert subtree_isomorphic(u, v, "XXX", 6) is True


def test_palindrome_concat_avoider_ternary():
    outcome = palindrome_concat_avoider("XX", 3, SearchBudget(max_length=50))
    assert outcome.verdict == "found"
    assert outcome.length >= 50
    assert "".join(outcome.certificate["blocks"]) == outcome.certificate["word"]
    assert all(b == b[::-1] for b in outcome.certificate["blocks"])


def test_palindrome_concat_avoider_unary():
    outcome = palindrome_concat_avoider("XX", 1, SearchBudget(max_length=50))
    assert outcome.verdict == "exhausted"
    assert outcome.length == 1


def test_palindrome_concat_avoider_empty_budget():
    outcome = palindrome_concat_avoider("XX", 3, SearchBudget(max_nodes=0))
    assert outcome.verdict == "budget"


# ── Shuffles ───────────────────────────────────────────────────────────────

def test_shuffle_definition():
    abcd = Alphabet.default(4)
    u0, u1 = Word.parse("ab", abcd), Word.parse("cd", abcd)
    assert str(shuffle(u0, u1, ConductionSequence.parse("0101"))) == "acbd"
    ab = Word.parse("ab")
    assert str(shuffle(ab, ab, ConductionSequence.parse("0011"))) == "abab"
    assert str(shuffle(ab, parse_word(""), ConductionSequence.parse("00"))) == "ab"


def test_shuffle_rejects_wrong_counts():
    ab = Word.parse("ab")
    with pytest.raises(DomainError):
        shuffle(ab, ab, ConductionSequence.parse("0001"))


def test_conduction_sequence_must_be_binary():
    with pytest.raises(ValueError):
        ConductionSequence.parse("012")


def test_self_shuffle_of_short_words():
    assert self_shuffle_squarefree_search(Word.parse("a")) is None
    assert self_shuffle_squarefree_search(Word.parse("ab")) is None


def test_self_shuffle_abc_result_is_square_free():
    u = Word.parse("abc")
    beta = self_shuffle_squarefree_search(u)
    report = count_self_shuffles(u)
    if beta is None:
        assert report["witnesses"] == 0
    else:
        w = shuffle(u, u, beta)
        assert is_alpha_free(w, 2)
        assert verify_shuffle(u, u, beta, w)["valid"] is True
        assert str(w) in report["words"]


def test_self_shuffle_requires_square_free_input():
    with pytest.raises(DomainError):
        self_shuffle_squarefree_search(Word.parse("aa"))


def test_conduction_count():
    ab = Word.parse("ab")
    assert conduction_count(ab, Word.parse("abab")) == 2
    assert conduction_count(ab, Word.parse("aba")) == 0


def test_shuffle_square_root():
    w = Word.parse("abacbc")
    u, beta = shuffle_square_root(w)
    assert str(u) == "abc"
    assert beta.bits[0] == 0
    assert str(shuffle(u, u, beta)) == "abacbc"


def test_shuffle_square_root_odd_length():
    assert shuffle_square_root(Word.parse("aba")) is None


def test_is_pfree_delegates_pure_powers():
    assert is_pfree(Word.parse("abcab"), Pattern.parse("XX")) is True
    assert is_pfree(Word.parse("abab"), Pattern.parse("XX")) is False

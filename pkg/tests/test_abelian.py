"""
test_abelian.py
---------------
Wordlab — Combinatorics-on-Words Workbench — Test Suite for abelian.py
---------------------------------------------------------------------
Parikh vectors, abelian and k-abelian equivalence and powers, abelian
pattern encounters, abelian-square counting, additive powers, the
long-power avoidance searches and the censuses built on them.

Tests cover:
    - parikh / kabelian_equiv / is_kabelian_npower
    - is_strongly_kabelian_npower and strong_power_census
    - abelian_encounters, zimin_abelian_test
    - count_abelian_squares in both modes
    - letter_values / is_additive_npower
    - avoid_long_powers_search: abelian, additive
    - AbelianFractionalPredicate / art_dart_probe
    - abelian_cube_profile / makela_exploration / morphism_candidates

Run:
    pytest tests/test_abelian.py -v --tb=short

Project: Wordlab — Combinatorics-on-Words Workbench
"""

import pytest
import sys
import os

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from abelian import (
    AbelianFractionalPredicate,
    AbelianPowerPredicate,
    abelian_cube_profile,
    abelian_encounter_witness,
    abelian_encounters,
    art_dart_probe,
    avoid_long_powers_search,
    count_abelian_squares,
    is_additive_npower,
    is_kabelian_npower,
    is_strongly_kabelian_npower,
    kabelian_equiv,
    letter_values,
    makela_exploration,
    morphism_candidates,
    parikh,
    strong_power_census,
    zimin_abelian_test,
)
from errors import DomainError, UnsupportedError
from patterns import Pattern
from schemas import SearchBudget
from word_core import Alphabet, Word


# ── Equivalences ───────────────────────────────────────────────────────────

def test_parikh_counts_every_letter():
    w = Word.parse("abca", Alphabet.default(4))
    assert parikh(w).counts == (2, 1, 1, 0)


def test_kabelian_equiv():
    assert kabelian_equiv(Word.parse("abab"), Word.parse("abba"), 1) is True
    assert kabelian_equiv(Word.parse("abab"), Word.parse("abba"), 2) is False
    assert kabelian_equiv(Word.parse("aabab"), Word.parse("abaab"), 2) is True
    assert kabelian_equiv(Word.parse("aabab"), Word.parse("abaab"), 3) is False


def test_kabelian_equiv_length_mismatch():
    assert kabelian_equiv(Word.parse("ab"), Word.parse("aba"), 1) is False


def test_kabelian_equiv_rejects_k_zero():
    with pytest.raises(DomainError):
        kabelian_equiv(Word.parse("ab"), Word.parse("ba"), 0)


def test_is_kabelian_npower():
    report = is_kabelian_npower(Word.parse("abba"), 2)
    assert report.block_length == 2
    assert report.blocks == ("ab", "ba")
    assert report.kind == "abelian"
    assert is_kabelian_npower(Word.parse("abba"), 2, k=2) is None
    assert is_kabelian_npower(Word.parse("aba"), 2) is None


def test_is_kabelian_npower_rejects_low_degree():
    with pytest.raises(DomainError):
        is_kabelian_npower(Word.parse("aa"), 1)


def test_strongly_kabelian_power():
    """abba is abelian equivalent to (ab)^2 but not 2-abelian equivalent to any square."""
    w = Word.parse("abba")
    assert is_strongly_kabelian_npower(w, 2, k=1) is True
    assert is_strongly_kabelian_npower(w, 2, k=2) is False
    assert is_strongly_kabelian_npower(Word.parse("aab"), 2) is False


def test_strong_power_census_binary_length_two():
    report = strong_power_census(2, 2, 2)
    assert report["words"] == 4
    assert report["classes"] == 3
    assert report["classes_with_power"] == 2
    assert report["strong_powers"] == 2
    assert report["avoiders"] == 2


# ── Abelian encounters ─────────────────────────────────────────────────────

def test_abelian_encounters_square():
    assert abelian_encounters(Word.parse("abba"), Pattern.parse("XX")) is True
    assert abelian_encounters(Word.parse("abc"), Pattern.parse("XX")) is False


def test_abelian_encounter_witness_images():
    witness = abelian_encounter_witness(Word.parse("cabba"), Pattern.parse("XX"))
    assert witness.position == 2
    assert str(witness.assignment["X"]) == "ab"


def test_zimin_word_abelian_encounters_xyx():
    assert abelian_encounters(Word.parse("121"), Pattern.parse("XYX")) is True
    assert zimin_abelian_test(Pattern.parse("XYX"), 2) is False


def test_zimin_abelian_test_on_square():
    assert zimin_abelian_test(Pattern.parse("XX"), 2) is True


def test_abelian_encounters_constants_need_flag():
    with pytest.raises(UnsupportedError):
        abelian_encounters(Word.parse("abab"), Pattern.parse("XaX"))
    assert abelian_encounters(Word.parse("abab"), Pattern.parse("XaX"), allow_constants=True) is True


# ── Abelian squares ────────────────────────────────────────────────────────

@pytest.mark.parametrize("text,mode,expected", [
    ("abba", "distinct", 2),
    ("abba", "inequivalent", 2),
    ("aaaa", "distinct", 2),
    ("aaaa", "inequivalent", 2),
    ("abc", "distinct", 0),
])
def test_count_abelian_squares(text, mode, expected):
    assert count_abelian_squares(Word.parse(text), mode) == expected


def test_count_abelian_squares_unknown_mode():
    with pytest.raises(DomainError):
        count_abelian_squares(Word.parse("abba"), "all")


# ── Additive powers ────────────────────────────────────────────────────────

def test_letter_values():
    assert letter_values(Alphabet.digits(3)) == (0, 1, 2)
    assert letter_values(Alphabet.default(2), {"a": 1, "b": 5}) == (1, 5)


def test_letter_values_needs_map_for_letters():
    with pytest.raises(DomainError):
        letter_values(Alphabet.default(2))


def test_is_additive_npower():
    report = is_additive_npower(Word.parse("1221"), 2)
    assert report.kind == "additive"
    assert report.blocks == ("12", "21")
    assert is_additive_npower(Word.parse("1222"), 2) is None


# ── Long-power avoidance ───────────────────────────────────────────────────

def test_abelian_square_free_ternary_is_finite():
    """Every ternary word of length 8 contains an abelian square."""
    outcome = avoid_long_powers_search(3, "abelian", 2, 1, SearchBudget(max_length=50))
    assert outcome.verdict == "exhausted"
    assert outcome.length == 7


def test_abelian_square_free_binary():
    outcome = avoid_long_powers_search(2, "abelian", 2, 1, SearchBudget(max_length=50))
    assert outcome.verdict == "exhausted"
    assert outcome.length == 3


def test_additive_square_free_binary():
    outcome = avoid_long_powers_search(2, "additive", 2, 1, SearchBudget(max_length=50))
    assert outcome.verdict == "exhausted"
    assert outcome.length == 3
    assert outcome.certificate["word"] == "010"


def test_abelian_power_predicate_min_period():
    """With min_period 2, squares of single letters are allowed."""
    pred = AbelianPowerPredicate("abelian", 2, min_period=2)
    assert pred.holds((0, 0)) is True
    assert pred.holds((0, 1, 1, 0)) is False


def test_abelian_power_predicate_kabelian():
    pred = AbelianPowerPredicate("k-abelian", 2, kabelian_k=2)
    assert pred.holds((0, 1, 2, 1, 0, 2)) is True
    assert pred.holds((0, 1, 0, 1)) is False
    assert AbelianPowerPredicate("abelian", 2).holds((0, 1, 2, 1, 0, 2)) is False


def test_abelian_power_predicate_rejects_bad_kind():
    with pytest.raises(DomainError):
        AbelianPowerPredicate("geometric", 2)
    with pytest.raises(DomainError):
        AbelianPowerPredicate("k-abelian", 2)


# ── Abelian fractional powers ──────────────────────────────────────────────

def test_fractional_exponent_range():
    with pytest.raises(DomainError):
        AbelianFractionalPredicate("1")
    with pytest.raises(DomainError):
        AbelianFractionalPredicate("5/2")


def test_fractional_exponent_two_is_abelian_square():
    pred = AbelianFractionalPredicate("2")
    assert pred.holds((0, 1, 1, 0)) is False
    assert pred.holds((0, 1, 0, 2, 0, 1, 0)) is True


def test_art_probe_exhausts_at_exponent_two():
    report = art_dart_probe(SearchBudget(max_length=40), ["2"], n=3)
    assert report["probe"] == "ART"
    assert report["rows"][0]["verdict"] == "exhausted"
    assert report["rows"][0]["length"] == 7
    assert report["upper_evidence"] is None
    assert str(report["lower_evidence"]) == "2"


def test_art_dart_needs_exactly_one_mode():
    with pytest.raises(DomainError):
        art_dart_probe(SearchBudget(), ["2"])
    with pytest.raises(DomainError):
        art_dart_probe(SearchBudget(), [], n=3)


# ── Abelian cubes in morphic images ────────────────────────────────────────

def test_abelian_cube_profile():
    assert abelian_cube_profile(Word.parse("aaa")) == {1: 1}
    assert abelian_cube_profile(Word.parse("abcabcabc")) == {3: 1}
    assert abelian_cube_profile(Word.parse("abcabcabc"), min_period=4) == {}


def test_makela_exploration_constant_image():
    """Mapping every letter to 0 gives a unary image full of abelian cubes."""
    report = makela_exploration("0->0;1->0;3->0;4->0", 60)
    assert report["image_length"] == 60
    assert report["long_cube_free"] is False
    assert report["longest_block"] == 20
    assert report["evidence"] == "finite prefix only"


def test_morphism_candidates_count():
    assert len(list(morphism_candidates(Alphabet.default(2), 1))) == 4
    assert len(list(morphism_candidates(Alphabet.default(2), 2))) == 36

"""
known_facts.py
--------------
Wordlab — Combinatorics-on-Words Workbench — Published constants
---------------------------------------------------------------
Module-level constants only. No functions. Repetition thresholds,
published upper bounds used as outer checks, the classic morphisms that
generate the fixture words, and default search budgets. Used by
word_core.py, repetitions.py, patterns.py, complexity.py and the probe registry.

Project: Wordlab — Combinatorics-on-Words Workbench
"""

from fractions import Fraction

# Repetition thresholds RT(k) for small alphabets; k >= 5 follows k/(k-1)
DEJEAN_THRESHOLDS = {
    2: Fraction(2),
    3: Fraction(7, 4),
    4: Fraction(7, 5),
}

# Finite-repetition thresholds known at the time of the survey
FINITE_REPETITION_THRESHOLDS = {
    2: Fraction(7, 3),
    3: Fraction(7, 4),
    4: Fraction(7, 5),
}

# Binary power-free languages switch from polynomial to exponential growth here
BINARY_GROWTH_SWITCH = Fraction(7, 3)

# Outer bounds for distinct squares and runs (coefficients of |w|)
DISTINCT_SQUARES_BOUNDS = {
    "conjectured": Fraction(1),
    "fraenkel_simpson": Fraction(2),
    "ilie_deza": Fraction(11, 6),
}
RUNS_BOUNDS = {
    "conjectured": Fraction(1),
    "crochemore_ilie": Fraction(1029, 1000),
}

# Morphism specs in the text syntax accepted by word_core.parse_morphism
CLASSIC_MORPHISMS = {
    "thue_morse": "0->01;1->10",
    "fibonacci": "a->ab;b->a",
    "thue_ternary": "a->abc;b->ac;c->b",
    "tribonacci": "a->ab;b->ac;c->a",
    "makela": "0->03;1->43;3->1;4->01",
}

# Letter at which each classic morphism is iterated
CLASSIC_START_LETTERS = {
    "thue_morse": "0",
    "fibonacci": "a",
    "thue_ternary": "a",
    "tribonacci": "a",
    "makela": "0",
}

# Default budgets for every bounded search
DEFAULT_MAX_LENGTH = 500
DEFAULT_MAX_NODES = 100_000_000
DEFAULT_MAX_SECONDS = 600.0
DEFAULT_SEED = 20240601

# Time is only checked every this many search nodes
BUDGET_CLOCK_STRIDE = 1024

# Exhaustive censuses refuse to enumerate more words than this
MAX_EXHAUSTIVE_WORDS = 1 << 22

# Longest palindrome block tried by the palindrome-concatenation search
DEFAULT_PALINDROME_BLOCK = 5

# Prefix-based complexity values are trusted up to horizon // WINDOW_RULE_DIVISOR
WINDOW_RULE_DIVISOR = 2

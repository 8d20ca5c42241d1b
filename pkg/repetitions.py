"""
repetitions.py
--------------
Wordlab — Combinatorics-on-Words Workbench — Periods, powers and runs
--------------------------------------------------------------------
Periods, fractional exponents, α-freeness, distinct squares, runs,
repetition-threshold probes, Sturmian period sets, and prefix/suffix
square duplication and completion.

The reference counters (count_distinct_squares, count_runs) are the
authoritative ones; the *_fast variants go through runs and Lyndon roots
and are checked against them in the test suite.

Key functions:
    - least_period, periods, max_exponent, is_alpha_free
    - count_distinct_squares, square_density, count_runs, runs_bruteforce
    - distinct_square_census, max_runs_census: exhaustive per-length maxima
    - frt_probe, rt_probe, dejean_threshold, letter_frequencies
    - sturmian_period_set
    - suffix_square_duplicate / complete (and prefix mirrors),
      completion_distance, duplication_closure

Project: Wordlab — Combinatorics-on-Words Workbench
"""

from __future__ import annotations

import logging
import math
import threading
import time
from collections import deque
from fractions import Fraction
from itertools import product
from typing import Dict, List, Optional, Sequence, Set, Tuple, Union

import numpy as np

from errors import BudgetError, DomainError
from known_facts import DEJEAN_THRESHOLDS, FINITE_REPETITION_THRESHOLDS, MAX_EXHAUSTIVE_WORDS
from schemas import PeriodSet, Run, SearchBudget, SearchOutcome
from search import FreenessPredicate, longest_free_word
from word_core import (
    Alphabet,
    PrefixOracle,
    Word,
    as_text,
    cf_digit,
    parse_rational,
)

logger = logging.getLogger(__name__)

RationalLike = Union[Fraction, int, str]


# ── Periods ──────────────────────────────────────────────────────────────────

def failure_function(letters: Sequence[int]) -> List[int]:
    """fail[i] = length of the longest proper border of letters[:i+1]."""
    fail = [0] * len(letters)
    k = 0
    for i in range(1, len(letters)):
        c = letters[i]
        while k and letters[k] != c:
            k = fail[k - 1]
        if letters[k] == c:
            k += 1
        fail[i] = k
    return fail


def _least_period(letters: Sequence[int]) -> int:
    return len(letters) - failure_function(letters)[-1]


def least_period(w: Word) -> int:
    """Smallest p >= 1 with w[i] = w[i+p] wherever both exist."""
    if len(w) == 0:
        raise DomainError("the empty word has no least period")
    return _least_period(w.letters)


def periods(w: Word) -> List[int]:
    """All periods 1..|w| in increasing order (|w| minus each border length)."""
    if len(w) == 0:
        raise DomainError("the empty word has no periods")
    fail = failure_function(w.letters)
    n = len(w)
    out = []
    b = fail[-1]
    while b:
        out.append(n - b)
        b = fail[b - 1]
    out.append(n)
    return out


def exponent(w: Word) -> Fraction:
    return Fraction(len(w), least_period(w))


# ── Exponents and freeness ───────────────────────────────────────────────────

def _longest_true_run(mask: np.ndarray) -> int:
    if mask.size == 0:
        return 0
    padded = np.concatenate(([0], mask.astype(np.int8), [0]))
    diff = np.diff(padded)
    starts = np.flatnonzero(diff == 1)
    if starts.size == 0:
        return 0
    ends = np.flatnonzero(diff == -1)
    return int((ends - starts).max())


def max_exponent(w: Word) -> Fraction:
    """Max of |f| / least_period(f) over nonempty factors f."""
    n = len(w)
    if n == 0:
        raise DomainError("max_exponent of the empty word is undefined")
    arr = np.asarray(w.letters, dtype=np.int64)
    best = Fraction(1)
    for p in range(1, n):
        if Fraction(n, p) <= best:
            break
        m = _longest_true_run(arr[:-p] == arr[p:])
        e = Fraction(m + p, p)
        if e > best:
            best = e
    return best


def _matches_needed(alpha: Fraction, strict: bool, p: int) -> int:
    """Letters beyond one period needed for a period-p factor to violate freeness."""
    excess = (alpha - 1) * p
    if strict:
        return math.floor(excess) + 1
    return math.ceil(excess)


def _check_alpha(alpha: RationalLike) -> Fraction:
    alpha = parse_rational(alpha)
    if alpha <= 1:
        raise DomainError(f"alpha must exceed 1, got {alpha}")
    return alpha


def is_alpha_free(w: Word, alpha: RationalLike, strict: bool = False) -> bool:
    """
    strict=False (α-free): no factor of exponent >= α.
    strict=True (α⁺-free): no factor of exponent > α.
    """
    alpha = _check_alpha(alpha)
    n = len(w)
    arr = np.asarray(w.letters, dtype=np.int64)
    for p in range(1, n):
        need = _matches_needed(alpha, strict, p)
        if p + need > n:
            break
        if _longest_true_run(arr[:-p] == arr[p:]) >= need:
            return False
    return True


def is_power_free(w: Word, n: int) -> bool:
    """k-power-free in the sense of minimal-density questions: α = n, not strict."""
    return is_alpha_free(w, n, strict=False)


class PowerFreePredicate(FreenessPredicate):
    """α-free (or α⁺-free when strict) words, checked on the newest suffix only."""

    def __init__(self, alpha: RationalLike, strict: bool = False):
        self.alpha = _check_alpha(alpha)
        self.strict = strict
        self.name = f"{self.alpha}{'+' if strict else ''}-free"
        self._need: List[int] = [0]
        self._lock = threading.Lock()

    def need(self, p: int) -> int:
        if len(self._need) <= p:
            with self._lock:
                while len(self._need) <= p:
                    self._need.append(_matches_needed(self.alpha, self.strict, len(self._need)))
        return self._need[p]

    def extends(self, letters: Sequence[int]) -> bool:
        n = len(letters)
        last = n - 1
        for p in range(1, n):
            need = self.need(p)
            if p + need > n:
                break
            t = 0
            while t < need and letters[last - t] == letters[last - t - p]:
                t += 1
            if t == need:
                return False
        return True

    def holds(self, letters: Sequence[int]) -> bool:
        return is_alpha_free(Word.of(Alphabet(size=max(letters, default=0) + 1), letters),
                             self.alpha, self.strict)


# ── Distinct squares ─────────────────────────────────────────────────────────

def distinct_squares(w: Word) -> Set[Word]:
    """Every distinct factor x·x, by shape (naive reference)."""
    letters = w.letters
    n = len(letters)
    seen: Set[Tuple[int, ...]] = set()
    for h in range(1, n // 2 + 1):
        for i in range(n - 2 * h + 1):
            if letters[i:i + h] == letters[i + h:i + 2 * h]:
                seen.add(letters[i:i + 2 * h])
    return {Word.of(w.alphabet, s) for s in seen}


def count_distinct_squares(w: Word) -> int:
    letters = w.letters
    n = len(letters)
    text = as_text(letters)
    seen: Set[str] = set()
    for h in range(1, n // 2 + 1):
        for i in range(n - 2 * h + 1):
            if text[i:i + h] == text[i + h:i + 2 * h]:
                seen.add(text[i:i + 2 * h])
    return len(seen)


def count_distinct_squares_fast(w: Word) -> int:
    """
    Every square uu lies in a run whose least period divides |u|, and
    within a run of period p the squares of a given length repeat every p
    positions; so p start positions per run and half-length suffice.
    """
    text = as_text(w.letters)
    seen: Set[str] = set()
    for run in _runs_by_lyndon_roots(w.letters):
        s, e, p = run
        length = e - s + 1
        q = p
        while 2 * q <= length:
            for i in range(s, min(s + p, e - 2 * q + 2)):
                seen.add(text[i:i + 2 * q])
            q += p
    return len(seen)


def square_density(w: Word) -> Fraction:
    if len(w) == 0:
        raise DomainError("square density of the empty word is undefined")
    return Fraction(count_distinct_squares(w), len(w))


# ── Runs ─────────────────────────────────────────────────────────────────────

def _runs_by_period_scan(letters: Sequence[int]) -> List[Tuple[int, int, int]]:
    n = len(letters)
    found: Dict[Tuple[int, int], int] = {}
    for p in range(1, n // 2 + 1):
        i = 0
        while i < n - p:
            if letters[i] != letters[i + p]:
                i += 1
                continue
            j = i
            while j < n - p and letters[j] == letters[j + p]:
                j += 1
            if j - i + p >= 2 * p:
                # the least period of a maximal stretch was seen at a smaller p
                found.setdefault((i, j - 1 + p), p)
            i = j
    return sorted((s, e, p) for (s, e), p in found.items())


def _to_runs(triples: Sequence[Tuple[int, int, int]]) -> List[Run]:
    return [Run(start=s + 1, end=e + 1, period=p) for s, e, p in sorted(triples)]


def count_runs(w: Word) -> Tuple[int, List[Run]]:
    """All maximal repetitions of exponent >= 2, as 1-indexed Run occurrences."""
    runs = _to_runs(_runs_by_period_scan(w.letters))
    return len(runs), runs


def runs_bruteforce(w: Word) -> List[Run]:
    """Factor-by-factor oracle: least period via borders, then maximality."""
    letters = w.letters
    n = len(letters)
    out = []
    for i in range(n):
        fail = failure_function(letters[i:])
        for length in range(2, n - i + 1):
            p = length - fail[length - 1]
            if length < 2 * p:
                continue
            j = i + length - 1
            if i > 0 and letters[i - 1] == letters[i - 1 + p]:
                continue
            if j < n - 1 and letters[j + 1] == letters[j + 1 - p]:
                continue
            out.append((i, j, p))
    return _to_runs(out)


def _lyndon_ends(letters: Sequence[int], flip: bool) -> List[int]:
    """end[i]: the longest Lyndon word starting at i is letters[i:end[i]]."""
    key = [-c for c in letters] if flip else list(letters)
    n = len(key)
    order = sorted(range(n), key=lambda i: key[i:])
    rank = [0] * n
    for r, i in enumerate(order):
        rank[i] = r
    end = [n] * n
    stack: List[int] = []
    for i in range(n):
        while stack and rank[i] < rank[stack[-1]]:
            end[stack.pop()] = i
        stack.append(i)
    return end


def _runs_by_lyndon_roots(letters: Sequence[int]) -> List[Tuple[int, int, int]]:
    n = len(letters)
    found: Set[Tuple[int, int, int]] = set()
    for flip in (False, True):
        end = _lyndon_ends(letters, flip)
        for i in range(n):
            j = end[i]
            p = j - i
            fwd = 0
            while j + fwd < n and letters[i + fwd] == letters[j + fwd]:
                fwd += 1
            back = 0
            while i - 1 - back >= 0 and letters[i - 1 - back] == letters[j - 1 - back]:
                back += 1
            if p + fwd + back >= 2 * p:
                found.add((i - back, j + fwd - 1, p))
    return sorted(found)


def count_runs_fast(w: Word) -> Tuple[int, List[Run]]:
    runs = _to_runs(_runs_by_lyndon_roots(w.letters))
    return len(runs), runs


# ── Exhaustive censuses ──────────────────────────────────────────────────────

def _check_census(k: int, n_max: int) -> None:
    if k < 1 or n_max < 0:
        raise DomainError("alphabet size must be positive and n_max non-negative")
    if k ** n_max > MAX_EXHAUSTIVE_WORDS:
        raise BudgetError(f"{k}^{n_max} words exceed the exhaustive limit")


def distinct_square_census(k: int, n_max: int) -> Dict[int, Tuple[int, Word]]:
    """
    For each length 1..n_max, the most distinct squares any word over k
    letters has, with the length-lex first word reaching it.

    Walks the prefix tree depth-first: appending a letter adds exactly the
    square suffixes that do not already occur in the word.
    """
    _check_census(k, n_max)
    alphabet = Alphabet.default(k)
    best: Dict[int, Tuple[int, str]] = {}
    stack: List[Tuple[str, int]] = [("", 0)]
    while stack:
        text, count = stack.pop()
        n = len(text)
        if n and (n not in best or count > best[n][0]):
            best[n] = (count, text)
        if n == n_max:
            continue
        for c in reversed(range(k)):
            t = text + chr(c)
            m = n + 1
            new = 0
            for h in range(1, m // 2 + 1):
                if t[m - 2 * h:m - h] == t[m - h:] and t[m - 2 * h:] not in t[:-1]:
                    new += 1
            stack.append((t, count + new))
    return {
        n: (count, Word.of(alphabet, tuple(ord(ch) for ch in text)))
        for n, (count, text) in sorted(best.items())
    }


def max_runs_census(k: int, n_max: int, fast: bool = True) -> Dict[int, Tuple[int, Word]]:
    """Most runs of any word over k letters, per length 1..n_max, with the first witness."""
    _check_census(k, n_max)
    alphabet = Alphabet.default(k)
    counter = _runs_by_lyndon_roots if fast else _runs_by_period_scan
    out: Dict[int, Tuple[int, Word]] = {}
    for n in range(1, n_max + 1):
        top, witness = -1, ()
        for letters in product(range(k), repeat=n):
            c = len(counter(letters))
            if c > top:
                top, witness = c, letters
        out[n] = (top, Word.of(alphabet, witness))
    return out


# ── Repetition thresholds ────────────────────────────────────────────────────

def dejean_threshold(k: int) -> Fraction:
    """RT(k): 2, 7/4, 7/5 for k = 2, 3, 4 and k/(k-1) from 5 on."""
    if k < 2:
        raise DomainError("the repetition threshold is defined for k >= 2")
    return DEJEAN_THRESHOLDS.get(k, Fraction(k, k - 1))


def letter_frequencies(w: Word) -> Dict[str, Fraction]:
    n = len(w)
    if n == 0:
        return {}
    return {
        w.alphabet.glyph(a): Fraction(w.letters.count(a), n)
        for a in range(w.alphabet.size)
    }


def rt_probe(
    k: int,
    budget: SearchBudget,
    alpha: Optional[RationalLike] = None,
    strict: bool = True,
) -> Dict:
    """
    Longest α⁺-free (strict) or α-free search over k letters, α defaulting
    to RT(k); reports the certificate's letter frequencies.
    """
    alpha = dejean_threshold(k) if alpha is None else _check_alpha(alpha)
    outcome = longest_free_word(PowerFreePredicate(alpha, strict=strict), k, budget)
    freqs = letter_frequencies(outcome.word) if outcome.word is not None else {}
    return {
        "k": k,
        "alpha": alpha,
        "strict": strict,
        "outcome": outcome,
        "letter_frequencies": freqs,
        "min_frequency": min(freqs.values()) if freqs else None,
        "known_threshold": dejean_threshold(k) if k >= 2 else None,
        "known_finite_threshold": FINITE_REPETITION_THRESHOLDS.get(k),
    }


def exact_exponent_factors(letters: Sequence[int], alpha: Fraction) -> Dict[str, int]:
    """Distinct factors of exponent exactly alpha → 0-based end of first occurrence."""
    n = len(letters)
    arr = np.asarray(letters, dtype=np.int64)
    text = as_text(letters)
    first_end: Dict[str, int] = {}
    for p in range(1, n):
        length = alpha * p
        if length.denominator != 1:
            continue
        length = int(length)
        if length > n:
            break
        need = length - p
        match = (arr[:-p] == arr[p:]).astype(np.int64)
        csum = np.concatenate(([0], np.cumsum(match)))
        starts = np.flatnonzero(csum[need:] - csum[:-need] == need)
        for i in starts:
            i = int(i)
            if i + length > n:
                break
            factor = text[i:i + length]
            if factor in first_end:
                continue
            if _least_period([ord(ch) for ch in factor]) != p:
                continue
            first_end[factor] = i + length - 1
    return first_end


def frt_probe(gen: PrefixOracle, alpha: RationalLike, horizon: int) -> Dict:
    """
    Factors of exponent exactly alpha in prefix(horizon), and whether none
    first appears in the last half (finiteness evidence only).
    """
    if horizon < 1:
        raise DomainError("horizon must be at least 1")
    alpha = _check_alpha(alpha)
    letters = gen.letters(horizon)
    first_end = exact_exponent_factors(letters, alpha)
    factors = sorted(first_end, key=lambda f: (len(f), f))
    stabilized = all(end < horizon // 2 for end in first_end.values())
    return {
        "tag": gen.tag,
        "alpha": alpha,
        "horizon": horizon,
        "factors": [gen.alphabet.render([ord(ch) for ch in f]) for f in factors],
        "count": len(factors),
        "stabilized": stabilized,
        "evidence": "finite prefix only",
    }


# ── Sturmian period sets ─────────────────────────────────────────────────────

def sturmian_period_set(cf: Sequence[int], horizon: int) -> PeriodSet:
    """
    Π(α) truncated at horizon: level n >= 1 contributes
    {i·q_{n-1} + q_{n-2} : 0 <= i <= d_n}, q_{-1} = q_0 = 1,
    q_n = d_n·q_{n-1} + q_{n-2}. The last supplied digit repeats.
    """
    digits = tuple(int(d) for d in cf)
    if not digits:
        raise DomainError("continued fraction expansion is empty")
    if any(d <= 0 for d in digits[1:]) or digits[0] < 0:
        raise DomainError("zero digit beyond the first position")
    if horizon <= 0:
        return PeriodSet(digits=digits, horizon=max(horizon, 0))
    if digits[-1] == 0:
        raise DomainError("expansion cannot end in a zero digit")
    values: Set[int] = set()
    q_prev2, q_prev = 1, 1
    denominators = [1, 1]
    level = 0
    while q_prev2 <= horizon:
        level += 1
        d = cf_digit(digits, level)
        for i in range(d + 1):
            v = i * q_prev + q_prev2
            if v <= horizon:
                values.add(v)
        q_prev2, q_prev = q_prev, d * q_prev + q_prev2
        denominators.append(q_prev)
    return PeriodSet(
        digits=digits,
        horizon=horizon,
        values=tuple(sorted(values)),
        denominators=tuple(denominators),
    )


# ── Duplication and completion ───────────────────────────────────────────────

def _suffix_completions(text: str, allow_empty_x: bool) -> Set[str]:
    out = set()
    n = len(text)
    min_x = 0 if allow_empty_x else 1
    for length in range(2 + min_x, n + 1):
        s = text[n - length:]
        t = 1
        while 2 * t + min_x <= length:
            if s[:t] == s[length - t:]:
                out.add(text + s[t:length - t])
            t += 1
    return out


def _prefix_completions(text: str, allow_empty_x: bool) -> Set[str]:
    return {c[::-1] for c in _suffix_completions(text[::-1], allow_empty_x)}


def _suffix_duplications(text: str) -> Set[str]:
    return {text + text[len(text) - i:] for i in range(1, len(text) + 1)}


def _prefix_duplications(text: str) -> Set[str]:
    return {text[:i] + text for i in range(1, len(text) + 1)}


def _from_texts(texts: Set[str], alphabet: Alphabet) -> Set[Word]:
    return {Word.of(alphabet, tuple(ord(ch) for ch in t)) for t in texts}


def suffix_square_duplicate(w: Word) -> Set[Word]:
    """{w·x : x a nonempty suffix of w}."""
    if len(w) == 0:
        raise DomainError("duplication needs a nonempty word")
    return _from_texts(_suffix_duplications(as_text(w.letters)), w.alphabet)


def prefix_square_duplicate(w: Word) -> Set[Word]:
    """{x·w : x a nonempty prefix of w}."""
    if len(w) == 0:
        raise DomainError("duplication needs a nonempty word")
    return _from_texts(_prefix_duplications(as_text(w.letters)), w.alphabet)


def suffix_square_complete(w: Word, allow_empty_x: bool = False) -> Set[Word]:
    """{w·x : y·x·y is a suffix of w for some nonempty y}."""
    if len(w) == 0:
        raise DomainError("completion needs a nonempty word")
    return _from_texts(_suffix_completions(as_text(w.letters), allow_empty_x), w.alphabet)


def prefix_square_complete(w: Word, allow_empty_x: bool = False) -> Set[Word]:
    """{x·w : y·x·y is a prefix of w for some nonempty y}."""
    if len(w) == 0:
        raise DomainError("completion needs a nonempty word")
    return _from_texts(_prefix_completions(as_text(w.letters), allow_empty_x), w.alphabet)


def _moves(text: str, operations: Sequence[str], both_ends: bool, allow_empty_x: bool) -> Set[str]:
    out: Set[str] = set()
    if "completion" in operations:
        out |= _suffix_completions(text, allow_empty_x)
        if both_ends:
            out |= _prefix_completions(text, allow_empty_x)
    if "duplication" in operations:
        out |= _suffix_duplications(text)
        if both_ends:
            out |= _prefix_duplications(text)
    out.discard(text)
    return out


def completion_distance(
    u: Word,
    w: Word,
    budget: SearchBudget,
    both_ends: bool = True,
    operations: Sequence[str] = ("completion",),
    allow_empty_x: bool = False,
) -> SearchOutcome:
    """
    Fewest completion steps turning u into w (breadth-first). Every
    intermediate word is a factor of w, so the search stays inside w's
    factor set. found carries the step count and the path.
    """
    src, dst = as_text(u.letters), as_text(w.letters)
    if src not in dst:
        raise DomainError(f"{u} is not a factor of {w}")
    started = time.monotonic()
    parent: Dict[str, Optional[str]] = {src: None}
    depth = {src: 0}
    queue = deque([src])
    nodes = 0
    verdict = "exhausted"
    while queue:
        cur = queue.popleft()
        if cur == dst:
            verdict = "found"
            break
        nodes += 1
        if nodes > budget.max_nodes or time.monotonic() - started > budget.max_seconds:
            verdict = "budget"
            logger.warning("completion_distance: budget hit after %d expansions", nodes)
            break
        for nxt in sorted(_moves(cur, operations, both_ends, allow_empty_x)):
            if nxt in parent or nxt not in dst:
                continue
            parent[nxt] = cur
            depth[nxt] = depth[cur] + 1
            queue.append(nxt)
    stats = {"nodes": nodes, "visited": len(parent),
             "elapsed_seconds": round(time.monotonic() - started, 6)}
    if verdict != "found":
        return SearchOutcome(verdict=verdict, word=None, statistics=stats)
    path = []
    node: Optional[str] = dst
    while node is not None:
        path.append(w.alphabet.render([ord(ch) for ch in node]))
        node = parent[node]
    path.reverse()
    return SearchOutcome(
        verdict="found",
        word=w,
        certificate={"steps": depth[dst], "path": path},
        statistics=stats,
    )


def duplication_closure(
    seed: Word,
    steps: int,
    max_len: int,
    operations: Sequence[str] = ("duplication",),
    both_ends: bool = False,
    allow_empty_x: bool = False,
) -> Dict[int, Set[Word]]:
    """Words reachable from seed in at most `steps` moves, keyed by length (<= max_len)."""
    frontier = {as_text(seed.letters)}
    seen = set(frontier)
    for _ in range(steps):
        nxt = set()
        for text in frontier:
            for cand in _moves(text, operations, both_ends, allow_empty_x):
                if len(cand) <= max_len and cand not in seen:
                    seen.add(cand)
                    nxt.add(cand)
        if not nxt:
            break
        frontier = nxt
    by_length: Dict[int, Set[Word]] = {}
    for text in seen:
        by_length.setdefault(len(text), set()).add(
            Word.of(seed.alphabet, tuple(ord(ch) for ch in text))
        )
    return dict(sorted(by_length.items()))

"""
patterns.py
-----------
Wordlab — Combinatorics-on-Words Workbench — Patterns and avoidance
------------------------------------------------------------------
Pattern encounter testing, avoidance searches (linear, circular and by
palindromic blocks), maximal p-free words, D0L / HD0L evidence checks,
growth censuses, prefix-tree exploration, and conducted shuffles.

Pattern syntax: uppercase letters are variables and lowercase letters
are constants (matched against the host word's glyphs). A pattern made
only of digits ("01020312") reads every digit as a variable. Variable
images are nonempty.

Key functions:
    - encounters: first witness (leftmost occurrence, then shortest images
      in order of first appearance)
    - longest_avoiding, circular_avoiding_lengths, palindrome_concat_avoider
    - is_maximal_pfree, maximal_pfree_words
    - d0l_avoidance_check, hd0l_avoidance_check
    - growth_census, subtree_explore, subtree_isomorphic
    - shuffle, self_shuffle_squarefree_search, count_self_shuffles,
      conduction_count, shuffle_square_root

Project: Wordlab — Combinatorics-on-Words Workbench
"""

from __future__ import annotations

import logging
from functools import lru_cache
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from errors import DomainError
from known_facts import BINARY_GROWTH_SWITCH
from repetitions import PowerFreePredicate, is_alpha_free
from schemas import ConductionSequence, EncounterWitness, SearchBudget, SearchOutcome
from search import (
    BudgetTracker,
    FreenessPredicate,
    count_free_words,
    explore_subtree,
    iter_free_words,
    longest_free_word,
)
from word_core import Alphabet, Morphism, Word, coerce_word, fixed_point_prefix

logger = logging.getLogger(__name__)

# ── Pattern type ─────────────────────────────────────────────────────────────

class Pattern(BaseModel):
    """A word over variables and constants; body symbols are single glyphs."""

    model_config = ConfigDict(frozen=True)

    body: Tuple[str, ...]
    variables: Tuple[str, ...]
    constants: Tuple[str, ...] = ()

    @model_validator(mode="after")
    def well_formed(self) -> "Pattern":
        if not self.body:
            raise ValueError("a pattern needs a nonempty body")
        if set(self.variables) & set(self.constants):
            raise ValueError("variables and constants must be disjoint")
        for sym in self.body:
            if sym not in self.variables and sym not in self.constants:
                raise ValueError(f"symbol {sym!r} is neither a variable nor a constant")
        return self

    @classmethod
    def parse(cls, text: str, variables: Optional[str] = None) -> "Pattern":
        body = tuple(ch for ch in text if not ch.isspace())
        if not body:
            raise DomainError("empty pattern")
        if variables is not None:
            is_var = lambda ch: ch in variables
        elif any(ch.isupper() for ch in body):
            is_var = str.isupper
        elif all(ch.isdigit() for ch in body):
            is_var = str.isdigit
        else:
            is_var = lambda ch: False
        var_order: List[str] = []
        consts: List[str] = []
        for ch in body:
            if is_var(ch):
                if ch not in var_order:
                    var_order.append(ch)
            elif ch not in consts:
                consts.append(ch)
        return cls(body=body, variables=tuple(var_order), constants=tuple(consts))

    def __str__(self) -> str:
        return "".join(self.body)

    def __len__(self) -> int:
        return len(self.body)

    def pure_power(self) -> Optional[int]:
        """k when the pattern is X^k (k >= 2) for one variable and no constants."""
        if len(self.variables) == 1 and not self.constants and len(self.body) >= 2:
            return len(self.body)
        return None

    def compile(self, alphabet: Alphabet) -> Optional[Tuple[int, ...]]:
        """
        Body as ints: variable i -> i, constant letter c -> -(c+1).
        None when a constant is missing from the alphabet (no match possible).
        """
        index = {v: i for i, v in enumerate(self.variables)}
        out = []
        for sym in self.body:
            if sym in index:
                out.append(index[sym])
            else:
                if alphabet.glyphs is None or sym not in alphabet.glyphs:
                    return None
                out.append(-(alphabet.glyphs.index(sym) + 1))
        return tuple(out)


# ── Matching ─────────────────────────────────────────────────────────────────

def _match(
    letters: Sequence[int],
    start: int,
    body: Tuple[int, ...],
    nvars: int,
    end: Optional[int],
) -> Optional[List[Tuple[int, int]]]:
    """
    Backtracking over image lengths. Returns per-variable (start, length)
    for an occurrence beginning at start (and ending at end, if given).
    """
    limit = len(letters) if end is None else end
    assign: List[Optional[Tuple[int, int]]] = [None] * nvars
    m = len(body)

    def min_rest(idx: int) -> int:
        total = 0
        for sym in body[idx:]:
            total += assign[sym][1] if sym >= 0 and assign[sym] is not None else 1
        return total

    def go(idx: int, pos: int) -> bool:
        if idx == m:
            return end is None or pos == end
        sym = body[idx]
        if sym < 0:
            if pos < limit and letters[pos] == -sym - 1:
                return go(idx + 1, pos + 1)
            return False
        if assign[sym] is not None:
            s, ln = assign[sym]
            if pos + ln > limit:
                return False
            for t in range(ln):
                if letters[pos + t] != letters[s + t]:
                    return False
            return go(idx + 1, pos + ln)
        rest = min_rest(idx + 1)
        max_len = limit - pos - rest
        for ln in range(1, max_len + 1):
            assign[sym] = (pos, ln)
            if go(idx + 1, pos + ln):
                return True
        assign[sym] = None
        return False

    if go(0, start):
        return [a if a is not None else (start, 0) for a in assign]
    return None


def encounters(w: Word, p: Pattern) -> Optional[EncounterWitness]:
    """First witness that w encounters p, or None."""
    body = p.compile(w.alphabet)
    if body is None:
        return None
    letters = w.letters
    n = len(letters)
    for start in range(n - len(body) + 1):
        found = _match(letters, start, body, len(p.variables), None)
        if found is None:
            continue
        assignment = {
            var: Word.of(w.alphabet, letters[s:s + ln])
            for var, (s, ln) in zip(p.variables, found)
        }
        total = sum(len(assignment[sym]) if sym in assignment else 1 for sym in p.body)
        return EncounterWitness(assignment=assignment, position=start + 1, length=total)
    return None


def substitute(p: Pattern, assignment: Dict[str, Word], alphabet: Alphabet) -> Word:
    """Apply a variable assignment to p; constants map to themselves."""
    out: List[int] = []
    for sym in p.body:
        if sym in assignment:
            out.extend(coerce_word(assignment[sym], alphabet).letters)
        else:
            out.append(alphabet.index(sym))
    return Word.of(alphabet, out)


def is_pfree(w: Word, p: Pattern) -> bool:
    k = p.pure_power()
    if k is not None:
        return is_alpha_free(w, k, strict=False)
    return encounters(w, p) is None


class PatternPredicate(FreenessPredicate):
    """Words avoiding p, checked on occurrences that end at the newest letter."""

    def __init__(self, p: Pattern, alphabet: Alphabet):
        self.pattern = p
        self.alphabet = alphabet
        self.name = f"{p}-free"
        self.symmetric = not p.constants
        self._body = p.compile(alphabet)
        power = p.pure_power()
        self._power = PowerFreePredicate(power) if power is not None else None

    def extends(self, letters: Sequence[int]) -> bool:
        if self._power is not None:
            return self._power.extends(letters)
        if self._body is None:
            return True
        n = len(letters)
        nvars = len(self.pattern.variables)
        for start in range(n - len(self._body), -1, -1):
            if _match(letters, start, self._body, nvars, n) is not None:
                return False
        return True


def as_predicate(p: Union[Pattern, FreenessPredicate, str], k: int) -> FreenessPredicate:
    if isinstance(p, FreenessPredicate):
        return p
    if isinstance(p, str):
        p = Pattern.parse(p)
    return PatternPredicate(p, Alphabet.default(k))


# ── Avoidance searches ───────────────────────────────────────────────────────

def longest_avoiding(p: Pattern, k: int, budget: SearchBudget, symmetry: bool = True) -> SearchOutcome:
    """Depth-first search for the longest p-free word over k letters."""
    return longest_free_word(PatternPredicate(p, Alphabet.default(k)), k, budget, symmetry=symmetry)


def circular_avoiding_lengths(p: Pattern, k: int, n_max: int) -> List[int]:
    """
    Lengths n <= n_max admitting a circular p-free word over k letters.

    A circular word is p-free when no cyclic factor of length <= n
    encounters p, i.e. when every rotation is p-free as a linear word.
    """
    if n_max < 1:
        raise DomainError("n_max must be at least 1")
    predicate = PatternPredicate(p, Alphabet.default(k))
    lengths = []
    for n in range(1, n_max + 1):
        for w in iter_free_words(predicate, k, n, symmetry=predicate.symmetric):
            if all(predicate.holds(w[i:] + w[:i]) for i in range(1, n)):
                lengths.append(n)
                break
    return lengths


def is_maximal_pfree(w: Word, p: Pattern) -> bool:
    """True iff a·w·b encounters p for every pair of letters a, b."""
    if not is_pfree(w, p):
        raise DomainError(f"{w} is not {p}-free")
    size = w.alphabet.size
    for a in range(size):
        for b in range(size):
            ext = Word.of(w.alphabet, (a,) + w.letters + (b,))
            if is_pfree(ext, p):
                return False
    return True


def maximal_pfree_words(p: Pattern, k: int, max_len: int, limit: int = 100) -> Dict:
    """Maximal p-free words over k letters of length <= max_len (first `limit` listed)."""
    alphabet = Alphabet.default(k)
    predicate = PatternPredicate(p, alphabet)
    per_length: Dict[int, int] = {}
    examples: List[str] = []
    for n in range(0, max_len + 1):
        count = 0
        for letters in iter_free_words(predicate, k, n):
            word = Word.of(alphabet, letters)
            if is_maximal_pfree(word, p):
                count += 1
                if len(examples) < limit:
                    examples.append(str(word))
        per_length[n] = count
    return {"pattern": str(p), "k": k, "max_len": max_len, "per_length": per_length, "examples": examples}


# ── Morphic evidence ─────────────────────────────────────────────────────────

def _first_violation(letters: Sequence[int], alphabet: Alphabet, p: Pattern) -> Tuple[int, Optional[EncounterWitness]]:
    """Shortest prefix length that encounters p (binary search; encounter is monotone)."""
    lo, hi = len(p.body), len(letters)
    while lo < hi:
        mid = (lo + hi) // 2
        if is_pfree(Word.of(alphabet, letters[:mid]), p):
            lo = mid + 1
        else:
            hi = mid
    prefix = Word.of(alphabet, letters[:lo])
    return lo, encounters(prefix, p)


def d0l_avoidance_check(
    m: Morphism,
    a: int,
    p: Pattern,
    horizon: int,
    outer: Optional[Morphism] = None,
) -> Dict:
    """
    Is the length-horizon prefix of m^ω(a) (optionally mapped by outer)
    p-free? Evidence up to the horizon only, never a proof.
    """
    prefix = fixed_point_prefix(m, a, horizon)
    word = outer.apply(prefix) if outer is not None else prefix
    free = is_pfree(word, p)
    report = {
        "morphism": str(m),
        "outer": str(outer) if outer is not None else None,
        "pattern": str(p),
        "horizon": horizon,
        "checked_length": len(word),
        "free": free,
        "verdict": "free up to horizon" if free else "encounter found",
        "evidence": "finite prefix only",
        "witness": None,
        "violation_prefix": None,
    }
    if not free:
        length, witness = _first_violation(word.letters, word.alphabet, p)
        report["violation_prefix"] = length
        report["witness"] = witness
    return report


def hd0l_avoidance_check(g: Morphism, a: int, f: Morphism, p: Pattern, horizon: int) -> Dict:
    return d0l_avoidance_check(g, a, p, horizon, outer=f)


# ── Censuses and prefix trees ────────────────────────────────────────────────

def classify_growth(counts: Sequence[int]) -> Dict:
    """Advisory polynomial-vs-exponential call from least-squares fits."""
    points = [(n, c) for n, c in enumerate(counts) if n >= 1 and c > 0]
    if counts and counts[-1] == 0:
        return {"classification": "finite", "advisory": True}
    if len(points) < 3:
        return {"classification": "undetermined", "advisory": True}
    ns = np.array([n for n, _ in points], dtype=float)
    logs = np.log(np.array([c for _, c in points], dtype=float))
    exp_fit, exp_res = np.polyfit(ns, logs, 1, full=True)[:2]
    poly_fit, poly_res = np.polyfit(np.log(ns), logs, 1, full=True)[:2]
    exp_err = float(exp_res[0]) if len(exp_res) else 0.0
    poly_err = float(poly_res[0]) if len(poly_res) else 0.0
    return {
        "classification": "exponential" if exp_err <= poly_err else "polynomial",
        "growth_rate": float(np.exp(exp_fit[0])),
        "degree": float(poly_fit[0]),
        "residuals": {"exponential": exp_err, "polynomial": poly_err},
        "advisory": True,
    }


def _known_binary_growth(predicate: FreenessPredicate, k: int) -> Optional[str]:
    """Published growth class of binary power-free languages, if the predicate is one."""
    if k != 2 or not isinstance(predicate, PowerFreePredicate):
        return None
    alpha, strict = predicate.alpha, predicate.strict
    if alpha < 2 or (alpha == 2 and not strict):
        return "finite"
    if alpha < BINARY_GROWTH_SWITCH or (alpha == BINARY_GROWTH_SWITCH and not strict):
        return "polynomial"
    return "exponential"


def growth_census(
    p: Union[Pattern, FreenessPredicate, str],
    k: int,
    n_max: int,
    threads: int = 1,
    max_nodes: Optional[int] = None,
    progress: bool = False,
) -> Dict:
    """
    Number of free words of each length <= n_max plus an advisory trend.

    Binary power-free predicates also carry the published growth class
    under growth["known"].
    """
    predicate = as_predicate(p, k)
    counts, complete = count_free_words(predicate, k, n_max, threads=threads,
                                        max_nodes=max_nodes, progress=progress)
    growth = classify_growth(counts)
    known = _known_binary_growth(predicate, k)
    if known is not None:
        growth["known"] = known
    return {
        "predicate": str(predicate),
        "k": k,
        "counts": counts,
        "complete": complete,
        "growth": growth,
    }


def subtree_explore(w: Word, predicate: Union[Pattern, FreenessPredicate, str], depth: int,
                    k: Optional[int] = None) -> Dict:
    """Subtree of the predicate's prefix tree rooted at w, to the given depth."""
    k = k or w.alphabet.size
    pred = as_predicate(predicate, k)
    if not pred.holds(w.letters):
        raise DomainError(f"root {w} violates {pred}")
    stats = explore_subtree(pred, k, w.letters, depth)
    stats.update({"root": str(w), "predicate": str(pred), "depth": depth})
    return stats


def _shape(pred: FreenessPredicate, k: int, w: Tuple[int, ...], depth: int):
    if depth == 0:
        return ()
    kids = []
    for c in range(k):
        child = w + (c,)
        if pred.extends(child):
            kids.append(_shape(pred, k, child, depth - 1))
    return tuple(sorted(kids))


def subtree_isomorphic(u: Word, v: Word, predicate: Union[Pattern, FreenessPredicate, str],
                       depth: int, k: Optional[int] = None) -> bool:
    """Unordered-tree isomorphism of the two subtrees, compared to a bounded depth."""
    k = k or max(u.alphabet.size, v.alphabet.size)
    pred = as_predicate(predicate, k)
    for root in (u, v):
        if not pred.holds(root.letters):
            raise DomainError(f"root {root} violates {pred}")
    return _shape(pred, k, u.letters, depth) == _shape(pred, k, v.letters, depth)


def palindromes(k: int, max_len: int) -> List[Tuple[int, ...]]:
    """Nonempty palindromes over k letters, ordered by length then lexicographically."""
    out: List[Tuple[int, ...]] = []
    for length in range(1, max_len + 1):
        half = (length + 1) // 2
        for head in product(range(k), repeat=half):
            tail = head[:length // 2][::-1]
            out.append(head + tail)
    return out


def palindrome_concat_avoider(
    p: Union[Pattern, FreenessPredicate, str],
    k: int,
    budget: SearchBudget,
    max_block: int = 5,
) -> SearchOutcome:
    """Backtracking over sequences of palindromes whose concatenation stays free."""
    if k < 1:
        raise DomainError("alphabet size must be at least 1")
    alphabet = Alphabet.default(k)
    pred = as_predicate(p, k)
    blocks = palindromes(k, max_block)
    tracker = BudgetTracker(budget)
    word: List[int] = []
    chosen: List[int] = []
    best_word: Tuple[int, ...] = ()
    best_blocks: List[int] = []
    nxt = [0]
    verdict = "exhausted"
    if budget.max_nodes == 0:
        tracker.reason = "max_nodes"
        verdict = "budget"
        nxt = []
    while nxt:
        i = nxt[-1]
        if i >= len(blocks):
            nxt.pop()
            if chosen:
                del word[len(word) - len(blocks[chosen.pop()]):]
            continue
        nxt[-1] = i + 1
        if not tracker.tick():
            verdict = "budget"
            break
        block = blocks[i]
        mark = len(word)
        fits = True
        for c in block:
            word.append(c)
            if not pred.extends(word):
                fits = False
                break
        if not fits:
            del word[mark:]
            continue
        chosen.append(i)
        if len(word) > len(best_word):
            best_word = tuple(word)
            best_blocks = list(chosen)
        if len(word) >= budget.max_length:
            verdict = "found"
            break
        nxt.append(0)
    return SearchOutcome(
        verdict=verdict,
        word=Word.of(alphabet, best_word),
        certificate={
            "word": alphabet.render(best_word),
            "length": len(best_word),
            "blocks": [alphabet.render(blocks[i]) for i in best_blocks],
        },
        statistics=tracker.statistics(max_block=max_block),
    )


# ── Shuffles ─────────────────────────────────────────────────────────────────

def shuffle(u0: Word, u1: Word, beta: ConductionSequence) -> Word:
    """Letter i is the next unread letter of u_{β(i)}."""
    if beta.zeros != len(u0) or beta.ones != len(u1):
        raise DomainError(
            f"conduction sequence has {beta.zeros} zeros / {beta.ones} ones "
            f"for words of length {len(u0)} and {len(u1)}"
        )
    sources = (u0.letters, coerce_word(u1, u0.alphabet).letters if len(u1) else ())
    pos = [0, 0]
    out = []
    for bit in beta.bits:
        out.append(sources[bit][pos[bit]])
        pos[bit] += 1
    return Word.of(u0.alphabet, out)


def _require_squarefree(u: Word) -> None:
    if not is_alpha_free(u, 2):
        raise DomainError(f"{u} is not square-free")


def _self_shuffles(u: Word):
    """Yield (β, word) for square-free u ⧢_β u, β in lexicographic order."""
    letters = u.letters
    m = len(letters)
    pred = PowerFreePredicate(2)
    out: List[int] = []
    bits: List[int] = []

    def go(i0: int, i1: int):
        if i0 == m and i1 == m:
            yield tuple(bits), tuple(out)
            return
        for bit in (0, 1):
            idx = i0 if bit == 0 else i1
            if idx >= m:
                continue
            out.append(letters[idx])
            bits.append(bit)
            if pred.extends(out):
                yield from go(i0 + (bit == 0), i1 + (bit == 1))
            out.pop()
            bits.pop()

    return go(0, 0)


def self_shuffle_squarefree_search(u: Word) -> Optional[ConductionSequence]:
    """First β (lexicographic) with u ⧢_β u square-free, or None."""
    _require_squarefree(u)
    for bits, _ in _self_shuffles(u):
        return ConductionSequence(bits=bits)
    return None


def count_self_shuffles(u: Word) -> Dict:
    """All witnesses β, and how many distinct square-free words they give."""
    _require_squarefree(u)
    betas = 0
    words = set()
    for bits, letters in _self_shuffles(u):
        betas += 1
        words.add(letters)
    return {
        "u": str(u),
        "witnesses": betas,
        "distinct_words": len(words),
        "words": sorted(u.alphabet.render(w) for w in words),
    }


def conduction_count(u: Word, w: Word) -> int:
    """Number of β with u ⧢_β u = w."""
    a = u.letters
    b = coerce_word(w, u.alphabet).letters
    m = len(a)
    if len(b) != 2 * m:
        return 0

    @lru_cache(maxsize=None)
    def ways(i0: int, i1: int) -> int:
        pos = i0 + i1
        if pos == 2 * m:
            return 1
        total = 0
        if i0 < m and a[i0] == b[pos]:
            total += ways(i0 + 1, i1)
        if i1 < m and a[i1] == b[pos]:
            total += ways(i0, i1 + 1)
        return total

    return ways(0, 0)


def shuffle_square_root(w: Word, require_squarefree: bool = True) -> Optional[Tuple[Word, ConductionSequence]]:
    """
    Some u and β with w = u ⧢_β u (u square-free unless disabled), or None.
    The two copies are interchangeable, so β starts with 0.
    """
    letters = w.letters
    if len(letters) % 2:
        return None
    m = len(letters) // 2
    sq = PowerFreePredicate(2)
    known: List[int] = []
    bits: List[int] = []

    def go(i0: int, i1: int) -> bool:
        pos = i0 + i1
        if pos == 2 * m:
            return True
        c = letters[pos]
        for bit in (0, 1):
            if pos == 0 and bit == 1:
                continue
            idx = i0 if bit == 0 else i1
            if idx >= m:
                continue
            grew = False
            if idx < len(known):
                if known[idx] != c:
                    continue
            else:
                known.append(c)
                grew = True
                if require_squarefree and not sq.extends(known):
                    known.pop()
                    continue
            bits.append(bit)
            if go(i0 + (bit == 0), i1 + (bit == 1)):
                return True
            bits.pop()
            if grew:
                known.pop()
        return False

    if go(0, 0):
        return Word.of(w.alphabet, known), ConductionSequence(bits=tuple(bits))
    return None

"""
abelian.py
----------
Wordlab — Combinatorics-on-Words Workbench — Abelian equivalences and powers
--------------------------------------------------------------------------
Parikh vectors, abelian / k-abelian / additive equivalences and powers,
abelian pattern encounters, Zimin tests, abelian-square counting,
long-power avoidance searches, abelian fractional powers (ART / DART
probes), strongly k-abelian power censuses and the Mäkelä exploration.

k-abelian equivalence follows the factor-count definition only: u ~_k v
iff every word of length <= k occurs equally often in u and v. The
prefix/suffix side condition common in the literature is not added.

Key functions:
    - parikh, kabelian_equiv, is_kabelian_npower, is_strongly_kabelian_npower
    - abelian_encounters, zimin_abelian_test, count_abelian_squares
    - letter_values, is_additive_npower
    - AbelianPowerPredicate, avoid_long_powers_search
    - AbelianFractionalPredicate, art_dart_probe
    - strong_power_census
    - abelian_cube_profile, makela_exploration, morphism_candidates

Project: Wordlab — Combinatorics-on-Words Workbench
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from fractions import Fraction
from itertools import product
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from errors import BudgetError, DomainError, UnsupportedError
from known_facts import CLASSIC_MORPHISMS, CLASSIC_START_LETTERS, MAX_EXHAUSTIVE_WORDS
from patterns import Pattern
from schemas import (
    AbelianPowerReport,
    EncounterWitness,
    ParikhVector,
    SearchBudget,
    SearchOutcome,
)
from search import FreenessPredicate, longest_free_word
from word_core import (
    Alphabet,
    Morphism,
    Word,
    classic_word,
    coerce_word,
    fixed_point_prefix,
    parse_morphism,
    parse_rational,
)

logger = logging.getLogger(__name__)

RationalLike = Union[Fraction, str, int]


# ── Parikh vectors and equivalences ──────────────────────────────────────────

def parikh(w: Word) -> ParikhVector:
    counts = np.bincount(np.asarray(w.letters, dtype=np.int64), minlength=w.alphabet.size)
    return ParikhVector(counts=tuple(int(c) for c in counts))


def _prefix_counts(letters: Sequence[int], size: int) -> np.ndarray:
    """Row i holds the Parikh vector of letters[:i]."""
    table = np.zeros((len(letters) + 1, size), dtype=np.int64)
    if letters:
        table[np.arange(1, len(letters) + 1), np.asarray(letters)] = 1
        np.cumsum(table, axis=0, out=table)
    return table


def _factor_counts(letters: Sequence[int], k: int) -> Counter:
    counts: Counter = Counter()
    n = len(letters)
    for length in range(1, min(k, n) + 1):
        for i in range(n - length + 1):
            counts[tuple(letters[i:i + length])] += 1
    return counts


def _signature(letters: Sequence[int], k: int) -> Tuple:
    return tuple(sorted(_factor_counts(letters, k).items()))


def kabelian_equiv(u: Word, v: Word, k: int) -> bool:
    """Every word of length <= k occurs equally often in u and v."""
    if k < 1:
        raise DomainError("k must be at least 1")
    v = coerce_word(v, u.alphabet)
    if len(u) != len(v):
        return False
    return _factor_counts(u.letters, k) == _factor_counts(v.letters, k)


def _blocks(w: Word, n: int) -> Optional[List[Tuple[int, ...]]]:
    if len(w) == 0 or len(w) % n:
        return None
    m = len(w) // n
    return [w.letters[i * m:(i + 1) * m] for i in range(n)]


def _check_degree(n: int) -> None:
    if n < 2:
        raise DomainError("power degree n must be at least 2")


def is_kabelian_npower(w: Word, n: int, k: int = 1) -> Optional[AbelianPowerReport]:
    """Report when w splits into n blocks that are consecutively k-abelian equivalent."""
    _check_degree(n)
    if k < 1:
        raise DomainError("k must be at least 1")
    blocks = _blocks(w, n)
    if blocks is None:
        return None
    signatures = [_factor_counts(b, k) for b in blocks]
    if any(signatures[i] != signatures[i + 1] for i in range(n - 1)):
        return None
    return AbelianPowerReport(
        block_length=len(blocks[0]),
        n=n,
        kind="abelian" if k == 1 else "k-abelian",
        k=k,
        word_length=len(w),
        blocks=tuple(w.alphabet.render(b) for b in blocks),
    )


def _multiset_permutations(counts: List[int]) -> Iterator[Tuple[int, ...]]:
    total = sum(counts)
    word: List[int] = []

    def go() -> Iterator[Tuple[int, ...]]:
        if len(word) == total:
            yield tuple(word)
            return
        for c, left in enumerate(counts):
            if left:
                counts[c] -= 1
                word.append(c)
                yield from go()
                word.pop()
                counts[c] += 1

    return go()


def _multinomial(counts: Sequence[int]) -> int:
    out = math.factorial(sum(counts))
    for c in counts:
        out //= math.factorial(c)
    return out


def is_strongly_kabelian_npower(w: Word, n: int, k: int = 1) -> bool:
    """
    Some x^n of the same length is k-abelian equivalent to w.

    Candidates x are the arrangements of Parikh(w)/n; there are none
    unless every letter count is divisible by n.
    """
    _check_degree(n)
    if k < 1:
        raise DomainError("k must be at least 1")
    if len(w) == 0 or len(w) % n:
        return False
    counts = parikh(w).counts
    if any(c % n for c in counts):
        return False
    share = [c // n for c in counts]
    if _multinomial(share) > MAX_EXHAUSTIVE_WORDS:
        raise BudgetError(f"too many candidate roots for a word of length {len(w)}")
    target = _factor_counts(w.letters, k)
    for x in _multiset_permutations(share):
        if _factor_counts(x * n, k) == target:
            return True
    return False


# ── Abelian pattern encounters ───────────────────────────────────────────────

def abelian_encounter_witness(
    w: Word,
    p: Pattern,
    allow_constants: bool = False,
) -> Optional[EncounterWitness]:
    """
    First factor f_1…f_|p| of w whose blocks are abelian equivalent
    wherever p repeats a symbol (blocks nonempty). Witness images are the
    first block of each variable.
    """
    if p.constants and not allow_constants:
        raise UnsupportedError(f"pattern {p} has constants; abelian encounters need allow_constants")
    body = p.compile(w.alphabet)
    if body is None:
        return None
    letters = w.letters
    n = len(letters)
    table = _prefix_counts(letters, w.alphabet.size)
    nvars = len(p.variables)
    m = len(body)

    def vec(s: int, e: int) -> Tuple[int, ...]:
        return tuple((table[e] - table[s]).tolist())

    for start in range(n - m + 1):
        assign: List[Optional[Tuple[int, int, Tuple[int, ...]]]] = [None] * nvars

        def go(idx: int, pos: int) -> bool:
            if idx == m:
                return True
            sym = body[idx]
            if sym < 0:
                return pos < n and letters[pos] == -sym - 1 and go(idx + 1, pos + 1)
            if assign[sym] is not None:
                _, ln, parikh_vec = assign[sym]
                return pos + ln <= n and vec(pos, pos + ln) == parikh_vec and go(idx + 1, pos + ln)
            rest = sum(assign[s][1] if s >= 0 and assign[s] is not None else 1 for s in body[idx + 1:])
            for ln in range(1, n - pos - rest + 1):
                assign[sym] = (pos, ln, vec(pos, pos + ln))
                if go(idx + 1, pos + ln):
                    return True
            assign[sym] = None
            return False

        if go(0, start):
            images = {
                var: Word.of(w.alphabet, letters[s:s + ln])
                for var, (s, ln, _) in zip(p.variables, assign)
            }
            length = sum(len(images[sym]) if sym in images else 1 for sym in p.body)
            return EncounterWitness(assignment=images, position=start + 1, length=length)
    return None


def abelian_encounters(w: Word, p: Pattern, allow_constants: bool = False) -> bool:
    return abelian_encounter_witness(w, p, allow_constants) is not None


def zimin_abelian_test(p: Pattern, n: Optional[int] = None) -> bool:
    """True iff the Zimin word Z_n does not abelian-encounter p (n defaults to |vars(p)|)."""
    n = n if n is not None else len(p.variables)
    if n < 1:
        raise DomainError("Zimin index must be at least 1")
    return not abelian_encounters(classic_word(f"zimin({n})"), p)


# ── Abelian squares ──────────────────────────────────────────────────────────

def count_abelian_squares(w: Word, mode: str = "distinct") -> int:
    """
    distinct: number of distinct factors that are abelian squares.
    inequivalent: number of distinct Parikh vectors among those factors.
    """
    if mode not in ("distinct", "inequivalent"):
        raise DomainError(f"unknown mode {mode!r}; expected distinct or inequivalent")
    letters = w.letters
    n = len(letters)
    table = _prefix_counts(letters, w.alphabet.size)
    text = "".join(map(chr, letters))
    shapes = set()
    vectors = set()
    for half in range(1, n // 2 + 1):
        starts = np.arange(0, n - 2 * half + 1)
        left = table[starts + half] - table[starts]
        right = table[starts + 2 * half] - table[starts + half]
        for i in starts[(left == right).all(axis=1)]:
            i = int(i)
            shapes.add(text[i:i + 2 * half])
            vectors.add(tuple((2 * left[i]).tolist()))
    return len(shapes) if mode == "distinct" else len(vectors)


# ── Additive powers ──────────────────────────────────────────────────────────

def letter_values(alphabet: Alphabet, value_map: Optional[Dict[str, int]] = None) -> Tuple[int, ...]:
    """Digit value of each letter: its glyph read as an integer unless a map is given."""
    if value_map is not None:
        missing = [alphabet.glyph(c) for c in range(alphabet.size) if alphabet.glyph(c) not in value_map]
        if missing:
            raise DomainError(f"value map has no entry for {', '.join(missing)}")
        return tuple(int(value_map[alphabet.glyph(c)]) for c in range(alphabet.size))
    if alphabet.glyphs is None:
        return tuple(range(alphabet.size))
    try:
        return tuple(int(g) for g in alphabet.glyphs)
    except ValueError:
        raise DomainError(
            f"alphabet {','.join(alphabet.glyphs)} is not numeric; supply a value map"
        )


def is_additive_npower(
    w: Word,
    n: int,
    value_map: Optional[Dict[str, int]] = None,
) -> Optional[AbelianPowerReport]:
    """n equal-length blocks with equal digit sums."""
    _check_degree(n)
    blocks = _blocks(w, n)
    if blocks is None:
        return None
    values = letter_values(w.alphabet, value_map)
    sums = [sum(values[c] for c in b) for b in blocks]
    if len(set(sums)) != 1:
        return None
    return AbelianPowerReport(
        block_length=len(blocks[0]),
        n=n,
        kind="additive",
        word_length=len(w),
        blocks=tuple(w.alphabet.render(b) for b in blocks),
    )


# ── Avoidance of long powers ─────────────────────────────────────────────────

class AbelianPowerPredicate(FreenessPredicate):
    """
    No suffix is an abelian / k-abelian / additive n-power with block
    length >= min_period.
    """

    def __init__(
        self,
        kind: str,
        n: int,
        min_period: int = 1,
        kabelian_k: Optional[int] = None,
        values: Optional[Sequence[int]] = None,
    ):
        if kind not in ("abelian", "k-abelian", "additive"):
            raise DomainError(f"unsupported power kind {kind!r}")
        _check_degree(n)
        if min_period < 1:
            raise DomainError("min_period must be at least 1")
        if kind == "k-abelian" and (kabelian_k is None or kabelian_k < 1):
            raise DomainError("k-abelian powers need k >= 1")
        self.kind = kind
        self.n = n
        self.min_period = min_period
        self.kabelian_k = kabelian_k or 1
        self.values = None if values is None else np.asarray(values, dtype=np.int64)
        self.symmetric = kind != "additive"
        label = f"{self.kabelian_k}-abelian" if kind == "k-abelian" else kind
        self.name = f"{label} {n}-power-free (period >= {min_period})"

    def _block_vectors(self, letters: Sequence[int]) -> Tuple[np.ndarray, List[np.ndarray]]:
        size = max(letters) + 1
        if self.values is not None:
            size = max(size, len(self.values))
        table = _prefix_counts(letters, size)
        length = len(letters)
        ms = np.arange(self.min_period, length // self.n + 1)
        blocks = [
            table[length - (self.n - j - 1) * ms] - table[length - (self.n - j) * ms]
            for j in range(self.n)
        ]
        return ms, blocks

    def extends(self, letters: Sequence[int]) -> bool:
        if len(letters) < self.n * self.min_period:
            return True
        ms, blocks = self._block_vectors(letters)
        if self.kind == "additive":
            sums = [b @ self.values[:b.shape[1]] for b in blocks]
            hit = np.logical_and.reduce([s == sums[0] for s in sums[1:]])
            return not hit.any()
        hit = np.logical_and.reduce([(b == blocks[0]).all(axis=1) for b in blocks[1:]])
        if self.kind == "abelian" or self.kabelian_k == 1:
            return not hit.any()
        length = len(letters)
        for m in ms[hit]:
            m = int(m)
            parts = [letters[length - (self.n - j) * m:length - (self.n - j - 1) * m] for j in range(self.n)]
            first = _factor_counts(parts[0], self.kabelian_k)
            if all(_factor_counts(q, self.kabelian_k) == first for q in parts[1:]):
                return False
        return True


def avoid_long_powers_search(
    k_letters: int,
    kind: str,
    n: int,
    min_period: int,
    budget: SearchBudget,
    kabelian_k: Optional[int] = None,
    value_map: Optional[Dict[str, int]] = None,
) -> SearchOutcome:
    """Longest word over k_letters with no kind-n-power of block length >= min_period."""
    values = None
    if kind == "additive":
        values = letter_values(Alphabet.digits(k_letters), value_map)
    predicate = AbelianPowerPredicate(kind, n, min_period, kabelian_k, values)
    alphabet = Alphabet.digits(k_letters) if kind == "additive" else None
    return longest_free_word(predicate, k_letters, budget, alphabet=alphabet)


class AbelianFractionalPredicate(FreenessPredicate):
    """
    Avoids abelian s-powers: factors uv with |uv| >= s·|u|, 1 <= |v| <= |u|
    and Parikh(v) <= Parikh(u). Only the shortest admissible v is tested,
    since every prefix of a dominated v is dominated too.
    """

    def __init__(self, s: RationalLike):
        s = parse_rational(s)
        if not 1 < s <= 2:
            raise DomainError(f"abelian fractional exponent must lie in (1, 2], got {s}")
        self.s = s
        self.name = f"abelian {s}-power-free"
        self.symmetric = True

    def tail_length(self, m: int) -> int:
        return math.ceil((self.s - 1) * m)

    def extends(self, letters: Sequence[int]) -> bool:
        length = len(letters)
        table = _prefix_counts(letters, max(letters) + 1)
        for m in range(1, length):
            t = self.tail_length(m)
            if m + t > length:
                break
            tail = table[length] - table[length - t]
            head = table[length - t] - table[length - t - m]
            if (tail <= head).all():
                return False
        return True


def art_dart_probe(
    budget: SearchBudget,
    grid: Sequence[RationalLike],
    n: Optional[int] = None,
    r: Optional[RationalLike] = None,
) -> Dict:
    """
    ART(n): search each exponent s of the grid over n letters.
    DART(r): search exponent r over each alphabet size of the grid.
    Reports the bracket implied by sustained (found) vs exhausted searches.
    """
    if not grid:
        raise DomainError("the exponent / alphabet grid is empty")
    if (n is None) == (r is None):
        raise DomainError("give exactly one of n (ART) or r (DART)")
    rows = []
    if n is not None:
        for s in sorted(parse_rational(x) for x in grid):
            outcome = longest_free_word(AbelianFractionalPredicate(s), n, budget)
            rows.append({"s": s, "verdict": outcome.verdict, "length": outcome.length,
                         "word": outcome.certificate.get("word")})
        sustained = [row["s"] for row in rows if row["verdict"] == "found"]
        exhausted = [row["s"] for row in rows if row["verdict"] == "exhausted"]
        return {
            "probe": "ART",
            "n": n,
            "rows": rows,
            "upper_evidence": min(sustained) if sustained else None,
            "lower_evidence": max(exhausted) if exhausted else None,
            "budget": budget,
        }
    r = parse_rational(r)
    predicate = AbelianFractionalPredicate(r)
    for size in sorted(int(x) for x in grid):
        outcome = longest_free_word(predicate, size, budget)
        rows.append({"letters": size, "verdict": outcome.verdict, "length": outcome.length,
                     "word": outcome.certificate.get("word")})
    sustained = [row["letters"] for row in rows if row["verdict"] == "found"]
    exhausted = [row["letters"] for row in rows if row["verdict"] == "exhausted"]
    return {
        "probe": "DART",
        "r": r,
        "rows": rows,
        "upper_evidence": min(sustained) if sustained else None,
        "lower_evidence": max(exhausted) if exhausted else None,
        "budget": budget,
    }


# ── Strongly k-abelian census ────────────────────────────────────────────────

def strong_power_census(k_letters: int, n: int, length: int, kabelian_k: int = 1) -> Dict:
    """
    Over all words of the given length: k-abelian classes that contain a
    literal n-th power, strongly k-abelian n-th powers, and words with no
    strongly k-abelian n-th power factor.
    """
    _check_degree(n)
    if k_letters < 1 or length < 0 or kabelian_k < 1:
        raise DomainError("alphabet size and k must be positive, length non-negative")
    if k_letters ** length > MAX_EXHAUSTIVE_WORDS:
        raise BudgetError(f"{k_letters}^{length} words exceed the exhaustive limit")

    power_signatures: Dict[int, set] = {}
    for total in range(n, length + 1, n):
        power_signatures[total] = {
            _signature(x * n, kabelian_k) for x in product(range(k_letters), repeat=total // n)
        }

    def strong(letters: Tuple[int, ...]) -> bool:
        sigs = power_signatures.get(len(letters))
        return bool(sigs) and _signature(letters, kabelian_k) in sigs

    strong_cache: Dict[Tuple[int, ...], bool] = {}
    classes: Dict[Tuple, bool] = {}
    powers = avoiders = 0
    for letters in product(range(k_letters), repeat=length):
        sig = _signature(letters, kabelian_k)
        is_literal = length > 0 and length % n == 0 and letters == letters[:length // n] * n
        classes[sig] = classes.get(sig, False) or is_literal
        if length in power_signatures and sig in power_signatures[length]:
            powers += 1
        contains = False
        for total in power_signatures:
            for i in range(length - total + 1):
                factor = letters[i:i + total]
                if factor not in strong_cache:
                    strong_cache[factor] = strong(factor)
                if strong_cache[factor]:
                    contains = True
                    break
            if contains:
                break
        avoiders += not contains
    return {
        "alphabet": k_letters,
        "n": n,
        "k": kabelian_k,
        "length": length,
        "words": k_letters ** length,
        "classes": len(classes),
        "classes_with_power": sum(classes.values()),
        "strong_powers": powers,
        "avoiders": avoiders,
    }


# ── Long abelian cubes in morphic images ─────────────────────────────────────

def abelian_cube_profile(
    w: Word,
    min_period: int = 1,
    max_period: Optional[int] = None,
) -> Dict[int, int]:
    """Number of abelian-cube occurrences of each block length (only nonzero entries)."""
    letters = w.letters
    length = len(letters)
    table = _prefix_counts(letters, w.alphabet.size)
    top = length // 3 if max_period is None else min(max_period, length // 3)
    profile: Dict[int, int] = {}
    for m in range(max(1, min_period), top + 1):
        starts = np.arange(0, length - 3 * m + 1)
        a = table[starts + m] - table[starts]
        b = table[starts + 2 * m] - table[starts + m]
        c = table[starts + 3 * m] - table[starts + 2 * m]
        hits = int(((a == b).all(axis=1) & (b == c).all(axis=1)).sum())
        if hits:
            profile[m] = hits
    return profile


def makela_exploration(
    outer: Union[Morphism, str],
    horizon: int,
    min_period: int = 1,
    base: str = CLASSIC_MORPHISMS["makela"],
) -> Dict:
    """
    Apply outer to the length-horizon prefix of h^ω(0) with h the Mäkelä
    morphism and profile the abelian cubes of the image. Evidence only.
    """
    if horizon < 1:
        raise DomainError("horizon must be at least 1")
    h = parse_morphism(base)
    g = parse_morphism(outer) if isinstance(outer, str) else outer
    start = h.domain.index(CLASSIC_START_LETTERS["makela"])
    prefix = fixed_point_prefix(h, start, horizon)
    image = g.apply(coerce_word(prefix, g.domain))
    profile = abelian_cube_profile(image, min_period=min_period)
    longest = max(profile) if profile else None
    return {
        "outer": str(g),
        "horizon": horizon,
        "image_length": len(image),
        "min_period": min_period,
        "profile": profile,
        "longest_block": longest,
        "long_cube_free": not profile,
        "evidence": "finite prefix only",
    }


def morphism_candidates(
    domain: Alphabet,
    max_image_len: int,
    codomain_size: int = 2,
) -> Iterator[Morphism]:
    """Every non-erasing morphism domain -> {0..codomain_size-1} with images of length <= max_image_len."""
    if max_image_len < 1:
        raise DomainError("max_image_len must be at least 1")
    codomain = Alphabet.digits(codomain_size)
    images = [
        img
        for ln in range(1, max_image_len + 1)
        for img in product(range(codomain_size), repeat=ln)
    ]
    for choice in product(images, repeat=domain.size):
        yield Morphism(
            domain=domain,
            codomain=codomain,
            images=tuple(Word.of(codomain, img) for img in choice),
        )


def makela_scan(max_image_len: int, horizon: int, min_period: int, limit: Optional[int] = None) -> Dict:
    """Run makela_exploration over the exhaustive binary candidates; list the long-cube-free ones."""
    h = parse_morphism(CLASSIC_MORPHISMS["makela"])
    survivors: List[str] = []
    tried = 0
    for g in morphism_candidates(h.domain, max_image_len):
        if limit is not None and tried >= limit:
            break
        tried += 1
        report = makela_exploration(g, horizon, min_period)
        if report["long_cube_free"]:
            survivors.append(report["outer"])
    logger.info("makela_scan: %d candidates, %d survive to horizon %d", tried, len(survivors), horizon)
    return {
        "max_image_len": max_image_len,
        "horizon": horizon,
        "min_period": min_period,
        "candidates": tried,
        "survivors": survivors,
        "evidence": "finite prefix only",
    }

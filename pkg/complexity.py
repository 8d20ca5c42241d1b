"""
complexity.py
-------------
Wordlab — Combinatorics-on-Words Workbench — Complexity functions
-----------------------------------------------------------------
Factor, palindromic, recurrence and balance complexity of an infinite
word measured on a finite prefix, minimal letter density in power-free
languages (branch-and-bound), and Rauzy graphs.

Validity rule: a value for n is certified when n <= horizon / 2, or when
an optional doubling check (same value on a prefix twice as long)
passes. Uncertified entries are None in ComplexityProfile.values; the
raw number is kept in extras["raw"]. Quotients derived from limsup /
liminf objects are labeled "estimate".

Key functions:
    - factor_complexity, palindromic_complexity
    - recurrence_function, balance_function
    - min_letter_density, density_band
    - rauzy_graph -> RauzyGraph (networkx MultiDiGraph)

Project: Wordlab — Combinatorics-on-Words Workbench
"""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import networkx as nx
import numpy as np

from errors import DomainError, InfeasibleError
from known_facts import WINDOW_RULE_DIVISOR
from schemas import ComplexityProfile, SearchBudget
from search import BudgetTracker, FreenessPredicate
from word_core import Alphabet, PrefixOracle, Word, as_text

logger = logging.getLogger(__name__)


# ── Shared helpers ───────────────────────────────────────────────────────────

def _check_range(n_max: int, horizon: int) -> None:
    if n_max < 0:
        raise DomainError("n_max must be non-negative")
    if horizon < n_max:
        raise DomainError(f"horizon {horizon} is shorter than n_max {n_max}")


def _window_limit(horizon: int) -> int:
    return horizon // WINDOW_RULE_DIVISOR


def _certify(
    raw: Dict[int, object],
    horizon: int,
    doubled: Optional[Dict[int, object]] = None,
) -> Tuple[Dict[int, Optional[object]], int]:
    """Apply the validity rule; returns (certified values, valid_up_to)."""
    limit = _window_limit(horizon)
    values: Dict[int, Optional[object]] = {}
    valid_up_to = -1
    contiguous = True
    for n in sorted(raw):
        ok = n <= limit or (doubled is not None and doubled.get(n) == raw[n])
        values[n] = raw[n] if ok else None
        if ok and contiguous:
            valid_up_to = n
        else:
            contiguous = False
    return values, valid_up_to


def _factor_counts(text: str, n_max: int) -> Dict[int, int]:
    return {n: (1 if n == 0 else len(_factors_of(text, n))) for n in range(n_max + 1)}


def _factors_of(text: str, n: int) -> set:
    return {text[i:i + n] for i in range(len(text) - n + 1)}


# ── Factor complexity ────────────────────────────────────────────────────────

def factor_complexity(
    gen: PrefixOracle,
    n_max: int,
    horizon: int,
    doubling: bool = False,
) -> ComplexityProfile:
    """p(n) = number of distinct length-n factors of prefix(horizon)."""
    _check_range(n_max, horizon)
    text = as_text(gen.letters(horizon))
    raw = _factor_counts(text, n_max)
    doubled = _factor_counts(as_text(gen.letters(2 * horizon)), n_max) if doubling else None
    values, valid_up_to = _certify(raw, horizon, doubled)
    ratio = {n: Fraction(v, n) for n, v in values.items() if v is not None and n >= 1}
    logger.info("factor_complexity: %s up to n=%d (valid to %d)", gen.tag, n_max, valid_up_to)
    return ComplexityProfile(
        measure="factor",
        tag=gen.tag,
        horizon=horizon,
        values=values,
        valid_up_to=valid_up_to,
        extras={"raw": raw, "ratio": ratio, "doubling": doubling},
    )


def _palindrome_counts(text: str, n_max: int) -> Dict[int, int]:
    counts = {0: 1}
    for n in range(1, n_max + 1):
        counts[n] = sum(1 for f in _factors_of(text, n) if f == f[::-1])
    return counts


def palindromic_complexity(
    gen: PrefixOracle,
    n_max: int,
    horizon: int,
    doubling: bool = False,
) -> ComplexityProfile:
    """
    P(n) = number of distinct palindromic factors of length n, with the
    residual P(n) + P(n+1) - (p(n+1) - p(n) + 2) wherever both sides are
    certified. The residual is <= 0 for words closed under reversal and 0
    exactly on rich words.
    """
    _check_range(n_max, horizon)
    text = as_text(gen.letters(horizon))
    top = min(n_max + 1, horizon)
    raw = _palindrome_counts(text, top)
    factors = _factor_counts(text, top)
    doubled = None
    if doubling:
        long_text = as_text(gen.letters(2 * horizon))
        doubled = _palindrome_counts(long_text, top)
        doubled_factors = _factor_counts(long_text, top)
    else:
        doubled_factors = None
    pal_values, _ = _certify(raw, horizon, doubled)
    fac_values, _ = _certify(factors, horizon, doubled_factors)
    residual: Dict[int, Optional[int]] = {}
    for n in range(n_max + 1):
        parts = (pal_values.get(n), pal_values.get(n + 1), fac_values.get(n), fac_values.get(n + 1))
        if any(v is None for v in parts):
            residual[n] = None
        else:
            residual[n] = parts[0] + parts[1] - (parts[3] - parts[2] + 2)
    values = {n: pal_values[n] for n in range(n_max + 1)}
    valid_up_to = max((n for n, v in values.items() if v is not None), default=-1)
    return ComplexityProfile(
        measure="palindrome",
        tag=gen.tag,
        horizon=horizon,
        values=values,
        valid_up_to=valid_up_to,
        extras={"raw": {n: raw[n] for n in values}, "residual": residual, "factor": fac_values},
    )


# ── Recurrence ───────────────────────────────────────────────────────────────

def _recurrence_at(text: str, n: int) -> Tuple[int, bool]:
    """
    Least window length containing every length-n factor of text, and
    whether some factor's trailing gap exceeds it (non-recurrence evidence).
    """
    if n == 0:
        return 0, False
    first: Dict[str, int] = {}
    last: Dict[str, int] = {}
    gap: Dict[str, int] = {}
    for i in range(len(text) - n + 1):
        f = text[i:i + n]
        if f in last:
            gap[f] = max(gap.get(f, 0), i - last[f])
        else:
            first[f] = i
        last[f] = i
    value = 0
    for f, pos in first.items():
        value = max(value, pos + n, gap.get(f, 0) + n - 1)
    tail = max(len(text) - last[f] - 1 for f in last)
    return value, tail >= value


def recurrence_function(
    gen: PrefixOracle,
    n_max: int,
    horizon: int,
) -> ComplexityProfile:
    """
    R(n) = least L such that every length-L window of prefix(horizon)
    contains every length-n factor. Values are reported only when they
    agree with the half-length prefix and no factor disappears from the
    tail; the quotient max R(n)/n over valid n is an estimate.
    """
    _check_range(n_max, horizon)
    text = as_text(gen.letters(horizon))
    half = text[: horizon // 2]
    limit = _window_limit(horizon)
    values: Dict[int, Optional[int]] = {}
    raw: Dict[int, int] = {}
    non_recurrent: List[int] = []
    unstable: List[int] = []
    for n in range(n_max + 1):
        value, gap_flag = _recurrence_at(text, n)
        raw[n] = value
        if gap_flag:
            non_recurrent.append(n)
            values[n] = None
            continue
        stable = n == 0 or (n <= len(half) and _recurrence_at(half, n)[0] == value)
        if not stable:
            unstable.append(n)
        values[n] = value if stable and n <= limit else None
    valid = {n: v for n, v in values.items() if v is not None and n >= 1}
    quotient = max((Fraction(v, n) for n, v in valid.items()), default=None)
    if non_recurrent:
        logger.warning("recurrence_function: %s shows non-recurrence evidence at n=%s", gen.tag, non_recurrent)
    valid_up_to = -1
    for n in range(n_max + 1):
        if values[n] is None:
            break
        valid_up_to = n
    return ComplexityProfile(
        measure="recurrence",
        tag=gen.tag,
        horizon=horizon,
        values=values,
        valid_up_to=valid_up_to,
        extras={
            "raw": raw,
            "non_recurrent": non_recurrent,
            "unstable": unstable,
            "quotient_estimate": quotient,
        },
    )


# ── Balance ──────────────────────────────────────────────────────────────────

def balance_function(
    gen: PrefixOracle,
    n_max: int,
    horizon: int,
    doubling: bool = False,
) -> ComplexityProfile:
    """B(n) = max over letters a and length-n factors u, v of ||u|_a - |v|_a|."""
    _check_range(n_max, horizon)

    def measure(length: int) -> Dict[int, int]:
        letters = np.asarray(gen.letters(length), dtype=np.int64)
        size = gen.alphabet.size
        table = np.zeros((len(letters) + 1, size), dtype=np.int64)
        if len(letters):
            table[np.arange(1, len(letters) + 1), letters] = 1
            np.cumsum(table, axis=0, out=table)
        out = {0: 0}
        for n in range(1, n_max + 1):
            windows = table[n:] - table[:-n]
            out[n] = int((windows.max(axis=0) - windows.min(axis=0)).max())
        return out

    raw = measure(horizon)
    doubled = measure(2 * horizon) if doubling else None
    values, valid_up_to = _certify(raw, horizon, doubled)
    return ComplexityProfile(
        measure="balance",
        tag=gen.tag,
        horizon=horizon,
        values=values,
        valid_up_to=valid_up_to,
        extras={"raw": raw, "doubling": doubling},
    )


# ── Minimal letter density ───────────────────────────────────────────────────

def min_letter_density(
    predicate: FreenessPredicate,
    length: int,
    budget: SearchBudget,
    k: int = 2,
    minority: int = 1,
) -> Dict:
    """
    Fewest occurrences of the minority letter over all free words of the
    given length. Branch and bound: the other letters are tried first and
    branches whose count reaches the incumbent are cut.
    """
    if length < 0:
        raise DomainError("length must be non-negative")
    if not 0 <= minority < k:
        raise DomainError(f"minority letter {minority} outside a {k}-letter alphabet")
    alphabet = Alphabet.digits(k)
    order = [c for c in range(k) if c != minority] + [minority]
    tracker = BudgetTracker(budget)
    best_count: Optional[int] = None
    best_word: Optional[Tuple[int, ...]] = None
    w: List[int] = []
    count = 0
    nxt = [0]
    verdict = "exact"
    if length == 0:
        best_count, best_word, nxt = 0, (), []
    while nxt:
        i = nxt[-1]
        if i >= k:
            nxt.pop()
            if w:
                count -= w.pop() == minority
            continue
        nxt[-1] = i + 1
        c = order[i]
        add = c == minority
        if best_count is not None and count + add >= best_count:
            continue
        if not tracker.tick():
            verdict = "budget"
            break
        w.append(c)
        if not predicate.extends(w):
            w.pop()
            continue
        count += add
        if len(w) == length:
            best_count, best_word = count, tuple(w)
            count -= w.pop() == minority
            continue
        nxt.append(0)
    if best_word is None:
        if verdict == "budget":
            logger.warning("min_letter_density: budget hit before any word of length %d", length)
            return {"length": length, "count": None, "density": None, "witness": None,
                    "verdict": "budget", "statistics": tracker.statistics()}
        raise InfeasibleError(f"no {predicate} word of length {length} over {k} letters")
    return {
        "length": length,
        "minority": alphabet.glyph(minority),
        "count": best_count,
        "density": Fraction(best_count, length) if length else Fraction(0),
        "witness": Word.of(alphabet, best_word),
        "verdict": verdict,
        "statistics": tracker.statistics(),
    }


def density_band(n: int, count: int, length: int) -> Dict:
    """
    Where count/length sits against the lower value 1/n and the known part
    1/n + 1/n^3 + 1/n^4 of the upper bound (its C/n^5 term is unknown).
    Reported only.
    """
    if n < 2 or length < 1:
        raise DomainError("need n >= 2 and a positive length")
    density = Fraction(count, length)
    lower = Fraction(1, n)
    upper_known = Fraction(1, n) + Fraction(1, n ** 3) + Fraction(1, n ** 4)
    return {
        "n": n,
        "density": density,
        "lower": lower,
        "upper_without_c": upper_known,
        "above_lower": density >= lower,
        "excess_over_upper": density - upper_known,
        "implied_c_lower_bound": (density - upper_known) * n ** 5,
    }


# ── Rauzy graphs ─────────────────────────────────────────────────────────────

class RauzyGraph:
    """Order-n Rauzy graph: factors of length n, edges labeled by length-(n+1) factors."""

    def __init__(self, order: int, alphabet: Alphabet, graph: nx.MultiDiGraph):
        self.order = order
        self.alphabet = alphabet
        self.graph = graph

    @property
    def vertices(self) -> List[str]:
        return sorted(self.graph.nodes, key=lambda v: (len(v), v))

    @property
    def edges(self) -> List[Tuple[str, str, str]]:
        return sorted(
            ((u, v, data["label"]) for u, v, data in self.graph.edges(data=True)),
            key=lambda e: e[2],
        )

    def edge_list(self) -> str:
        """One 'u -> v [label]' line per edge; the empty factor prints as ε."""
        show = lambda s: s or "ε"
        return "\n".join(f"{show(u)} -> {show(v)} [{lbl}]" for u, v, lbl in self.edges)

    def __len__(self) -> int:
        return self.graph.number_of_edges()


def rauzy_graph(gen: PrefixOracle, n: int, horizon: int) -> RauzyGraph:
    if n < 0:
        raise DomainError("order must be non-negative")
    if horizon < 2 * (n + 1):
        raise DomainError(f"horizon {horizon} must be at least 2(n+1) = {2 * (n + 1)}")
    letters = gen.letters(horizon)
    alphabet = gen.alphabet
    text = as_text(letters)
    graph = nx.MultiDiGraph(order=n, tag=gen.tag)

    def render(f: str) -> str:
        return alphabet.render([ord(ch) for ch in f])

    for f in _factors_of(text, n):
        graph.add_node(render(f))
    for f in sorted(_factors_of(text, n + 1)):
        graph.add_edge(render(f[:-1]), render(f[1:]), label=render(f))
    return RauzyGraph(n, alphabet, graph)

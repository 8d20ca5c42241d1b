"""
search.py
---------
Wordlab — Combinatorics-on-Words Workbench — Budgeted backtracking engine
------------------------------------------------------------------------
Depth-first exploration of the prefix tree of a factorial language
("words avoiding something"). A FreenessPredicate only has to answer one
question: given that letters[:-1] is free, is letters still free? That
suffix-only check is what keeps the searches fast.

Every search runs under a SearchBudget and returns a SearchOutcome with
one of three verdicts (found / exhausted / budget). Children are tried in
letter order 0..k-1, so results are deterministic; with symmetry
reduction on, a letter may only be used once every smaller letter has
already appeared, which leaves verdicts unchanged for predicates that
are invariant under renaming letters.

Key functions:
    - longest_free_word: longest word in the tree within the budget
    - count_free_words: words per length (optionally split over threads)
    - iter_free_words: every free word of an exact length, in lex order
    - explore_subtree: node / leaf / frontier statistics below a root

Project: Wordlab — Combinatorics-on-Words Workbench
"""

from __future__ import annotations

import logging
import time
from abc import ABC, abstractmethod
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from tqdm import tqdm

from errors import DomainError
from known_facts import BUDGET_CLOCK_STRIDE
from schemas import SearchBudget, SearchOutcome
from word_core import Alphabet, Word

logger = logging.getLogger(__name__)


# ── Predicates ───────────────────────────────────────────────────────────────

class FreenessPredicate(ABC):
    """A factorial property of words, tested one appended letter at a time."""

    name: str = "predicate"
    symmetric: bool = True

    @abstractmethod
    def extends(self, letters: Sequence[int]) -> bool:
        """Assuming letters[:-1] is free, report whether letters is free."""

    def holds(self, letters: Sequence[int]) -> bool:
        letters = list(letters)
        for i in range(1, len(letters) + 1):
            if not self.extends(letters[:i]):
                return False
        return True

    def __str__(self) -> str:
        return self.name


class BudgetTracker:
    """Counts nodes and samples the clock every BUDGET_CLOCK_STRIDE nodes."""

    def __init__(self, budget: SearchBudget):
        self.budget = budget
        self.nodes = 0
        self.started = time.monotonic()
        self.reason: Optional[str] = None

    def tick(self) -> bool:
        if self.nodes >= self.budget.max_nodes:
            self.reason = "max_nodes"
            return False
        self.nodes += 1
        if self.nodes % BUDGET_CLOCK_STRIDE == 0 and self.elapsed() > self.budget.max_seconds:
            self.reason = "max_seconds"
            return False
        return True

    def elapsed(self) -> float:
        return time.monotonic() - self.started

    def statistics(self, **extra) -> Dict:
        stats = {"nodes": self.nodes, "elapsed_seconds": round(self.elapsed(), 6)}
        if self.reason:
            stats["budget_hit"] = self.reason
        stats.update(extra)
        return stats


# ── Longest word ─────────────────────────────────────────────────────────────

def longest_free_word(
    predicate: FreenessPredicate,
    k: int,
    budget: SearchBudget,
    symmetry: Optional[bool] = None,
    root: Sequence[int] = (),
    alphabet: Optional[Alphabet] = None,
) -> SearchOutcome:
    """
    Depth-first search for the longest predicate-free word over k letters.

    found: a word of budget.max_length letters was reached.
    exhausted: every branch died; the reported word is a longest one and
        no free word is longer (first in lexicographic order among longest).
    budget: nodes or time ran out; the longest word seen is reported.
    """
    if k < 1:
        raise DomainError("alphabet size must be at least 1")
    alphabet = alphabet or Alphabet.default(k)
    use_symmetry = predicate.symmetric if symmetry is None else (symmetry and predicate.symmetric)
    w: List[int] = list(root)
    if not predicate.holds(w):
        raise DomainError(f"root {alphabet.render(w)} violates {predicate}")
    tracker = BudgetTracker(budget)
    base = len(w)
    best: Tuple[int, ...] = tuple(w)
    max_depth = base
    logger.info("longest_free_word: %s over %d letters, max_length=%d", predicate, k, budget.max_length)

    if base >= budget.max_length:
        verdict = "found"
    elif budget.max_nodes == 0:
        tracker.reason = "max_nodes"
        verdict = "budget"
    else:
        verdict = "exhausted"
        maxes = [max(w) if w else -1]
        nxt = [0]
        while True:
            c = nxt[-1]
            limit = min(k - 1, maxes[-1] + 1) if use_symmetry else k - 1
            if c > limit:
                nxt.pop()
                if len(w) == base:
                    break
                w.pop()
                maxes.pop()
                continue
            nxt[-1] = c + 1
            if not tracker.tick():
                verdict = "budget"
                break
            w.append(c)
            if not predicate.extends(w):
                w.pop()
                continue
            maxes.append(max(maxes[-1], c))
            if len(w) > len(best):
                best = tuple(w)
                max_depth = len(w)
            if len(w) >= budget.max_length:
                verdict = "found"
                break
            nxt.append(0)

    if verdict == "budget":
        logger.warning("longest_free_word: budget hit (%s) at best length %d", tracker.reason, len(best))
    return SearchOutcome(
        verdict=verdict,
        word=Word.of(alphabet, best),
        certificate={"word": alphabet.render(best), "length": len(best), "predicate": str(predicate)},
        statistics=tracker.statistics(max_depth=max_depth, symmetry=use_symmetry),
    )


# ── Enumeration ──────────────────────────────────────────────────────────────

def iter_free_words(
    predicate: FreenessPredicate,
    k: int,
    length: int,
    root: Sequence[int] = (),
    symmetry: bool = False,
) -> Iterator[Tuple[int, ...]]:
    """Every free word of exactly `length` letters extending root, lexicographically."""
    w = list(root)
    if not predicate.holds(w):
        return
    if len(w) >= length:
        if len(w) == length:
            yield tuple(w)
        return
    base = len(w)
    maxes = [max(w) if w else -1]
    nxt = [0]
    while nxt:
        c = nxt[-1]
        limit = min(k - 1, maxes[-1] + 1) if symmetry else k - 1
        if c > limit:
            nxt.pop()
            if len(w) > base:
                w.pop()
                maxes.pop()
            continue
        nxt[-1] = c + 1
        w.append(c)
        if not predicate.extends(w):
            w.pop()
            continue
        if len(w) == length:
            yield tuple(w)
            w.pop()
            continue
        maxes.append(max(maxes[-1], c))
        nxt.append(0)


def _count_subtree(
    predicate: FreenessPredicate,
    k: int,
    root: Tuple[int, ...],
    n_max: int,
    max_nodes: Optional[int],
) -> Tuple[List[int], bool]:
    counts = [0] * (n_max + 1)
    w = list(root)
    counts[len(w)] += 1
    nodes = 1
    nxt = [0]
    base = len(w)
    if len(w) >= n_max:
        return counts, True
    while nxt:
        c = nxt[-1]
        if c >= k:
            nxt.pop()
            if len(w) > base:
                w.pop()
            continue
        nxt[-1] = c + 1
        w.append(c)
        if not predicate.extends(w):
            w.pop()
            continue
        nodes += 1
        if max_nodes is not None and nodes > max_nodes:
            return counts, False
        counts[len(w)] += 1
        if len(w) < n_max:
            nxt.append(0)
        else:
            w.pop()
    return counts, True


def count_free_words(
    predicate: FreenessPredicate,
    k: int,
    n_max: int,
    threads: int = 1,
    max_nodes: Optional[int] = None,
    progress: bool = False,
) -> Tuple[List[int], bool]:
    """
    Number of free words of each length 0..n_max (no symmetry reduction).

    The tree is split by first letter; subtrees are counted on a thread
    pool and merged in letter order, so the table does not depend on the
    worker count. Returns (counts, complete); complete is False when a
    subtree exceeded max_nodes.
    """
    if n_max < 0:
        return [], True
    counts = [0] * (n_max + 1)
    counts[0] = 1
    if n_max == 0:
        return counts, True
    roots = [(c,) for c in range(k) if predicate.extends([c])]
    per_root = None if max_nodes is None else max(1, max_nodes // max(1, len(roots)))

    def work(root: Tuple[int, ...]) -> Tuple[List[int], bool]:
        return _count_subtree(predicate, k, root, n_max, per_root)

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        results = list(tqdm(pool.map(work, roots), total=len(roots), disable=not progress,
                            desc=f"census {predicate}"))
    complete = True
    for sub, ok in results:
        complete = complete and ok
        for n in range(1, n_max + 1):
            counts[n] += sub[n]
    return counts, complete


def explore_subtree(
    predicate: FreenessPredicate,
    k: int,
    root: Sequence[int],
    depth: int,
) -> Dict:
    """
    Statistics of the subtree of free words below root, down to root+depth.

    leaves are nodes above the depth limit with no free child; frontier
    nodes sit exactly at the limit. An empty frontier certifies that the
    subtree is finite.
    """
    if not predicate.holds(root):
        raise DomainError("root violates the predicate")
    root = tuple(root)
    nodes = leaves = frontier = 0
    per_depth = [0] * (depth + 1)
    deepest = 0
    stack: List[Tuple[int, ...]] = [root]
    while stack:
        w = stack.pop()
        d = len(w) - len(root)
        nodes += 1
        per_depth[d] += 1
        deepest = max(deepest, d)
        if d == depth:
            frontier += 1
            continue
        children = []
        for c in range(k):
            child = w + (c,)
            if predicate.extends(child):
                children.append(child)
        if not children:
            leaves += 1
        stack.extend(reversed(children))
    return {
        "nodes": nodes,
        "leaves": leaves,
        "frontier": frontier,
        "finite": frontier == 0,
        "deepest": deepest,
        "per_depth": per_depth,
    }

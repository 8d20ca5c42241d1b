"""
factorizations.py
-----------------
Wordlab — Combinatorics-on-Words Workbench — Factorizations and equations
------------------------------------------------------------------------
F-factorizations over regular languages (enumeration, completeness,
uniqueness, synchronization), quasiperiodicity, X-factorizations and
combinatorial rank, codes, bounded word-equation systems, and bounded
Post Correspondence.

Conventions:
  - Factors of an F-factorization are nonempty; ε has exactly one (empty)
    factorization when the control language accepts the empty index word.
  - Two factorizations are disjoint when their interior cut sets are.
  - Circular inputs to disjoint_x_factorizations are finite windows of
    bi-infinite questions; their reports are labeled "window evidence".
  - Word-equation solutions are listed by length profile (total length,
    then lexicographic), then by lexicographic assignment.

Key functions:
    - FFactorizationSpec, f_factorizations, count_factorizations,
      factorization_length_range, check_completeness, check_uniqueness,
      check_synchronization
    - quasiperiods, is_quasiperiodic, morphism_quasiperiodicity_probe
    - disjoint_x_factorizations, combinatorial_rank, is_code
    - WordEquation, parse_system, solve_word_equation, solution_is_periodic,
      is_independent_system, subsystem_equivalent, pumped_system
    - PcpInstance, bounded_pcp, instance_properties

Project: Wordlab — Combinatorics-on-Words Workbench
"""

from __future__ import annotations

import json
import logging
import re
from collections import deque
from functools import lru_cache
from itertools import combinations, product
from typing import Any, Dict, Iterable, Iterator, List, Optional, Sequence, Set, Tuple, Union

import networkx as nx
from pydantic import BaseModel, ConfigDict, ValidationError, model_validator

from automata import DFA, first_rejected
from errors import ConfigError, DomainError, UnsupportedError
from repetitions import failure_function
from schemas import SearchBudget, SearchOutcome
from search import BudgetTracker
from word_core import (
    Alphabet,
    CircularWord,
    Morphism,
    Word,
    coerce_word,
    find_factor,
    fixed_point_prefix,
    parse_morphism,
)

logger = logging.getLogger(__name__)

# ── F-factorizations ─────────────────────────────────────────────────────────

class FFactorizationSpec(BaseModel):
    """
    F = (L, L_1, …, L_k): control language L over the index alphabet
    {1..k}, component languages L_i over Σ. Components are DFAs or, for
    bounded checks only, membership callables on rendered words.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    sigma: Alphabet
    control: DFA
    components: Tuple[Any, ...]

    @model_validator(mode="after")
    def indices_match(self) -> "FFactorizationSpec":
        k = len(self.components)
        if k < 1:
            raise ValueError("an F-factorization spec needs at least one component")
        expected = tuple(str(i) for i in range(1, k + 1))
        if tuple(sorted(self.control.alphabet, key=int)) != expected:
            raise ValueError(f"control alphabet must be {{{','.join(expected)}}}")
        for i, comp in enumerate(self.components, start=1):
            if isinstance(comp, DFA):
                glyphs = set(self.sigma.glyph(c) for c in range(self.sigma.size))
                if not set(comp.alphabet) <= glyphs:
                    raise ValueError(f"component {i} uses symbols outside Σ")
            elif not callable(comp):
                raise ValueError(f"component {i} is neither a DFA nor a membership callable")
        return self

    @property
    def regular(self) -> bool:
        return all(isinstance(c, DFA) for c in self.components)

    @classmethod
    def from_json(cls, data: Dict) -> "FFactorizationSpec":
        """
        {"sigma": [...], "control": <DFA json> | null, "components": [...]}

        A component is a DFA object or a list of words (a finite language).
        A null control accepts every index word.
        """
        try:
            sigma = [str(g) for g in data["sigma"]]
            raw = data["components"]
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"F-factorization spec is missing {exc.args[0]!r}")
        components = tuple(
            DFA.from_words([list(str(w)) for w in comp], sigma) if isinstance(comp, list)
            else DFA.from_json(comp)
            for comp in raw
        )
        index = [str(i) for i in range(1, len(components) + 1)]
        control = DFA.from_json(data["control"]) if data.get("control") else DFA.universal(index)
        try:
            return cls(sigma=Alphabet.from_glyphs(sigma), control=control, components=components)
        except ValidationError as exc:
            raise ConfigError(f"invalid F-factorization spec: {exc.errors()[0]['msg']}")

    @classmethod
    def load(cls, path: str) -> "FFactorizationSpec":
        with open(path, encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{path}: {exc.msg}", line=exc.lineno)
        return cls.from_json(data)

    def member_table(self, symbols: Sequence[str]) -> List[List[List[bool]]]:
        """table[i][s][e]: symbols[s:e] ∈ L_{i+1} (nonempty factors only)."""
        n = len(symbols)
        table = []
        for comp in self.components:
            rows = [[False] * (n + 1) for _ in range(n + 1)]
            for s in range(n):
                if isinstance(comp, DFA):
                    state = comp.initial
                    for e in range(s + 1, n + 1):
                        state = comp.step(state, symbols[e - 1])
                        if state is None:
                            break
                        rows[s][e] = state in comp.accepting
                else:
                    for e in range(s + 1, n + 1):
                        rows[s][e] = bool(comp("".join(symbols[s:e])))
            table.append(rows)
        return table


Factorization = Tuple[Tuple[str, ...], Tuple[int, ...]]


def _symbols(w: Word, spec: FFactorizationSpec) -> List[str]:
    w = coerce_word(w, spec.sigma)
    return [spec.sigma.glyph(c) for c in w.letters]


def f_factorizations(w: Word, spec: FFactorizationSpec, limit: Optional[int] = None) -> List[Factorization]:
    """
    All splittings w = w_1…w_n with w_j ∈ L_{i_j} and i_1…i_n ∈ L, as
    (factors, index word), ordered by successive cut position then index.
    """
    symbols = _symbols(w, spec)
    n = len(symbols)
    member = spec.member_table(symbols)
    control = spec.control
    out: List[Factorization] = []
    factors: List[str] = []
    indices: List[int] = []

    @lru_cache(maxsize=None)
    def viable(pos: int, q: str) -> bool:
        if pos == n:
            return q in control.accepting
        for i in range(len(spec.components)):
            q2 = control.step(q, str(i + 1))
            if q2 is None:
                continue
            for e in range(pos + 1, n + 1):
                if member[i][pos][e] and viable(e, q2):
                    return True
        return False

    def go(pos: int, q: str) -> None:
        if pos == n:
            if q in control.accepting:
                out.append((tuple(factors), tuple(indices)))
            return
        for e in range(pos + 1, n + 1):
            for i in range(len(spec.components)):
                q2 = control.step(q, str(i + 1))
                if q2 is None or not member[i][pos][e] or not viable(e, q2):
                    continue
                if limit is not None and len(out) >= limit:
                    return
                factors.append("".join(symbols[pos:e]))
                indices.append(i + 1)
                go(e, q2)
                factors.pop()
                indices.pop()

    go(0, control.initial)
    return out


def count_factorizations(w: Word, spec: FFactorizationSpec) -> int:
    symbols = _symbols(w, spec)
    n = len(symbols)
    member = spec.member_table(symbols)
    control = spec.control

    @lru_cache(maxsize=None)
    def ways(pos: int, q: str) -> int:
        if pos == n:
            return int(q in control.accepting)
        total = 0
        for i in range(len(spec.components)):
            q2 = control.step(q, str(i + 1))
            if q2 is None:
                continue
            for e in range(pos + 1, n + 1):
                if member[i][pos][e]:
                    total += ways(e, q2)
        return total

    return ways(0, control.initial)


def factorization_length_range(w: Word, spec: FFactorizationSpec) -> Optional[Tuple[int, int]]:
    """(fewest, most) factors over all F-factorizations of w, or None."""
    found = f_factorizations(w, spec)
    if not found:
        return None
    sizes = [len(f) for f, _ in found]
    return min(sizes), max(sizes)


def _words_up_to(sigma: Alphabet, bound: int) -> Iterator[Word]:
    """Σ^{<=bound} in length-lex order."""
    for length in range(bound + 1):
        for letters in product(range(sigma.size), repeat=length):
            yield Word.of(sigma, letters)


def check_completeness(spec: FFactorizationSpec, mode: str = "bounded", bound: int = 8) -> Dict:
    """
    bounded: every word of Σ^{<=bound} has a factorization.
    exact: universality of the substituted automaton (regular specs only).
    The counterexample is the first word without factorization in length-lex order.
    """
    if mode == "exact":
        if not spec.regular:
            raise UnsupportedError("exact completeness needs every component to be a DFA")
        sigma = [spec.sigma.glyph(c) for c in range(spec.sigma.size)]
        rejected, explored = first_rejected(spec.control, list(spec.components), sigma)
        return {
            "mode": "exact",
            "complete": rejected is None,
            "counterexample": None if rejected is None else "".join(rejected),
            "subsets": explored,
        }
    if mode != "bounded":
        raise DomainError(f"unknown completeness mode {mode!r}")
    for w in _words_up_to(spec.sigma, bound):
        if count_factorizations(w, spec) == 0:
            return {"mode": "bounded", "bound": bound, "complete": False, "counterexample": str(w)}
    return {"mode": "bounded", "bound": bound, "complete": True, "counterexample": None}


def check_uniqueness(spec: FFactorizationSpec, bound: int = 8) -> Dict:
    for w in _words_up_to(spec.sigma, bound):
        if count_factorizations(w, spec) >= 2:
            return {
                "bound": bound,
                "unique": False,
                "counterexample": str(w),
                "factorizations": [list(f) for f, _ in f_factorizations(w, spec, limit=2)],
            }
    return {"bound": bound, "unique": True, "counterexample": None}


def _interior_cuts(factors: Sequence[str]) -> Set[int]:
    cuts, pos = set(), 0
    for f in factors[:-1]:
        pos += len(f)
        cuts.add(pos)
    return cuts


def _synchronizes(spec: FFactorizationSpec, window: int, bound: int) -> Optional[Dict]:
    """First violation: two factorizations of one word with no common cut in some window."""
    for w in _words_up_to(spec.sigma, bound):
        n = len(w)
        if n - 1 < window:
            continue
        found = f_factorizations(w, spec)
        if len(found) < 2:
            continue
        cut_sets = [_interior_cuts(f) for f, _ in found]
        for a, b in combinations(range(len(found)), 2):
            common = cut_sets[a] & cut_sets[b]
            for start in range(1, n - window + 1):
                if not any(start <= c < start + window for c in common):
                    return {
                        "word": str(w),
                        "window_start": start,
                        "first": list(found[a][0]),
                        "second": list(found[b][0]),
                    }
    return None


def check_synchronization(
    spec: FFactorizationSpec,
    bound: int = 8,
    window: Optional[int] = None,
) -> Dict:
    """
    With window m: any two factorizations of a word of length <= bound
    share a cut in every m consecutive interior positions. Without a
    window, the least m in 1..bound-1 that holds is searched.
    """
    if window is not None:
        if window < 1:
            raise DomainError("window must be at least 1")
        witness = _synchronizes(spec, window, bound)
        return {"bound": bound, "window": window, "synchronizing": witness is None, "witness": witness}
    last_witness = None
    for m in range(1, max(bound, 2)):
        witness = _synchronizes(spec, m, bound)
        if witness is None:
            return {"bound": bound, "window": m, "synchronizing": True, "witness": None, "searched": True}
        last_witness = witness
    return {"bound": bound, "window": None, "synchronizing": False, "witness": last_witness, "searched": True}


# ── Quasiperiodicity ─────────────────────────────────────────────────────────

def _occurrences(letters: Sequence[int], needle: Sequence[int]) -> List[int]:
    out, pos = [], find_factor(letters, needle)
    while pos >= 0:
        out.append(pos)
        pos = find_factor(letters, needle, pos + 1)
    return out


def _covers(letters: Sequence[int], q_len: int, allow_tail: bool = False) -> bool:
    q = letters[:q_len]
    occ = _occurrences(letters, q)
    if not occ or occ[0] != 0:
        return False
    if any(b - a > q_len for a, b in zip(occ, occ[1:])):
        return False
    reach = occ[-1] + q_len
    return reach == len(letters) or (allow_tail and len(letters) - reach < q_len)


def quasiperiods(w: Word) -> Set[Word]:
    """Proper factors x whose occurrences cover every position of w (they are borders)."""
    letters = w.letters
    n = len(letters)
    if n < 2:
        return set()
    fail = failure_function(letters)
    borders = []
    b = fail[-1]
    while b > 0:
        borders.append(b)
        b = fail[b - 1]
    return {Word.of(w.alphabet, letters[:b]) for b in borders if _covers(letters, b)}


def is_quasiperiodic(w: Word) -> bool:
    return bool(quasiperiods(w))


def morphism_quasiperiodicity_probe(
    f: Morphism,
    sample: Optional[Iterable[Word]] = None,
    max_len: int = 6,
    horizon: int = 0,
) -> Dict:
    """
    Images of non-quasiperiodic sample words (all words over the domain up
    to max_len when no sample is given): all quasiperiodic is evidence of
    a strongly quasiperiodic morphism, some is evidence of a weakly one.
    For prolongable letters the fixed-point prefix of length horizon is
    checked for a covering prefix.
    """
    if sample is None:
        sample = (w for w in _words_up_to(f.domain, max_len) if len(w) > 0)
    words = [coerce_word(w, f.domain) for w in sample]
    words = [w for w in words if not is_quasiperiodic(w)]
    hits = [str(w) for w in words if is_quasiperiodic(f.apply(w))]
    report = {
        "morphism": str(f),
        "sample_size": len(words),
        "quasiperiodic_images": len(hits),
        "examples": hits[:20],
        "strong_evidence": bool(words) and len(hits) == len(words),
        "weak_evidence": bool(hits),
        "vacuous": not words,
        "fixed_points": {},
    }
    if horizon > 0:
        for a in range(f.domain.size):
            if not f.is_prolongable(a):
                continue
            letters = fixed_point_prefix(f, a, horizon).letters
            cover = next((q for q in range(1, horizon // 2 + 1) if _covers(letters, q, allow_tail=True)), None)
            report["fixed_points"][f.domain.glyph(a)] = {
                "horizon": horizon,
                "covering_prefix": None if cover is None else f.domain.render(letters[:cover]),
            }
    return report


# ── X-factorizations, rank, codes ────────────────────────────────────────────

def _check_code_set(X: Iterable[Union[str, Word]]) -> List[str]:
    words = sorted({str(x) for x in X}, key=lambda s: (len(s), s))
    if not words:
        raise DomainError("X must be nonempty")
    if any(len(x) == 0 for x in words):
        raise DomainError("X must not contain the empty word")
    return words


def _x_cut_sets(text: str, X: Sequence[str], limit: int) -> Tuple[List[Tuple[str, ...]], bool]:
    out: List[Tuple[str, ...]] = []
    parts: List[str] = []

    def go(pos: int) -> bool:
        if pos == len(text):
            if len(out) >= limit:
                return False
            out.append(tuple(parts))
            return True
        for x in X:
            if text.startswith(x, pos):
                parts.append(x)
                ok = go(pos + len(x))
                parts.pop()
                if not ok:
                    return False
        return True

    complete = go(0)
    return out, complete


def disjoint_x_factorizations(
    w: Union[Word, CircularWord],
    X: Iterable[Union[str, Word]],
    max_factorizations: int = 2000,
) -> Dict:
    """Maximum number of pairwise disjoint X-factorizations (maximum clique)."""
    words = _check_code_set(X)
    circular = isinstance(w, CircularWord)
    base = w.underlying if circular else w
    if not base.alphabet.compact:
        raise DomainError("X-factorizations need single-character glyphs")
    text = str(base)
    n = len(text)
    cut_sets: Dict[frozenset, List[str]] = {}
    complete = True
    if circular:
        for s in range(n):
            rotation = text[s:] + text[:s]
            found, ok = _x_cut_sets(rotation, words, max_factorizations)
            complete = complete and ok
            for parts in found:
                cuts = {s}
                pos = s
                for part in parts[:-1]:
                    pos += len(part)
                    cuts.add(pos % n)
                if min(cuts) == s:
                    cut_sets.setdefault(frozenset(cuts), list(parts))
    else:
        found, complete = _x_cut_sets(text, words, max_factorizations)
        for parts in found:
            cut_sets.setdefault(frozenset(_interior_cuts(parts)), list(parts))
    nodes = list(cut_sets)
    graph = nx.Graph()
    graph.add_nodes_from(range(len(nodes)))
    for a, b in combinations(range(len(nodes)), 2):
        if not nodes[a] & nodes[b]:
            graph.add_edge(a, b)
    if nodes:
        clique, size = nx.max_weight_clique(graph, weight=None)
    else:
        clique, size = [], 0
    report = {
        "word": str(w),
        "X": words,
        "factorizations": len(nodes),
        "maximum": size,
        "witness": [cut_sets[nodes[i]] for i in sorted(clique)],
        "verdict": "exact" if complete else "budget",
    }
    if circular:
        report["evidence"] = "window evidence"
    return report


def _factorizes(text: str, basis: Sequence[str]) -> bool:
    reach = [False] * (len(text) + 1)
    reach[0] = True
    for i in range(len(text)):
        if reach[i]:
            for y in basis:
                if text.startswith(y, i):
                    reach[i + len(y)] = True
    return reach[-1]


def combinatorial_rank(X: Iterable[Union[str, Word]], bound: Optional[int] = None,
                       max_checks: int = 1_000_000) -> Dict:
    """
    Smallest |Y| with X ⊆ Y*, searching Y among factors of X of length
    <= bound. A budget stop returns the bracket [lower, upper].
    """
    words = _check_code_set(X)
    longest = max(len(x) for x in words)
    bound = longest if bound is None else bound
    candidates = sorted(
        {x[i:j] for x in words for i in range(len(x)) for j in range(i + 1, min(len(x), i + bound) + 1)},
        key=lambda s: (len(s), s),
    )
    checks = 0
    upper, basis = len(words), list(words)
    for r in range(1, len(words)):
        for combo in combinations(candidates, r):
            checks += 1
            if checks > max_checks:
                return {"rank": None, "lower": r, "upper": upper, "basis": basis, "verdict": "budget"}
            if all(_factorizes(x, combo) for x in words):
                return {"rank": r, "lower": r, "upper": r, "basis": list(combo), "verdict": "exact"}
    return {"rank": upper, "lower": upper, "upper": upper, "basis": basis, "verdict": "exact"}


def is_code(X: Iterable[Union[str, Word]]) -> bool:
    """Sardinas–Patterson test: True iff every word of X* factors uniquely over X."""
    items = [str(x) for x in X]
    if len(set(items)) != len(items):
        return False
    words = _check_code_set(items)

    def quotients(left: Iterable[str], right: Iterable[str]) -> Set[str]:
        return {r[len(l):] for l in left for r in right if r.startswith(l)}

    current = {v[len(u):] for u in words for v in words if u != v and v.startswith(u)}
    seen: Set[frozenset] = set()
    while current:
        if "" in current:
            return False
        key = frozenset(current)
        if key in seen:
            return True
        seen.add(key)
        current = quotients(words, current) | quotients(current, words)
    return True


# ── Word equations ───────────────────────────────────────────────────────────

DEFAULT_VARIABLES = "xyzuvwts"


class WordEquation(BaseModel):
    """left = right over single-character variables and constants."""

    model_config = ConfigDict(frozen=True)

    left: Tuple[str, ...]
    right: Tuple[str, ...]
    variables: Tuple[str, ...]

    @model_validator(mode="after")
    def has_variable(self) -> "WordEquation":
        if not self.variables:
            raise ValueError("an equation needs at least one variable")
        return self

    @classmethod
    def parse(cls, text: str, variables: Optional[str] = None) -> "WordEquation":
        if text.count("=") != 1:
            raise DomainError(f"equation {text!r} needs exactly one '='")
        left_text, right_text = text.split("=")
        left = tuple(ch for ch in left_text if not ch.isspace())
        right = tuple(ch for ch in right_text if not ch.isspace())
        symbols = left + right
        if variables is not None:
            is_var = lambda ch: ch in variables
        elif any(ch.isupper() for ch in symbols):
            is_var = str.isupper
        else:
            is_var = lambda ch: ch in DEFAULT_VARIABLES
        order: List[str] = []
        for ch in symbols:
            if is_var(ch) and ch not in order:
                order.append(ch)
        return cls(left=left, right=right, variables=tuple(order))

    @property
    def constants(self) -> Tuple[str, ...]:
        seen: List[str] = []
        for ch in self.left + self.right:
            if ch not in self.variables and ch not in seen:
                seen.append(ch)
        return tuple(seen)

    def is_balanced(self) -> bool:
        return all(self.left.count(v) == self.right.count(v) for v in self.variables)

    def holds(self, assignment: Dict[str, str]) -> bool:
        side = lambda syms: "".join(assignment.get(s, s) if s in self.variables else s for s in syms)
        return side(self.left) == side(self.right)

    def __str__(self) -> str:
        return f"{' '.join(self.left)} = {' '.join(self.right)}"


def parse_system(text: str) -> List[WordEquation]:
    """Equations separated by ';' or newlines."""
    parts = [p.strip() for p in re.split(r"[;\n]", text) if p.strip() and not p.strip().startswith("#")]
    if not parts:
        raise DomainError("empty equation system")
    all_symbols = "".join(parts).replace("=", "")
    variables = None if any(ch.isupper() for ch in all_symbols) else DEFAULT_VARIABLES
    return [WordEquation.parse(p, variables) for p in parts]


def pumped_system(template: str, count: int, start: int = 1) -> List[WordEquation]:
    """
    Equations template.format(i=i) for i = start..start+count-1, where
    'y^3' style powers of a single symbol are expanded ("x y^{i} z = z y^{i} x").
    """
    out = []
    for i in range(start, start + count):
        text = template.replace("{i}", str(i))
        text = re.sub(r"(\S)\^(\d+)", lambda m: m.group(1) * int(m.group(2)), text)
        out.append(WordEquation.parse(text, DEFAULT_VARIABLES if not any(c.isupper() for c in text) else None))
    return out


def _primitive_root(text: str) -> str:
    n = len(text)
    fail = failure_function([ord(c) for c in text])
    p = n - fail[-1]
    return text[:p] if n % p == 0 else text


def solution_is_periodic(assignment: Dict[str, str]) -> bool:
    """All nonempty values are powers of one word."""
    roots = {_primitive_root(v) for v in assignment.values() if v}
    return len(roots) <= 1


def _system_variables(system: Sequence[WordEquation]) -> List[str]:
    order: List[str] = []
    for eq in system:
        for v in eq.variables:
            if v not in order:
                order.append(v)
    return order


def solve_word_equation(
    system: Sequence[WordEquation],
    max_len: int,
    alphabet: Optional[Sequence[str]] = None,
    allow_empty: bool = True,
    max_solutions: int = 100_000,
    variables: Optional[Sequence[str]] = None,
) -> Dict:
    """
    Every assignment with values of length <= max_len satisfying all
    equations. Each length profile is resolved by unifying positions
    (union-find); constant-free classes range over the alphabet.
    Extra names in variables are solved for too (they range freely).
    """
    if max_len < 1:
        raise DomainError("max_len must be at least 1")
    if not system:
        raise DomainError("empty equation system")
    names = _system_variables(system)
    variables = names + [v for v in (variables or ()) if v not in names]
    constants = sorted({c for eq in system for c in eq.constants})
    letters = list(alphabet) if alphabet is not None else sorted(set(constants) | {"a", "b"})
    lows = 0 if allow_empty else 1
    profiles = sorted(
        product(range(lows, max_len + 1), repeat=len(variables)),
        key=lambda prof: (sum(prof), prof),
    )
    solutions: List[Dict] = []
    verdict = "exhausted"
    for prof in profiles:
        lengths = dict(zip(variables, prof))
        offsets, total = {}, 0
        for v in variables:
            offsets[v] = total
            total += lengths[v]
        parent = list(range(total))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        fixed: Dict[int, str] = {}
        ok = True

        def cells(side: Sequence[str], eq: WordEquation) -> List[Union[int, str]]:
            out: List[Union[int, str]] = []
            for s in side:
                if s in eq.variables:
                    out.extend(range(offsets[s], offsets[s] + lengths[s]))
                else:
                    out.append(s)
            return out

        for eq in system:
            left, right = cells(eq.left, eq), cells(eq.right, eq)
            if len(left) != len(right):
                ok = False
                break
            for a, b in zip(left, right):
                if isinstance(a, str) and isinstance(b, str):
                    if a != b:
                        ok = False
                        break
                    continue
                if isinstance(a, str):
                    a, b = b, a
                if isinstance(b, str):
                    root = find(a)
                    if fixed.setdefault(root, b) != b:
                        ok = False
                        break
                    continue
                ra, rb = find(a), find(b)
                if ra != rb:
                    ca, cb = fixed.get(ra), fixed.get(rb)
                    if ca is not None and cb is not None and ca != cb:
                        ok = False
                        break
                    parent[rb] = ra
                    if ca is None and cb is not None:
                        fixed[ra] = cb
            if not ok:
                break
        if not ok:
            continue
        classes: List[int] = []
        for cell in range(total):
            root = find(cell)
            if root not in classes:
                classes.append(root)
        free = [r for r in classes if r not in fixed]
        for choice in product(letters, repeat=len(free)):
            value = dict(fixed)
            value.update(zip(free, choice))
            assignment = {
                v: "".join(value[find(c)] for c in range(offsets[v], offsets[v] + lengths[v]))
                for v in variables
            }
            solutions.append({"assignment": assignment, "periodic": solution_is_periodic(assignment)})
            if len(solutions) >= max_solutions:
                verdict = "budget"
                break
        if verdict == "budget":
            logger.warning("solve_word_equation: stopped at %d solutions", max_solutions)
            break
    return {
        "system": [str(eq) for eq in system],
        "variables": variables,
        "alphabet": letters,
        "max_len": max_len,
        "solutions": solutions,
        "count": len(solutions),
        "non_periodic": sum(1 for s in solutions if not s["periodic"]),
        "verdict": verdict,
    }


def subsystem_equivalent(
    system: Sequence[WordEquation],
    subset: Sequence[int],
    max_len: int,
    alphabet: Optional[Sequence[str]] = None,
) -> bool:
    """Bounded check that the subsystem at the given indices has the same solutions."""
    variables = _system_variables(system)
    letters = list(alphabet) if alphabet is not None else sorted(
        {c for eq in system for c in eq.constants} | {"a", "b"}
    )

    def keys(equations: Sequence[WordEquation]) -> Set[Tuple[str, ...]]:
        result = solve_word_equation(equations, max_len, letters, variables=variables)
        return {tuple(s["assignment"][v] for v in variables) for s in result["solutions"]}

    return keys([system[i] for i in subset]) == keys(system)


def is_independent_system(
    system: Sequence[WordEquation],
    max_len: int,
    alphabet: Optional[Sequence[str]] = None,
) -> Dict:
    """Independent (up to max_len) when dropping any one equation changes the solution set."""
    redundant = []
    for i in range(len(system)):
        rest = [j for j in range(len(system)) if j != i]
        if rest and subsystem_equivalent(system, rest, max_len, alphabet):
            redundant.append(i)
    return {
        "system": [str(eq) for eq in system],
        "max_len": max_len,
        "independent": not redundant,
        "redundant": redundant,
        "evidence": "bounded",
    }


# ── Post Correspondence ──────────────────────────────────────────────────────

class PcpInstance(BaseModel):
    model_config = ConfigDict(frozen=True)

    h: Morphism
    g: Morphism

    @model_validator(mode="after")
    def same_shape(self) -> "PcpInstance":
        if self.h.domain != self.g.domain:
            raise ValueError("h and g need a common domain")
        if self.h.codomain != self.g.codomain:
            raise ValueError("h and g need a common codomain")
        return self

    @classmethod
    def parse(cls, h: str, g: str) -> "PcpInstance":
        hm, gm = parse_morphism(h), parse_morphism(g)
        glyphs = sorted(
            {hm.codomain.glyph(c) for c in range(hm.codomain.size)}
            | {gm.codomain.glyph(c) for c in range(gm.codomain.size)}
        )
        domain_glyphs = sorted(
            {hm.domain.glyph(c) for c in range(hm.domain.size)}
            | {gm.domain.glyph(c) for c in range(gm.domain.size)}
        )
        domain = Alphabet.from_glyphs(domain_glyphs)
        codomain = Alphabet.from_glyphs(glyphs)
        return cls(h=parse_morphism(h, domain, codomain), g=parse_morphism(g, domain, codomain))

    @property
    def marked(self) -> bool:
        return self.h.is_marked() and self.g.is_marked()


def bounded_pcp(inst: PcpInstance, max_len: int, budget: Optional[SearchBudget] = None) -> SearchOutcome:
    """Shortest (then lexicographically least) x, 1 <= |x| <= max_len, with h(x) = g(x)."""
    if max_len < 1:
        raise DomainError("max_len must be at least 1")
    if not (inst.h.is_non_erasing() and inst.g.is_non_erasing()):
        raise DomainError("PCP instances need non-erasing morphisms")
    tracker = BudgetTracker(budget or SearchBudget())
    domain = inst.h.domain
    himg = [img.letters for img in inst.h.images]
    gimg = [img.letters for img in inst.g.images]
    # state: (ahead side, overhang); side 0 means h(x) is ahead of g(x)
    queue = deque([((), 0, ())])
    seen: Set[Tuple[int, Tuple[int, ...]]] = set()
    verdict = "exhausted"
    solution: Optional[Tuple[int, ...]] = None
    while queue:
        x, side, rest = queue.popleft()
        if len(x) >= max_len:
            continue
        for a in range(domain.size):
            if not tracker.tick():
                verdict = "budget"
                queue.clear()
                break
            top, bottom = (rest + himg[a], gimg[a]) if side == 0 else (himg[a], rest + gimg[a])
            common = min(len(top), len(bottom))
            if top[:common] != bottom[:common]:
                continue
            x2 = x + (a,)
            if len(top) == len(bottom):
                solution, verdict = x2, "found"
                queue.clear()
                break
            state = (0, top[common:]) if len(top) > len(bottom) else (1, bottom[common:])
            if state in seen:
                continue
            seen.add(state)
            queue.append((x2, state[0], state[1]))
    word = Word.of(domain, solution) if solution is not None else None
    certificate = {}
    if word is not None:
        certificate = {"word": str(word), "h": str(inst.h.apply(word)), "g": str(inst.g.apply(word))}
    return SearchOutcome(
        verdict=verdict,
        word=word,
        certificate=certificate,
        statistics=tracker.statistics(configurations=len(seen), max_len=max_len),
    )


def _comparable(u: Sequence[int], v: Sequence[int]) -> bool:
    common = min(len(u), len(v))
    return tuple(u[:common]) == tuple(v[:common])


def instance_properties(inst: PcpInstance, bound: int) -> Dict:
    """
    Marked flags, and whether h(ua) ⋈ g(ua) and h(ub) ⋈ g(ub) force
    h(u) = g(u) for every |u| <= bound and letters a != b.
    """
    domain = inst.h.domain
    witness = None
    for length in range(bound + 1):
        for u in product(range(domain.size), repeat=length):
            hu, gu = inst.h.apply_letters(u), inst.g.apply_letters(u)
            if hu == gu:
                continue
            comparable = [
                a for a in range(domain.size)
                if _comparable(inst.h.apply_letters(u + (a,)), inst.g.apply_letters(u + (a,)))
            ]
            if len(comparable) >= 2:
                witness = {
                    "u": domain.render(u),
                    "a": domain.glyph(comparable[0]),
                    "b": domain.glyph(comparable[1]),
                }
                break
        if witness:
            break
    return {
        "h_marked": inst.h.is_marked(),
        "g_marked": inst.g.is_marked(),
        "marked": inst.marked,
        "non_erasing": inst.h.is_non_erasing() and inst.g.is_non_erasing(),
        "bound": bound,
        "unique_equality_continuation": witness is None,
        "witness": witness,
    }

"""
automata.py
-----------
Wordlab — Combinatorics-on-Words Workbench — Finite automata
-----------------------------------------------------------
Deterministic finite automata for the regular languages of an
F-factorization spec, read from JSON of the form

    {"alphabet": [...], "states": [...], "initial": "q0",
     "accepting": [...], "transitions": {"q0": {"a": "q1", ...}, ...}}

plus the substitution construction used by exact completeness: the set
of words that split into component words whose index word lies in the
control language, explored as a subset automaton over Σ.

Key functions:
    - DFA (pydantic model): accepts, run, load / from_json, from_words,
      cycle, universal, empty
    - first_rejected: shortest (length-lex) word outside the substituted
      language, or None when it is universal

Project: Wordlab — Combinatorics-on-Words Workbench
"""

from __future__ import annotations

import json
import logging
from collections import deque
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, ValidationError, model_validator

from errors import ConfigError, DomainError

logger = logging.getLogger(__name__)

DEAD = "⊥"


class DFA(BaseModel):
    """Complete DFA; every state has exactly one move per alphabet symbol."""

    model_config = ConfigDict(frozen=True)

    alphabet: Tuple[str, ...]
    states: Tuple[str, ...]
    initial: str
    accepting: FrozenSet[str] = frozenset()
    transitions: Dict[str, Dict[str, str]]

    @model_validator(mode="after")
    def total_function(self) -> "DFA":
        known = set(self.states)
        if len(known) != len(self.states):
            raise ValueError("duplicate state names")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("duplicate alphabet symbols")
        if self.initial not in known:
            raise ValueError(f"initial state {self.initial!r} is not a state")
        if not self.accepting <= known:
            raise ValueError(f"accepting states {sorted(self.accepting - known)} are not states")
        for state in self.states:
            row = self.transitions.get(state)
            if row is None:
                raise ValueError(f"state {state!r} has no transitions")
            for sym in self.alphabet:
                if sym not in row:
                    raise ValueError(f"state {state!r} has no move on {sym!r}")
                if row[sym] not in known:
                    raise ValueError(f"move {state!r} --{sym}--> {row[sym]!r} leaves the state set")
        return self

    # ── Construction ─────────────────────────────────────────────────────────

    @classmethod
    def from_json(cls, data: Dict) -> "DFA":
        try:
            return cls(
                alphabet=tuple(str(s) for s in data["alphabet"]),
                states=tuple(str(s) for s in data["states"]),
                initial=str(data["initial"]),
                accepting=frozenset(str(s) for s in data.get("accepting", [])),
                transitions={
                    str(q): {str(s): str(t) for s, t in row.items()}
                    for q, row in data["transitions"].items()
                },
            )
        except KeyError as exc:
            raise ConfigError(f"automaton is missing field {exc.args[0]!r}")
        except ValidationError as exc:
            raise ConfigError(f"invalid automaton: {exc.errors()[0]['msg']}")

    @classmethod
    def load(cls, path: str) -> "DFA":
        with open(path, encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{path}: {exc.msg}", line=exc.lineno)
        return cls.from_json(data)

    @classmethod
    def from_words(cls, words: Iterable[Sequence[str]], alphabet: Sequence[str]) -> "DFA":
        """Trie automaton for a finite language (plus a dead state)."""
        alphabet = tuple(alphabet)
        trans: Dict[str, Dict[str, str]] = {"": {}}
        accepting = set()
        for word in words:
            node = ""
            for sym in word:
                if sym not in alphabet:
                    raise DomainError(f"symbol {sym!r} is not in the automaton alphabet")
                child = node + "·" + sym if node else sym
                trans.setdefault(node, {})[sym] = child
                trans.setdefault(child, {})
                node = child
            accepting.add(node)
        names = {node: f"q{i}" for i, node in enumerate(sorted(trans, key=lambda s: (len(s), s)))}
        table = {
            names[node]: {sym: names[row[sym]] if sym in row else DEAD for sym in alphabet}
            for node, row in trans.items()
        }
        table[DEAD] = {sym: DEAD for sym in alphabet}
        return cls(
            alphabet=alphabet,
            states=tuple(names[n] for n in sorted(trans, key=lambda s: (len(s), s))) + (DEAD,),
            initial=names[""],
            accepting=frozenset(names[n] for n in accepting),
            transitions=table,
        )

    @classmethod
    def cycle(cls, word: Sequence[str], alphabet: Sequence[str]) -> "DFA":
        """(word)* as a DFA."""
        alphabet = tuple(alphabet)
        word = tuple(word)
        if not word:
            return cls.from_words([()], alphabet)
        n = len(word)
        table = {
            f"c{i}": {sym: (f"c{(i + 1) % n}" if sym == word[i] else DEAD) for sym in alphabet}
            for i in range(n)
        }
        table[DEAD] = {sym: DEAD for sym in alphabet}
        return cls(
            alphabet=alphabet,
            states=tuple(table),
            initial="c0",
            accepting=frozenset({"c0"}),
            transitions=table,
        )

    @classmethod
    def universal(cls, alphabet: Sequence[str]) -> "DFA":
        alphabet = tuple(alphabet)
        return cls(alphabet=alphabet, states=("all",), initial="all",
                   accepting=frozenset({"all"}), transitions={"all": {s: "all" for s in alphabet}})

    @classmethod
    def empty(cls, alphabet: Sequence[str]) -> "DFA":
        alphabet = tuple(alphabet)
        return cls(alphabet=alphabet, states=(DEAD,), initial=DEAD,
                   transitions={DEAD: {s: DEAD for s in alphabet}})

    # ── Runs ─────────────────────────────────────────────────────────────────

    def step(self, state: str, sym: str) -> Optional[str]:
        """None for symbols outside the alphabet (the run rejects)."""
        return self.transitions[state].get(sym)

    def run(self, symbols: Sequence[str], state: Optional[str] = None) -> Optional[str]:
        state = self.initial if state is None else state
        for sym in symbols:
            state = self.step(state, sym)
            if state is None:
                return None
        return state

    def accepts(self, symbols: Sequence[str]) -> bool:
        state = self.run(symbols)
        return state is not None and state in self.accepting

    def to_json(self) -> Dict:
        return {
            "alphabet": list(self.alphabet),
            "states": list(self.states),
            "initial": self.initial,
            "accepting": sorted(self.accepting),
            "transitions": {q: dict(row) for q, row in self.transitions.items()},
        }


# ── Substitution into a control language ─────────────────────────────────────

# A configuration is either ("gap", q): between factors with control state q,
# or ("in", q, i, p): inside a factor of component i (control state q before
# reading i, component state p). Factors are nonempty.
Config = Tuple


def _after_letter(
    config: Config,
    sym: str,
    control: DFA,
    components: Sequence[DFA],
) -> List[Config]:
    out: List[Config] = []
    if config[0] == "gap":
        q = config[1]
        for i, comp in enumerate(components):
            if control.step(q, str(i + 1)) is None:
                continue
            p = comp.step(comp.initial, sym)
            if p is not None:
                out.append(("in", q, i, p))
    else:
        _, q, i, p = config
        p2 = components[i].step(p, sym)
        if p2 is not None:
            out.append(("in", q, i, p2))
    closed: List[Config] = []
    for cfg in out:
        closed.append(cfg)
        _, q, i, p = cfg
        if p in components[i].accepting:
            closed.append(("gap", control.step(q, str(i + 1))))
    return closed


def _accepting(subset: FrozenSet[Config], control: DFA) -> bool:
    return any(c[0] == "gap" and c[1] in control.accepting for c in subset)


def first_rejected(
    control: DFA,
    components: Sequence[DFA],
    sigma: Sequence[str],
    max_subsets: int = 1_000_000,
) -> Tuple[Optional[Tuple[str, ...]], int]:
    """
    Breadth-first over the subset automaton, letters in alphabet order.
    Returns (shortest length-lex word with no factorization or None, subsets explored).
    """
    start = frozenset({("gap", control.initial)})
    seen = {start: ()}
    queue = deque([start])
    if not _accepting(start, control):
        return (), 1
    while queue:
        subset = queue.popleft()
        word = seen[subset]
        for sym in sigma:
            nxt = frozenset(c for cfg in subset for c in _after_letter(cfg, sym, control, components))
            if nxt in seen:
                continue
            seen[nxt] = word + (sym,)
            if not _accepting(nxt, control):
                return seen[nxt], len(seen)
            if len(seen) > max_subsets:
                raise DomainError(f"subset construction exceeded {max_subsets} states")
            queue.append(nxt)
    logger.info("first_rejected: universal after %d subsets", len(seen))
    return None, len(seen)

"""
schemas.py
----------
Wordlab — Combinatorics-on-Words Workbench — Pydantic Data Contracts
-------------------------------------------------------------------
Pydantic v2 models shared by the search engines, the checkers and the
report layer. Word-level types (Alphabet, Word, CircularWord, Morphism)
live in word_core.py; pattern, automaton and equation types live next to
the operations that own them.

Validation policy
-----------------
Every model is frozen. Field validators enforce the structural
invariants of each type and raise ValueError, which pydantic surfaces as
ValidationError:

  1. Run — end − start + 1 >= 2·period, positions 1-indexed.
  2. SearchBudget — every bound positive; max_nodes = 0 is allowed and
     means "report budget immediately".
  3. SearchOutcome — verdict is one of found / exhausted / budget.
  4. ConductionSequence — bits are 0/1 only.
  5. ParikhVector — counts non-negative.
  6. AbelianPowerReport — block length × n equals the word length for
     every kind except strongly-k-abelian.

Public API
----------
    SearchBudget, SearchOutcome, Run, PeriodSet, EncounterWitness,
    ConductionSequence, ParikhVector, AbelianPowerReport,
    ComplexityProfile, ProbeDescriptor, CensusConfig
    jsonable()      Convert reports (Fractions, Words, sets, models) to
                    JSON-ready values with rationals as "p/q".

Project: Wordlab — Combinatorics-on-Words Workbench
"""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from known_facts import DEFAULT_MAX_LENGTH, DEFAULT_MAX_NODES, DEFAULT_MAX_SECONDS
from word_core import CircularWord, Morphism, Word, format_rational

logger = logging.getLogger(__name__)

Verdict = Literal["found", "exhausted", "budget"]


# ── Search contracts ─────────────────────────────────────────────────────────

class SearchBudget(BaseModel):
    """Explicit bounds for every search: length, nodes, wall-clock seconds."""

    model_config = ConfigDict(frozen=True)

    max_length: int = Field(default=DEFAULT_MAX_LENGTH, ge=0)
    max_nodes: int = Field(default=DEFAULT_MAX_NODES, ge=0)
    max_seconds: float = Field(default=DEFAULT_MAX_SECONDS, gt=0)

    def with_overrides(self, **overrides: Any) -> "SearchBudget":
        values = self.model_dump()
        values.update({k: v for k, v in overrides.items() if v is not None})
        return SearchBudget(**values)


class SearchOutcome(BaseModel):
    """
    Three-valued result of a bounded search.

    found: the certificate reaches the length bound (and verifies).
    exhausted: the whole space within bounds was enumerated.
    budget: node or time limit hit first; the best word so far is reported.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    verdict: Verdict
    word: Optional[Word] = None
    certificate: Dict[str, Any] = Field(default_factory=dict)
    statistics: Dict[str, Any] = Field(default_factory=dict)

    @property
    def length(self) -> int:
        return len(self.word) if self.word is not None else 0


# ── Repetitions ──────────────────────────────────────────────────────────────

class Run(BaseModel):
    """Maximal repetition of exponent >= 2; positions 1-indexed, inclusive."""

    model_config = ConfigDict(frozen=True)

    start: int = Field(ge=1)
    end: int = Field(ge=1)
    period: int = Field(ge=1)

    @model_validator(mode="after")
    def long_enough(self) -> "Run":
        if self.end - self.start + 1 < 2 * self.period:
            raise ValueError(
                f"run [{self.start}, {self.end}] is shorter than twice its period {self.period}"
            )
        return self

    @property
    def length(self) -> int:
        return self.end - self.start + 1

    @property
    def exponent(self) -> Fraction:
        return Fraction(self.length, self.period)


class PeriodSet(BaseModel):
    """Truncated Π(α) built from continued-fraction digits."""

    model_config = ConfigDict(frozen=True)

    digits: Tuple[int, ...]
    horizon: int = Field(ge=0)
    values: Tuple[int, ...] = ()
    denominators: Tuple[int, ...] = ()

    def __contains__(self, item: int) -> bool:
        return item in self.values


# ── Patterns ─────────────────────────────────────────────────────────────────

class EncounterWitness(BaseModel):
    """Variable assignment plus 1-indexed occurrence position in the host."""

    model_config = ConfigDict(frozen=True)

    assignment: Dict[str, Word]
    position: int = Field(ge=1)
    length: int = Field(ge=1)

    @field_validator("assignment")
    @classmethod
    def nonempty_images(cls, v: Dict[str, Word]) -> Dict[str, Word]:
        for name, img in v.items():
            if len(img) == 0:
                raise ValueError(f"variable {name} is mapped to the empty word")
        return v


class ConductionSequence(BaseModel):
    """Binary word β steering a shuffle."""

    model_config = ConfigDict(frozen=True)

    bits: Tuple[int, ...]

    @field_validator("bits")
    @classmethod
    def binary(cls, v: Tuple[int, ...]) -> Tuple[int, ...]:
        if any(b not in (0, 1) for b in v):
            raise ValueError("conduction sequences are binary")
        return v

    @classmethod
    def parse(cls, text: str) -> "ConductionSequence":
        text = text.strip()
        if any(ch not in "01" for ch in text):
            raise ValueError(f"conduction sequence {text!r} must use 0 and 1 only")
        return cls(bits=tuple(int(ch) for ch in text))

    @property
    def zeros(self) -> int:
        return self.bits.count(0)

    @property
    def ones(self) -> int:
        return self.bits.count(1)

    def __len__(self) -> int:
        return len(self.bits)

    def __str__(self) -> str:
        return "".join(map(str, self.bits))


# ── Abelian ──────────────────────────────────────────────────────────────────

class ParikhVector(BaseModel):
    """Per-letter occurrence counts."""

    model_config = ConfigDict(frozen=True)

    counts: Tuple[int, ...]

    @field_validator("counts")
    @classmethod
    def non_negative(cls, v: Tuple[int, ...]) -> Tuple[int, ...]:
        if any(c < 0 for c in v):
            raise ValueError("Parikh counts are non-negative")
        return v

    @property
    def total(self) -> int:
        return sum(self.counts)

    def __le__(self, other: "ParikhVector") -> bool:
        return all(a <= b for a, b in zip(self.counts, other.counts))


AbelianKind = Literal["abelian", "k-abelian", "additive", "strongly-k-abelian"]


class AbelianPowerReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    block_length: int = Field(ge=1)
    n: int = Field(ge=2)
    kind: AbelianKind
    k: Optional[int] = None
    word_length: int = Field(ge=0)
    blocks: Tuple[str, ...] = ()

    @model_validator(mode="after")
    def blocks_fill_word(self) -> "AbelianPowerReport":
        if self.kind != "strongly-k-abelian" and self.block_length * self.n != self.word_length:
            raise ValueError("block length × n must equal the word length")
        return self


# ── Complexity ───────────────────────────────────────────────────────────────

class ComplexityProfile(BaseModel):
    """
    Per-n values of a complexity function measured on a finite prefix.

    values[n] is None when n is outside the certified range; estimates
    derived from limsup/liminf objects sit in extras and are labeled so.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    measure: str
    tag: str
    horizon: int = Field(ge=0)
    values: Dict[int, Optional[Any]]
    valid_up_to: int
    extras: Dict[str, Any] = Field(default_factory=dict)

    def valid(self) -> Dict[int, Any]:
        return {n: v for n, v in self.values.items() if v is not None}


# ── Probe registry / census ──────────────────────────────────────────────────

class ProbeDescriptor(BaseModel):
    """One registry entry: problem id → runner with defaults."""

    model_config = ConfigDict(frozen=True)

    id: str
    title: str
    runner: str
    defaults: Dict[str, Any] = Field(default_factory=dict)
    expected: Optional[str] = None
    out_of_scope: bool = False
    note: Optional[str] = None

    @field_validator("id")
    @classmethod
    def dotted_id(cls, v: str) -> str:
        parts = v.split(".")
        if len(parts) < 3 or not all(p.isdigit() for p in parts):
            raise ValueError(f"probe id {v!r} must be dotted digits like 1.3.05.1")
        return v


class CensusConfig(BaseModel):
    """A census run read from YAML."""

    model_config = ConfigDict(frozen=True)

    predicate: Literal["pattern", "power", "abelian", "k-abelian", "additive", "min-density"]
    alphabet: int = Field(ge=1)
    min_length: int = Field(default=0, ge=0)
    max_length: int = Field(ge=-1)
    pattern: Optional[str] = None
    alpha: Optional[str] = None
    strict: bool = False
    n: Optional[int] = None
    k: Optional[int] = None
    min_period: int = Field(default=1, ge=1)
    values: Optional[List[int]] = None
    minority: int = Field(default=1, ge=0)
    max_nodes: Optional[int] = None
    max_seconds: Optional[float] = Field(default=None, gt=0)
    threads: int = Field(default=1, ge=1)


# ── Serialization ────────────────────────────────────────────────────────────

def jsonable(value: Any) -> Any:
    """Recursively convert a report into JSON-ready data; rationals become "p/q"."""
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, (Word, CircularWord, Morphism)):
        return str(value)
    if isinstance(value, BaseModel):
        return {k: jsonable(getattr(value, k)) for k in type(value).model_fields}
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (set, frozenset)):
        items = [jsonable(v) for v in value]
        return sorted(items, key=lambda x: (len(str(x)), str(x)))
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    return value

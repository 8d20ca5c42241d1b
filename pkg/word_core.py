"""
word_core.py
------------
Wordlab — Combinatorics-on-Words Workbench — Words, morphisms, oracles
---------------------------------------------------------------------
Alphabets, finite and circular words, morphisms, lazy prefixes of
infinite words and the classic generator zoo used as fixtures by every
other module.

Letters are the integers 0..k-1; glyphs are only a display table. All
positions in reports are 1-indexed; Python slicing inside the library is
0-indexed as usual.

Key functions:
    - apply_morphism: letterwise image concatenation
    - fixed_point_prefix: length-n prefix of m^ω(a)
    - classic_word: thue_morse, fibonacci, thue_ternary, tribonacci,
      zimin(k), makela(n), sturmian(cf)
    - factor_set: distinct length-n factors (cyclic for CircularWord)
    - parse_word / parse_morphism / read_words: text formats

Project: Wordlab — Combinatorics-on-Words Workbench
"""

from __future__ import annotations

import logging
import re
import threading
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from errors import DomainError, DomainMismatchError, NotProlongableError
from known_facts import CLASSIC_MORPHISMS, CLASSIC_START_LETTERS

logger = logging.getLogger(__name__)

Rational = Fraction
Letters = Tuple[int, ...]

_RATIONAL_RE = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(\d+))?\s*$")


# ── Rationals ────────────────────────────────────────────────────────────────

def parse_rational(text: Union[str, int, Fraction]) -> Fraction:
    """Parse "7/4", "2" or an int into a reduced Fraction."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    match = _RATIONAL_RE.match(str(text))
    if not match:
        raise DomainError(f"not a rational number: {text!r}")
    den = int(match.group(2)) if match.group(2) else 1
    if den == 0:
        raise DomainError("denominator must be positive")
    return Fraction(int(match.group(1)), den)


def format_rational(value: Fraction) -> str:
    """Always "p/q", including integers ("2/1")."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


# ── Alphabet ─────────────────────────────────────────────────────────────────

class Alphabet(BaseModel):
    """k letters 0..k-1 with an optional display glyph per letter."""

    model_config = ConfigDict(frozen=True)

    size: int = Field(ge=1)
    glyphs: Optional[Tuple[str, ...]] = None

    @field_validator("glyphs")
    @classmethod
    def glyphs_distinct(cls, v: Optional[Tuple[str, ...]]) -> Optional[Tuple[str, ...]]:
        if v is None:
            return v
        if len(set(v)) != len(v):
            raise ValueError("display glyphs must be distinct")
        if any(not g or "," in g for g in v):
            raise ValueError("glyphs must be nonempty and must not contain ','")
        return v

    @model_validator(mode="after")
    def glyph_count(self) -> "Alphabet":
        if self.glyphs is not None and len(self.glyphs) != self.size:
            raise ValueError(f"{len(self.glyphs)} glyphs given for {self.size} letters")
        return self

    @classmethod
    def default(cls, k: int) -> "Alphabet":
        """Letters a, b, c, ... when k <= 26, bare integers otherwise."""
        if k <= 26:
            return cls(size=k, glyphs=tuple(chr(ord("a") + i) for i in range(k)))
        return cls(size=k)

    @classmethod
    def digits(cls, k: int, start: int = 0) -> "Alphabet":
        """Letters rendered as the decimal digits start..start+k-1."""
        return cls(size=k, glyphs=tuple(str(start + i) for i in range(k)))

    @classmethod
    def from_glyphs(cls, glyphs: Iterable[str]) -> "Alphabet":
        glyphs = tuple(glyphs)
        return cls(size=len(glyphs), glyphs=glyphs)

    @property
    def compact(self) -> bool:
        """True when every glyph is a single character (so words print without commas)."""
        return self.glyphs is not None and all(len(g) == 1 for g in self.glyphs)

    def glyph(self, letter: int) -> str:
        if self.glyphs is None:
            return str(letter)
        return self.glyphs[letter]

    def index(self, glyph: str) -> int:
        if self.glyphs is None:
            try:
                letter = int(glyph)
            except ValueError:
                raise DomainMismatchError(f"{glyph!r} is not a letter of a {self.size}-letter alphabet")
        else:
            try:
                letter = self.glyphs.index(glyph)
            except ValueError:
                raise DomainMismatchError(f"{glyph!r} is not in alphabet {''.join(self.glyphs)}")
        if not 0 <= letter < self.size:
            raise DomainMismatchError(f"letter {letter} outside alphabet of size {self.size}")
        return letter

    def render(self, letters: Sequence[int]) -> str:
        if self.compact:
            return "".join(self.glyphs[c] for c in letters)
        return ",".join(self.glyph(c) for c in letters)

    def parse(self, text: str) -> Letters:
        text = text.strip()
        if not text or text in ("ε", "eps"):
            return ()
        if "," in text:
            return tuple(self.index(tok.strip()) for tok in text.split(","))
        if self.compact or (self.glyphs is None and self.size <= 10):
            return tuple(self.index(ch) for ch in text)
        return (self.index(text),)


# ── Words ────────────────────────────────────────────────────────────────────

class Word(BaseModel):
    """A finite word; the universal input of every operation."""

    model_config = ConfigDict(frozen=True)

    alphabet: Alphabet
    letters: Letters = ()

    @model_validator(mode="after")
    def letters_in_alphabet(self) -> "Word":
        for c in self.letters:
            if not 0 <= c < self.alphabet.size:
                raise ValueError(f"letter {c} outside alphabet of size {self.alphabet.size}")
        return self

    @classmethod
    def of(cls, alphabet: Alphabet, letters: Iterable[int]) -> "Word":
        """Trusted constructor for letters produced inside the library."""
        return cls.model_construct(alphabet=alphabet, letters=tuple(letters))

    @classmethod
    def parse(cls, text: str, alphabet: Optional[Alphabet] = None) -> "Word":
        return parse_word(text, alphabet)

    def __len__(self) -> int:
        return len(self.letters)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return Word.of(self.alphabet, self.letters[item])
        return self.letters[item]

    def __add__(self, other: "Word") -> "Word":
        if other.alphabet != self.alphabet:
            raise DomainMismatchError("cannot concatenate words over different alphabets")
        return Word.of(self.alphabet, self.letters + other.letters)

    def __str__(self) -> str:
        return self.alphabet.render(self.letters)

    def __repr__(self) -> str:
        return f"Word({str(self)!r})"

    def reversed(self) -> "Word":
        return Word.of(self.alphabet, self.letters[::-1])

    def is_factor_of(self, other: "Word") -> bool:
        return find_factor(other.letters, self.letters) >= 0

    def is_palindrome(self) -> bool:
        return self.letters == self.letters[::-1]


class CircularWord(BaseModel):
    """A nonempty word read cyclically; rotations compare equal."""

    model_config = ConfigDict(frozen=True)

    underlying: Word

    @field_validator("underlying")
    @classmethod
    def nonempty(cls, v: Word) -> Word:
        if len(v) == 0:
            raise ValueError("circular words must be nonempty")
        return v

    def __len__(self) -> int:
        return len(self.underlying)

    def canonical(self) -> Word:
        """Lexicographically least rotation."""
        return Word.of(self.underlying.alphabet, least_rotation(self.underlying.letters))

    def rotations(self) -> List[Word]:
        w = self.underlying.letters
        return [Word.of(self.underlying.alphabet, w[i:] + w[:i]) for i in range(len(w))]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CircularWord):
            return NotImplemented
        return self.canonical() == other.canonical()

    def __hash__(self) -> int:
        return hash(self.canonical())

    def __str__(self) -> str:
        return str(self.underlying)


def least_rotation(letters: Sequence[int]) -> Letters:
    """Booth's algorithm: the lexicographically least rotation."""
    s = tuple(letters) * 2
    n = len(letters)
    if n == 0:
        return ()
    fail = [-1] * len(s)
    k = 0
    for j in range(1, len(s)):
        sj = s[j]
        i = fail[j - k - 1]
        while i != -1 and sj != s[k + i + 1]:
            if sj < s[k + i + 1]:
                k = j - i - 1
            i = fail[i]
        if sj != s[k + i + 1]:
            if sj < s[k]:
                k = j
            fail[j - k] = -1
        else:
            fail[j - k] = i + 1
    return s[k:k + n]


def find_factor(haystack: Sequence[int], needle: Sequence[int], start: int = 0) -> int:
    """0-based index of the first occurrence of needle at or after start, or -1."""
    m = len(needle)
    if m == 0:
        return start if start <= len(haystack) else -1
    needle = tuple(needle)
    first = needle[0]
    hay = tuple(haystack)
    last = len(hay) - m
    i = start
    while i <= last:
        try:
            i = hay.index(first, i, last + 1)
        except ValueError:
            return -1
        if hay[i:i + m] == needle:
            return i
        i += 1
    return -1


def as_text(letters: Sequence[int]) -> str:
    """Pack letters into a str so factor scans can use fast str slicing/hashing."""
    return "".join(map(chr, letters))


# ── Morphisms ────────────────────────────────────────────────────────────────

class Morphism(BaseModel):
    """Letter-to-word substitution from domain to codomain."""

    model_config = ConfigDict(frozen=True)

    domain: Alphabet
    codomain: Alphabet
    images: Tuple[Word, ...]

    @model_validator(mode="after")
    def images_match(self) -> "Morphism":
        if len(self.images) != self.domain.size:
            raise ValueError(f"{len(self.images)} images given for {self.domain.size} letters")
        for img in self.images:
            if img.alphabet != self.codomain:
                raise ValueError("every image must be a word over the codomain")
        return self

    @classmethod
    def parse(cls, spec: str, domain: Optional[Alphabet] = None,
              codomain: Optional[Alphabet] = None) -> "Morphism":
        return parse_morphism(spec, domain, codomain)

    def image(self, letter: int) -> Word:
        return self.images[letter]

    def apply(self, w: Word) -> Word:
        return apply_morphism(self, w)

    def apply_letters(self, letters: Sequence[int]) -> Letters:
        imgs = [img.letters for img in self.images]
        out: List[int] = []
        for c in letters:
            out.extend(imgs[c])
        return tuple(out)

    def is_non_erasing(self) -> bool:
        return all(len(img) > 0 for img in self.images)

    def is_prolongable(self, a: int) -> bool:
        img = self.images[a].letters
        return self.domain == self.codomain and len(img) >= 2 and img[0] == a

    def is_marked(self) -> bool:
        """Initial letters of the images are pairwise distinct."""
        firsts = [img.letters[0] for img in self.images if len(img)]
        return self.is_non_erasing() and len(set(firsts)) == len(firsts)

    def compose(self, inner: "Morphism") -> "Morphism":
        """self ∘ inner: first apply inner, then self."""
        if inner.codomain != self.domain:
            raise DomainMismatchError("inner codomain differs from outer domain")
        return Morphism(
            domain=inner.domain,
            codomain=self.codomain,
            images=tuple(self.apply(img) for img in inner.images),
        )

    def __str__(self) -> str:
        return ";".join(
            f"{self.domain.glyph(a)}->{self.images[a]}" for a in range(self.domain.size)
        )


def apply_morphism(m: Morphism, w: Word) -> Word:
    """Concatenate the images of the letters of w, in order."""
    w = coerce_word(w, m.domain)
    return Word.of(m.codomain, m.apply_letters(w.letters))


def coerce_word(w: Word, alphabet: Alphabet) -> Word:
    """Re-express w over alphabet, matching letters by glyph when both have glyphs."""
    if w.alphabet == alphabet:
        return w
    if w.alphabet.glyphs is not None and alphabet.glyphs is not None:
        return Word.of(alphabet, (alphabet.index(w.alphabet.glyphs[c]) for c in w.letters))
    for c in w.letters:
        if c >= alphabet.size:
            raise DomainMismatchError(f"letter {c} outside alphabet of size {alphabet.size}")
    return Word.of(alphabet, w.letters)


def fixed_point_prefix(m: Morphism, a: int, n: int) -> Word:
    """Length-n prefix of the fixed point m^ω(a)."""
    if n < 0:
        raise DomainError("prefix length must be non-negative")
    if not m.is_prolongable(a):
        raise NotProlongableError(
            f"morphism {m} is not prolongable at {m.domain.glyph(a)}"
        )
    w: Letters = (a,)
    while len(w) < n:
        nxt = m.apply_letters(w)
        if len(nxt) <= len(w):
            raise NotProlongableError(f"morphism {m} stops growing at length {len(w)}")
        w = nxt
    return Word.of(m.domain, w[:n])


# ── Infinite words ───────────────────────────────────────────────────────────

class PrefixOracle:
    """
    Lazy infinite word: prefix(n) for any n, consistent across calls.

    The generator receives a requested length and returns at least that
    many letters; results are cached so repeated calls agree.
    """

    def __init__(self, tag: str, alphabet: Alphabet, generator: Callable[[int], Letters]):
        self.tag = tag
        self.alphabet = alphabet
        self._generator = generator
        self._cache: Letters = ()
        self._lock = threading.Lock()

    def letters(self, n: int) -> Letters:
        if n < 0:
            raise DomainError("prefix length must be non-negative")
        with self._lock:
            if len(self._cache) < n:
                produced = tuple(self._generator(max(n, 2 * len(self._cache))))
                if len(produced) < n or produced[:len(self._cache)] != self._cache:
                    raise DomainError(f"oracle {self.tag} produced an inconsistent prefix")
                self._cache = produced
            return self._cache[:n]

    def prefix(self, n: int) -> Word:
        return Word.of(self.alphabet, self.letters(n))

    def __repr__(self) -> str:
        return f"PrefixOracle({self.tag!r})"

    @classmethod
    def fixed_point(cls, m: Morphism, a: int, tag: Optional[str] = None) -> "PrefixOracle":
        if not m.is_prolongable(a):
            raise NotProlongableError(f"morphism {m} is not prolongable at {m.domain.glyph(a)}")
        return cls(
            tag or f"fixed point of {m} at {m.domain.glyph(a)}",
            m.domain,
            lambda n: fixed_point_prefix(m, a, n).letters,
        )

    @classmethod
    def sturmian(cls, cf: Sequence[int]) -> "PrefixOracle":
        digits = _check_cf(cf)
        return cls(
            f"sturmian{tuple(digits)}",
            Alphabet.default(2),
            lambda n: _standard_word(digits, n),
        )

    @classmethod
    def periodic(cls, w: Word) -> "PrefixOracle":
        if len(w) == 0:
            raise DomainError("periodic oracle needs a nonempty period")
        base = w.letters
        return cls(
            f"periodic({w})",
            w.alphabet,
            lambda n: (base * (n // len(base) + 1))[:n],
        )

    @classmethod
    def classic(cls, name: str, params: Optional[Dict] = None) -> "PrefixOracle":
        name, params = _split_tag(name, params)
        if name in ("thue_morse", "fibonacci", "thue_ternary", "tribonacci", "makela"):
            m = parse_morphism(CLASSIC_MORPHISMS[name])
            return cls.fixed_point(m, m.domain.index(CLASSIC_START_LETTERS[name]), tag=name)
        if name == "sturmian":
            return cls.sturmian(params.get("cf", ()))
        if name == "constant":
            return cls.periodic(Word.parse("a"))
        raise DomainError(f"no infinite word named {name!r}")


def _check_cf(cf: Sequence[int]) -> Tuple[int, ...]:
    digits = tuple(int(d) for d in cf)
    if not digits:
        raise DomainError("continued fraction expansion is empty")
    if any(d < 0 for d in digits):
        raise DomainError("continued fraction digits must be non-negative")
    if any(d == 0 for d in digits[1:]):
        raise DomainError("zero digit beyond the first position")
    if digits[-1] == 0:
        raise DomainError("expansion cannot end in a zero digit")
    return digits


def cf_digit(digits: Sequence[int], level: int) -> int:
    """d_level (1-indexed); the last supplied digit repeats forever."""
    return digits[min(level, len(digits)) - 1]


def _standard_word(digits: Sequence[int], n: int) -> Letters:
    # s_{-1} = b, s_0 = a, s_k = s_{k-1}^{d_k} s_{k-2}
    prev, cur = (1,), (0,)
    level = 0
    while len(cur) < n or level < 1:
        level += 1
        prev, cur = cur, cur * cf_digit(digits, level) + prev
    return cur[:n]


def _zimin(k: int) -> Letters:
    w: Letters = (0,)
    for i in range(1, k):
        w = w + (i,) + w
    return w


_TAG_RE = re.compile(r"^\s*([a-z_]+)\s*(?:\(\s*([^)]*)\s*\))?\s*$")


def _split_tag(name: str, params: Optional[Dict]) -> Tuple[str, Dict]:
    """Accept both ("zimin", {"k": 3}) and "zimin(3)"."""
    params = dict(params or {})
    match = _TAG_RE.match(name)
    if not match:
        raise DomainError(f"unknown classic word tag {name!r}")
    tag, arg = match.group(1), match.group(2)
    if arg:
        values = [int(x) for x in re.split(r"[\s,]+", arg) if x]
        if tag == "sturmian":
            params.setdefault("cf", tuple(values))
        elif tag == "zimin":
            params.setdefault("k", values[0])
        elif tag == "makela":
            params.setdefault("n", values[0])
    return tag, params


def classic_word(name: str, n: Optional[int] = None, params: Optional[Dict] = None) -> Word:
    """
    Length-n prefix of a named classic word.

    zimin(k) ignores n and returns the full finite word Z_k over the
    digit glyphs 1..k; makela(n) takes its length from n or params["n"].
    """
    tag, params = _split_tag(name, params)
    if tag == "zimin":
        k = int(params.get("k", 0))
        if k < 1:
            raise DomainError("zimin needs k >= 1")
        return Word.of(Alphabet.digits(k, start=1), _zimin(k))
    if tag == "makela" and n is None:
        n = params.get("n")
    if n is None or n < 0:
        raise DomainError(f"classic word {tag!r} needs a length n >= 0")
    if tag == "sturmian":
        digits = _check_cf(params.get("cf", ()))
        return Word.of(Alphabet.default(2), _standard_word(digits, n))
    if tag in CLASSIC_MORPHISMS:
        m = parse_morphism(CLASSIC_MORPHISMS[tag])
        return fixed_point_prefix(m, m.domain.index(CLASSIC_START_LETTERS[tag]), n)
    raise DomainError(
        f"unknown classic word {tag!r}; expected one of "
        "thue_morse, fibonacci, thue_ternary, tribonacci, zimin(k), makela(n), sturmian(cf)"
    )


# ── Factors ──────────────────────────────────────────────────────────────────

def factor_set(w: Union[Word, CircularWord], n: int) -> Set[Word]:
    """Distinct length-n factors; cyclic reading (n <= |w|) for circular words."""
    if n < 0:
        raise DomainError("factor length must be non-negative")
    if isinstance(w, CircularWord):
        base = w.underlying
        if n > len(base):
            return set()
        doubled = base.letters + base.letters[:n]
        return {Word.of(base.alphabet, doubled[i:i + n]) for i in range(len(base))}
    if n > len(w):
        return set()
    letters = w.letters
    return {Word.of(w.alphabet, letters[i:i + n]) for i in range(len(letters) - n + 1)}


def factor_texts(letters: Sequence[int], n: int) -> Set[str]:
    """Fast variant of factor_set for scans over long prefixes."""
    text = as_text(letters)
    return {text[i:i + n] for i in range(len(text) - n + 1)}


# ── Text formats ─────────────────────────────────────────────────────────────

def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_word(text: str, alphabet: Optional[Alphabet] = None) -> Word:
    """
    Parse compact glyph form ("abaab") or comma-separated integers ("0,1,0").

    Without an alphabet, glyph form infers the sorted set of glyphs used and
    integer form infers size max+1.
    """
    text = _strip_comment(text)
    if alphabet is not None:
        return Word(alphabet=alphabet, letters=alphabet.parse(text))
    if text in ("", "ε", "eps"):
        return Word(alphabet=Alphabet.default(1), letters=())
    if "," in text:
        values = tuple(int(tok) for tok in text.split(","))
        if any(v < 0 for v in values):
            raise DomainError("letters must be non-negative integers")
        return Word(alphabet=Alphabet(size=max(values) + 1), letters=values)
    alpha = Alphabet.from_glyphs(sorted(set(text)))
    return Word(alphabet=alpha, letters=alpha.parse(text))


def read_words(path: str, alphabet: Optional[Alphabet] = None) -> List[Word]:
    """One word per line; '#' starts a comment; blank lines are skipped."""
    words = []
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = _strip_comment(raw)
            if line:
                words.append(parse_word(line, alphabet))
    return words


def parse_morphism(spec: str, domain: Optional[Alphabet] = None,
                   codomain: Optional[Alphabet] = None) -> Morphism:
    """
    Parse "a->ab;b->a" or the integer form "0->0,1;1->0".

    Without explicit alphabets, the domain is the sorted set of left-hand
    glyphs; the codomain is the domain when every image glyph belongs to
    it, else the sorted set of image glyphs.
    """
    spec = _strip_comment(spec)
    rules: List[Tuple[str, str]] = []
    for part in spec.split(";"):
        part = part.strip()
        if not part:
            continue
        if "->" not in part:
            raise DomainError(f"morphism rule {part!r} lacks '->'")
        left, right = part.split("->", 1)
        rules.append((left.strip(), right.strip()))
    if not rules:
        raise DomainError("empty morphism spec")
    integer_form = any("," in r for _, r in rules) or (
        all(l.isdigit() for l, _ in rules) and any(len(l) > 1 for l, _ in rules)
    )

    def image_glyphs(right: str) -> List[str]:
        if not right or right in ("ε", "eps"):
            return []
        if integer_form:
            return [tok.strip() for tok in right.split(",")]
        return list(right)

    lefts = [l for l, _ in rules]
    if len(set(lefts)) != len(lefts):
        raise DomainError("a letter has two images")
    if domain is None:
        if integer_form:
            size = max(int(l) for l in lefts) + 1
            used = [int(g) for _, r in rules for g in image_glyphs(r)]
            size = max([size] + [u + 1 for u in used])
            domain = Alphabet(size=size)
        else:
            domain = Alphabet.from_glyphs(sorted(lefts))
    if codomain is None:
        used_glyphs = {g for _, r in rules for g in image_glyphs(r)}
        if integer_form or used_glyphs <= set(domain.glyphs or ()):
            codomain = domain
        else:
            codomain = Alphabet.from_glyphs(sorted(used_glyphs))
    images: Dict[int, Word] = {}
    for left, right in rules:
        images[domain.index(left)] = Word.of(codomain, tuple(codomain.index(g) for g in image_glyphs(right)))
    missing = [domain.glyph(a) for a in range(domain.size) if a not in images]
    if missing:
        raise DomainError(f"no image given for letters {', '.join(missing)}")
    return Morphism(domain=domain, codomain=codomain, images=tuple(images[a] for a in range(domain.size)))

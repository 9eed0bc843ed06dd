"""Alphabets, words and presentations.

A word is a tuple of nonzero ints: letter ``k > 0`` is the k-th generator,
``-k`` its formal inverse.  This keeps inversion alphabet-free (negation)
and words hashable.  The Alphabet only matters for text I/O, where we use
the lowercase/uppercase convention ("A" is the inverse of "a").
"""

from __future__ import annotations

import string
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Iterator

Word = tuple[int, ...]

EMPTY: Word = ()


class PresentationSyntaxError(ValueError):
    """Parse failure, with 1-based line/column of the offending input."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def inverse_word(w: Word) -> Word:
    return tuple(-x for x in reversed(w))


def free_reduce(w: Iterable[int]) -> Word:
    """Freely reduce a word; idempotent and length-nonincreasing."""
    out: list[int] = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def is_reduced(w: Word) -> bool:
    return all(w[i] != -w[i + 1] for i in range(len(w) - 1))


def concat(*ws: Word) -> Word:
    """Freely reduced concatenation."""
    out: list[int] = []
    for w in ws:
        for x in w:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
    return tuple(out)


def cyclic_reduce(w: Word) -> tuple[Word, Word]:
    """Split ``w`` as ``conjugator * core * conjugator^-1``.

    Deterministic rule: strip the first and last letters while they are
    mutually inverse.  For a freely reduced input the core is cyclically
    reduced.  Returns ``(core, conjugator)``.
    """
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == -w[j - 1]:
        i += 1
        j -= 1
    return w[i:j], w[:i]


def is_cyclically_reduced(w: Word) -> bool:
    if not is_reduced(w):
        return False
    return len(w) < 2 or w[0] != -w[-1]


def cyclic_shifts(w: Word) -> list[Word]:
    """All distinct cyclic shifts of ``w``, in shift order."""
    seen = set()
    out = []
    for i in range(max(1, len(w))):
        s = w[i:] + w[:i]
        if s not in seen:
            seen.add(s)
            out.append(s)
    return out


def letter_key(x: int) -> int:
    """Total order on letters: a < A < b < B < ...  (1, -1, 2, -2, ...)."""
    return 2 * abs(x) - 2 + (x < 0)


def shortlex_key(w: Word) -> tuple:
    return (len(w), tuple(letter_key(x) for x in w))


@dataclass(frozen=True)
class Alphabet:
    """Generator names plus the lowercase/uppercase involution.

    The symmetrized set is {1..n} u {-1..-n}; the involution is negation,
    which is fixed-point-free by construction.
    """

    names: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate generator names")
        for name in self.names:
            if len(name) != 1 or name not in string.ascii_lowercase:
                raise ValueError(f"generator must be a single lowercase letter: {name!r}")

    @property
    def size(self) -> int:
        return len(self.names)

    def letters(self) -> list[int]:
        """All symmetrized letters in canonical order (a, A, b, B, ...)."""
        out = []
        for k in range(1, self.size + 1):
            out.append(k)
            out.append(-k)
        return out

    def letter_from_char(self, ch: str) -> int:
        low = ch.lower()
        if low not in self.names:
            raise ValueError(f"unknown symbol {ch!r}")
        k = self.names.index(low) + 1
        return k if ch.islower() else -k

    def char_from_letter(self, x: int) -> str:
        name = self.names[abs(x) - 1]
        return name if x > 0 else name.upper()

    def word_from_str(self, text: str) -> Word:
        return tuple(self.letter_from_char(ch) for ch in text)

    def str_from_word(self, w: Word) -> str:
        return "".join(self.char_from_letter(x) for x in w)

    def valid_word(self, w: Word) -> bool:
        return all(x != 0 and abs(x) <= self.size for x in w)


@dataclass(frozen=True)
class Presentation:
    """A finite presentation with cyclically reduced, nonempty relators."""

    alphabet: Alphabet
    relators: tuple[Word, ...] = field(default=())

    def __post_init__(self):
        for r in self.relators:
            if not r:
                raise ValueError("empty relator")
            if not self.alphabet.valid_word(r):
                raise ValueError("relator letter outside alphabet")
            if not is_cyclically_reduced(r):
                raise ValueError(f"relator not cyclically reduced: {r}")

    @classmethod
    def make(cls, gens: str | Iterable[str], relators: Iterable[str] = ()) -> "Presentation":
        """Build from strings, normalizing relators (with a warning) if needed."""
        names = tuple(gens.split() if isinstance(gens, str) else gens)
        alphabet = Alphabet(names)
        rels = []
        for text in relators:
            raw = alphabet.word_from_str(text)
            core, _ = cyclic_reduce(free_reduce(raw))
            if core != raw:
                if not core:
                    raise ValueError(f"relator {text!r} reduces to the empty word")
                warnings.warn(f"relator {text!r} normalized to {alphabet.str_from_word(core)!r}")
            rels.append(core)
        return cls(alphabet, tuple(rels))

    @property
    def max_relator_length(self) -> int:
        return max((len(r) for r in self.relators), default=0)

    def word(self, text: str) -> Word:
        return self.alphabet.word_from_str(text)

    def text(self, w: Word) -> str:
        return self.alphabet.str_from_word(w)


def parse_presentation(data: bytes | str) -> Presentation:
    """Parse the line-oriented presentation format.

    Grammar: one ``gens: a b c`` line, then zero or more ``rel: <word>``
    lines.  ``#`` starts a comment; blank lines are ignored.
    """
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    names: tuple[str, ...] | None = None
    relator_texts: list[tuple[str, int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        if ":" not in line:
            raise PresentationSyntaxError("expected 'gens:' or 'rel:' line", lineno, 1)
        head, _, rest = line.partition(":")
        key = head.strip()
        col = line.index(":") + 2
        if key == "gens":
            if names is not None:
                raise PresentationSyntaxError("duplicate gens: line", lineno, 1)
            toks = rest.split()
            if not toks:
                raise PresentationSyntaxError("no generators given", lineno, col)
            if len(toks) != len(set(toks)):
                raise PresentationSyntaxError("duplicate generator", lineno, col)
            for tok in toks:
                if len(tok) != 1 or tok not in string.ascii_lowercase:
                    raise PresentationSyntaxError(f"bad generator {tok!r}", lineno, col)
            names = tuple(toks)
        elif key == "rel":
            word_text = rest.strip()
            if not word_text:
                raise PresentationSyntaxError("empty relator", lineno, col)
            relator_texts.append((word_text, lineno, col))
        else:
            raise PresentationSyntaxError(f"unknown directive {key!r}", lineno, 1)
    if names is None:
        raise PresentationSyntaxError("missing gens: line", 1, 1)
    alphabet = Alphabet(names)
    rels = []
    for word_text, lineno, col in relator_texts:
        try:
            raw = alphabet.word_from_str(word_text)
        except ValueError as exc:
            raise PresentationSyntaxError(str(exc), lineno, col) from None
        core, _ = cyclic_reduce(free_reduce(raw))
        if not core:
            raise PresentationSyntaxError("relator reduces to the empty word", lineno, col)
        if core != raw:
            warnings.warn(f"relator {word_text!r} normalized to {alphabet.str_from_word(core)!r}")
        rels.append(core)
    return Presentation(alphabet, tuple(rels))


def format_presentation(p: Presentation) -> str:
    """Serialize so that parse(format(p)) reproduces ``p`` exactly."""
    lines = ["gens: " + " ".join(p.alphabet.names)]
    for r in p.relators:
        lines.append("rel: " + p.text(r))
    return "\n".join(lines) + "\n"


def reduced_words(alphabet: Alphabet, length: int) -> Iterator[Word]:
    """All freely reduced words of exactly the given length, in shortlex order."""
    letters = alphabet.letters()

    def go(prefix: list[int], k: int) -> Iterator[Word]:
        if k == 0:
            yield tuple(prefix)
            return
        for x in letters:
            if prefix and prefix[-1] == -x:
                continue
            prefix.append(x)
            yield from go(prefix, k - 1)
            prefix.pop()

    yield from go([], length)

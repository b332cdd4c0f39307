"""Alphabets, words, and the textual symbol syntax.

A symbol is a string: either a single unicode character or a named token
(any longer string, e.g. ``NEWLINE`` or an adorned pair produced by the
run-annotation construction).  A few names stand for characters that are
awkward in fixtures and on the command line; they have short written forms:

    BACKSLASH {bs}    PERCENT {pct}    NEWLINE {nl}    HASH # or {hash}
    LMARK {lmark}     RMARK {rmark}

``parse_word`` reads the written form, ``display_word`` produces it.  Words
are plain tuples of symbols so they hash and compare structurally.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

Symbol = str
Word = tuple[Symbol, ...]

BACKSLASH: Symbol = "BACKSLASH"
PERCENT: Symbol = "PERCENT"
NEWLINE: Symbol = "NEWLINE"
HASH: Symbol = "HASH"
LMARK: Symbol = "LMARK"
RMARK: Symbol = "RMARK"

EPSILON: Word = ()
ENDMARKERS = (LMARK, RMARK)

_SHORT_TO_NAME = {
    "bs": BACKSLASH,
    "pct": PERCENT,
    "nl": NEWLINE,
    "hash": HASH,
    "lmark": LMARK,
    "rmark": RMARK,
}
_CHAR_TO_NAME = {
    "\\": BACKSLASH,
    "%": PERCENT,
    "\n": NEWLINE,
    "#": HASH,
    "⊢": LMARK,
    "⊣": RMARK,
}
_NAME_TO_DISPLAY = {
    BACKSLASH: "{bs}",
    PERCENT: "{pct}",
    NEWLINE: "{nl}",
    HASH: "#",
    LMARK: "{lmark}",
    RMARK: "{rmark}",
}


def normalize_symbol(s: str) -> Symbol:
    """Map character spellings of the special symbols to their names."""
    if len(s) == 1 and s in _CHAR_TO_NAME:
        return _CHAR_TO_NAME[s]
    return s


def parse_word(text: str) -> Word:
    """Read a word from its written form.

    Single characters stand for themselves; ``{...}`` wraps a named token
    (brace-balanced, so adorned names containing braces survive a round
    trip).  Raw special characters are normalized to their names.
    """
    out: list[Symbol] = []
    i = 0
    while i < len(text):
        c = text[i]
        if c == "{":
            depth = 1
            j = i + 1
            while j < len(text) and depth:
                if text[j] == "{":
                    depth += 1
                elif text[j] == "}":
                    depth -= 1
                j += 1
            if depth:
                raise ValueError(f"unterminated symbol token in {text!r}")
            name = text[i + 1 : j - 1]
            out.append(_SHORT_TO_NAME.get(name, name))
            i = j
        elif c == "}":
            raise ValueError(f"stray '}}' in {text!r}")
        else:
            out.append(normalize_symbol(c))
            i += 1
    return tuple(out)


def display_symbol(s: Symbol) -> str:
    if s in _NAME_TO_DISPLAY:
        return _NAME_TO_DISPLAY[s]
    if len(s) == 1:
        return s
    return "{" + s + "}"


def display_word(w: Word) -> str:
    return "".join(display_symbol(s) for s in w)


def reverse_word(w: Word) -> Word:
    """Letters in reversed order; an involution."""
    return w[::-1]


@dataclass(frozen=True)
class Alphabet:
    """An ordered finite set of symbols.

    Declaration order is the lexicographic order used wherever a shortest
    or lexicographically least witness is promised.
    """

    symbols: tuple[Symbol, ...]

    def __post_init__(self):
        if not self.symbols:
            raise ValueError("alphabet must be non-empty")
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError(f"duplicate symbols in alphabet {self.symbols!r}")
        for s in self.symbols:
            if s in ("{", "}"):
                raise ValueError("'{' and '}' cannot be alphabet symbols")

    @classmethod
    def of(cls, *symbols: str) -> "Alphabet":
        return cls(tuple(normalize_symbol(s) for s in symbols))

    @classmethod
    def from_text(cls, text: str) -> "Alphabet":
        """Alphabet from a word-syntax run of symbols, e.g. ``01#``."""
        return cls(parse_word(text))

    @cached_property
    def _index(self) -> dict[Symbol, int]:
        return {s: i for i, s in enumerate(self.symbols)}

    def __contains__(self, s: Symbol) -> bool:
        return s in self._index

    def __iter__(self):
        return iter(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def index(self, s: Symbol) -> int:
        return self._index[s]

    def sort_key(self, w: Word) -> tuple:
        return (len(w), tuple(self._index[s] for s in w))

    def with_symbols(self, extra: Iterable[Symbol]) -> "Alphabet":
        added = tuple(s for s in extra if s not in self)
        if not added:
            return self
        return Alphabet(self.symbols + added)

    def check_word(self, w: Word, context: str = "word") -> None:
        from .errors import ForeignSymbol

        for s in w:
            if s not in self:
                raise ForeignSymbol(
                    f"{context} uses symbol {display_symbol(s)!r} not in alphabet"
                    f" {[display_symbol(x) for x in self.symbols]}"
                )


def word_over(alphabet: Alphabet, text: str) -> Word:
    """Parse a word and require every letter to be in ``alphabet``."""
    w = parse_word(text)
    alphabet.check_word(w)
    return w

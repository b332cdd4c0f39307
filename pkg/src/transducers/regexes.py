"""Plain regular expressions over quoted symbols, and their position automata.

Syntax (used standalone and inside ``chain2[...]`` brackets):

    regex  := cat ("+" cat)*
    cat    := post ("." post)*
    post   := prim "*"*
    prim   := QUOTED | "(" regex ")"

A quoted literal spells a word; ``''`` is the empty word.  The Glushkov
(position) construction yields an epsilon-free NFA whose accepting runs are
in bijection with the parses of the expression, which is what the
unambiguity checks rely on.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import RteSyntaxError
from .nfa import Nfa
from .symbols import Alphabet, Symbol, Word, parse_word


class ReNode:
    pass


@dataclass(frozen=True)
class ReEps(ReNode):
    pass


@dataclass(frozen=True)
class ReSym(ReNode):
    sym: Symbol


@dataclass(frozen=True)
class ReAlt(ReNode):
    left: ReNode
    right: ReNode


@dataclass(frozen=True)
class ReCat(ReNode):
    left: ReNode
    right: ReNode


@dataclass(frozen=True)
class ReStar(ReNode):
    inner: ReNode


def re_word(w: Word) -> ReNode:
    node: ReNode = ReEps()
    for s in w:
        node = ReSym(s) if isinstance(node, ReEps) else ReCat(node, ReSym(s))
    return node


def re_symbols(e: ReNode) -> tuple[Symbol, ...]:
    out: list[Symbol] = []

    def walk(n: ReNode):
        if isinstance(n, ReSym):
            if n.sym not in out:
                out.append(n.sym)
        elif isinstance(n, (ReAlt, ReCat)):
            walk(n.left)
            walk(n.right)
        elif isinstance(n, ReStar):
            walk(n.inner)

    walk(e)
    return tuple(out)


def regex_to_text(e: ReNode) -> str:
    from .symbols import display_symbol

    def quote(sym: Symbol) -> str:
        return "'" + display_symbol(sym) + "'"

    def go(n: ReNode, level: int) -> str:
        # level: 0 alt, 1 cat, 2 post
        if isinstance(n, ReEps):
            return "''"
        if isinstance(n, ReSym):
            return quote(n.sym)
        if isinstance(n, ReAlt):
            s = f"{go(n.left, 0)}+{go(n.right, 1)}"
            return f"({s})" if level > 0 else s
        if isinstance(n, ReCat):
            s = f"{go(n.left, 1)}.{go(n.right, 2)}"
            return f"({s})" if level > 1 else s
        if isinstance(n, ReStar):
            return f"{go(n.inner, 2)}*" if not isinstance(n.inner, (ReAlt, ReCat)) else f"({go(n.inner, 0)})*"
        raise TypeError(n)

    return go(e, 0)


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------


class _Scanner:
    def __init__(self, text: str, line: int = 1, col: int = 1):
        self.text = text
        self.i = 0
        self.line = line
        self.col = col

    def _advance(self, n: int):
        for _ in range(n):
            if self.i < len(self.text) and self.text[self.i] == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
            self.i += 1

    def skip_ws(self):
        while self.i < len(self.text):
            c = self.text[self.i]
            if c in " \t\r\n":
                self._advance(1)
            elif c == "#":
                while self.i < len(self.text) and self.text[self.i] != "\n":
                    self._advance(1)
            else:
                break

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.i] if self.i < len(self.text) else ""

    def eat(self, s: str) -> bool:
        self.skip_ws()
        if self.text.startswith(s, self.i):
            self._advance(len(s))
            return True
        return False

    def expect(self, s: str):
        if not self.eat(s):
            found = self.text[self.i : self.i + 8] if self.i < len(self.text) else "end of input"
            raise RteSyntaxError(self.line, self.col, repr(s), found)

    def quoted(self) -> Word:
        self.skip_ws()
        if self.i >= len(self.text) or self.text[self.i] != "'":
            found = self.text[self.i : self.i + 8] if self.i < len(self.text) else "end of input"
            raise RteSyntaxError(self.line, self.col, "quoted word", found)
        self._advance(1)
        start = self.i
        while self.i < len(self.text) and self.text[self.i] != "'":
            self._advance(1)
        if self.i >= len(self.text):
            raise RteSyntaxError(self.line, self.col, "closing quote")
        raw = self.text[start : self.i]
        self._advance(1)
        return parse_word(raw)

    def at_end(self) -> bool:
        self.skip_ws()
        return self.i >= len(self.text)


def _parse_alt(sc: _Scanner) -> ReNode:
    node = _parse_cat(sc)
    while sc.eat("+"):
        node = ReAlt(node, _parse_cat(sc))
    return node


def _parse_cat(sc: _Scanner) -> ReNode:
    node = _parse_post(sc)
    while sc.eat("."):
        node = ReCat(node, _parse_post(sc))
    return node


def _parse_post(sc: _Scanner) -> ReNode:
    node = _parse_prim(sc)
    while sc.eat("*"):
        node = ReStar(node)
    return node


def _parse_prim(sc: _Scanner) -> ReNode:
    if sc.peek() == "(":
        sc.expect("(")
        node = _parse_alt(sc)
        sc.expect(")")
        return node
    return re_word(sc.quoted())


def parse_regex(text: str) -> ReNode:
    sc = _Scanner(text)
    node = _parse_alt(sc)
    if not sc.at_end():
        raise RteSyntaxError(sc.line, sc.col, "end of regular expression", sc.text[sc.i : sc.i + 8])
    return node


def parse_regex_in(sc: _Scanner) -> ReNode:
    """Parse a regex from an already-open scanner (used by the expression parser)."""
    return _parse_alt(sc)


# ---------------------------------------------------------------------------
# Glushkov position automaton
# ---------------------------------------------------------------------------


def glushkov(e: ReNode, alphabet: Alphabet | None = None) -> Nfa:
    """Position automaton; accepting runs correspond one-to-one to parses."""
    if alphabet is None:
        syms = re_symbols(e)
        if not syms:
            syms = ("0",)  # language over no letters; any alphabet serves
        alphabet = Alphabet(tuple(syms))

    positions: list[Symbol] = []

    def index(n: ReNode):
        """(nullable, first, last, follow-pairs) with positions numbered by visit order."""
        if isinstance(n, ReEps):
            return True, frozenset(), frozenset(), []
        if isinstance(n, ReSym):
            i = len(positions)
            positions.append(n.sym)
            return False, frozenset({i}), frozenset({i}), []
        if isinstance(n, ReAlt):
            ln, lf, ll, lp = index(n.left)
            rn, rf, rl, rp = index(n.right)
            return ln or rn, lf | rf, ll | rl, lp + rp
        if isinstance(n, ReCat):
            ln, lf, ll, lp = index(n.left)
            rn, rf, rl, rp = index(n.right)
            pairs = lp + rp + [(x, y) for x in ll for y in rf]
            first = lf | rf if ln else lf
            last = rl | ll if rn else rl
            return ln and rn, first, last, pairs
        if isinstance(n, ReStar):
            inn, inf, inl, inp = index(n.inner)
            pairs = inp + [(x, y) for x in inl for y in inf]
            return True, inf, inl, pairs
        raise TypeError(n)

    nullable, first, last, pairs = index(e)
    start = "s"
    states = {start} | set(range(len(positions)))
    transitions = set()
    for i in first:
        transitions.add((start, positions[i], i))
    for (x, y) in pairs:
        transitions.add((x, positions[y], y))
    final = set(last)
    if nullable:
        final.add(start)
    return Nfa(alphabet, frozenset(states), frozenset({start}), frozenset(final), frozenset(transitions))


def regex_to_nfa(text: str, alphabet: Alphabet | None = None) -> Nfa:
    return glushkov(parse_regex(text), alphabet)

"""Finite acceptors: membership, trimming, determinization, equivalence,
ambiguity, and the boolean constructions the rest of the toolkit builds on.

Automata are epsilon-free by construction.  Constructions that would
naturally introduce epsilon transitions (concatenation, star) glue states
instead.  States may be any hashable value; subset states produced by
``nfa_determinize`` are tuples sorted by ``state_str`` so that derived
alphabets and witnesses are reproducible across runs.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Hashable, Iterable, Optional

from .errors import AlphabetMismatch
from .symbols import Alphabet, Symbol, Word

State = Hashable


def state_str(s: State) -> str:
    """Canonical printable form of a state, stable under nesting."""
    if isinstance(s, str):
        return s
    if isinstance(s, tuple):
        return "(" + ",".join(state_str(x) for x in s) + ")"
    if isinstance(s, frozenset):
        return "{" + ",".join(sorted(state_str(x) for x in s)) + "}"
    return repr(s)


@dataclass(frozen=True)
class Nfa:
    """Nondeterministic finite acceptor without epsilon transitions."""

    alphabet: Alphabet
    states: frozenset
    initial: frozenset
    final: frozenset
    transitions: frozenset  # of (state, symbol, state)

    def __post_init__(self):
        for q in self.initial | self.final:
            if q not in self.states:
                raise ValueError(f"undeclared state {state_str(q)}")
        for (p, a, q) in self.transitions:
            if p not in self.states or q not in self.states:
                raise ValueError(f"transition endpoint not declared: {state_str(p)}-{a}->{state_str(q)}")
            if a not in self.alphabet:
                raise ValueError(f"transition symbol {a!r} not in alphabet")

    @classmethod
    def make(cls, alphabet, states=(), initial=(), final=(), transitions=()) -> "Nfa":
        states = set(states) | set(initial) | set(final)
        for (p, _, q) in transitions:
            states.add(p)
            states.add(q)
        return cls(alphabet, frozenset(states), frozenset(initial), frozenset(final), frozenset(transitions))

    @cached_property
    def _step(self) -> dict:
        look: dict = {}
        for (p, a, q) in self.transitions:
            look.setdefault((p, a), set()).add(q)
        return look

    def step(self, qs: Iterable[State], a: Symbol) -> frozenset:
        nxt: set = set()
        for q in qs:
            nxt |= self._step.get((q, a), set())
        return frozenset(nxt)

    def accepts_epsilon(self) -> bool:
        return bool(self.initial & self.final)


def nfa_accepts(a: Nfa, w: Word) -> bool:
    """True iff some initial-to-final run spells ``w``."""
    a.alphabet.check_word(w)
    cur = a.initial
    for s in w:
        cur = a.step(cur, s)
        if not cur:
            return False
    return bool(cur & a.final)


def count_accepting_runs(a: Nfa, w: Word) -> int:
    """Number of distinct accepting runs for ``w`` (brute-force oracle)."""
    a.alphabet.check_word(w)
    counts = {q: 1 for q in a.initial}
    for s in w:
        nxt: dict = {}
        for q, c in counts.items():
            for r in a._step.get((q, s), ()):
                nxt[r] = nxt.get(r, 0) + c
        counts = nxt
    return sum(c for q, c in counts.items() if q in a.final)


def nfa_trim(a: Nfa) -> Nfa:
    """Sub-automaton of accessible and co-accessible states; same language."""
    fwd: set = set()
    frontier = deque(a.initial)
    fwd |= a.initial
    adj: dict = {}
    radj: dict = {}
    for (p, s, q) in a.transitions:
        adj.setdefault(p, []).append(q)
        radj.setdefault(q, []).append(p)
    while frontier:
        p = frontier.popleft()
        for q in adj.get(p, ()):
            if q not in fwd:
                fwd.add(q)
                frontier.append(q)
    bwd: set = set(a.final)
    frontier = deque(a.final)
    while frontier:
        q = frontier.popleft()
        for p in radj.get(q, ()):
            if p not in bwd:
                bwd.add(p)
                frontier.append(p)
    keep = fwd & bwd
    return Nfa(
        a.alphabet,
        frozenset(keep),
        frozenset(a.initial & keep),
        frozenset(a.final & keep),
        frozenset(t for t in a.transitions if t[0] in keep and t[2] in keep),
    )


def nfa_determinize(a: Nfa) -> Nfa:
    """Subset construction; the result is deterministic and complete.

    Subset states are tuples of members sorted by ``state_str`` (the empty
    tuple is the sink), so downstream constructions that name states after
    subsets are reproducible.
    """
    def canon(qs: frozenset) -> tuple:
        return tuple(sorted(qs, key=state_str))

    start = canon(a.initial)
    states = {start}
    transitions = set()
    frontier = deque([start])
    while frontier:
        x = frontier.popleft()
        for s in a.alphabet:
            y = canon(a.step(frozenset(x), s))
            transitions.add((x, s, y))
            if y not in states:
                states.add(y)
                frontier.append(y)
    final = frozenset(x for x in states if set(x) & a.final)
    return Nfa(a.alphabet, frozenset(states), frozenset({start}), final, frozenset(transitions))


def is_deterministic_complete(a: Nfa) -> bool:
    if len(a.initial) != 1:
        return False
    seen = set()
    for (p, s, _) in a.transitions:
        if (p, s) in seen:
            return False
        seen.add((p, s))
    return all((p, s) in seen for p in a.states for s in a.alphabet)


@dataclass(frozen=True)
class EquivalenceResult:
    equivalent: bool
    counterexample: Optional[Word] = None  # shortest, lex-least; in exactly one language

    def __bool__(self) -> bool:
        return self.equivalent


def dfa_equiv(a: Nfa, b: Nfa) -> EquivalenceResult:
    """Language equality with a shortest, lexicographically least counterexample.

    Both automata are determinized internally; the product is searched
    breadth-first in alphabet order.
    """
    if set(a.alphabet.symbols) != set(b.alphabet.symbols):
        raise AlphabetMismatch(
            f"alphabets differ: {a.alphabet.symbols!r} vs {b.alphabet.symbols!r}"
        )
    da, db = nfa_determinize(a), nfa_determinize(b)
    sa = next(iter(da.initial))
    sb = next(iter(db.initial))
    start = (sa, sb)
    parent: dict = {start: None}
    queue = deque([start])
    while queue:
        (p, q) = queue.popleft()
        if ((p in da.final) != (q in db.final)):
            word: list = []
            node = (p, q)
            while parent[node] is not None:
                node, s = parent[node]
                word.append(s)
            return EquivalenceResult(False, tuple(reversed(word)))
        for s in a.alphabet:
            p2 = next(iter(da.step({p}, s)))
            q2 = next(iter(db.step({q}, s)))
            if (p2, q2) not in parent:
                parent[(p2, q2)] = ((p, q), s)
                queue.append((p2, q2))
    return EquivalenceResult(True)


@dataclass(frozen=True)
class AmbiguityResult:
    unambiguous: bool
    witness: Optional[Word] = None  # a shortest word with two accepting runs

    def __bool__(self) -> bool:
        return self.unambiguous


def nfa_ambiguous(a: Nfa) -> AmbiguityResult:
    """Detect words with two distinct accepting runs.

    Self-product with a divergence flag: configurations (p, q, diverged)
    are explored breadth-first from all initial pairs; the flag is set as
    soon as the two tracked runs differ.  A reachable accepting pair with
    the flag set yields the witness.
    """
    start_configs = []
    ini = sorted(a.initial, key=state_str)
    for p in ini:
        for q in ini:
            start_configs.append((p, q, p != q))
    parent: dict = {}
    queue = deque()
    for c in start_configs:
        if c not in parent:
            parent[c] = None
            queue.append(c)
    while queue:
        c = queue.popleft()
        (p, q, div) = c
        if div and p in a.final and q in a.final:
            word: list = []
            node = c
            while parent[node] is not None:
                node, s = parent[node]
                word.append(s)
            return AmbiguityResult(False, tuple(reversed(word)))
        for s in a.alphabet:
            ps = sorted(a._step.get((p, s), ()), key=state_str)
            qs = sorted(a._step.get((q, s), ()), key=state_str)
            for p2 in ps:
                for q2 in qs:
                    c2 = (p2, q2, div or p2 != q2)
                    if c2 not in parent:
                        parent[c2] = (c, s)
                        queue.append(c2)
    return AmbiguityResult(True)


def nfa_is_empty(a: Nfa) -> bool:
    reach = set(a.initial)
    frontier = deque(a.initial)
    while frontier:
        p = frontier.popleft()
        if p in a.final:
            return False
        for s in a.alphabet:
            for q in a._step.get((p, s), ()):
                if q not in reach:
                    reach.add(q)
                    frontier.append(q)
    return False if reach & a.final else True


def shortest_accepted(a: Nfa) -> Optional[Word]:
    """Shortest (then lex-least) accepted word, or None if the language is empty."""
    parent: dict = {q: None for q in sorted(a.initial, key=state_str)}
    queue = deque(parent)
    while queue:
        p = queue.popleft()
        if p in a.final:
            word: list = []
            node = p
            while parent[node] is not None:
                node, s = parent[node]
                word.append(s)
            return tuple(reversed(word))
        for s in a.alphabet:
            for q in sorted(a._step.get((p, s), ()), key=state_str):
                if q not in parent:
                    parent[q] = (p, s)
                    queue.append(q)
    return None


def suffix_accepting_positions(a: Nfa, w: Word) -> list[bool]:
    """For each position k, whether the suffix w[k:] is accepted.

    One backward pass over the word; result has len(w)+1 entries.
    """
    n = len(w)
    good = [False] * (n + 1)
    states: set = set(a.final)
    good[n] = bool(a.initial & states)
    rstep: dict = {}
    for (p, s, q) in a.transitions:
        rstep.setdefault((q, s), set()).add(p)
    for k in range(n - 1, -1, -1):
        prev: set = set()
        for q in states:
            prev |= rstep.get((q, w[k]), set())
        states = prev
        good[k] = bool(a.initial & states)
    return good


# ---------------------------------------------------------------------------
# Boolean and rational constructions (all epsilon-free)
# ---------------------------------------------------------------------------


def _tagged(a: Nfa, tag) -> Nfa:
    return Nfa(
        a.alphabet,
        frozenset((tag, q) for q in a.states),
        frozenset((tag, q) for q in a.initial),
        frozenset((tag, q) for q in a.final),
        frozenset(((tag, p), s, (tag, q)) for (p, s, q) in a.transitions),
    )


def _require_same_alphabet(a: Nfa, b: Nfa) -> Alphabet:
    if a.alphabet.symbols != b.alphabet.symbols:
        if set(a.alphabet.symbols) == set(b.alphabet.symbols):
            return a.alphabet
        raise AlphabetMismatch(
            f"alphabets differ: {a.alphabet.symbols!r} vs {b.alphabet.symbols!r}"
        )
    return a.alphabet


def nfa_union(a: Nfa, b: Nfa) -> Nfa:
    alphabet = _require_same_alphabet(a, b)
    ta, tb = _tagged(a, 0), _tagged(b, 1)
    return Nfa(
        alphabet,
        ta.states | tb.states,
        ta.initial | tb.initial,
        ta.final | tb.final,
        ta.transitions | tb.transitions,
    )


def nfa_intersection(a: Nfa, b: Nfa) -> Nfa:
    alphabet = _require_same_alphabet(a, b)
    states = set()
    transitions = set()
    initial = {(p, q) for p in a.initial for q in b.initial}
    frontier = deque(initial)
    states |= initial
    while frontier:
        (p, q) = frontier.popleft()
        for s in alphabet:
            for p2 in a._step.get((p, s), ()):
                for q2 in b._step.get((q, s), ()):
                    transitions.add(((p, q), s, (p2, q2)))
                    if (p2, q2) not in states:
                        states.add((p2, q2))
                        frontier.append((p2, q2))
    final = {(p, q) for (p, q) in states if p in a.final and q in b.final}
    return Nfa(alphabet, frozenset(states), frozenset(initial), frozenset(final), frozenset(transitions))


def nfa_complement(a: Nfa) -> Nfa:
    d = nfa_determinize(a)
    return Nfa(d.alphabet, d.states, d.initial, d.states - d.final, d.transitions)


def nfa_concat(a: Nfa, b: Nfa) -> Nfa:
    """Concatenation without epsilon transitions.

    Glue: from every final state of ``a``, copy the initial transitions of
    ``b``; final states of ``a`` stay final when the right language contains
    the empty word.  The right part's own initial states are NOT added to
    the result's initials: the glue edges already cover splits with an
    empty left factor, and keeping both would represent one split by two
    runs, breaking the run/parse correspondence the ambiguity checks need.
    """
    alphabet = _require_same_alphabet(a, b)
    ta, tb = _tagged(a, 0), _tagged(b, 1)
    transitions = set(ta.transitions) | set(tb.transitions)
    b_initial_moves = [(s, q2) for (q, s, q2) in tb.transitions if q in tb.initial]
    for f in ta.final:
        for (s, q2) in b_initial_moves:
            transitions.add((f, s, q2))
    final = set(tb.final)
    if b.accepts_epsilon():
        final |= ta.final
    return Nfa(alphabet, ta.states | tb.states, frozenset(ta.initial), frozenset(final), frozenset(transitions))


def nfa_star(a: Nfa) -> Nfa:
    """Kleene star without epsilon transitions, via a fresh initial-final state."""
    t = _tagged(a, 0)
    fresh = ("star", 0)
    initial_moves = [(s, q2) for (q, s, q2) in t.transitions if q in t.initial]
    transitions = set(t.transitions)
    for (s, q2) in initial_moves:
        transitions.add((fresh, s, q2))
    for f in t.final:
        for (s, q2) in initial_moves:
            transitions.add((f, s, q2))
    return Nfa(
        a.alphabet,
        t.states | {fresh},
        frozenset({fresh}),
        t.final | {fresh},
        frozenset(transitions),
    )


def nfa_remove_epsilon(a: Nfa) -> Nfa:
    """The same language minus the empty word."""
    if not a.accepts_epsilon():
        return a
    t = _tagged(a, 0)
    copies = {q: ("ne", q) for q in t.initial}
    transitions = set(t.transitions)
    for (p, s, q) in t.transitions:
        if p in t.initial:
            transitions.add((copies[p], s, q))
    return Nfa(
        a.alphabet,
        t.states | frozenset(copies.values()),
        frozenset(copies.values()),
        t.final,
        frozenset(transitions),
    )


def nfa_word(alphabet: Alphabet, w: Word) -> Nfa:
    alphabet.check_word(w)
    states = [("w", i) for i in range(len(w) + 1)]
    transitions = {(states[i], w[i], states[i + 1]) for i in range(len(w))}
    return Nfa(alphabet, frozenset(states), frozenset({states[0]}), frozenset({states[-1]}), frozenset(transitions))


def nfa_universal(alphabet: Alphabet, over: Iterable[Symbol] | None = None) -> Nfa:
    """All words over ``over`` (default: the whole alphabet), declared over ``alphabet``."""
    syms = tuple(over) if over is not None else alphabet.symbols
    q = "u"
    return Nfa(alphabet, frozenset({q}), frozenset({q}), frozenset({q}), frozenset((q, s, q) for s in syms))


def nfa_none(alphabet: Alphabet) -> Nfa:
    return Nfa(alphabet, frozenset({"z"}), frozenset({"z"}), frozenset(), frozenset())


def accept_from(a: Nfa, q: State) -> Nfa:
    """The automaton recognizing the language accepted starting at ``q``."""
    return Nfa(a.alphabet, a.states, frozenset({q}), a.final, a.transitions)


def enumerate_words(alphabet: Alphabet, max_len: int) -> Iterable[Word]:
    """All words of length 0..max_len in length-then-lexicographic order."""
    from itertools import product

    for n in range(max_len + 1):
        for tup in product(alphabet.symbols, repeat=n):
            yield tup

"""Independent oracles and generators shared by the test modules.

Everything here is deliberately naive: the oracles recompute expected
values by direct arithmetic or exhaustive run enumeration, never through
the code paths they are meant to check.
"""
from __future__ import annotations

import random

from transducers.machines import Nft
from transducers.nfa import Nfa
from transducers.symbols import Alphabet, Word

BITS = Alphabet.of("0", "1")


def increment_lsb_first_oracle(w: Word) -> Word:
    """Ripple-carry +1 on a little-endian digit string, preserving width."""
    digits = list(w)
    for i, d in enumerate(digits):
        if d == "0":
            digits[i] = "1"
            return tuple(digits)
        digits[i] = "0"
    return tuple(digits) + ("1",)


def increment_msb_first_oracle(w: Word) -> Word:
    return increment_lsb_first_oracle(w[::-1])[::-1]


def naive_nft_outputs(t: Nft, w: Word) -> set[Word]:
    """Output set by explicit run enumeration (independent of eval_nft)."""
    results: set[Word] = set()

    def rec(q, i, acc):
        if i == len(w):
            for (qf, u) in t.final:
                if qf == q:
                    results.add(acc + tuple(u))
            return
        for (p, a, u, r) in t.transitions:
            if p == q and a == w[i]:
                rec(r, i + 1, acc + tuple(u))

    for (q, u) in t.initial:
        rec(q, 0, tuple(u))
    return results


def naive_run_count(a: Nfa, w: Word) -> int:
    """Accepting-run count by explicit recursion."""

    def rec(q, i):
        if i == len(w):
            return 1 if q in a.final else 0
        return sum(rec(r, i + 1) for (p, s, r) in a.transitions if p == q and s == w[i])

    return sum(rec(q, 0) for q in a.initial)


def words_up_to(alphabet: Alphabet, max_len: int, min_len: int = 0):
    from transducers.nfa import enumerate_words

    for w in enumerate_words(alphabet, max_len):
        if len(w) >= min_len:
            yield w


def random_word(rng: random.Random, alphabet: Alphabet, max_len: int) -> Word:
    k = rng.randint(0, max_len)
    return tuple(rng.choice(alphabet.symbols) for _ in range(k))


def random_nft(
    rng: random.Random,
    n_states: int = 4,
    alphabet: Alphabet = BITS,
    max_out: int = 2,
    n_transitions: int = 7,
    n_initial: int = 1,
    n_final: int = 2,
) -> Nft:
    states = tuple(f"q{i}" for i in range(n_states))
    transitions = tuple(
        (
            rng.choice(states),
            rng.choice(alphabet.symbols),
            random_word(rng, alphabet, max_out),
            rng.choice(states),
        )
        for _ in range(n_transitions)
    )
    initial = tuple((rng.choice(states), random_word(rng, alphabet, max_out)) for _ in range(n_initial))
    final = tuple((rng.choice(states), random_word(rng, alphabet, max_out)) for _ in range(n_final))
    return Nft(alphabet, alphabet, frozenset(states), initial, final, transitions)


def random_nfa(
    rng: random.Random,
    n_states: int = 4,
    alphabet: Alphabet = BITS,
    n_transitions: int = 7,
) -> Nfa:
    states = tuple(f"s{i}" for i in range(n_states))
    transitions = frozenset(
        (rng.choice(states), rng.choice(alphabet.symbols), rng.choice(states))
        for _ in range(n_transitions)
    )
    initial = frozenset(rng.sample(states, rng.randint(1, 2)))
    final = frozenset(rng.sample(states, rng.randint(1, 2)))
    return Nfa(alphabet, frozenset(states), initial, final, transitions)


def renamed_nft(t: Nft, prefix: str = "r") -> Nft:
    ren = lambda q: prefix + str(q)
    return Nft(
        t.input_alphabet,
        t.output_alphabet,
        frozenset(ren(q) for q in t.states),
        tuple((ren(q), u) for (q, u) in t.initial),
        tuple((ren(q), u) for (q, u) in t.final),
        tuple((ren(p), a, u, ren(q)) for (p, a, u, q) in t.transitions),
    )

"""Programmatic builders for the bundled example machines and expressions.

The JSON/RTE files under ``transducers/fixtures`` are the serialized forms
of these builders; a test keeps them in sync.  All the increment machines
realize n -> n+1 on binary numerals, each in its own model and bit-order
convention.
"""
from __future__ import annotations

from .machines import (
    LEFT,
    Nft,
    RIGHT,
    RegisterTransducer,
    SequentialTransducer,
    TwoWayDft,
)
from .symbols import Alphabet, BACKSLASH, NEWLINE, PERCENT, LMARK, RMARK, Word, parse_word

BITS = Alphabet.of("0", "1")


def _w(text: str) -> Word:
    return parse_word(text)


def comment_stripper() -> SequentialTransducer:
    """Drop % comments up to the newline, keeping backslash-escaped characters.

    State 1 is plain text, state 2 has just read a backslash, state 3 is
    inside a comment.  States 1 and 3 accept (a trailing unterminated
    comment is still stripped); an input ending in a lone backslash is
    outside the domain.
    """
    sigma = Alphabet.of("x", "y", "z", BACKSLASH, PERCENT, NEWLINE)
    plain = [s for s in sigma if s not in (BACKSLASH, PERCENT)]
    not_newline = [s for s in sigma if s != NEWLINE]
    transitions = []
    for b in plain:
        transitions.append(("1", b, (b,), "1"))
    transitions.append(("1", BACKSLASH, (BACKSLASH,), "2"))
    transitions.append(("1", PERCENT, (), "3"))
    for a in sigma:
        transitions.append(("2", a, (a,), "1"))
    for c in not_newline:
        transitions.append(("3", c, (), "3"))
    transitions.append(("3", NEWLINE, (NEWLINE,), "1"))
    return SequentialTransducer(
        input_alphabet=sigma,
        output_alphabet=sigma,
        states=frozenset({"1", "2", "3"}),
        initial_state="1",
        initial_output=(),
        transitions=tuple(transitions),
        terminal=(("1", ()), ("3", ())),
    )


def increment_lsb_first() -> SequentialTransducer:
    """Binary increment, least significant bit first (leftmost).

    Flips leading 1s to 0s; the first 0 becomes 1; an all-ones input gains
    a final 1 through the terminal output of state 1.
    """
    return SequentialTransducer(
        input_alphabet=BITS,
        output_alphabet=BITS,
        states=frozenset({"1", "2"}),
        initial_state="1",
        initial_output=(),
        transitions=(
            ("1", "1", _w("0"), "1"),
            ("1", "0", _w("1"), "2"),
            ("2", "0", _w("0"), "2"),
            ("2", "1", _w("1"), "2"),
        ),
        terminal=(("1", _w("1")), ("2", ())),
    )


def increment_msb_first() -> Nft:
    """Binary increment, most significant bit first, as an unambiguous NFT.

    State 1 copies digits and guesses the last 0 (rewriting it to 1);
    state 2 turns the trailing 1s into 0s.  Inputs in 1+ enter through
    state 3, which prepends the carry digit.  The domain is all nonempty
    binary words.
    """
    return Nft(
        input_alphabet=BITS,
        output_alphabet=BITS,
        states=frozenset({"1", "2", "3"}),
        initial=(("1", ()), ("3", _w("1"))),
        final=(("2", ()),),
        transitions=(
            ("1", "0", _w("0"), "1"),
            ("1", "1", _w("1"), "1"),
            ("1", "0", _w("1"), "2"),
            ("2", "1", _w("0"), "2"),
            ("3", "1", _w("0"), "2"),
        ),
    )


def increment_twoway() -> TwoWayDft:
    """Binary increment, most significant bit first, as a two-way machine.

    Phase 1 (states 1-3) copies everything left of the last 0, re-reading
    each 1-block after bouncing off the 0 that ends it.  Phase 2 (states
    4-5) rewrites the last 0 to 1 and the trailing 1s to 0s.  Both
    endmarkers are emitted.  States 0a/0b reject the empty input so the
    domain matches the one-way machine.
    """
    return TwoWayDft(
        input_alphabet=BITS,
        output_alphabet=BITS,
        states=frozenset({"0", "0a", "0b", "1", "2", "3", "4", "5", "6"}),
        initial_state="0",
        final_states=frozenset({"6"}),
        transitions=(
            ("0", LMARK, (LMARK,), RIGHT, "0a"),
            ("0a", "0", (), LEFT, "0b"),
            ("0a", "1", (), LEFT, "0b"),
            ("0b", LMARK, (), RIGHT, "1"),
            ("1", "1", (), RIGHT, "1"),
            ("1", "0", (), LEFT, "2"),
            ("2", "1", (), LEFT, "2"),
            ("2", "0", _w("0"), RIGHT, "3"),
            ("2", LMARK, (), RIGHT, "3"),
            ("3", "1", _w("1"), RIGHT, "3"),
            ("3", "0", (), RIGHT, "1"),
            ("1", RMARK, (), LEFT, "4"),
            ("4", "1", (), LEFT, "4"),
            ("4", "0", _w("1"), RIGHT, "5"),
            ("4", LMARK, _w("1"), RIGHT, "5"),
            ("5", "1", _w("0"), RIGHT, "5"),
            ("5", RMARK, (RMARK,), RIGHT, "6"),
        ),
    )


def increment_register_copyful() -> RegisterTransducer:
    """Binary increment with two registers and copyful updates.

    X keeps the input read so far, Y its increment; on a 0 the update
    Y:=X1 ; X:=X0 duplicates X, which is what ``validate_copyless`` flags.
    """
    X = ("reg", "X")
    Y = ("reg", "Y")
    lit = lambda s: ("lit", s)
    return RegisterTransducer(
        input_alphabet=BITS,
        output_alphabet=BITS,
        states=frozenset({"1"}),
        registers=("X", "Y"),
        initial_state="1",
        initial_valuation=(("X", ()), ("Y", _w("1"))),
        transitions=(
            ("1", "1", "1", (("X", (X, lit("1"))), ("Y", (Y, lit("0"))))),
            ("1", "0", "1", (("Y", (X, lit("1"))), ("X", (X, lit("0"))))),
        ),
        outputs=(("1", (Y,)),),
    )


def increment_sst() -> RegisterTransducer:
    """Binary increment as a copyless streaming string transducer.

    Z holds the input up to and excluding the last 0, X the trailing block
    of 1s, Y a block of 0s of the same length; the output is Z 1 Y.
    """
    X = ("reg", "X")
    Y = ("reg", "Y")
    Z = ("reg", "Z")
    lit = lambda s: ("lit", s)
    out_expr = (Z, lit("1"), Y)
    return RegisterTransducer(
        input_alphabet=BITS,
        output_alphabet=BITS,
        states=frozenset({"1", "2"}),
        registers=("X", "Y", "Z"),
        initial_state="1",
        initial_valuation=(("X", ()), ("Y", ()), ("Z", ())),
        transitions=(
            ("1", "1", "1", (("X", (X, lit("1"))), ("Y", (Y, lit("0"))), ("Z", (Z,)))),
            ("1", "0", "2", (("Z", (X,)), ("X", ()), ("Y", ()))),
            ("2", "1", "2", (("X", (X, lit("1"))), ("Y", (Y, lit("0"))), ("Z", (Z,)))),
            ("2", "0", "2", (("Z", (Z, lit("0"), X)), ("X", ()), ("Y", ()))),
        ),
        outputs=(("1", out_expr), ("2", out_expr)),
    )


INCREMENT_RTE = """\
# Binary increment, most significant bit first.
let copy = (('0'|'0') + ('1'|'1'))* ;
let increment0 = copy . ('0'|'1') . ('1'|'0')* ;
let increment1 = (''|'1') . ('1'|'0')* ;
increment0 + increment1
"""

AMBIGUOUS_RTE = """\
# Ambiguous concatenation: the split before the trailing 1-block is free.
let copy = (('0'|'0') + ('1'|'1'))* ;
copy . ('1'|'0')*
"""

DUPLICATE_RTE = """\
# w maps to w#w via a two-pass read of the input.
let copy = (('0'|'0') + ('1'|'1'))* ;
(copy . (''|'#')) <*> copy
"""

EXCHANGE_RTE = """\
# u#v maps to vu: the first pass outputs v, the second pass outputs u.
let copy = (('0'|'0') + ('1'|'1'))* ;
let erase = (('0'|'') + ('1'|''))* ;
(erase . ('#'|'') . copy) <*> (copy . ('#'|'') . erase)
"""

HCHAIN_RTE = """\
# u1#u2#...un# maps to u2u1#u3u2#...unu(n-1)#, as a two-stage pipeline:
# the first stage doubles every #-terminated block, the second drops the
# outermost half-blocks and swaps the remaining consecutive pairs.
let copy = (('0'|'0') + ('1'|'1'))* ;
let erase = (('0'|'') + ('1'|''))* ;
let exchange = (erase . ('#'|'') . copy) <*> (copy . ('#'|'') . erase) ;
let dupblocks = (dup[01,{hash}] . ('#'|'#'))* ;
let swap = erase . ('#'|'') . (exchange . ('#'|'#'))* . erase . ('#'|'') ;
swap@dupblocks
"""

CHAIN2H_RTE = """\
# The same pairwise function via two-chained iteration over K = {0,1}*#.
let copy = (('0'|'0') + ('1'|'1'))* ;
let erase = (('0'|'') + ('1'|''))* ;
let exchange = (erase . ('#'|'') . copy) <*> (copy . ('#'|'') . erase) ;
chain2[('0'+'1')*.'#']{ exchange . ('#'|'#') }
"""

EXPRESSION_TEXTS = {
    "increment.rte": INCREMENT_RTE,
    "ambiguous.rte": AMBIGUOUS_RTE,
    "duplicate.rte": DUPLICATE_RTE,
    "exchange.rte": EXCHANGE_RTE,
    "hchain.rte": HCHAIN_RTE,
    "chain2h.rte": CHAIN2H_RTE,
}


def machine_builders() -> dict:
    return {
        "fig1.json": comment_stripper,
        "fig2left.json": increment_lsb_first,
        "fig2right.json": increment_msb_first,
        "fig3.json": increment_twoway,
        "fig4.json": increment_register_copyful,
        "fig5.json": increment_sst,
    }

import pytest

from transducers.errors import ForeignSymbol
from transducers.symbols import (
    Alphabet,
    BACKSLASH,
    HASH,
    NEWLINE,
    PERCENT,
    display_word,
    parse_word,
    reverse_word,
    word_over,
)

from helpers import BITS, words_up_to


def test_parse_word_plain():
    assert parse_word("1011") == ("1", "0", "1", "1")
    assert parse_word("") == ()


def test_parse_word_named_tokens():
    assert parse_word("x{bs}{pct}y{nl}") == ("x", BACKSLASH, PERCENT, "y", NEWLINE)
    assert parse_word("{hash}") == (HASH,)
    assert parse_word("#") == (HASH,)
    assert parse_word("\\") == (BACKSLASH,)


def test_parse_word_arbitrary_named_token():
    assert parse_word("{({1,3},1)}") == ("({1,3},1)",)


def test_parse_word_unterminated():
    with pytest.raises(ValueError):
        parse_word("{bs")
    with pytest.raises(ValueError):
        parse_word("a}b")


def test_display_round_trip():
    for text in ["", "1011", "x{bs}{pct}y{nl}", "a#b", "{({1,2},0)}0"]:
        w = parse_word(text)
        assert parse_word(display_word(w)) == w


def test_reverse_word():
    assert reverse_word(parse_word("1011")) == parse_word("1101")
    assert reverse_word(()) == ()


def test_reverse_is_involution():
    for w in words_up_to(BITS, 10):
        assert reverse_word(reverse_word(w)) == w


def test_alphabet_invariants():
    with pytest.raises(ValueError):
        Alphabet(())
    with pytest.raises(ValueError):
        Alphabet(("0", "0"))
    a = Alphabet.of("0", "1")
    assert "0" in a and "2" not in a
    assert a.index("1") == 1


def test_word_over_rejects_foreign_symbols():
    with pytest.raises(ForeignSymbol):
        word_over(BITS, "102")


def test_alphabet_order_is_declaration_order():
    a = Alphabet.of("b", "a")
    assert a.sort_key(("b",)) < a.sort_key(("a",))

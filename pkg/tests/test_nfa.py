import random

import pytest

from transducers.errors import AlphabetMismatch
from transducers.nfa import (
    Nfa,
    count_accepting_runs,
    dfa_equiv,
    enumerate_words,
    is_deterministic_complete,
    nfa_accepts,
    nfa_ambiguous,
    nfa_concat,
    nfa_determinize,
    nfa_intersection,
    nfa_remove_epsilon,
    nfa_star,
    nfa_trim,
    nfa_union,
    nfa_universal,
    nfa_word,
)
from transducers.regexes import parse_regex, glushkov, regex_to_nfa, regex_to_text
from transducers.symbols import Alphabet, parse_word

from helpers import BITS, naive_run_count, random_nfa, words_up_to


def ones_star():
    return regex_to_nfa("'1'*", BITS)


def test_accepts_ones_star():
    a = ones_star()
    assert nfa_accepts(a, parse_word("111"))
    assert not nfa_accepts(a, parse_word("101"))
    assert nfa_accepts(a, ())


def test_accepts_increment_domain():
    a = regex_to_nfa("('0'+'1')*.'0'.'1'*", BITS)
    assert nfa_accepts(a, parse_word("1011"))
    assert not nfa_accepts(a, parse_word("111"))


def test_trim_removes_unreachable_state():
    a = Nfa.make(
        BITS,
        states=["i", "f", "orphan"],
        initial=["i"],
        final=["f"],
        transitions=[("i", "1", "f")],
    )
    trimmed = nfa_trim(a)
    assert len(trimmed.states) == len(a.states) - 1
    assert dfa_equiv(a, trimmed).equivalent


def test_trim_is_fixpoint_on_trim_automata():
    a = nfa_trim(regex_to_nfa("('0'+'1')*.'0'", BITS))
    assert nfa_trim(a) == a


def test_trim_removes_dead_sink():
    a = Nfa.make(
        BITS,
        initial=["i"],
        final=["f"],
        transitions=[("i", "1", "f"), ("i", "0", "sink"), ("sink", "0", "sink")],
    )
    trimmed = nfa_trim(a)
    assert "sink" not in trimmed.states
    assert dfa_equiv(a, trimmed).equivalent


def test_trim_preserves_language_random():
    rng = random.Random(7)
    for _ in range(60):
        a = random_nfa(rng)
        assert dfa_equiv(a, nfa_trim(a)).equivalent


def test_determinize_is_complete_and_equivalent():
    rng = random.Random(11)
    for _ in range(40):
        a = random_nfa(rng)
        d = nfa_determinize(a)
        assert is_deterministic_complete(d)
        assert dfa_equiv(a, d).equivalent


def test_determinize_dfa_input_stays_equivalent():
    d0 = nfa_determinize(ones_star())
    d1 = nfa_determinize(d0)
    assert is_deterministic_complete(d1)
    assert dfa_equiv(d0, d1).equivalent


def test_determinize_subset_names_are_canonical():
    a = Nfa.make(
        BITS,
        initial=["A"],
        final=["B"],
        transitions=[("A", "1", "A"), ("A", "1", "B")],
    )
    d = nfa_determinize(a)
    assert ("A",) in d.states
    assert ("A", "B") in d.states
    assert () in d.states  # complete: the empty subset is the sink


def test_determinize_fig2right_domain(fig2right):
    d = nfa_determinize(fig2right.input_projection())
    assert is_deterministic_complete(d)
    ref = regex_to_nfa("('0'+'1').('0'+'1')*", BITS)
    for w in words_up_to(BITS, 6):
        assert nfa_accepts(d, w) == nfa_accepts(ref, w)
    assert dfa_equiv(d, ref).equivalent


def test_equiv_self():
    a = regex_to_nfa("('0'+'1')*.'0'.'1'*", BITS)
    assert dfa_equiv(a, a).equivalent


def test_equiv_counterexample_is_shortest():
    one_star = ones_star()
    one_plus = regex_to_nfa("'1'.'1'*", BITS)
    r = dfa_equiv(one_star, one_plus)
    assert not r.equivalent
    assert r.counterexample == ()


def test_equiv_counterexample_in_exactly_one():
    rng = random.Random(13)
    checked = 0
    for _ in range(80):
        a, b = random_nfa(rng), random_nfa(rng)
        r = dfa_equiv(a, b)
        if not r.equivalent:
            checked += 1
            assert nfa_accepts(a, r.counterexample) != nfa_accepts(b, r.counterexample)
    assert checked > 10


def test_equiv_alphabet_mismatch():
    with pytest.raises(AlphabetMismatch):
        dfa_equiv(ones_star(), nfa_universal(Alphabet.of("a", "b")))


def test_ambiguous_deterministic_automaton():
    assert nfa_ambiguous(nfa_determinize(ones_star())).unambiguous


def test_ambiguous_two_parallel_paths():
    a = Nfa.make(
        Alphabet.of("a"),
        initial=["i"],
        final=["f"],
        transitions=[("i", "a", "m1"), ("i", "a", "m2"), ("m1", "a", "f"), ("m2", "a", "f")],
    )
    r = nfa_ambiguous(a)
    assert not r.unambiguous
    assert r.witness == ("a", "a")
    assert naive_run_count(a, r.witness) >= 2


def test_ambiguous_single_letter_witness():
    # two single-letter paths into the accepting state
    a = Nfa.make(
        Alphabet.of("a"),
        initial=["A", "B"],
        final=["F"],
        transitions=[("A", "a", "F"), ("B", "a", "F")],
    )
    r = nfa_ambiguous(a)
    assert not r.unambiguous
    assert r.witness == ("a",)


def test_ambiguous_from_glued_concatenation():
    # the concatenation underlying copy . (1|0)* admits two parses of "1"
    copy_dom = nfa_determinize(nfa_universal(BITS))
    tail_dom = nfa_determinize(ones_star())
    r = nfa_ambiguous(nfa_concat(nfa_trim(copy_dom), nfa_trim(tail_dom)))
    assert not r.unambiguous
    assert r.witness == ("1",)


def test_ambiguity_agrees_with_run_counting():
    rng = random.Random(17)
    for _ in range(100):
        a = random_nfa(rng)
        r = nfa_ambiguous(a)
        if r.unambiguous:
            for w in words_up_to(BITS, 8):
                assert naive_run_count(a, w) <= 1
        else:
            assert naive_run_count(a, r.witness) >= 2


def test_count_accepting_runs_matches_naive():
    rng = random.Random(19)
    for _ in range(30):
        a = random_nfa(rng)
        for w in words_up_to(BITS, 5):
            assert count_accepting_runs(a, w) == naive_run_count(a, w)


def test_concat_union_star_languages():
    a = regex_to_nfa("'0'.'1'", BITS)
    b = ones_star()
    assert dfa_equiv(nfa_concat(a, b), regex_to_nfa("'0'.'1'.'1'*", BITS)).equivalent
    assert dfa_equiv(nfa_union(a, b), regex_to_nfa("('0'.'1')+'1'*", BITS)).equivalent
    assert dfa_equiv(nfa_star(a), regex_to_nfa("('0'.'1')*", BITS)).equivalent


def test_remove_epsilon():
    a = ones_star()
    b = nfa_remove_epsilon(a)
    assert not nfa_accepts(b, ())
    assert dfa_equiv(b, regex_to_nfa("'1'.'1'*", BITS)).equivalent


def test_intersection():
    a = regex_to_nfa("('0'+'1')*.'0'", BITS)
    b = regex_to_nfa("'1'.('0'+'1')*", BITS)
    got = nfa_intersection(a, b)
    ref = regex_to_nfa("'1'.('0'+'1')*.'0'", BITS)
    assert dfa_equiv(got, ref).equivalent


def test_word_automaton():
    a = nfa_word(BITS, parse_word("101"))
    assert nfa_accepts(a, parse_word("101"))
    assert not nfa_accepts(a, parse_word("10"))


def test_enumerate_words_order():
    ws = list(enumerate_words(BITS, 2))
    assert ws == [(), ("0",), ("1",), ("0", "0"), ("0", "1"), ("1", "0"), ("1", "1")]


def test_regex_parse_and_print_round_trip():
    for text in ["'1'*", "('0'+'1')*.'0'.'1'*", "('0'+'1')*.'#'", "''+'0'"]:
        e = parse_regex(text)
        again = parse_regex(regex_to_text(e))
        assert dfa_equiv(glushkov(e), glushkov(again)).equivalent


def test_glushkov_is_epsilon_free_and_correct():
    a = regex_to_nfa("('0'.'1')*+'1'", BITS)
    for w in words_up_to(BITS, 6):
        expected = _ref_membership(w)
        assert nfa_accepts(a, w) == expected


def _ref_membership(w):
    s = "".join(w)
    if s == "1":
        return True
    if len(s) % 2:
        return False
    return all(s[i : i + 2] == "01" for i in range(0, len(s), 2))

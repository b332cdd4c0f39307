import random

import pytest

from transducers.analysis import (
    DelayConfig,
    bruteforce_functional,
    check_functional,
    delay_config,
    equiv_functional,
    nft_disjoint_union,
)
from transducers.errors import NotFunctionalInput
from transducers.machines import Nft, eval_nft
from transducers.symbols import Alphabet, parse_word

from helpers import BITS, random_nft, renamed_nft, words_up_to

W = parse_word


def parallel_outputs_machine():
    return Nft(
        Alphabet.of("a"),
        BITS,
        frozenset({"i", "f"}),
        (("i", ()),),
        (("f", ()),),
        (("i", "a", W("0"), "f"), ("i", "a", W("1"), "f")),
    )


def state1_final_mutant(fig2right):
    return Nft(
        fig2right.input_alphabet,
        fig2right.output_alphabet,
        fig2right.states,
        fig2right.initial,
        fig2right.final + (("1", ()),),
        fig2right.transitions,
    )


def test_fig2right_is_functional(fig2right):
    assert check_functional(fig2right).functional


def test_mutant_is_not_functional_with_verified_witness(fig2right):
    mutant = state1_final_mutant(fig2right)
    v = check_functional(mutant)
    assert not v.functional
    outs = eval_nft(mutant, v.witness)
    assert v.output1 in outs and v.output2 in outs and v.output1 != v.output2
    # the two-run disagreement is visible on "111" as well
    assert eval_nft(mutant, W("111")) == {W("1000"), W("111")}


def test_single_transition_machine_functional():
    t = Nft(
        Alphabet.of("a"),
        BITS,
        frozenset({"i", "f"}),
        (("i", ()),),
        (("f", ()),),
        (("i", "a", W("0"), "f"),),
    )
    assert check_functional(t).functional


def test_delay_config():
    cfg = DelayConfig(state_count=3, max_output_len=2)
    assert cfg.delay_bound == 36


def test_delay_config_from_machine(fig2right):
    cfg = delay_config(fig2right)
    assert cfg.state_count == 3
    assert cfg.max_output_len == 1
    assert cfg.delay_bound == 18


def test_bruteforce_parallel_machine():
    v = bruteforce_functional(parallel_outputs_machine(), 1)
    assert not v.functional
    assert v.witness == ("a",)
    assert {v.output1, v.output2} == {W("0"), W("1")}


def test_bruteforce_fig2right(fig2right):
    assert bruteforce_functional(fig2right, 10).functional


def test_bruteforce_empty_domain_machine():
    t = Nft(BITS, BITS, frozenset({"i"}), (("i", ()),), (), ())
    assert bruteforce_functional(t, 6).functional


def test_agreement_on_random_machines():
    rng = random.Random(20250810)
    disagreements = 0
    nonfunctional_seen = 0
    for _ in range(200):
        t = random_nft(rng, n_states=4, max_out=2)
        exact = check_functional(t)
        brute = bruteforce_functional(t, 8)
        if not brute.functional:
            nonfunctional_seen += 1
            if exact.functional:
                disagreements += 1
        if not exact.functional:
            outs = eval_nft(t, exact.witness)
            assert len(outs) >= 2
            assert exact.output1 in outs and exact.output2 in outs
    assert disagreements == 0
    assert nonfunctional_seen > 20  # the generator reaches interesting cases


def test_equiv_with_renamed_copy(fig2right):
    assert equiv_functional(fig2right, renamed_nft(fig2right)).equivalent


def test_equiv_detects_changed_final_output(fig2right):
    mut = Nft(
        fig2right.input_alphabet,
        fig2right.output_alphabet,
        fig2right.states,
        fig2right.initial,
        (("2", W("11")),),
        fig2right.transitions,
    )
    v = equiv_functional(fig2right, mut)
    assert v.kind == v.OUTPUT
    assert v.word == W("0")
    assert (v.output1, v.output2) == (W("1"), W("111"))


def test_equiv_domain_difference(fig2right):
    ones_only = Nft(
        fig2right.input_alphabet,
        fig2right.output_alphabet,
        frozenset({"2", "3"}),
        (("3", W("1")),),
        (("2", ()),),
        (("3", "1", W("0"), "2"), ("2", "1", W("0"), "2")),
    )
    v = equiv_functional(fig2right, ones_only)
    assert v.kind == v.DOMAIN_ONLY
    assert v.word == W("0")


def test_equiv_rejects_nonfunctional_input(fig2right):
    with pytest.raises(NotFunctionalInput):
        equiv_functional(parallel_outputs_machine(), parallel_outputs_machine())


def test_equiv_is_reflexive_on_fixtures(fig2right, fig2left):
    from transducers.machines import sequential_to_nft

    for t in (fig2right, sequential_to_nft(fig2left)):
        assert equiv_functional(t, t).equivalent


def test_equiv_verdict_kind_is_symmetric(fig2right):
    rng = random.Random(4)
    pairs = []
    while len(pairs) < 12:
        t = random_nft(rng, n_states=3, max_out=1)
        if check_functional(t).functional:
            pairs.append(t)
    for a, b in zip(pairs[::2], pairs[1::2]):
        ab = equiv_functional(a, b)
        ba = equiv_functional(b, a)
        assert ab.equivalent == ba.equivalent


def test_disjoint_union_outputs():
    a = parallel_outputs_machine()
    empty = Nft(Alphabet.of("a"), BITS, frozenset({"z"}), (("z", ()),), (), ())
    u = nft_disjoint_union(a, empty)
    for w in words_up_to(Alphabet.of("a"), 8):
        assert eval_nft(u, w) == eval_nft(a, w)


def test_disjoint_union_of_fixture_with_itself_is_functional(fig2right):
    u = nft_disjoint_union(fig2right, fig2right)
    assert check_functional(u).functional
    for w in words_up_to(BITS, 6):
        assert eval_nft(u, w) == eval_nft(fig2right, w)


def test_disjoint_union_parallel_machines_not_functional():
    alpha = Alphabet.of("a")
    zero = Nft(alpha, BITS, frozenset({"i", "f"}), (("i", ()),), (("f", ()),), (("i", "a", W("0"), "f"),))
    one = Nft(alpha, BITS, frozenset({"i", "f"}), (("i", ()),), (("f", ()),), (("i", "a", W("1"), "f"),))
    v = check_functional(nft_disjoint_union(zero, one))
    assert not v.functional
    assert v.witness == ("a",)


def test_check_functional_handles_delay_growth():
    # Balanced loops with different output rates force the delay to grow;
    # exits exist at every length, so a residual mismatch is caught.
    t = Nft(
        Alphabet.of("a"),
        BITS,
        frozenset({"i", "p", "q", "f"}),
        (("i", ()),),
        (("f", ()),),
        (
            ("i", "a", (), "p"),
            ("i", "a", (), "q"),
            ("p", "a", W("00"), "p"),
            ("q", "a", W("0"), "q"),
            ("p", "a", (), "f"),
            ("q", "a", (), "f"),
        ),
    )
    v = check_functional(t)
    assert not v.functional
    outs = eval_nft(t, v.witness)
    assert v.output1 in outs and v.output2 in outs and v.output1 != v.output2

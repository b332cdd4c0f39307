import itertools
import random

import pytest

from transducers.errors import AmbiguousK, BudgetExceeded, InexactDomain, RteSyntaxError, UnknownName
from transducers.machines import AMBIGUOUS
from transducers.nfa import dfa_equiv, nfa_accepts
from transducers.regexes import regex_to_nfa
from transducers.rte import (
    Atom,
    Cat,
    Chain2,
    Compose,
    Duplicate,
    Evaluator,
    Hadamard,
    RChain2,
    RStar,
    Reverse,
    Star,
    Sum,
    check_unambiguous,
    duplicate_expr,
    eval_rte,
    input_symbols,
    rewrite,
    rte_domain,
    stdlib_expr,
)
from transducers.rte_parser import parse_rte
from transducers.bundled import (
    AMBIGUOUS_RTE,
    CHAIN2H_RTE,
    DUPLICATE_RTE,
    EXCHANGE_RTE,
    HCHAIN_RTE,
    INCREMENT_RTE,
)
from transducers.symbols import Alphabet, HASH, parse_word, reverse_word

from helpers import BITS, increment_msb_first_oracle, words_up_to

W = parse_word
TRI = Alphabet.of("0", "1", "#")


@pytest.fixture(scope="module")
def increment():
    return parse_rte(INCREMENT_RTE)


@pytest.fixture(scope="module")
def ambiguous():
    return parse_rte(AMBIGUOUS_RTE)


@pytest.fixture(scope="module")
def duplicate():
    return parse_rte(DUPLICATE_RTE)


@pytest.fixture(scope="module")
def exchange():
    return parse_rte(EXCHANGE_RTE)


@pytest.fixture(scope="module")
def hchain():
    return parse_rte(HCHAIN_RTE)


@pytest.fixture(scope="module")
def chain2h():
    return parse_rte(CHAIN2H_RTE)


# -- parsing -----------------------------------------------------------------


def test_parse_star_of_atom():
    e = parse_rte("('1'|'0')*")
    assert e == Star(Atom(W("1"), W("0")))


def test_parse_copy_shape():
    e = parse_rte("(('0'|'0')+('1'|'1'))*")
    assert e == Star(Sum(Atom(W("0"), W("0")), Atom(W("1"), W("1"))))


def test_parse_let_bindings_build_increment0():
    e = parse_rte(
        "let copy = (('0'|'0')+('1'|'1'))* ;\ncopy . ('0'|'1') . ('1'|'0')*"
    )
    copy = Star(Sum(Atom(W("0"), W("0")), Atom(W("1"), W("1"))))
    assert e == Cat(Cat(copy, Atom(W("0"), W("1"))), Star(Atom(W("1"), W("0"))))


def test_parse_operators():
    assert isinstance(parse_rte("('a'|'a') <*> ('a'|'b')"), Hadamard)
    assert isinstance(parse_rte("('a'|'a')^r*"), RStar)
    assert isinstance(parse_rte("rev[01]"), Reverse)
    assert parse_rte("dup[01,{hash}]") == Duplicate(BITS, HASH)
    assert isinstance(parse_rte("let f = ('a'|'a'); let g = ('a'|'a'); f@g"), Compose)
    assert isinstance(parse_rte("chain2['0'*]{ ('0'|'0') }"), Chain2)
    assert isinstance(parse_rte("rchain2['0'*]{ ('0'|'0') }"), RChain2)


def test_parse_comments_and_hash_atom():
    e = parse_rte("# leading comment\n('#'|'#') # trailing\n")
    assert e == Atom((HASH,), (HASH,))


def test_parse_errors_carry_positions():
    with pytest.raises(RteSyntaxError) as err:
        parse_rte("let x = ;")
    assert err.value.line == 1
    with pytest.raises(RteSyntaxError):
        parse_rte("('0'|'1'")
    with pytest.raises(RteSyntaxError):
        parse_rte("nosuchname")


# -- evaluation --------------------------------------------------------------


def test_increment_golden_values(increment):
    assert eval_rte(increment, W("1011")).output == W("1100")
    assert eval_rte(increment, W("111")).output == W("1000")
    assert eval_rte(increment, ()).output == W("1")


def test_increment1_all_ones_branch():
    inc1 = parse_rte("(''|'1') . ('1'|'0')*")
    assert eval_rte(inc1, W("111")).output == W("1000")
    assert not eval_rte(inc1, W("10")).in_domain()


def test_increment_matches_oracle(increment):
    ev = Evaluator(increment)
    for w in words_up_to(BITS, 10, min_len=1):
        res = sorted(ev.eval_word(increment, w))
        assert res == [increment_msb_first_oracle(w)]


def test_ambiguous_three_outputs(ambiguous):
    out = eval_rte(ambiguous, W("1011"))
    assert out.kind == AMBIGUOUS
    assert set(out.outputs) == {W("1000"), W("1010"), W("1011")}


def test_duplicate_and_exchange(duplicate, exchange):
    assert eval_rte(duplicate, W("10")).output == W("10#10")
    assert eval_rte(exchange, W("01#1")).output == W("101")


def test_chain2_golden(chain2h):
    assert eval_rte(chain2h, W("01#1#00#")).output == W("101#001#")


def test_chain2_two_factor_boundary(chain2h, exchange):
    # with exactly two blocks the chain is a single pair application
    for u1 in ["", "0", "11"]:
        for u2 in ["", "1", "01"]:
            w = W(u1 + "#" + u2 + "#")
            direct = eval_rte(chain2h, w)
            f_input = W(u1 + "#" + u2)
            expected = eval_rte(exchange, f_input).output + (HASH,)
            assert direct.output == expected


def test_chain2_needs_two_blocks(chain2h):
    assert not eval_rte(chain2h, W("01#")).in_domain()
    assert not eval_rte(chain2h, ()).in_domain()


def test_rchain2_reverses_block_order(chain2h):
    rc = RChain2(chain2h.k, chain2h.inner)
    assert eval_rte(rc, W("01#1#00#")).output == W("001#101#")


def test_reverse_node_is_reverse(increment):
    rev = Reverse(BITS)
    for w in words_up_to(BITS, 8):
        assert eval_rte(rev, w).output == reverse_word(w)


def test_multi_parse_consistent_flag():
    # two parses, one output
    e = Sum(Atom(W("a"), W("x")), Atom(W("a"), W("x")))
    out = eval_rte(e, W("a"))
    assert out.is_unique() and out.ambiguous_but_consistent


def test_hadamard_concatenates_unique_outputs(duplicate):
    left = Cat(stdlib_expr("copy", BITS), Atom((), (HASH,)))
    right = stdlib_expr("copy", BITS)
    had = Hadamard(left, right)
    for w in words_up_to(BITS, 6):
        l = eval_rte(left, w)
        r = eval_rte(right, w)
        h = eval_rte(had, w)
        assert h.output == l.output + r.output


def test_budget_exceeded():
    # star over single letters with epsilon outputs: every word has one
    # factorization, so force ambiguity via a two-way split instead
    blow = Star(Sum(Atom(W("1"), ()), Cat(Atom(W("1"), ()), Atom(W("1"), ()))))
    with pytest.raises(BudgetExceeded):
        eval_rte(blow, ("1",) * 40, budget=100)


def test_star_empty_word_has_empty_factorization():
    e = Star(Atom(W("1"), W("0")))
    out = eval_rte(e, ())
    assert out.output == () and not out.ambiguous_but_consistent


# -- domains -------------------------------------------------------------


def test_increment0_domain_exact():
    e = parse_rte("let copy = (('0'|'0')+('1'|'1'))* ;\ncopy . ('0'|'1') . ('1'|'0')*")
    dr = rte_domain(e)
    assert dr.exact
    assert dfa_equiv(dr.nfa, regex_to_nfa("('0'+'1')*.'0'.'1'*", dr.nfa.alphabet)).equivalent


def test_reverse_domain_universal():
    dr = rte_domain(Reverse(BITS))
    assert dr.exact
    assert dfa_equiv(dr.nfa, regex_to_nfa("('0'+'1')*", BITS)).equivalent


def test_compose_domain_over_approximates(exchange):
    dup = duplicate_expr(BITS)
    comp = Compose(exchange, dup)
    dr = rte_domain(comp)
    assert not dr.exact
    ev = Evaluator(comp)
    for w in words_up_to(BITS, 8):
        assert nfa_accepts(dr.nfa, w)  # over-approximation contains the domain
        assert ev.eval_word(comp, w)  # and here the approximation is tight


def test_chain2_domain_requires_two_blocks(chain2h):
    dr = rte_domain(chain2h)
    assert dr.exact
    dom_ref = regex_to_nfa("('0'+'1')*.'#'.('0'+'1')*.'#'.(('0'+'1')*.'#')*", dr.nfa.alphabet)
    assert dfa_equiv(dr.nfa, dom_ref).equivalent


# -- unambiguity ---------------------------------------------------------


def test_increment_is_unambiguous(increment):
    assert check_unambiguous(increment).unambiguous


def test_ambiguous_fixture_witness(ambiguous):
    r = check_unambiguous(ambiguous)
    assert not r.unambiguous
    assert r.witness == W("1")
    assert r.parse1 != r.parse2


def test_atoms_are_unambiguous():
    assert check_unambiguous(Atom(W("01"), W("1"))).unambiguous


def test_star_with_epsilon_domain_rejected():
    e = Star(Sum(Atom((), W("1")), Atom(W("0"), W("0"))))
    r = check_unambiguous(e)
    assert not r.unambiguous


def test_sum_overlap_detected():
    e = Sum(Atom(W("a"), W("x")), Atom(W("a"), W("y")))
    r = check_unambiguous(e)
    assert not r.unambiguous
    assert r.witness == W("a")


def test_unambiguous_expressions_never_ambiguous(increment, duplicate, exchange):
    for e, alphabet, max_len in (
        (increment, BITS, 8),
        (duplicate, BITS, 7),
        (exchange, TRI, 6),
    ):
        assert check_unambiguous(e).unambiguous
        ev = Evaluator(e)
        for w in words_up_to(alphabet, max_len):
            assert len(ev.eval_word(e, w)) <= 1


def test_inexact_domain_raises(exchange):
    e = Star(Compose(exchange, duplicate_expr(BITS)))
    with pytest.raises(InexactDomain):
        check_unambiguous(e)


def test_compose_at_top_level_is_fine(hchain):
    assert check_unambiguous(hchain).unambiguous


# -- standard library ------------------------------------------------------


def test_stdlib_copy_erase():
    copy = stdlib_expr("copy", BITS)
    erase = stdlib_expr("erase", BITS)
    assert eval_rte(copy, W("1011")).output == W("1011")
    assert eval_rte(erase, W("1011")).output == ()


def test_stdlib_duplicate_matches_primitive():
    built = stdlib_expr("duplicate", BITS)
    prim = Duplicate(BITS, HASH)
    for w in words_up_to(BITS, 6):
        assert eval_rte(built, w) == eval_rte(prim, w)


def test_stdlib_gk_marks_blocks():
    gk = stdlib_expr("gK", BITS, {"regex": "('0'+'1')*.'#'"})
    assert eval_rte(gk, W("01#1#")).output == W("01##1##")


def test_stdlib_fk_identity_on_domain():
    fk = stdlib_expr("fK", BITS, {"regex": "('0'+'1')*.'#'"})
    assert eval_rte(fk, W("011#")).output == W("011#")
    assert not eval_rte(fk, W("011")).in_domain()


def test_stdlib_fk_rejects_ambiguous_regex():
    with pytest.raises(AmbiguousK):
        stdlib_expr("fK", BITS, {"regex": "'0'*.'0'*"})


def test_stdlib_unknown_name():
    with pytest.raises(UnknownName):
        stdlib_expr("mystery", BITS)


def test_stdlib_pair_applier(exchange):
    # blocks are #-terminated binary words, doubled and marked with a
    # fresh "$"; the applier drops the outer half-blocks and hands f the
    # concatenation of each interior pair
    h = stdlib_expr(
        "pairApplier",
        TRI,
        {"f": Cat(exchange, Atom((HASH,), (HASH,))), "separator": "$"},
    )
    w = W("01#$01#$1#$1#$00#$00#$")
    assert eval_rte(h, w).output == W("101#001#")


# -- rewrites ----------------------------------------------------------------


def test_hadamard_elim_on_duplicate_definition():
    e = duplicate_expr(BITS)
    r = rewrite(e, "hadamard-elim")
    assert _count_nodes(r, Hadamard) == 0
    ev_e, ev_r = Evaluator(e), Evaluator(r)
    for w in words_up_to(BITS, 8):
        assert ev_e.eval_word(e, w) == ev_r.eval_word(r, w)


def test_hadamard_elim_picks_fresh_separator(exchange):
    # the expression already uses '#', so the rewrite must pick another
    r = rewrite(exchange, "hadamard-elim")
    assert _count_nodes(r, Hadamard) == 0
    dups = _collect_nodes(r, Duplicate)
    assert dups and all(d.separator != HASH for d in dups)
    ev_e, ev_r = Evaluator(exchange), Evaluator(r)
    for w in words_up_to(TRI, 6):
        assert ev_e.eval_word(exchange, w) == ev_r.eval_word(r, w)


def test_rstar_elim_realizes_reverse():
    e = RStar(Sum(Atom(W("0"), W("0")), Atom(W("1"), W("1"))))
    r = rewrite(e, "rstar-elim")
    assert _count_nodes(r, RStar) == 0
    ev = Evaluator(r)
    for w in words_up_to(BITS, 10):
        assert set(ev.eval_word(r, w)) == {reverse_word(w)}


def test_chain2_elim_matches_direct_evaluation(chain2h):
    r = rewrite(chain2h, "chain2-elim")
    assert _count_nodes(r, Chain2) == 0
    ev_d, ev_r = Evaluator(chain2h), Evaluator(r)
    for combo in _factor_corpus(max_factors=4, max_len=2):
        w = tuple(s for u in combo for s in u + (HASH,))
        assert ev_d.eval_word(chain2h, w) == ev_r.eval_word(r, w)


def test_rchain2_elim_matches_direct_evaluation(chain2h):
    rc = RChain2(chain2h.k, chain2h.inner)
    r = rewrite(rc, "rchain2-elim")
    assert _count_nodes(r, RChain2) == 0
    ev_d, ev_r = Evaluator(rc), Evaluator(r)
    for combo in _factor_corpus(max_factors=4, max_len=2):
        w = tuple(s for u in combo for s in u + (HASH,))
        assert ev_d.eval_word(rc, w) == ev_r.eval_word(r, w)
    for w in words_up_to(TRI, 6):
        assert ev_d.eval_word(rc, w) == ev_r.eval_word(r, w)


def test_chain2_elim_preserves_domain_on_all_short_words(chain2h):
    r = rewrite(chain2h, "chain2-elim")
    ev_d, ev_r = Evaluator(chain2h), Evaluator(r)
    for w in words_up_to(TRI, 7):
        assert ev_d.eval_word(chain2h, w) == ev_r.eval_word(r, w)


def test_rewrite_unknown_pass():
    with pytest.raises(UnknownName):
        rewrite(Atom(W("0"), W("0")), "gadget-elim")


# -- pretty-printing -----------------------------------------------------


def test_expr_text_round_trip(increment, ambiguous, duplicate, exchange, hchain, chain2h):
    from transducers.rte_parser import expr_to_text

    for e in (increment, ambiguous, duplicate, exchange, hchain, chain2h):
        again = parse_rte(expr_to_text(e))
        alphabet = Alphabet(tuple(sorted(input_symbols(e)))) if input_symbols(e) else BITS
        ev_a, ev_b = Evaluator(e), Evaluator(again)
        for w in words_up_to(alphabet, 5):
            assert ev_a.eval_word(e, w) == ev_b.eval_word(again, w)


def test_rstar_elim_prints_with_compose_and_rev():
    from transducers.rte_parser import expr_to_text

    e = RStar(Sum(Atom(W("0"), W("0")), Atom(W("1"), W("1"))))
    text = expr_to_text(rewrite(e, "rstar-elim"))
    assert "@" in text and "rev[" in text
    again = parse_rte(text)
    ev = Evaluator(again)
    for w in words_up_to(BITS, 8):
        assert set(ev.eval_word(again, w)) == {reverse_word(w)}


# -- the pairwise-exchange pipeline ------------------------------------------


def test_hchain_formula(hchain):
    # u1#...un#  ->  u2u1#u3u2#...unu(n-1)#
    ev = Evaluator(hchain)
    rng = random.Random(5)
    cases = list(_factor_corpus(max_factors=3, max_len=3))
    n4 = [
        tuple(tuple(rng.choice("01") for _ in range(rng.randint(0, 3))) for _ in range(4))
        for _ in range(600)
    ]
    for combo in cases + n4:
        w = tuple(s for u in combo for s in u + (HASH,))
        expected = tuple(
            s
            for i in range(len(combo) - 1)
            for s in combo[i + 1] + combo[i] + (HASH,)
        )
        assert set(ev.eval_word(hchain, w)) == {expected}


def test_triangle_hchain_equals_chain2(hchain, chain2h):
    ev_h, ev_c = Evaluator(hchain), Evaluator(chain2h)
    for combo in _factor_corpus(max_factors=4, max_len=2):
        w = tuple(s for u in combo for s in u + (HASH,))
        assert ev_h.eval_word(hchain, w) == ev_c.eval_word(chain2h, w)


def _factor_corpus(max_factors: int, max_len: int, min_factors: int = 2):
    factors = []
    for n in range(max_len + 1):
        factors.extend(itertools.product("01", repeat=n))
    for count in range(min_factors, max_factors + 1):
        yield from itertools.product(factors, repeat=count)


def _count_nodes(e, cls) -> int:
    return len(_collect_nodes(e, cls))


def _collect_nodes(e, cls) -> list:
    from transducers.rte import children

    found = [e] if isinstance(e, cls) else []
    for c in children(e):
        found.extend(_collect_nodes(c, cls))
    return found

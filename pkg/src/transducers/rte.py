"""Regular transducer expressions: syntax tree, all-parses evaluation,
domain extraction, the small standard library, and the rewrite identities.

Evaluation is denotational: concatenation and iteration enumerate every
factorization whose factors lie in the sub-expressions' domains, collect
the outputs of all parses, and classify the result (unique output, not in
the domain, or ambiguous).  Factors must be nonempty; the empty word has
exactly the empty factorization.  Exact domain automata prune the
factorization search, which keeps evaluation polynomial for the common
expressions; parse counts are still computed exactly and guarded by a
budget.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from .errors import AmbiguousK, BudgetExceeded, InexactDomain, UnknownName
from .machines import EvalOutcome
from .nfa import (
    Nfa,
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
from .regexes import ReAlt, ReCat, ReEps, ReNode, ReStar, ReSym, glushkov, re_symbols
from .symbols import Alphabet, HASH, Symbol, Word, reverse_word


class RteExpr:
    """Base class of expression nodes."""


@dataclass(frozen=True)
class Atom(RteExpr):
    inp: Word
    out: Word
    span: Optional[tuple] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Sum(RteExpr):
    left: RteExpr
    right: RteExpr
    span: Optional[tuple] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Cat(RteExpr):
    left: RteExpr
    right: RteExpr
    span: Optional[tuple] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Star(RteExpr):
    inner: RteExpr
    span: Optional[tuple] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Hadamard(RteExpr):
    left: RteExpr
    right: RteExpr
    span: Optional[tuple] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Compose(RteExpr):
    outer: RteExpr
    inner: RteExpr
    span: Optional[tuple] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Reverse(RteExpr):
    alphabet: Alphabet
    span: Optional[tuple] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Duplicate(RteExpr):
    alphabet: Alphabet
    separator: Symbol = HASH
    span: Optional[tuple] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class RStar(RteExpr):
    inner: RteExpr
    span: Optional[tuple] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Chain2(RteExpr):
    k: ReNode
    inner: RteExpr
    span: Optional[tuple] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class RChain2(RteExpr):
    k: ReNode
    inner: RteExpr
    span: Optional[tuple] = field(default=None, compare=False, repr=False)


def children(e: RteExpr) -> tuple[RteExpr, ...]:
    if isinstance(e, (Sum, Cat, Hadamard)):
        return (e.left, e.right)
    if isinstance(e, Compose):
        return (e.outer, e.inner)
    if isinstance(e, (Star, RStar, Chain2, RChain2)):
        return (e.inner,)
    return ()


def input_symbols(e: RteExpr) -> frozenset:
    if isinstance(e, Atom):
        return frozenset(e.inp)
    if isinstance(e, (Reverse, Duplicate)):
        return frozenset(e.alphabet.symbols)
    if isinstance(e, Compose):
        return input_symbols(e.inner)
    if isinstance(e, (Chain2, RChain2)):
        return frozenset(re_symbols(e.k)) | input_symbols(e.inner)
    out: frozenset = frozenset()
    for c in children(e):
        out |= input_symbols(c)
    return out


def output_symbols(e: RteExpr) -> frozenset:
    if isinstance(e, Atom):
        return frozenset(e.out)
    if isinstance(e, Reverse):
        return frozenset(e.alphabet.symbols)
    if isinstance(e, Duplicate):
        return frozenset(e.alphabet.symbols) | {e.separator}
    if isinstance(e, Compose):
        return output_symbols(e.outer)
    if isinstance(e, (Chain2, RChain2)):
        return output_symbols(e.inner)
    out: frozenset = frozenset()
    for c in children(e):
        out |= output_symbols(c)
    return out


def input_alphabet(e: RteExpr) -> Alphabet:
    syms = sorted(input_symbols(e), key=lambda s: (len(s), s))
    if not syms:
        syms = ["0"]
    return Alphabet(tuple(syms))


def output_alphabet(e: RteExpr) -> Alphabet:
    syms = sorted(output_symbols(e), key=lambda s: (len(s), s))
    if not syms:
        syms = ["0"]
    return Alphabet(tuple(syms))


def chain_k_nfa(e, alphabet: Alphabet) -> Nfa:
    return glushkov(e.k, alphabet)


# ---------------------------------------------------------------------------
# Domains
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DomainResult:
    nfa: Nfa
    exact: bool


def rte_domain(e: RteExpr, alphabet: Optional[Alphabet] = None) -> DomainResult:
    """Compositional domain automaton.

    Exact for every constructor except composition, whose preimage is only
    over-approximated by the inner stage's domain.
    """
    if alphabet is None:
        alphabet = input_alphabet(e)

    def go(n: RteExpr) -> DomainResult:
        if isinstance(n, Atom):
            return DomainResult(nfa_word(alphabet, n.inp), True)
        if isinstance(n, Sum):
            l, r = go(n.left), go(n.right)
            return DomainResult(nfa_union(l.nfa, r.nfa), l.exact and r.exact)
        if isinstance(n, Cat):
            l, r = go(n.left), go(n.right)
            return DomainResult(nfa_concat(l.nfa, r.nfa), l.exact and r.exact)
        if isinstance(n, (Star, RStar)):
            i = go(n.inner)
            return DomainResult(nfa_star(nfa_remove_epsilon(i.nfa)), i.exact)
        if isinstance(n, Hadamard):
            l, r = go(n.left), go(n.right)
            return DomainResult(nfa_intersection(l.nfa, r.nfa), l.exact and r.exact)
        if isinstance(n, Compose):
            i = go(n.inner)
            return DomainResult(i.nfa, False)
        if isinstance(n, Reverse):
            return DomainResult(nfa_universal(alphabet, n.alphabet.symbols), True)
        if isinstance(n, Duplicate):
            return DomainResult(nfa_universal(alphabet, n.alphabet.symbols), True)
        if isinstance(n, (Chain2, RChain2)):
            k = nfa_remove_epsilon(chain_k_nfa(n, alphabet))
            return DomainResult(nfa_concat(k, nfa_concat(k, nfa_star(k))), True)
        raise TypeError(n)

    return go(e)


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


class _Frame:
    """Per-word evaluation state: span memo and domain-DFA acceptance rows."""

    __slots__ = ("word", "memo", "rows")

    def __init__(self, word: Word):
        self.word = word
        self.memo: dict = {}
        self.rows: dict = {}


class Evaluator:
    def __init__(self, root: RteExpr, budget: int = 100_000):
        self.root = root
        self.budget = budget
        self._dom_dfa: dict = {}
        self._k_nfa: dict = {}
        self._compose_cache: dict = {}

    # -- domain machinery ---------------------------------------------------

    def dom_dfa(self, node: RteExpr) -> Optional[Nfa]:
        key = id(node)
        if key not in self._dom_dfa:
            dr = rte_domain(node)
            self._dom_dfa[key] = nfa_determinize(dr.nfa) if dr.exact else None
        return self._dom_dfa[key]

    def _accept_row(self, frame: _Frame, dfa: Nfa, i: int) -> list:
        key = (id(dfa), i)
        row = frame.rows.get(key)
        if row is None:
            w = frame.word
            n = len(w)
            row = [False] * (n + 1 - i)
            state = next(iter(dfa.initial))
            row[0] = state in dfa.final
            for k in range(i, n):
                if state is not None and w[k] in dfa.alphabet:
                    state = next(iter(dfa.step({state}, w[k])))
                else:
                    state = None
                row[k - i + 1] = state is not None and state in dfa.final
            frame.rows[key] = row
        return row

    def span_in_domain(self, frame: _Frame, node: RteExpr, i: int, j: int) -> bool:
        """True when w[i:j] might be in the domain (exact DFAs prune; an
        inexact domain never prunes)."""
        dfa = self.dom_dfa(node)
        if dfa is None:
            return True
        return self._accept_row(frame, dfa, i)[j - i]

    def _row_or_none(self, frame: _Frame, node: RteExpr, i: int):
        dfa = self.dom_dfa(node)
        return None if dfa is None else self._accept_row(frame, dfa, i)

    def k_membership(self, frame: _Frame, node, i: int, j: int) -> bool:
        key = id(node)
        if key not in self._k_nfa:
            k = chain_k_nfa(node, input_alphabet(node))
            self._k_nfa[key] = nfa_determinize(k)
        dfa = self._k_nfa[key]
        return self._accept_row(frame, dfa, i)[j - i]

    # -- evaluation ---------------------------------------------------------

    def _check_budget(self, res: dict):
        if sum(res.values()) > self.budget:
            raise BudgetExceeded(f"parse count exceeds budget {self.budget}")

    def eval_word(self, node: RteExpr, w: Word) -> dict:
        """Outputs of ``node`` on ``w`` with exact parse counts."""
        key = (id(node), w)
        cached = self._compose_cache.get(key)
        if cached is not None:
            return cached
        frame = _Frame(w)
        res = self._rec(frame, node, 0, len(w))
        self._compose_cache[key] = res
        return res

    def _rec(self, frame: _Frame, node: RteExpr, i: int, j: int) -> dict:
        key = (id(node), i, j)
        cached = frame.memo.get(key)
        if cached is not None:
            return cached
        res = self._compute(frame, node, i, j)
        self._check_budget(res)
        frame.memo[key] = res
        return res

    def _compute(self, frame: _Frame, node: RteExpr, i: int, j: int) -> dict:
        w = frame.word
        if isinstance(node, Atom):
            return {node.out: 1} if w[i:j] == node.inp else {}
        if isinstance(node, Sum):
            res: dict = {}
            for part in (node.left, node.right):
                for v, c in self._rec(frame, part, i, j).items():
                    res[v] = res.get(v, 0) + c
            return res
        if isinstance(node, Cat):
            res = {}
            row_l = self._row_or_none(frame, node.left, i)
            dr = self.dom_dfa(node.right)
            for k in range(i, j + 1):
                if row_l is not None and not row_l[k - i]:
                    continue
                if dr is not None and not self._accept_row(frame, dr, k)[j - k]:
                    continue
                lefts = self._rec(frame, node.left, i, k)
                if not lefts:
                    continue
                rights = self._rec(frame, node.right, k, j)
                if not rights:
                    continue
                for lv, lc in lefts.items():
                    for rv, rc in rights.items():
                        v = lv + rv
                        res[v] = res.get(v, 0) + lc * rc
            return res
        if isinstance(node, (Star, RStar)):
            if i == j:
                return {(): 1}
            reversed_order = isinstance(node, RStar)
            res = {}
            row_f = self._row_or_none(frame, node.inner, i)
            dr = self.dom_dfa(node)
            for k in range(i + 1, j + 1):
                if row_f is not None and not row_f[k - i]:
                    continue
                if dr is not None and not self._accept_row(frame, dr, k)[j - k]:
                    continue
                firsts = self._rec(frame, node.inner, i, k)
                if not firsts:
                    continue
                rests = self._rec(frame, node, k, j)
                for fv, fc in firsts.items():
                    for rv, rc in rests.items():
                        v = rv + fv if reversed_order else fv + rv
                        res[v] = res.get(v, 0) + fc * rc
            return res
        if isinstance(node, Hadamard):
            lefts = self._rec(frame, node.left, i, j)
            if not lefts:
                return {}
            rights = self._rec(frame, node.right, i, j)
            res = {}
            for lv, lc in lefts.items():
                for rv, rc in rights.items():
                    v = lv + rv
                    res[v] = res.get(v, 0) + lc * rc
            return res
        if isinstance(node, Compose):
            inner = self._rec(frame, node.inner, i, j)
            res = {}
            for v, c in inner.items():
                for ov, oc in self.eval_word(node.outer, v).items():
                    res[ov] = res.get(ov, 0) + c * oc
            return res
        if isinstance(node, Reverse):
            span = w[i:j]
            if all(s in node.alphabet for s in span):
                return {reverse_word(span): 1}
            return {}
        if isinstance(node, Duplicate):
            span = w[i:j]
            if all(s in node.alphabet for s in span):
                return {span + (node.separator,) + span: 1}
            return {}
        if isinstance(node, (Chain2, RChain2)):
            return self._chain(frame, node, i, j)
        raise TypeError(node)

    def _chain(self, frame: _Frame, node, i: int, j: int) -> dict:
        reversed_order = isinstance(node, RChain2)
        inner = node.inner

        # rest(a, b): outputs of the remaining chain when the previous factor
        # starts at a and the current factor is w[a:b]... keyed by (a, b);
        # stopping is allowed once the current factor reaches the end.
        memo: dict = {}

        def rest(a: int, b: int) -> dict:
            key = (a, b)
            got = memo.get(key)
            if got is not None:
                return got
            res: dict = {}
            if b == j:
                res[()] = 1
            for c in range(b + 1, j + 1):
                if not self.k_membership(frame, node, b, c):
                    continue
                pair = self._rec(frame, inner, a, c)
                if not pair:
                    continue
                tail = rest(b, c)
                for pv, pc in pair.items():
                    for tv, tc in tail.items():
                        v = tv + pv if reversed_order else pv + tv
                        res[v] = res.get(v, 0) + pc * tc
            self._check_budget(res)
            memo[key] = res
            return res

        out: dict = {}
        for p in range(i + 1, j + 1):
            if not self.k_membership(frame, node, i, p):
                continue
            # At least two factors: the first may not stop the chain.
            for c in range(p + 1, j + 1):
                if not self.k_membership(frame, node, p, c):
                    continue
                pair = self._rec(frame, inner, i, c)
                if not pair:
                    continue
                tail = rest(p, c)
                for pv, pc in pair.items():
                    for tv, tc in tail.items():
                        v = tv + pv if reversed_order else pv + tv
                        out[v] = out.get(v, 0) + pc * tc
        return out


def eval_rte(e: RteExpr, w: Word, budget: int = 100_000) -> EvalOutcome:
    """All-parses evaluation classified as an outcome.

    Multiple parses agreeing on one output yield a unique outcome with the
    ``ambiguous_but_consistent`` diagnostic set.
    """
    res = Evaluator(e, budget).eval_word(e, w)
    if not res:
        return EvalOutcome.not_in_domain()
    outputs = sorted(res)
    parses = sum(res.values())
    if len(outputs) == 1:
        return EvalOutcome.unique(outputs[0], multi_parse=parses > 1)
    return EvalOutcome.ambiguous(outputs)


def rte_outputs(e: RteExpr, w: Word, budget: int = 100_000) -> set[Word]:
    return set(Evaluator(e, budget).eval_word(e, w))


# ---------------------------------------------------------------------------
# Unambiguity
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class UnambiguityReport:
    unambiguous: bool
    witness: Optional[Word] = None
    parse1: str = ""
    parse2: str = ""

    def __bool__(self) -> bool:
        return self.unambiguous


def _exact_domain_dfa(e: RteExpr, alphabet: Alphabet) -> Nfa:
    dr = rte_domain(e, alphabet)
    if not dr.exact:
        raise InexactDomain(
            "a composition sits below a parsing operator; its domain is only over-approximated"
        )
    return nfa_trim(nfa_determinize(dr.nfa))


def check_unambiguous(e: RteExpr) -> UnambiguityReport:
    """Every parsing operator must admit at most one parse per word.

    Sums need disjoint domains, concatenations a unique split, iterations a
    unique factorization (an iterated domain containing the empty word is
    rejected outright), chained iterations a unique block decomposition.
    The checks run on determinized domain automata glued so that distinct
    parses become distinct accepting runs.
    """
    alphabet = input_alphabet(e)

    def fail(node, witness, p1, p2) -> UnambiguityReport:
        return UnambiguityReport(False, witness, p1, p2)

    def visit(node: RteExpr) -> Optional[UnambiguityReport]:
        if isinstance(node, Sum):
            dl = _exact_domain_dfa(node.left, alphabet)
            dr = _exact_domain_dfa(node.right, alphabet)
            amb = nfa_ambiguous(nfa_union(dl, dr))
            if not amb.unambiguous:
                return fail(node, amb.witness, "left summand", "right summand")
        elif isinstance(node, Cat):
            dl = _exact_domain_dfa(node.left, alphabet)
            dr = _exact_domain_dfa(node.right, alphabet)
            amb = nfa_ambiguous(nfa_concat(dl, dr))
            if not amb.unambiguous:
                w = amb.witness
                splits = _cat_splits(node, w, alphabet)
                d1 = f"split at {splits[0]}" if splits else "split"
                d2 = f"split at {splits[1]}" if len(splits) > 1 else "split"
                return fail(node, w, d1, d2)
        elif isinstance(node, (Star, RStar)):
            di = rte_domain(node.inner, alphabet)
            if not di.exact:
                raise InexactDomain(
                    "a composition sits below a parsing operator; its domain is only over-approximated"
                )
            if di.nfa.accepts_epsilon():
                return fail(
                    node,
                    (),
                    "empty factorization",
                    "a factorization that inserts an empty factor",
                )
            d = nfa_trim(nfa_determinize(di.nfa))
            amb = nfa_ambiguous(nfa_star(d))
            if not amb.unambiguous:
                f1, f2 = _two_factorizations(
                    lambda a, b: _dfa_accepts_span(d, amb.witness, a, b), amb.witness
                )
                return fail(node, amb.witness, f"factors {f1}", f"factors {f2}")
        elif isinstance(node, (Chain2, RChain2)):
            k = nfa_remove_epsilon(chain_k_nfa(node, alphabet))
            d = nfa_trim(nfa_determinize(k))
            amb = nfa_ambiguous(nfa_concat(d, nfa_concat(d, nfa_star(d))))
            if not amb.unambiguous:
                f1, f2 = _two_factorizations(
                    lambda a, b: _dfa_accepts_span(d, amb.witness, a, b), amb.witness
                )
                return fail(node, amb.witness, f"blocks {f1}", f"blocks {f2}")
        return None

    def walk(node: RteExpr) -> Optional[UnambiguityReport]:
        bad = visit(node)
        if bad is not None:
            return bad
        for c in children(node):
            bad = walk(c)
            if bad is not None:
                return bad
        return None

    bad = walk(e)
    return bad if bad is not None else UnambiguityReport(True)


def _dfa_accepts_span(dfa: Nfa, w: Word, i: int, j: int) -> bool:
    states = dfa.initial
    for k in range(i, j):
        if w[k] not in dfa.alphabet:
            return False
        states = dfa.step(states, w[k])
        if not states:
            return False
    return bool(states & dfa.final)


def _cat_splits(node: Cat, w: Word, alphabet: Alphabet) -> list[int]:
    dl = _exact_domain_dfa(node.left, alphabet)
    dr = _exact_domain_dfa(node.right, alphabet)
    return [
        k
        for k in range(len(w) + 1)
        if _dfa_accepts_span(dl, w, 0, k) and _dfa_accepts_span(dr, w, k, len(w))
    ][:2]


def _two_factorizations(member: Callable[[int, int], bool], w: Word, limit: int = 2):
    found: list = []

    def rec(pos: int, acc: tuple):
        if len(found) >= limit:
            return
        if pos == len(w):
            found.append(acc)
            return
        for nxt in range(pos + 1, len(w) + 1):
            if member(pos, nxt):
                rec(nxt, acc + (nxt,))
                if len(found) >= limit:
                    return

    rec(0, ())
    while len(found) < limit:
        found.append(())
    return found[0], found[1]


# ---------------------------------------------------------------------------
# Standard library
# ---------------------------------------------------------------------------


def cat_all(*parts: RteExpr) -> RteExpr:
    node = parts[0]
    for p in parts[1:]:
        node = Cat(node, p)
    return node


def sum_all(*parts: RteExpr) -> RteExpr:
    node = parts[0]
    for p in parts[1:]:
        node = Sum(node, p)
    return node


def copy_expr(alphabet: Alphabet) -> RteExpr:
    return Star(sum_all(*(Atom((s,), (s,)) for s in alphabet)))


def erase_expr(alphabet: Alphabet) -> RteExpr:
    return Star(sum_all(*(Atom((s,), ()) for s in alphabet)))


def duplicate_expr(alphabet: Alphabet, separator: Symbol = HASH) -> RteExpr:
    """Two passes over the input with a separator in between."""
    return Hadamard(Cat(copy_expr(alphabet), Atom((), (separator,))), copy_expr(alphabet))


def exchange_expr(alphabet: Alphabet, separator: Symbol = HASH) -> RteExpr:
    """u SEP v maps to vu: erase-then-copy crossed with copy-then-erase."""
    return Hadamard(
        cat_all(erase_expr(alphabet), Atom((separator,), ()), copy_expr(alphabet)),
        cat_all(copy_expr(alphabet), Atom((separator,), ()), erase_expr(alphabet)),
    )


def regex_identity(k: ReNode) -> RteExpr:
    """The identity function restricted to the language of ``k``.

    Every letter ``a`` of the regular expression becomes the atom (a|a);
    the expression must parse unambiguously.
    """
    def mirror(n: ReNode) -> RteExpr:
        if isinstance(n, ReEps):
            return Atom((), ())
        if isinstance(n, ReSym):
            return Atom((n.sym,), (n.sym,))
        if isinstance(n, ReAlt):
            return Sum(mirror(n.left), mirror(n.right))
        if isinstance(n, ReCat):
            return Cat(mirror(n.left), mirror(n.right))
        if isinstance(n, ReStar):
            return Star(mirror(n.inner))
        raise TypeError(n)

    expr = mirror(k)
    report = check_unambiguous(expr)
    if not report.unambiguous:
        raise AmbiguousK(
            f"regular expression is ambiguous (witness {report.witness!r})"
        )
    return expr


def block_marker(k: ReNode, separator: Symbol = HASH) -> RteExpr:
    """Identity on unambiguous K-sequences with a separator after each block."""
    return Star(Cat(regex_identity(k), Atom((), (separator,))))


def pair_applier(f: RteExpr, alphabet: Alphabet, separator: Symbol = HASH) -> RteExpr:
    """Drop the outermost half-blocks of a doubled block sequence and apply
    ``f`` to every remaining consecutive pair."""
    er = erase_expr(alphabet)
    cp = copy_expr(alphabet)
    drop_sep = Atom((separator,), ())
    pair = Compose(f, cat_all(cp, drop_sep, cp, drop_sep))
    return cat_all(er, drop_sep, pair, Star(pair), er, drop_sep)


def stdlib_expr(name: str, alphabet: Alphabet, params: Optional[dict] = None) -> RteExpr:
    params = params or {}
    sep = params.get("separator", HASH)
    if name == "copy":
        return copy_expr(alphabet)
    if name == "erase":
        return erase_expr(alphabet)
    if name == "duplicate":
        return duplicate_expr(alphabet, sep)
    if name == "exchange":
        return exchange_expr(alphabet, sep)
    if name == "fK":
        return regex_identity(_regex_param(params))
    if name == "gK":
        return block_marker(_regex_param(params), sep)
    if name == "pairApplier":
        return pair_applier(params["f"], alphabet, sep)
    raise UnknownName(f"no builder named {name!r}")


def _regex_param(params: dict) -> ReNode:
    k = params.get("regex")
    if k is None:
        raise UnknownName("builder needs a 'regex' parameter")
    if isinstance(k, str):
        from .regexes import parse_regex

        return parse_regex(k)
    return k


# ---------------------------------------------------------------------------
# Rewrites
# ---------------------------------------------------------------------------

_SEPARATOR_POOL = (HASH, "$", "&", "@", "!", "?") + tuple(f"SEP{i}" for i in range(1, 9))


def fresh_separator(used) -> Symbol:
    for cand in _SEPARATOR_POOL:
        if cand not in used:
            return cand
    raise UnknownName("separator pool exhausted")


REWRITE_PASSES = ("hadamard-elim", "rstar-elim", "chain2-elim", "rchain2-elim")


def rewrite(e: RteExpr, pass_name: str) -> RteExpr:
    """Eliminate one combinator, preserving the function on its domain.

    hadamard-elim : f (x) g      ->  (f . (SEP|'') . g) o duplicate
    rstar-elim    : f^r*         ->  (f o reverse)* o reverse
    chain2-elim   : chain2[K]{f} ->  h o g o gK   (block doubling pipeline)
    rchain2-elim  : mirror of chain2-elim with a reversed middle iteration
                    and a leading identity filter pinning the domain to
                    two or more blocks
    """
    if pass_name not in REWRITE_PASSES:
        raise UnknownName(f"unknown rewrite pass {pass_name!r}; choose from {REWRITE_PASSES}")

    def transform(node: RteExpr) -> RteExpr:
        rebuilt = _rebuild(node, [transform(c) for c in children(node)])
        if pass_name == "hadamard-elim" and isinstance(rebuilt, Hadamard):
            return _eliminate_hadamard(rebuilt)
        if pass_name == "rstar-elim" and isinstance(rebuilt, RStar):
            return _eliminate_rstar(rebuilt)
        if pass_name == "chain2-elim" and isinstance(rebuilt, Chain2):
            return _eliminate_chain2(rebuilt)
        if pass_name == "rchain2-elim" and isinstance(rebuilt, RChain2):
            return _eliminate_rchain2(rebuilt)
        return rebuilt

    return transform(e)


def _rebuild(node: RteExpr, kids: list) -> RteExpr:
    if isinstance(node, Sum):
        return Sum(kids[0], kids[1])
    if isinstance(node, Cat):
        return Cat(kids[0], kids[1])
    if isinstance(node, Hadamard):
        return Hadamard(kids[0], kids[1])
    if isinstance(node, Compose):
        return Compose(kids[0], kids[1])
    if isinstance(node, Star):
        return Star(kids[0])
    if isinstance(node, RStar):
        return RStar(kids[0])
    if isinstance(node, Chain2):
        return Chain2(node.k, kids[0])
    if isinstance(node, RChain2):
        return RChain2(node.k, kids[0])
    return node


def _node_alphabet(node: RteExpr) -> Alphabet:
    return input_alphabet(node)


def _used_symbols(node: RteExpr) -> frozenset:
    return input_symbols(node) | output_symbols(node)


def _eliminate_hadamard(node: Hadamard) -> RteExpr:
    sep = fresh_separator(_used_symbols(node))
    alpha = _node_alphabet(node)
    return Compose(
        cat_all(node.left, Atom((sep,), ()), node.right),
        Duplicate(alpha, sep),
    )


def _eliminate_rstar(node: RStar) -> RteExpr:
    alpha = _node_alphabet(node)
    return Compose(Star(Compose(node.inner, Reverse(alpha))), Reverse(alpha))


def _chain_pipeline(node, reversed_middle: bool) -> RteExpr:
    sep = fresh_separator(_used_symbols(node))
    alpha = _node_alphabet(node)
    ident = regex_identity(node.k)
    mark = Star(Cat(ident, Atom((), (sep,))))
    double = Star(Cat(Duplicate(alpha, sep), Atom((sep,), (sep,))))
    er = erase_expr(alpha)
    cp = copy_expr(alpha)
    drop = Atom((sep,), ())
    pair = Compose(node.inner, cat_all(cp, drop, cp, drop))
    if reversed_middle:
        middle: RteExpr = RStar(pair)
        eraser = cat_all(er, drop, middle, er, drop)
        two_blocks = cat_all(ident, ident, Star(ident))
        return Compose(eraser, Compose(double, Compose(mark, two_blocks)))
    eraser = cat_all(er, drop, pair, Star(pair), er, drop)
    return Compose(eraser, Compose(double, mark))


def _eliminate_chain2(node: Chain2) -> RteExpr:
    return _chain_pipeline(node, reversed_middle=False)


def _eliminate_rchain2(node: RChain2) -> RteExpr:
    return _chain_pipeline(node, reversed_middle=True)

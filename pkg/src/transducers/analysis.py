"""Decision procedures: functionality of one-way nondeterministic
transducers and equivalence of functional ones, plus brute-force oracles.

The functionality check explores the self-product of the trimmed machine
while tracking the *delay*: the uncancelled output remainder between the
two synchronized runs.  Three events witness non-functionality at a pair of
states from which both runs can still reach acceptance:

* mismatch: the two outputs stop being prefix-comparable;
* final residual: both runs can accept here but the completed outputs differ;
* delay overflow: the remainder outgrows 2 * m^2 * L, where m is the state
  count and L the longest single output word.

A word of length at most 2 * m^2 separates the outputs of a non-functional
machine, and along such a word each run emits at most 2 * m^2 * L letters,
so any violation shows up within that delay; see docs/decision-procedures.md
for the full argument.  Overflow witnesses are rebuilt by pumping the loop
that grew the delay and are verified before being reported.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

from .errors import BudgetExceeded, NotFunctionalInput
from .machines import Nft, eval_nft
from .nfa import dfa_equiv, enumerate_words
from .symbols import Word, display_word


@dataclass(frozen=True)
class FunctionalityVerdict:
    functional: bool
    witness: Optional[Word] = None
    output1: Optional[Word] = None
    output2: Optional[Word] = None

    def __bool__(self) -> bool:
        return self.functional

    def to_dict(self) -> dict:
        if self.functional:
            return {"kind": "functional", "witness": None, "outputs": []}
        return {
            "kind": "not-functional",
            "witness": display_word(self.witness),
            "outputs": [display_word(self.output1), display_word(self.output2)],
        }


@dataclass(frozen=True)
class DelayConfig:
    state_count: int
    max_output_len: int

    @property
    def delay_bound(self) -> int:
        return 2 * self.state_count * self.state_count * self.max_output_len


def delay_config(t: Nft) -> DelayConfig:
    outs = [len(u) for (_, _, u, _) in t.distinct_transitions]
    outs += [len(u) for (_, u) in t.initial]
    outs += [len(u) for (_, u) in t.final]
    return DelayConfig(len(t.states), max(outs, default=0))


def _trim_nft(t: Nft) -> Nft:
    from .nfa import nfa_trim

    proj = nfa_trim(t.input_projection())
    keep = proj.states
    return Nft(
        t.input_alphabet,
        t.output_alphabet,
        frozenset(keep),
        tuple((q, u) for (q, u) in t.initial if q in keep),
        tuple((q, u) for (q, u) in t.final if q in keep),
        tuple(tr for tr in t.distinct_transitions if tr[0] in keep and tr[3] in keep),
    )


def _cancel(x: Word, y: Word):
    """Strip the common prefix; returns (rem1, rem2), at most one nonempty,
    or None when the words are prefix-incomparable."""
    k = 0
    n = min(len(x), len(y))
    while k < n and x[k] == y[k]:
        k += 1
    rx, ry = x[k:], y[k:]
    if rx and ry:
        return None
    return rx, ry


class _Product:
    """Shared machinery over pairs of runs of one machine."""

    def __init__(self, t: Nft):
        self.t = t
        finals = set(t.final_map)
        by_symbol: dict = {}
        for (p, a, u, q) in t.distinct_transitions:
            by_symbol.setdefault(a, []).append((p, u, q))
        self.by_state_symbol: dict = {}
        for (p, a, u, q) in t.distinct_transitions:
            self.by_state_symbol.setdefault((p, a), []).append((u, q))
        # Pair co-accessibility on the pair graph; only pairs that can reach
        # a pair of accepting states can contribute two accepting runs.
        self.coacc = set()
        frontier = deque()
        for p in finals:
            for q in finals:
                self.coacc.add((p, q))
                frontier.append((p, q))
        rev: dict = {}
        for a, moves in by_symbol.items():
            for (p, _, q) in moves:
                for (p2, _, q2) in moves:
                    rev.setdefault((q, q2), set()).add((p, p2))
        while frontier:
            pair = frontier.popleft()
            for prev in rev.get(pair, ()):
                if prev not in self.coacc:
                    self.coacc.add(prev)
                    frontier.append(prev)

    def completion(self, pair) -> Optional[tuple[Word, Word, Word, Word, Word]]:
        """Shortest word driving both runs of ``pair`` to accepting states.

        Returns (word, out1, out2, fin1, fin2) including the final output
        entries chosen on each side.
        """
        t = self.t
        parent: dict = {pair: None}
        queue = deque([pair])
        while queue:
            (p, q) = queue.popleft()
            if p in t.final_map and q in t.final_map:
                word: list = []
                o1: list = []
                o2: list = []
                node = (p, q)
                while parent[node] is not None:
                    node, a, u, v = parent[node]
                    word.append(a)
                    o1.append(u)
                    o2.append(v)
                word.reverse()
                o1.reverse()
                o2.reverse()
                out1 = tuple(s for u in o1 for s in u)
                out2 = tuple(s for v in o2 for s in v)
                return tuple(word), out1, out2, t.final_map[p][0], t.final_map[q][0]
            for a in t.input_alphabet:
                for (u, p2) in self.by_state_symbol.get((p, a), ()):
                    for (v, q2) in self.by_state_symbol.get((q, a), ()):
                        if (p2, q2) not in parent:
                            parent[(p2, q2)] = ((p, q), a, u, v)
                            queue.append((p2, q2))
        return None


def check_functional(t: Nft) -> FunctionalityVerdict:
    """Exact functionality decision via delay-tracking product exploration."""
    trimmed = _trim_nft(t)
    if not trimmed.initial or not trimmed.final_map:
        return FunctionalityVerdict(True)
    cfg = delay_config(trimmed)
    bound = cfg.delay_bound
    prod = _Product(trimmed)

    # configuration: (p, q, rem1, rem2) with at most one remainder nonempty
    parent: dict = {}
    queue = deque()
    overflow_paths: list = []

    def witness_from(config, extra_letter=None, extra_outs=None) -> FunctionalityVerdict:
        # Replay the parent chain, optionally extend by one step, then
        # complete both runs to acceptance with a common suffix.
        chain = []
        node = config
        while parent[node] is not None:
            node, a, u, v = parent[node]
            chain.append((a, u, v))
        chain.reverse()
        i1, i2 = node[6], node[7]
        word = [a for (a, _, _) in chain]
        out1 = list(i1) + [s for (_, u, _) in chain for s in u]
        out2 = list(i2) + [s for (_, _, v) in chain for s in v]
        endpair = (config[0], config[1])
        if extra_letter is not None:
            word.append(extra_letter)
            u, v, endpair = extra_outs
            out1.extend(u)
            out2.extend(v)
        comp = prod.completion(endpair)
        assert comp is not None, "violating pair must be co-accessible"
        cw, c1, c2, f1, f2 = comp
        w = tuple(word) + cw
        o1 = tuple(out1) + c1 + f1
        o2 = tuple(out2) + c2 + f2
        return FunctionalityVerdict(False, w, o1, o2)

    # Seed with every ordered pair of initial entries.
    initial_entries = list(dict.fromkeys(trimmed.initial))
    for (p, i1) in initial_entries:
        for (q, i2) in initial_entries:
            if (p, q) not in prod.coacc:
                continue
            rems = _cancel(tuple(i1), tuple(i2))
            if rems is None:
                # Incomparable initial outputs: the runs already disagree.
                seed = (p, q, tuple(i1), tuple(i2), p, q, tuple(i1), tuple(i2))
                parent[seed] = None
                return witness_from(seed)
            config = (p, q, rems[0], rems[1], p, q, tuple(i1), tuple(i2))
            if config not in parent:
                parent[config] = None
                queue.append(config)

    def final_violation(config) -> Optional[FunctionalityVerdict]:
        p, q, r1, r2 = config[0], config[1], config[2], config[3]
        fins1 = trimmed.final_map.get(p)
        fins2 = trimmed.final_map.get(q)
        if not fins1 or not fins2:
            return None
        for f1 in fins1:
            for f2 in fins2:
                if r1 + tuple(f1) != r2 + tuple(f2):
                    # Rebuild the word; both runs end here.
                    chain = []
                    node = config
                    while parent[node] is not None:
                        node, a, u, v = parent[node]
                        chain.append((a, u, v))
                    chain.reverse()
                    i1, i2 = node[6], node[7]
                    word = tuple(a for (a, _, _) in chain)
                    o1 = tuple(i1) + tuple(s for (_, u, _) in chain for s in u) + tuple(f1)
                    o2 = tuple(i2) + tuple(s for (_, _, v) in chain for s in v) + tuple(f2)
                    return FunctionalityVerdict(False, word, o1, o2)
        return None

    while queue:
        config = queue.popleft()
        v = final_violation(config)
        if v is not None:
            return v
        p, q, r1, r2 = config[0], config[1], config[2], config[3]
        for a in trimmed.input_alphabet:
            for (u, p2) in prod.by_state_symbol.get((p, a), ()):
                for (v2, q2) in prod.by_state_symbol.get((q, a), ()):
                    if (p2, q2) not in prod.coacc:
                        continue
                    rems = _cancel(r1 + tuple(u), r2 + tuple(v2))
                    if rems is None:
                        # Incomparable outputs can never re-agree.
                        return witness_from(config, a, (u, v2, (p2, q2)))
                    nr1, nr2 = rems
                    if len(nr1) > bound or len(nr2) > bound:
                        overflow_paths.append((config, a, u, v2, (p2, q2)))
                        continue
                    # Configurations carry their seed entry so replay can
                    # recover the initial outputs.
                    child = (p2, q2, nr1, nr2) + config[4:]
                    if child not in parent:
                        parent[child] = (config, a, u, v2)
                        queue.append(child)

    if overflow_paths:
        v = _overflow_witness(trimmed, prod, parent, overflow_paths)
        if v is not None:
            return v
    return FunctionalityVerdict(True)


def _overflow_witness(trimmed: Nft, prod: _Product, parent: dict, overflow_paths) -> Optional[FunctionalityVerdict]:
    """Pump the delay-growing loop of an overflow path until outputs differ.

    A delay beyond the bound at a co-accessible pair already proves
    non-functionality; the loop between two visits of the same state pair
    with different delays yields arbitrarily unbalanced outputs, so some
    small pump count produces a verified witness.
    """
    for (config, a, u, v2, endpair) in overflow_paths:
        chain = []
        node = config
        while parent[node] is not None:
            node, la, lu, lv = parent[node]
            chain.append((la, lu, lv))
        chain.reverse()
        chain.append((a, u, v2))
        i1, i2 = node[6], node[7]
        start_pair = (node[4], node[5])
        # Locate a repeated state pair with different delays along the path.
        rems = _cancel(tuple(i1), tuple(i2))
        if rems is None:
            continue
        pairs = [start_pair]
        delays = [rems]
        pq = start_pair
        r1, r2 = rems
        ok = True
        for (la, lu, lv) in chain:
            moves1 = [m for m in prod.by_state_symbol.get((pq[0], la), ()) if m[0] == lu]
            moves2 = [m for m in prod.by_state_symbol.get((pq[1], la), ()) if m[0] == lv]
            # Replay is by outputs; ambiguity here is harmless, any match works.
            nxt = None
            for (_, p2) in moves1:
                for (_, q2) in moves2:
                    nxt = (p2, q2)
                    break
                if nxt:
                    break
            if nxt is None:
                ok = False
                break
            c = _cancel(r1 + tuple(lu), r2 + tuple(lv))
            if c is None:
                ok = False
                break
            r1, r2 = c
            pq = nxt
            pairs.append(pq)
            delays.append((r1, r2))
        if not ok:
            continue
        seen: dict = {}
        loop = None
        for idx, pr in enumerate(pairs):
            if pr in seen and delays[idx] != delays[seen[pr]]:
                loop = (seen[pr], idx)
                break
            seen.setdefault(pr, idx)
        if loop is None:
            continue
        lo, hi = loop
        prefix = [la for (la, _, _) in chain[:lo]]
        cycle = [la for (la, _, _) in chain[lo:hi]]
        comp = prod.completion(pairs[hi])
        if comp is None:
            continue
        cw = comp[0]
        for k in range(1, 2 * len(pairs) + 4):
            w = tuple(prefix) + tuple(cycle) * k + cw
            outs = eval_nft(trimmed, w, run_cap=10**7)
            if len(outs) >= 2:
                o = sorted(outs)
                return FunctionalityVerdict(False, w, o[0], o[1])
    return None


def bruteforce_functional(t: Nft, max_len: int, word_budget: int = 10**7) -> FunctionalityVerdict:
    """Enumerate words up to ``max_len`` and compare output sets directly."""
    n = len(t.input_alphabet)
    total = sum(n**k for k in range(max_len + 1))
    if total > word_budget:
        raise BudgetExceeded(f"{total} words exceed budget {word_budget}")
    for w in enumerate_words(t.input_alphabet, max_len):
        outs = eval_nft(t, w)
        if len(outs) >= 2:
            o = sorted(outs)
            return FunctionalityVerdict(False, w, o[0], o[1])
    return FunctionalityVerdict(True)


@dataclass(frozen=True)
class EquivVerdict:
    EQUIVALENT = "equivalent"
    DOMAIN_ONLY = "domain"
    OUTPUT = "output"

    kind: str
    word: Optional[Word] = None
    output1: Optional[Word] = None
    output2: Optional[Word] = None

    @property
    def equivalent(self) -> bool:
        return self.kind == self.EQUIVALENT

    def __bool__(self) -> bool:
        return self.equivalent

    def __str__(self) -> str:
        if self.kind == self.EQUIVALENT:
            return "EQUIVALENT"
        if self.kind == self.DOMAIN_ONLY:
            return f"DOMAIN-DIFFERENCE word={display_word(self.word)}"
        return (
            f"OUTPUT-DIFFERENCE word={display_word(self.word)}"
            f" left={display_word(self.output1)} right={display_word(self.output2)}"
        )

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "witness": None, "outputs": []}
        if self.word is not None:
            out["witness"] = display_word(self.word)
        if self.output1 is not None:
            out["outputs"] = [display_word(self.output1), display_word(self.output2)]
        return out


def nft_disjoint_union(a: Nft, b: Nft) -> Nft:
    """Tagged union; evaluation is the union of the two output sets."""
    from .errors import AlphabetMismatch

    if set(a.input_alphabet.symbols) != set(b.input_alphabet.symbols) or set(
        a.output_alphabet.symbols
    ) != set(b.output_alphabet.symbols):
        raise AlphabetMismatch("disjoint union requires matching alphabets")
    tag = lambda side, q: (side, q)
    return Nft(
        a.input_alphabet,
        a.output_alphabet,
        frozenset(tag(0, q) for q in a.states) | frozenset(tag(1, q) for q in b.states),
        tuple((tag(0, q), u) for (q, u) in a.initial) + tuple((tag(1, q), u) for (q, u) in b.initial),
        tuple((tag(0, q), u) for (q, u) in a.final) + tuple((tag(1, q), u) for (q, u) in b.final),
        tuple((tag(0, p), s, u, tag(0, q)) for (p, s, u, q) in a.transitions)
        + tuple((tag(1, p), s, u, tag(1, q)) for (p, s, u, q) in b.transitions),
    )


def equiv_functional(t1: Nft, t2: Nft) -> EquivVerdict:
    """Equivalence of functional transducers: equal domains, then the
    functionality of the disjoint union."""
    v1 = check_functional(t1)
    if not v1:
        raise NotFunctionalInput(f"left machine is not functional (witness {display_word(v1.witness)})")
    v2 = check_functional(t2)
    if not v2:
        raise NotFunctionalInput(f"right machine is not functional (witness {display_word(v2.witness)})")
    dom = dfa_equiv(t1.input_projection(), t2.input_projection())
    if not dom.equivalent:
        return EquivVerdict(EquivVerdict.DOMAIN_ONLY, dom.counterexample)
    union = nft_disjoint_union(t1, t2)
    vu = check_functional(union)
    if vu.functional:
        return EquivVerdict(EquivVerdict.EQUIVALENT)
    w = vu.witness
    o1 = sorted(eval_nft(t1, w))
    o2 = sorted(eval_nft(t2, w))
    return EquivVerdict(EquivVerdict.OUTPUT, w, o1[0], o2[0])

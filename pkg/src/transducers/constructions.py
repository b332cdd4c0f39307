"""Machine-to-machine constructions.

* ``compose_sequential``: cartesian product synchronizing the output of the
  first machine with the input of the second.
* ``determinize_with_lookahead`` / ``eval_lookahead``: resolve the
  nondeterminism of a functional transducer by guarding each choice with a
  regular property of the unread suffix (least accepting successor wins).
* ``lookahead_to_unambiguous``: fold the pending guard obligations back into
  the state, yielding an input-unambiguous transducer.
* ``elgot_decompose``: any unambiguous transducer as
  reverse . second-pass . reverse . annotate, both passes sequential.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

from .errors import AlphabetMismatch, AmbiguousInput, NotFunctionalInput
from .machines import (
    EvalOutcome,
    Nft,
    SequentialTransducer,
    eval_sequential,
    run_sequential_from,
)
from .nfa import (
    Nfa,
    accept_from,
    nfa_ambiguous,
    nfa_determinize,
    nfa_intersection,
    nfa_is_empty,
    nfa_trim,
    nfa_complement,
    state_str,
    suffix_accepting_positions,
)
from .symbols import Alphabet, Symbol, Word, reverse_word


# ---------------------------------------------------------------------------
# Sequential composition
# ---------------------------------------------------------------------------


def compose_sequential(a: SequentialTransducer, b: SequentialTransducer) -> SequentialTransducer:
    """The machine realizing ``b`` after ``a``.

    States are reachable pairs (state of a, state of b); b consumes a's
    initial output before the first letter and a's terminal output at the
    end, so nonempty initial and terminal words thread through correctly.
    """
    if not set(a.output_alphabet.symbols) <= set(b.input_alphabet.symbols):
        raise AlphabetMismatch("output alphabet of the first machine must feed the second")
    empty = SequentialTransducer(
        input_alphabet=a.input_alphabet,
        output_alphabet=b.output_alphabet,
        states=frozenset({("dead", "dead")}),
        initial_state=("dead", "dead"),
        initial_output=(),
        transitions=(),
        terminal=(),
    )
    boot = run_sequential_from(b, b.initial_state, a.initial_output)
    if boot is None:
        return empty
    q_b0, out0 = boot
    start = (a.initial_state, q_b0)
    states = {start}
    transitions = []
    terminal = []
    frontier = deque([start])
    while frontier:
        (p, q) = frontier.popleft()
        for x in a.input_alphabet:
            entry = a.step_map.get((p, x))
            if entry is None:
                continue
            u, p2 = entry
            run = run_sequential_from(b, q, u)
            if run is None:
                continue
            q2, v = run
            transitions.append(((p, q), x, v, (p2, q2)))
            if (p2, q2) not in states:
                states.add((p2, q2))
                frontier.append((p2, q2))
    for (p, q) in sorted(states, key=state_str):
        fin_a = a.terminal_map.get(p)
        if fin_a is None:
            continue
        run = run_sequential_from(b, q, fin_a)
        if run is None:
            continue
        q2, v = run
        fin_b = b.terminal_map.get(q2)
        if fin_b is None:
            continue
        terminal.append(((p, q), v + fin_b))
    return SequentialTransducer(
        input_alphabet=a.input_alphabet,
        output_alphabet=b.output_alphabet,
        states=frozenset(states),
        initial_state=start,
        initial_output=b.initial_output + out0,
        transitions=tuple(transitions),
        terminal=tuple(terminal),
    )


# ---------------------------------------------------------------------------
# Look-ahead
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LookaheadDft:
    """Deterministic one-way transducer with regular look-ahead guards.

    Guards of distinct entries for the same (state, symbol) denote disjoint
    languages over the unread suffix, which is checked at construction, so
    evaluation never has to break ties.
    """

    input_alphabet: Alphabet
    output_alphabet: Alphabet
    states: frozenset
    initial: tuple  # of (guard Nfa over the whole word, state, output word)
    step: tuple  # of (state, symbol, guard Nfa over the remaining suffix, output word, next state)
    terminal: tuple  # of (state, output word)

    def __post_init__(self):
        groups: dict = {}
        for (p, a, g, _, _) in self.step:
            groups.setdefault((p, a), []).append(g)
        groups["initial"] = [g for (g, _, _) in self.initial]
        for key, guards in groups.items():
            for i in range(len(guards)):
                for j in range(i + 1, len(guards)):
                    if not nfa_is_empty(nfa_intersection(guards[i], guards[j])):
                        raise ValueError(f"overlapping look-ahead guards at {key!r}")

    @cached_property
    def step_entries(self) -> dict:
        look: dict = {}
        for (p, a, g, u, q) in self.step:
            look.setdefault((p, a), []).append((g, u, q))
        return look

    @cached_property
    def terminal_map(self) -> dict:
        look: dict = {}
        for (q, u) in self.terminal:
            look.setdefault(q, u)
        return look


def eval_lookahead(t: LookaheadDft, w: Word) -> EvalOutcome:
    """Deterministic evaluation consulting guards on exact suffixes.

    Step guards see the not-yet-consumed part of the word excluding the
    current letter; initial guards see the whole word.
    """
    t.input_alphabet.check_word(w, "input")
    suffix_tables: dict = {}

    def guard_holds(g: Nfa, k: int) -> bool:
        key = id(g)
        if key not in suffix_tables:
            suffix_tables[key] = suffix_accepting_positions(g, w)
        return suffix_tables[key][k]

    state = None
    out: list[Symbol] = []
    for (g, q, u) in t.initial:
        if guard_holds(g, 0):
            state = q
            out.extend(u)
            break
    if state is None:
        return EvalOutcome.not_in_domain()
    for k, a in enumerate(w):
        chosen = None
        for (g, u, q) in t.step_entries.get((state, a), ()):
            if guard_holds(g, k + 1):
                chosen = (u, q)
                break
        if chosen is None:
            return EvalOutcome.not_in_domain()
        u, state = chosen
        out.extend(u)
    fin = t.terminal_map.get(state)
    if fin is None:
        return EvalOutcome.not_in_domain()
    out.extend(fin)
    return EvalOutcome.unique(tuple(out))


def determinize_with_lookahead(t: Nft, order: Optional[Sequence] = None) -> LookaheadDft:
    """Resolve nondeterminism by preferring the least successor (in ``order``)
    whose suffix language accepts the rest of the word.

    The guard of the i-th candidate is Accept(q_i) minus the union of the
    earlier candidates' languages, built with products and complements of
    the suffix automata; empty guards are dropped.
    """
    verdict = _functional_or_raise(t)
    trimmed = verdict
    proj = trimmed.input_projection()
    rank: dict = {}
    if order is not None:
        for i, q in enumerate(order):
            rank[q] = i
    key = lambda q: (rank.get(q, len(rank)), state_str(q))

    def guards_for(candidates):
        # candidates: list of (payload, state); returns (guard, payload, state)
        entries = []
        sofar: Optional[Nfa] = None
        for (payload, q) in sorted(candidates, key=lambda c: key(c[1])):
            acc = nfa_trim(accept_from(proj, q))
            guard = acc if sofar is None else nfa_intersection(acc, nfa_complement(sofar))
            guard = nfa_trim(guard)
            if not nfa_is_empty(guard):
                entries.append((guard, payload, q))
            sofar = acc if sofar is None else _nfa_union(sofar, acc)
        return entries

    initial_candidates: dict = {}
    for (q, u) in dict.fromkeys(trimmed.initial):
        initial_candidates.setdefault(q, u)
    initial = tuple(
        (g, q, tuple(payload))
        for (g, payload, q) in guards_for([(u, q) for q, u in initial_candidates.items()])
    )
    step = []
    for (p, a), moves in sorted(
        trimmed.step_map.items(), key=lambda kv: (state_str(kv[0][0]), str(kv[0][1]))
    ):
        cands = [((u, q), q) for (u, q) in moves]
        for (g, payload, q) in guards_for(cands):
            u, _ = payload
            step.append((p, a, g, tuple(u), q))
    terminal = []
    for q, fins in trimmed.final_map.items():
        terminal.append((q, tuple(fins[0])))
    return LookaheadDft(
        input_alphabet=trimmed.input_alphabet,
        output_alphabet=trimmed.output_alphabet,
        states=trimmed.states if trimmed.states else frozenset({"empty"}),
        initial=initial,
        step=tuple(step),
        terminal=tuple(terminal),
    )


def _nfa_union(a: Nfa, b: Nfa) -> Nfa:
    from .nfa import nfa_union

    return nfa_union(a, b)


def _functional_or_raise(t: Nft) -> Nft:
    from .analysis import _trim_nft, check_functional

    verdict = check_functional(t)
    if not verdict:
        raise NotFunctionalInput("look-ahead determinization needs a functional transducer")
    trimmed = _trim_nft(t)
    # A trim functional machine cannot carry two parallel transitions with
    # different outputs, nor two final outputs on one state.
    return trimmed


def lookahead_to_unambiguous(t: LookaheadDft) -> Nft:
    """Run every pending guard automaton inside the state.

    States are (machine state, set of (guard id, guard DFA state)); each
    step advances all pending obligations and opens the chosen entry's
    guard at its initial state.  Obligations that reach a dead DFA state
    kill the run; universally accepting ones are dropped.
    """
    guard_dfas: dict = {}
    guard_meta: dict = {}

    def dfa_for(g: Nfa):
        key = id(g)
        if key not in guard_dfas:
            d = nfa_determinize(g)
            dead = set()
            for s in d.states:
                if nfa_is_empty(nfa_trim(accept_from(d, s))):
                    dead.add(s)
            universal = set()
            for s in d.states:
                if s in dead:
                    continue
                reach = {s}
                frontier = deque([s])
                ok = True
                while frontier and ok:
                    x = frontier.popleft()
                    if x not in d.final:
                        ok = False
                        break
                    for sym in d.alphabet:
                        y = next(iter(d.step({x}, sym)))
                        if y not in reach:
                            reach.add(y)
                            frontier.append(y)
                if ok:
                    universal.add(s)
            guard_dfas[key] = d
            guard_meta[key] = (dead, universal)
        return key, guard_dfas[key]

    def open_obligation(obs: frozenset, g: Nfa):
        key, d = dfa_for(g)
        dead, universal = guard_meta[key]
        s0 = next(iter(d.initial))
        if s0 in dead:
            return None
        if s0 in universal:
            return obs
        return obs | {(key, s0)}

    def advance(obs: frozenset, a: Symbol):
        nxt = set()
        for (key, s) in obs:
            d = guard_dfas[key]
            dead, universal = guard_meta[key]
            s2 = next(iter(d.step({s}, a)))
            if s2 in dead:
                return None
            if s2 in universal:
                continue
            nxt.add((key, s2))
        return frozenset(nxt)

    initial_entries = []
    states = set()
    frontier = deque()
    for (g, q, u) in t.initial:
        obs = open_obligation(frozenset(), g)
        if obs is None:
            continue
        st = (q, obs)
        initial_entries.append((st, u))
        if st not in states:
            states.add(st)
            frontier.append(st)
    transitions = []
    while frontier:
        st = frontier.popleft()
        (q, obs) = st
        for a in t.input_alphabet:
            stepped = advance(obs, a)
            if stepped is None:
                continue
            for (g, u, q2) in t.step_entries.get((q, a), ()):
                obs2 = open_obligation(stepped, g)
                if obs2 is None:
                    continue
                st2 = (q2, obs2)
                transitions.append((st, a, tuple(u), st2))
                if st2 not in states:
                    states.add(st2)
                    frontier.append(st2)
    final_entries = []
    for st in sorted(states, key=state_str):
        (q, obs) = st
        fin = t.terminal_map.get(q)
        if fin is None:
            continue
        if all(s in guard_dfas[key].final for (key, s) in obs):
            final_entries.append((st, tuple(fin)))
    return Nft(
        input_alphabet=t.input_alphabet,
        output_alphabet=t.output_alphabet,
        states=frozenset(states) if states else frozenset({("empty", frozenset())}),
        initial=tuple(initial_entries),
        final=tuple(final_entries),
        transitions=tuple(transitions),
    )


# ---------------------------------------------------------------------------
# Decomposition into reverse . g . reverse . f
# ---------------------------------------------------------------------------


def adorned_symbol(subset: tuple, a: Symbol) -> Symbol:
    """Printable name for the pair (subset state, letter)."""
    return "({" + ",".join(state_str(q) for q in subset) + "}," + a + ")"


@dataclass(frozen=True)
class ElgotDecomposition:
    """reverse(g(reverse(f(w)))) equals the original transducer on every word."""

    annotate: SequentialTransducer  # f: adorns each letter with the subset-run state
    read_back: SequentialTransducer  # g: consumes the reversed adorned word

    @property
    def f(self) -> SequentialTransducer:
        return self.annotate

    @property
    def g(self) -> SequentialTransducer:
        return self.read_back


def elgot_eval(d: ElgotDecomposition, w: Word) -> EvalOutcome:
    first = eval_sequential(d.annotate, w)
    if not first.in_domain():
        return EvalOutcome.not_in_domain()
    second = eval_sequential(d.read_back, reverse_word(first.output))
    if not second.in_domain():
        return EvalOutcome.not_in_domain()
    return EvalOutcome.unique(reverse_word(second.output))


def _check_unambiguous_nft(t: Nft):
    from .analysis import _trim_nft

    trimmed = _trim_nft(t)
    amb = nfa_ambiguous(trimmed.input_projection())
    if not amb.unambiguous:
        raise AmbiguousInput(
            f"transducer admits two accepting runs (witness {amb.witness!r})"
        )
    seen_edges: dict = {}
    for (p, a, u, q) in trimmed.distinct_transitions:
        if (p, a, q) in seen_edges and seen_edges[(p, a, q)] != u:
            raise AmbiguousInput(f"parallel transitions with distinct outputs at ({state_str(p)}, {a})")
        seen_edges.setdefault((p, a, q), u)
    for entries, what in ((trimmed.initial, "initial"), (trimmed.final, "final")):
        seen: dict = {}
        for (q, u) in dict.fromkeys(entries):
            if q in seen and seen[q] != u:
                raise AmbiguousInput(f"two {what} outputs on state {state_str(q)}")
            seen.setdefault(q, u)
    return trimmed


def elgot_decompose(t: Nft) -> ElgotDecomposition:
    """Split an unambiguous transducer into two sequential passes.

    The first pass annotates each input letter with the subset-construction
    state reached before it.  The second pass reads the annotated word in
    reverse: knowing the state the run ended in, each annotated letter
    determines the unique predecessor inside its subset, and outputs are
    emitted reversed.  Final outputs are folded into the second pass's
    first step (its fresh initial state), initial outputs into its
    terminal entries.
    """
    trimmed = _check_unambiguous_nft(t)
    proj = trimmed.input_projection()
    det = nfa_determinize(proj)
    sigma = trimmed.input_alphabet

    adorned_syms: list[Symbol] = []
    adorned_of: dict = {}
    for x in sorted(det.states, key=state_str):
        for a in sigma:
            name = adorned_symbol(x, a)
            adorned_of[(x, a)] = name
            adorned_syms.append(name)
    adorned_alphabet = Alphabet(tuple(adorned_syms))

    f_transitions = []
    for x in sorted(det.states, key=state_str):
        for a in sigma:
            y = next(iter(det.step({x}, a)))
            f_transitions.append((x, a, (adorned_of[(x, a)],), y))
    f = SequentialTransducer(
        input_alphabet=sigma,
        output_alphabet=adorned_alphabet,
        states=det.states,
        initial_state=next(iter(det.initial)),
        initial_output=(),
        transitions=tuple(f_transitions),
        terminal=tuple((x, ()) for x in det.final),
    )

    # Second pass over the reversed annotated word.
    fresh = "start"
    g_states = {fresh} | set(trimmed.states)
    g_transitions = []
    initial_out: dict = {}
    for (q, u) in dict.fromkeys(trimmed.initial):
        initial_out.setdefault(q, u)
    final_out: dict = {}
    for (q, u) in dict.fromkeys(trimmed.final):
        final_out.setdefault(q, u)

    by_target: dict = {}
    for (p, a, u, q) in trimmed.distinct_transitions:
        by_target.setdefault((q, a), []).append((p, u))

    for x in sorted(det.states, key=state_str):
        members = set(x)
        for a in sigma:
            sym = adorned_of[(x, a)]
            # Dispatch step: pick the accepting run's last transition.  Two
            # candidates would mean two accepting runs of one word, which
            # the unambiguity precondition rules out on annotated images;
            # elsewhere the step simply stays undefined.
            candidates = []
            for (q_fin, fout) in final_out.items():
                for (p, u) in by_target.get((q_fin, a), ()):
                    if p in members:
                        candidates.append((p, u, fout))
            if len(candidates) == 1:
                p, u, fout = candidates[0]
                g_transitions.append((fresh, sym, reverse_word(tuple(fout)) + reverse_word(tuple(u)), p))
            # Interior step: unique predecessor inside the subset.
            for q in sorted(trimmed.states, key=state_str):
                preds = [(p, u) for (p, u) in by_target.get((q, a), ()) if p in members]
                if len(preds) == 1:
                    p, u = preds[0]
                    g_transitions.append((q, sym, reverse_word(tuple(u)), p))

    g_terminal = [(q, reverse_word(tuple(u))) for (q, u) in initial_out.items()]
    # The empty word: both entries of the pipeline collapse to the fresh state.
    eps_entries = [
        (q, i_out, f_out)
        for q, i_out in initial_out.items()
        for q2, f_out in final_out.items()
        if q == q2
    ]
    if eps_entries:
        q, i_out, f_out = eps_entries[0]
        g_terminal.append((fresh, reverse_word(tuple(i_out) + tuple(f_out))))

    g = SequentialTransducer(
        input_alphabet=adorned_alphabet,
        output_alphabet=trimmed.output_alphabet,
        states=frozenset(g_states),
        initial_state=fresh,
        initial_output=(),
        transitions=tuple(g_transitions),
        terminal=tuple(g_terminal),
    )
    return ElgotDecomposition(annotate=f, read_back=g)

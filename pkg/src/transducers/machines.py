"""The four transducer models and their exact evaluation semantics.

* SequentialTransducer: one-way, input-deterministic, with an initial output
  word and terminal output words on accepting states.
* Nft: one-way nondeterministic, with sets of (state, output) initial and
  final entries; evaluation returns the set of outputs over all accepting
  runs.
* TwoWayDft: deterministic two-way machine over the marked tape LMARK w RMARK;
  evaluation is total thanks to configuration-repeat detection.
* RegisterTransducer: one-way deterministic machine updating word registers by
  simultaneous (parallel) substitution; copyless updates are a checked
  property, not a structural one.

All machines are immutable after construction; evaluators are pure.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional

from .errors import ForeignSymbol, HeadOutOfTape, RunExplosion, UndefinedStep
from .symbols import (
    Alphabet,
    ENDMARKERS,
    LMARK,
    RMARK,
    Symbol,
    Word,
    display_symbol,
    display_word,
)

LEFT = "L"
RIGHT = "R"

UNIQUE = "unique"
NOT_IN_DOMAIN = "not-in-domain"
AMBIGUOUS = "ambiguous"


@dataclass(frozen=True)
class EvalOutcome:
    """Result of applying a partial string function to one word."""

    kind: str
    outputs: tuple[Word, ...] = ()
    ambiguous_but_consistent: bool = False

    @classmethod
    def unique(cls, w: Word, multi_parse: bool = False) -> "EvalOutcome":
        return cls(UNIQUE, (w,), multi_parse)

    @classmethod
    def not_in_domain(cls) -> "EvalOutcome":
        return cls(NOT_IN_DOMAIN)

    @classmethod
    def ambiguous(cls, outputs) -> "EvalOutcome":
        outs = tuple(sorted(set(outputs)))
        if len(outs) < 2:
            raise ValueError("ambiguous outcome needs at least two distinct outputs")
        return cls(AMBIGUOUS, outs)

    @property
    def output(self) -> Word:
        if self.kind != UNIQUE:
            raise ValueError(f"no unique output: {self}")
        return self.outputs[0]

    def is_unique(self) -> bool:
        return self.kind == UNIQUE

    def in_domain(self) -> bool:
        return self.kind != NOT_IN_DOMAIN

    def map_outputs(self, fn) -> "EvalOutcome":
        return EvalOutcome(self.kind, tuple(fn(w) for w in self.outputs), self.ambiguous_but_consistent)

    def __str__(self) -> str:
        if self.kind == UNIQUE:
            return display_word(self.outputs[0])
        if self.kind == NOT_IN_DOMAIN:
            return "NOT-IN-DOMAIN"
        return "AMBIGUOUS: " + " ".join(display_word(w) for w in self.outputs)


@dataclass(frozen=True)
class Defect:
    kind: str
    detail: str

    def __str__(self) -> str:
        return f"{self.kind}: {self.detail}"


def _no_endmarkers(sigma: Alphabet, defects: list[Defect]):
    for m in ENDMARKERS:
        if m in sigma:
            defects.append(Defect("EndmarkerInInputAlphabet", f"{m} declared in input alphabet"))


# ---------------------------------------------------------------------------
# Sequential (one-way input-deterministic)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SequentialTransducer:
    input_alphabet: Alphabet
    output_alphabet: Alphabet
    states: frozenset
    initial_state: object
    initial_output: Word
    transitions: tuple  # of (state, symbol, output word, state)
    terminal: tuple  # of (state, output word)

    @cached_property
    def step_map(self) -> dict:
        look: dict = {}
        for (p, a, u, q) in self.transitions:
            look.setdefault((p, a), (u, q))
        return look

    @cached_property
    def terminal_map(self) -> dict:
        look: dict = {}
        for (q, u) in self.terminal:
            look.setdefault(q, u)
        return look


def eval_sequential(t: SequentialTransducer, w: Word) -> EvalOutcome:
    t.input_alphabet.check_word(w, "input")
    out: list[Symbol] = list(t.initial_output)
    q = t.initial_state
    for a in w:
        entry = t.step_map.get((q, a))
        if entry is None:
            return EvalOutcome.not_in_domain()
        u, q = entry
        out.extend(u)
    fin = t.terminal_map.get(q)
    if fin is None:
        return EvalOutcome.not_in_domain()
    out.extend(fin)
    return EvalOutcome.unique(tuple(out))


def run_sequential_from(t: SequentialTransducer, q, w: Word) -> Optional[tuple[object, Word]]:
    """Run the transition part only, from state ``q``; None when undefined."""
    out: list[Symbol] = []
    for a in w:
        entry = t.step_map.get((q, a))
        if entry is None:
            return None
        u, q = entry
        out.extend(u)
    return q, tuple(out)


# ---------------------------------------------------------------------------
# Nft (one-way nondeterministic)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Nft:
    input_alphabet: Alphabet
    output_alphabet: Alphabet
    states: frozenset
    initial: tuple  # of (state, output word)
    final: tuple  # of (state, output word)
    transitions: tuple  # of (state, symbol, output word, state)

    @cached_property
    def distinct_transitions(self) -> tuple:
        return tuple(dict.fromkeys(self.transitions))

    @cached_property
    def step_map(self) -> dict:
        look: dict = {}
        for (p, a, u, q) in self.distinct_transitions:
            look.setdefault((p, a), []).append((u, q))
        return look

    @cached_property
    def final_map(self) -> dict:
        look: dict = {}
        for (q, u) in dict.fromkeys(self.final):
            look.setdefault(q, []).append(u)
        return look

    def input_projection(self):
        """The acceptor underlying the input behaviour (domain automaton)."""
        from .nfa import Nfa

        return Nfa.make(
            self.input_alphabet,
            states=self.states,
            initial=[q for (q, _) in self.initial],
            final=[q for (q, _) in self.final],
            transitions=[(p, a, q) for (p, a, _, q) in self.distinct_transitions],
        )


def count_nft_runs(t: Nft, w: Word) -> int:
    counts: dict = {}
    for (q, _) in dict.fromkeys(t.initial):
        counts[q] = counts.get(q, 0) + 1
    for a in w:
        nxt: dict = {}
        for q, c in counts.items():
            for (_, r) in t.step_map.get((q, a), ()):
                nxt[r] = nxt.get(r, 0) + c
        counts = nxt
    total = 0
    for (q, outs) in t.final_map.items():
        total += counts.get(q, 0) * len(outs)
    return total


def eval_nft(t: Nft, w: Word, run_cap: int = 10**6) -> set[Word]:
    """Set of outputs over all accepting runs; empty means not in the domain."""
    t.input_alphabet.check_word(w, "input")
    runs = count_nft_runs(t, w)
    if runs > run_cap:
        raise RunExplosion(f"{runs} accepting runs exceed cap {run_cap}")
    partial: dict = {}
    for (q, u) in dict.fromkeys(t.initial):
        partial.setdefault(q, set()).add(tuple(u))
    for a in w:
        nxt: dict = {}
        for q, outs in partial.items():
            for (u, r) in t.step_map.get((q, a), ()):
                bucket = nxt.setdefault(r, set())
                for o in outs:
                    bucket.add(o + u)
        partial = nxt
    results: set[Word] = set()
    for (q, fins) in t.final_map.items():
        for o in partial.get(q, ()):
            for fin in fins:
                results.add(o + fin)
    return results


def nft_outcome(t: Nft, w: Word, run_cap: int = 10**6) -> EvalOutcome:
    outs = eval_nft(t, w, run_cap)
    if not outs:
        return EvalOutcome.not_in_domain()
    if len(outs) == 1:
        return EvalOutcome.unique(next(iter(outs)), multi_parse=count_nft_runs(t, w) > 1)
    return EvalOutcome.ambiguous(outs)


def sequential_to_nft(t: SequentialTransducer) -> Nft:
    return Nft(
        t.input_alphabet,
        t.output_alphabet,
        t.states,
        ((t.initial_state, t.initial_output),),
        tuple(t.terminal),
        tuple(t.transitions),
    )


# ---------------------------------------------------------------------------
# Two-way deterministic
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TwoWayDft:
    input_alphabet: Alphabet
    output_alphabet: Alphabet
    states: frozenset
    initial_state: object
    final_states: frozenset
    transitions: tuple  # of (state, symbol, output word, move L/R, state)

    @cached_property
    def step_map(self) -> dict:
        look: dict = {}
        for (p, a, u, d, q) in self.transitions:
            look.setdefault((p, a), (u, d, q))
        return look


def eval_2dft(t: TwoWayDft, w: Word) -> EvalOutcome:
    """Run over the tape LMARK w RMARK from position 0.

    The raw output may contain endmarkers when the machine emits them;
    use ``strip_endmarkers`` for the cross-model view.  Undefined steps and
    repeated configurations both mean the word is outside the domain, so
    evaluation always terminates.
    """
    t.input_alphabet.check_word(w, "input")
    tape: tuple[Symbol, ...] = (LMARK,) + w + (RMARK,)
    q = t.initial_state
    pos = 0
    out: list[Symbol] = []
    seen: set = set()
    if q in t.final_states:
        return EvalOutcome.unique(tuple(out))
    while True:
        if pos < 0 or pos >= len(tape):
            raise HeadOutOfTape(f"head at {pos} on tape of length {len(tape)}")
        cfg = (q, pos)
        if cfg in seen:
            return EvalOutcome.not_in_domain()
        seen.add(cfg)
        entry = t.step_map.get((q, tape[pos]))
        if entry is None:
            return EvalOutcome.not_in_domain()
        u, d, q = entry
        out.extend(u)
        pos += 1 if d == RIGHT else -1
        if q in t.final_states:
            return EvalOutcome.unique(tuple(out))


def trace_2dft(t: TwoWayDft, w: Word) -> tuple[EvalOutcome, list[tuple]]:
    """Like ``eval_2dft`` but also returns the visited (state, position) list."""
    t.input_alphabet.check_word(w, "input")
    tape: tuple[Symbol, ...] = (LMARK,) + w + (RMARK,)
    q = t.initial_state
    pos = 0
    out: list[Symbol] = []
    visited: list[tuple] = []
    seen: set = set()
    if q in t.final_states:
        return EvalOutcome.unique(tuple(out)), visited
    while True:
        if pos < 0 or pos >= len(tape):
            raise HeadOutOfTape(f"head at {pos} on tape of length {len(tape)}")
        cfg = (q, pos)
        if cfg in seen:
            return EvalOutcome.not_in_domain(), visited
        seen.add(cfg)
        visited.append(cfg)
        entry = t.step_map.get((q, tape[pos]))
        if entry is None:
            return EvalOutcome.not_in_domain(), visited
        u, d, q = entry
        out.extend(u)
        pos += 1 if d == RIGHT else -1
        if q in t.final_states:
            return EvalOutcome.unique(tuple(out)), visited


def strip_endmarkers(w: Word) -> Word:
    lo, hi = 0, len(w)
    while lo < hi and w[lo] in ENDMARKERS:
        lo += 1
    while hi > lo and w[hi - 1] in ENDMARKERS:
        hi -= 1
    return w[lo:hi]


# ---------------------------------------------------------------------------
# Register machines
# ---------------------------------------------------------------------------

# Update expressions are token tuples; a token is ("reg", name) or
# ("lit", symbol).  Each transition carries one (register -> expression)
# assignment per register it changes; unmentioned registers keep their value.

UpdateExpr = tuple  # of ("reg", name) | ("lit", symbol)


@dataclass(frozen=True)
class RegisterTransducer:
    input_alphabet: Alphabet
    output_alphabet: Alphabet
    states: frozenset
    registers: tuple[str, ...]
    initial_state: object
    initial_valuation: tuple  # of (register, word)
    transitions: tuple  # of (state, symbol, state, updates) with updates a tuple of (register, UpdateExpr)
    outputs: tuple  # of (state, UpdateExpr)

    @cached_property
    def step_map(self) -> dict:
        look: dict = {}
        for (p, a, q, ups) in self.transitions:
            look.setdefault((p, a), (q, ups))
        return look

    @cached_property
    def output_map(self) -> dict:
        look: dict = {}
        for (q, expr) in self.outputs:
            look.setdefault(q, expr)
        return look


def _eval_update_expr(expr: UpdateExpr, valuation: dict) -> Word:
    out: list[Symbol] = []
    for tok in expr:
        kind, val = tok
        if kind == "reg":
            out.extend(valuation[val])
        else:
            out.append(val)
    return tuple(out)


def eval_register(t: RegisterTransducer, w: Word) -> EvalOutcome:
    """Deterministic run with simultaneous assignment.

    All right-hand sides of one update read the pre-update valuation; this
    is what makes copyful update lists such as Y:=X1 ; X:=X0 well defined
    independently of their written order.
    """
    t.input_alphabet.check_word(w, "input")
    valuation: dict = {r: () for r in t.registers}
    for (r, v) in t.initial_valuation:
        valuation[r] = tuple(v)
    q = t.initial_state
    for a in w:
        entry = t.step_map.get((q, a))
        if entry is None:
            raise UndefinedStep(f"no update rule for state {q!r} on {display_symbol(a)!r}")
        q, ups = entry
        new_valuation = dict(valuation)
        for (r, expr) in ups:
            new_valuation[r] = _eval_update_expr(expr, valuation)
        valuation = new_valuation
    expr = t.output_map.get(q)
    if expr is None:
        return EvalOutcome.not_in_domain()
    return EvalOutcome.unique(_eval_update_expr(expr, valuation))


@dataclass(frozen=True)
class CopylessResult:
    copyless: bool
    state: object = None
    symbol: Optional[Symbol] = None
    register: Optional[str] = None

    def __bool__(self) -> bool:
        return self.copyless


def validate_copyless(t: RegisterTransducer) -> CopylessResult:
    """Copyless iff within each update every register occurs at most once
    across all right-hand sides combined."""
    for (p, a, _, ups) in t.transitions:
        counts: dict = {}
        for (_, expr) in ups:
            for (kind, val) in expr:
                if kind == "reg":
                    counts[val] = counts.get(val, 0) + 1
        for r in t.registers:
            if counts.get(r, 0) > 1:
                return CopylessResult(False, p, a, r)
    return CopylessResult(True)


# ---------------------------------------------------------------------------
# Structural validation
# ---------------------------------------------------------------------------


def validate_machine(m) -> list[Defect]:
    """Structural defects; an empty list means the machine is well formed."""
    defects: list[Defect] = []
    if isinstance(m, SequentialTransducer):
        _no_endmarkers(m.input_alphabet, defects)
        if m.initial_state not in m.states:
            defects.append(Defect("ForeignState", f"initial state {state_or(m.initial_state)}"))
        m_keys: set = set()
        for (p, a, u, q) in m.transitions:
            _check_edge(m, p, a, q, u, defects)
            if (p, a) in m_keys:
                defects.append(Defect("DuplicateTransition", f"two entries for ({state_or(p)}, {display_symbol(a)})"))
            m_keys.add((p, a))
        for (q, u) in m.terminal:
            if q not in m.states:
                defects.append(Defect("ForeignState", f"terminal state {state_or(q)}"))
            _check_output_word(m.output_alphabet, u, defects)
        _check_output_word(m.output_alphabet, m.initial_output, defects)
    elif isinstance(m, Nft):
        _no_endmarkers(m.input_alphabet, defects)
        for (q, u) in m.initial + m.final:
            if q not in m.states:
                defects.append(Defect("ForeignState", f"entry state {state_or(q)}"))
            _check_output_word(m.output_alphabet, u, defects)
        for (p, a, u, q) in m.transitions:
            _check_edge(m, p, a, q, u, defects)
    elif isinstance(m, TwoWayDft):
        _no_endmarkers(m.input_alphabet, defects)
        if m.initial_state not in m.states:
            defects.append(Defect("ForeignState", f"initial state {state_or(m.initial_state)}"))
        for q in m.final_states:
            if q not in m.states:
                defects.append(Defect("ForeignState", f"final state {state_or(q)}"))
        keys: set = set()
        tape_syms = set(m.input_alphabet.symbols) | set(ENDMARKERS)
        out_syms = set(m.output_alphabet.symbols) | set(ENDMARKERS)
        for (p, a, u, d, q) in m.transitions:
            if p not in m.states or q not in m.states:
                defects.append(Defect("ForeignState", f"transition endpoint {state_or(p)}/{state_or(q)}"))
            if a not in tape_syms:
                defects.append(Defect("ForeignSymbol", f"transition on {display_symbol(a)}"))
            for s in u:
                if s not in out_syms:
                    defects.append(Defect("ForeignSymbol", f"output symbol {display_symbol(s)}"))
            if d not in (LEFT, RIGHT):
                defects.append(Defect("BadMove", f"move {d!r}"))
            if (p, a) in keys:
                defects.append(Defect("DuplicateTransition", f"two entries for ({state_or(p)}, {display_symbol(a)})"))
            keys.add((p, a))
            # The head sits on LMARK only at position 0 and on RMARK only at
            # the last cell, so these moves would leave the tape unless the
            # machine halts by entering a final state first.
            if a == LMARK and d == LEFT and q not in m.final_states:
                defects.append(Defect("FallsOffTape", f"({state_or(p)}, {display_symbol(a)}) moves left at position 0"))
            if a == RMARK and d == RIGHT and q not in m.final_states:
                defects.append(Defect("FallsOffTape", f"({state_or(p)}, {display_symbol(a)}) moves right past the tape"))
    elif isinstance(m, RegisterTransducer):
        _no_endmarkers(m.input_alphabet, defects)
        regs = set(m.registers)
        if m.initial_state not in m.states:
            defects.append(Defect("ForeignState", f"initial state {state_or(m.initial_state)}"))
        for (r, v) in m.initial_valuation:
            if r not in regs:
                defects.append(Defect("MalformedUpdate", f"initial value for unknown register {r}"))
            _check_output_word(m.output_alphabet, v, defects)
        keys: set = set()
        for (p, a, q, ups) in m.transitions:
            if p not in m.states or q not in m.states:
                defects.append(Defect("ForeignState", f"transition endpoint {state_or(p)}/{state_or(q)}"))
            if a not in m.input_alphabet:
                defects.append(Defect("ForeignSymbol", f"transition on {display_symbol(a)}"))
            if (p, a) in keys:
                defects.append(Defect("DuplicateTransition", f"two entries for ({state_or(p)}, {display_symbol(a)})"))
            keys.add((p, a))
            assigned: set = set()
            for (r, expr) in ups:
                if r not in regs:
                    defects.append(Defect("MalformedUpdate", f"assignment to unknown register {r}"))
                if r in assigned:
                    defects.append(Defect("MalformedUpdate", f"register {r} assigned twice in one update"))
                assigned.add(r)
                _check_update_expr(m, expr, defects)
        for (q, expr) in m.outputs:
            if q not in m.states:
                defects.append(Defect("ForeignState", f"output state {state_or(q)}"))
            _check_update_expr(m, expr, defects)
    else:
        defects.append(Defect("UnknownKind", f"cannot validate {type(m).__name__}"))
    return defects


def state_or(q) -> str:
    from .nfa import state_str

    return state_str(q)


def _check_edge(m, p, a, q, u, defects: list[Defect]):
    if p not in m.states or q not in m.states:
        defects.append(Defect("ForeignState", f"transition endpoint {state_or(p)}/{state_or(q)}"))
    if a not in m.input_alphabet:
        defects.append(Defect("ForeignSymbol", f"transition on {display_symbol(a)}"))
    _check_output_word(m.output_alphabet, u, defects)


def _check_output_word(gamma: Alphabet, u: Word, defects: list[Defect]):
    for s in u:
        if s not in gamma:
            defects.append(Defect("ForeignSymbol", f"output symbol {display_symbol(s)}"))


def _check_update_expr(m: "RegisterTransducer", expr: UpdateExpr, defects: list[Defect]):
    regs = set(m.registers)
    for (kind, val) in expr:
        if kind == "reg":
            if val not in regs:
                defects.append(Defect("MalformedUpdate", f"reference to unknown register {val}"))
        elif kind == "lit":
            if val not in m.output_alphabet:
                defects.append(Defect("ForeignSymbol", f"literal {display_symbol(val)} not in output alphabet"))
        else:
            defects.append(Defect("MalformedUpdate", f"unknown token kind {kind!r}"))


def require_valid(m):
    defects = validate_machine(m)
    if defects:
        raise ValueError("invalid machine: " + "; ".join(str(d) for d in defects))
    return m

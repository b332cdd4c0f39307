"""JSON machine files and DOT export.

The JSON layout is versioned with ``formatVersion`` and fixed per machine
kind; serialization is canonical (states sorted, two-space indent, trailing
newline) so files round-trip byte for byte.  Output words are written in
the word syntax of ``symbols``; alphabet entries and ``on`` fields hold one
symbol each, with the endmarkers spelled LMARK and RMARK.
"""
from __future__ import annotations

import json

from .machines import (
    Nft,
    RegisterTransducer,
    SequentialTransducer,
    TwoWayDft,
    require_valid,
)
from .nfa import Nfa, state_str
from .symbols import (
    Alphabet,
    Symbol,
    Word,
    display_symbol,
    display_word,
    normalize_symbol,
    parse_word,
)

FORMAT_VERSION = 1


def _sym_out(s: Symbol) -> str:
    return s


def _sym_in(s: str) -> Symbol:
    return normalize_symbol(s)


def _word_out(w: Word) -> str:
    return display_word(w)


def _word_in(text: str) -> Word:
    return parse_word(text)


def _alphabet_out(a: Alphabet) -> list:
    return [_sym_out(s) for s in a.symbols]


def _alphabet_in(items: list) -> Alphabet:
    return Alphabet(tuple(_sym_in(s) for s in items))


def _states_out(states) -> list:
    return sorted((state_str(q) for q in states))


# ---------------------------------------------------------------------------
# Machine -> dict
# ---------------------------------------------------------------------------


def machine_to_dict(m) -> dict:
    if isinstance(m, SequentialTransducer):
        return {
            "formatVersion": FORMAT_VERSION,
            "kind": "sequential",
            "inputAlphabet": _alphabet_out(m.input_alphabet),
            "outputAlphabet": _alphabet_out(m.output_alphabet),
            "states": _states_out(m.states),
            "initialState": state_str(m.initial_state),
            "initialOutput": _word_out(m.initial_output),
            "terminal": [
                {"state": state_str(q), "out": _word_out(u)} for (q, u) in m.terminal
            ],
            "transitions": [
                {"from": state_str(p), "on": _sym_out(a), "out": _word_out(u), "to": state_str(q)}
                for (p, a, u, q) in m.transitions
            ],
        }
    if isinstance(m, Nft):
        return {
            "formatVersion": FORMAT_VERSION,
            "kind": "nft",
            "inputAlphabet": _alphabet_out(m.input_alphabet),
            "outputAlphabet": _alphabet_out(m.output_alphabet),
            "states": _states_out(m.states),
            "initial": [{"state": state_str(q), "out": _word_out(u)} for (q, u) in m.initial],
            "final": [{"state": state_str(q), "out": _word_out(u)} for (q, u) in m.final],
            "transitions": [
                {"from": state_str(p), "on": _sym_out(a), "out": _word_out(u), "to": state_str(q)}
                for (p, a, u, q) in m.transitions
            ],
        }
    if isinstance(m, TwoWayDft):
        return {
            "formatVersion": FORMAT_VERSION,
            "kind": "twoway",
            "inputAlphabet": _alphabet_out(m.input_alphabet),
            "outputAlphabet": _alphabet_out(m.output_alphabet),
            "states": _states_out(m.states),
            "initialState": state_str(m.initial_state),
            "finalStates": _states_out(m.final_states),
            "transitions": [
                {
                    "from": state_str(p),
                    "on": _sym_out(a),
                    "out": _word_out(u),
                    "move": d,
                    "to": state_str(q),
                }
                for (p, a, u, d, q) in m.transitions
            ],
        }
    if isinstance(m, RegisterTransducer):
        return {
            "formatVersion": FORMAT_VERSION,
            "kind": "register",
            "inputAlphabet": _alphabet_out(m.input_alphabet),
            "outputAlphabet": _alphabet_out(m.output_alphabet),
            "states": _states_out(m.states),
            "registers": list(m.registers),
            "initialState": state_str(m.initial_state),
            "init": {r: _word_out(v) for (r, v) in m.initial_valuation},
            "transitions": [
                {
                    "from": state_str(p),
                    "on": _sym_out(a),
                    "to": state_str(q),
                    "updates": {r: _tokens_out(expr) for (r, expr) in ups},
                }
                for (p, a, q, ups) in m.transitions
            ],
            "outputs": {state_str(q): _tokens_out(expr) for (q, expr) in m.outputs},
        }
    raise TypeError(f"cannot serialize {type(m).__name__}")


def _tokens_out(expr) -> list:
    return [{"reg": v} if k == "reg" else {"lit": _sym_out(v)} for (k, v) in expr]


def _tokens_in(items: list) -> tuple:
    out = []
    for tok in items:
        if "reg" in tok:
            out.append(("reg", tok["reg"]))
        else:
            out.append(("lit", _sym_in(tok["lit"])))
    return tuple(out)


# ---------------------------------------------------------------------------
# dict -> machine
# ---------------------------------------------------------------------------


def machine_from_dict(d: dict):
    version = d.get("formatVersion")
    if version != FORMAT_VERSION:
        raise ValueError(f"unsupported formatVersion {version!r}")
    kind = d.get("kind")
    if kind == "sequential":
        m = SequentialTransducer(
            input_alphabet=_alphabet_in(d["inputAlphabet"]),
            output_alphabet=_alphabet_in(d["outputAlphabet"]),
            states=frozenset(d["states"]),
            initial_state=d["initialState"],
            initial_output=_word_in(d.get("initialOutput", "")),
            transitions=tuple(
                (t["from"], _sym_in(t["on"]), _word_in(t["out"]), t["to"])
                for t in d["transitions"]
            ),
            terminal=tuple((e["state"], _word_in(e["out"])) for e in d["terminal"]),
        )
    elif kind == "nft":
        m = Nft(
            input_alphabet=_alphabet_in(d["inputAlphabet"]),
            output_alphabet=_alphabet_in(d["outputAlphabet"]),
            states=frozenset(d["states"]),
            initial=tuple((e["state"], _word_in(e["out"])) for e in d["initial"]),
            final=tuple((e["state"], _word_in(e["out"])) for e in d["final"]),
            transitions=tuple(
                (t["from"], _sym_in(t["on"]), _word_in(t["out"]), t["to"])
                for t in d["transitions"]
            ),
        )
    elif kind == "twoway":
        m = TwoWayDft(
            input_alphabet=_alphabet_in(d["inputAlphabet"]),
            output_alphabet=_alphabet_in(d["outputAlphabet"]),
            states=frozenset(d["states"]),
            initial_state=d["initialState"],
            final_states=frozenset(d["finalStates"]),
            transitions=tuple(
                (t["from"], _sym_in(t["on"]), _word_in(t["out"]), t["move"], t["to"])
                for t in d["transitions"]
            ),
        )
    elif kind == "register":
        m = RegisterTransducer(
            input_alphabet=_alphabet_in(d["inputAlphabet"]),
            output_alphabet=_alphabet_in(d["outputAlphabet"]),
            states=frozenset(d["states"]),
            registers=tuple(d["registers"]),
            initial_state=d["initialState"],
            initial_valuation=tuple((r, _word_in(v)) for r, v in d["init"].items()),
            transitions=tuple(
                (
                    t["from"],
                    _sym_in(t["on"]),
                    t["to"],
                    tuple((r, _tokens_in(toks)) for r, toks in t["updates"].items()),
                )
                for t in d["transitions"]
            ),
            outputs=tuple((q, _tokens_in(toks)) for q, toks in d["outputs"].items()),
        )
    else:
        raise ValueError(f"unknown machine kind {kind!r}")
    return require_valid(m)


def dumps_canonical(d: dict) -> str:
    return json.dumps(d, indent=2, ensure_ascii=False) + "\n"


def save_machine(m, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_canonical(machine_to_dict(m)))


def load_machine(path):
    with open(path, "r", encoding="utf-8") as fh:
        return machine_from_dict(json.load(fh))


# ---------------------------------------------------------------------------
# NFA files
# ---------------------------------------------------------------------------


def nfa_to_dict(a: Nfa) -> dict:
    return {
        "formatVersion": FORMAT_VERSION,
        "kind": "nfa",
        "alphabet": _alphabet_out(a.alphabet),
        "states": _states_out(a.states),
        "initial": sorted(state_str(q) for q in a.initial),
        "final": sorted(state_str(q) for q in a.final),
        "transitions": sorted(
            (
                {"from": state_str(p), "on": _sym_out(s), "to": state_str(q)}
                for (p, s, q) in a.transitions
            ),
            key=lambda t: (t["from"], t["on"], t["to"]),
        ),
    }


def nfa_from_dict(d: dict) -> Nfa:
    if d.get("kind") != "nfa":
        raise ValueError(f"not an acceptor file: kind {d.get('kind')!r}")
    return Nfa.make(
        _alphabet_in(d["alphabet"]),
        states=d["states"],
        initial=d["initial"],
        final=d["final"],
        transitions=[(t["from"], _sym_in(t["on"]), t["to"]) for t in d["transitions"]],
    )


def save_nfa(a: Nfa, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_canonical(nfa_to_dict(a)))


def load_nfa(path) -> Nfa:
    with open(path, "r", encoding="utf-8") as fh:
        return nfa_from_dict(json.load(fh))


# ---------------------------------------------------------------------------
# DOT export
# ---------------------------------------------------------------------------


def _esc(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def _dot_word(w: Word) -> str:
    s = display_word(w)
    return s if s else "ε"


def export_dot(obj, name: str = "machine") -> str:
    lines = [f'digraph "{_esc(name)}" {{', "  rankdir=LR;", '  node [shape=circle];']

    def node_id(q) -> str:
        return '"' + _esc(state_str(q)) + '"'

    def point(tag: str) -> str:
        lines.append(f'  "__{tag}" [shape=point, label=""];')
        return f'"__{tag}"'

    if isinstance(obj, SequentialTransducer):
        for (q, u) in obj.terminal:
            lines.append(f"  {node_id(q)} [shape=doublecircle];")
        src = point("init")
        lines.append(f'  {src} -> {node_id(obj.initial_state)} [label="{_esc(_dot_word(obj.initial_output))}"];')
        for i, (q, u) in enumerate(obj.terminal):
            dst = point(f"fin{i}")
            lines.append(f'  {node_id(q)} -> {dst} [label="{_esc(_dot_word(u))}"];')
        for (p, a, u, q) in obj.transitions:
            lines.append(
                f'  {node_id(p)} -> {node_id(q)} [label="{_esc(display_symbol(a))} | {_esc(_dot_word(u))}"];'
            )
    elif isinstance(obj, Nft):
        for i, (q, u) in enumerate(obj.initial):
            src = point(f"init{i}")
            lines.append(f'  {src} -> {node_id(q)} [label="{_esc(_dot_word(u))}"];')
        for i, (q, u) in enumerate(obj.final):
            lines.append(f"  {node_id(q)} [shape=doublecircle];")
            dst = point(f"fin{i}")
            lines.append(f'  {node_id(q)} -> {dst} [label="{_esc(_dot_word(u))}"];')
        for (p, a, u, q) in obj.transitions:
            lines.append(
                f'  {node_id(p)} -> {node_id(q)} [label="{_esc(display_symbol(a))} | {_esc(_dot_word(u))}"];'
            )
    elif isinstance(obj, TwoWayDft):
        for q in sorted(obj.final_states, key=state_str):
            lines.append(f"  {node_id(q)} [shape=doublecircle];")
        src = point("init")
        lines.append(f"  {src} -> {node_id(obj.initial_state)};")
        for (p, a, u, d, q) in obj.transitions:
            lines.append(
                f'  {node_id(p)} -> {node_id(q)} '
                f'[label="{_esc(display_symbol(a))} | {_esc(_dot_word(u))}, {d}"];'
            )
    elif isinstance(obj, RegisterTransducer):
        src = point("init")
        init = "; ".join(f"{r}:={_dot_word(v)}" for (r, v) in obj.initial_valuation)
        lines.append(f'  {src} -> {node_id(obj.initial_state)} [label="{_esc(init)}"];')
        for i, (q, expr) in enumerate(obj.outputs):
            lines.append(f"  {node_id(q)} [shape=doublecircle];")
            dst = point(f"out{i}")
            lines.append(f'  {node_id(q)} -> {dst} [label="{_esc(_format_expr(expr))}"];')
        for (p, a, q, ups) in obj.transitions:
            upd = "; ".join(f"{r}:={_format_expr(expr)}" for (r, expr) in ups)
            lines.append(
                f'  {node_id(p)} -> {node_id(q)} [label="{_esc(display_symbol(a))} | {_esc(upd)}"];'
            )
    elif isinstance(obj, Nfa):
        for q in sorted(obj.final, key=state_str):
            lines.append(f"  {node_id(q)} [shape=doublecircle];")
        for i, q in enumerate(sorted(obj.initial, key=state_str)):
            src = point(f"init{i}")
            lines.append(f"  {src} -> {node_id(q)};")
        for (p, a, q) in sorted(obj.transitions, key=lambda t: (state_str(t[0]), t[1], state_str(t[2]))):
            lines.append(f'  {node_id(p)} -> {node_id(q)} [label="{_esc(display_symbol(a))}"];')
    else:
        raise TypeError(f"cannot export {type(obj).__name__}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _format_expr(expr) -> str:
    parts = []
    for (k, v) in expr:
        parts.append(v if k == "reg" else display_symbol(v))
    return "".join(parts) if parts else "ε"

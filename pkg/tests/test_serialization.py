import json

import pytest

from transducers.bundled import EXPRESSION_TEXTS, machine_builders
from transducers.fixtures import FIXTURE_NAMES, fixture_path, fixture_text
from transducers.machines import validate_machine
from transducers.nfa import dfa_equiv, nfa_universal
from transducers.regexes import regex_to_nfa
from transducers.serialization import (
    dumps_canonical,
    export_dot,
    load_machine,
    machine_from_dict,
    machine_to_dict,
    nfa_from_dict,
    nfa_to_dict,
)
from transducers.symbols import Alphabet

from helpers import BITS


@pytest.mark.parametrize("name", [n for n in FIXTURE_NAMES if n.endswith(".json")])
def test_fixture_files_load_validate_and_round_trip(name):
    path = fixture_path(name)
    machine = load_machine(path)
    assert validate_machine(machine) == []
    original = path.read_bytes()
    again = dumps_canonical(machine_to_dict(machine)).encode("utf-8")
    assert again == original
    # parse -> serialize -> parse is the identity
    reloaded = machine_from_dict(json.loads(again.decode("utf-8")))
    assert machine_to_dict(reloaded) == machine_to_dict(machine)


@pytest.mark.parametrize("name", [n for n in FIXTURE_NAMES if n.endswith(".rte")])
def test_expression_fixtures_parse(name):
    from transducers.rte_parser import parse_rte

    parse_rte(fixture_text(name))


def test_fixture_files_match_builders():
    for name, build in machine_builders().items():
        on_disk = fixture_path(name).read_text(encoding="utf-8")
        assert on_disk == dumps_canonical(machine_to_dict(build()))
    for name, text in EXPRESSION_TEXTS.items():
        assert fixture_text(name) == text


def test_unknown_kind_rejected():
    with pytest.raises(ValueError):
        machine_from_dict({"formatVersion": 1, "kind": "mealy"})


def test_bad_format_version_rejected():
    with pytest.raises(ValueError):
        machine_from_dict({"formatVersion": 2, "kind": "nft"})


def test_invalid_machine_rejected_on_load(tmp_path):
    d = {
        "formatVersion": 1,
        "kind": "nft",
        "inputAlphabet": ["0", "1"],
        "outputAlphabet": ["0", "1"],
        "states": ["1"],
        "initial": [{"state": "1", "out": ""}],
        "final": [{"state": "ghost", "out": ""}],
        "transitions": [],
    }
    with pytest.raises(ValueError):
        machine_from_dict(d)


def test_nfa_round_trip():
    a = regex_to_nfa("('0'+'1')*.'0'.'1'*", BITS)
    d = nfa_to_dict(a)
    b = nfa_from_dict(json.loads(dumps_canonical(d)))
    assert dfa_equiv(a, b).equivalent
    assert nfa_to_dict(b) == nfa_to_dict(nfa_from_dict(d))


def test_dot_export_all_kinds(fig1, fig2right, fig3, fig5):
    for m, fragment in (
        (fig1, "{bs} | {bs}"),
        (fig2right, "0 | 1"),
        (fig3, "1 | {rmark}"),  # endmarker emitted while moving right
        (fig5, "Z:=X"),
    ):
        dot = export_dot(m)
        assert dot.startswith("digraph")
        assert dot.rstrip().endswith("}")
    dot3 = export_dot(fig3)
    assert ", R" in dot3 and ", L" in dot3
    assert "doublecircle" in dot3
    assert export_dot(nfa_universal(Alphabet.of("a"))).startswith("digraph")

"""Command-line interface.

    transducers eval --machine FILE|--expr FILE --input WORD [--raw]
    transducers check functional FILE | equiv A B | unambiguous FILE | copyless FILE
    transducers transform compose A B -o C
                         decompose-elgot A -o PREFIX
                         rewrite --pass NAME EXPR -o OUT
                         dom EXPR -o NFAFILE
                         export-dot FILE -o DOTFILE
    transducers difftest --left REF --right REF --alphabet SYMS [--maxlen N] [--strip]

Exit codes: 0 success or positive verdict, 2 not in domain, 3 negative
verdict / ambiguous / mismatch, 1 usage or validation errors.

A REF is a machine file (.json), an expression file (.rte), or
``elgot:PREFIX`` naming the two halves PREFIX.f.json / PREFIX.g.json of a
decomposition evaluated as reverse . g . reverse . f.
"""
from __future__ import annotations

import argparse
import json
import sys

from .analysis import check_functional, equiv_functional
from .constructions import ElgotDecomposition, compose_sequential, elgot_decompose, elgot_eval
from .difftest import run_difftest
from .errors import ToolkitError
from .machines import (
    EvalOutcome,
    Nft,
    RegisterTransducer,
    SequentialTransducer,
    TwoWayDft,
    eval_2dft,
    eval_register,
    eval_sequential,
    nft_outcome,
    sequential_to_nft,
    strip_endmarkers,
    validate_copyless,
)
from .rte import check_unambiguous, eval_rte, rewrite, rte_domain, REWRITE_PASSES
from .rte_parser import expr_to_text, parse_rte
from .serialization import export_dot, load_machine, save_machine, save_nfa
from .symbols import Alphabet, Word, display_word, parse_word

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_IN_DOMAIN = 2
EXIT_NEGATIVE = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ToolkitError(f"usage: {message}")


def _build_parser() -> _Parser:
    p = _Parser(prog="transducers", description="string transducer toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", help="apply a machine or expression to a word")
    src = ev.add_mutually_exclusive_group(required=True)
    src.add_argument("--machine")
    src.add_argument("--expr")
    ev.add_argument("--input", required=True)
    ev.add_argument("--raw", action="store_true", help="keep endmarkers in two-way outputs")

    ck = sub.add_parser("check", help="decision procedures")
    ck.add_argument("--json", action="store_true", help="machine-readable report")
    cks = ck.add_subparsers(dest="what", required=True)
    ck_f = cks.add_parser("functional")
    ck_f.add_argument("file")
    ck_e = cks.add_parser("equiv")
    ck_e.add_argument("left")
    ck_e.add_argument("right")
    ck_u = cks.add_parser("unambiguous")
    ck_u.add_argument("file")
    ck_c = cks.add_parser("copyless")
    ck_c.add_argument("file")

    tr = sub.add_parser("transform", help="constructions and rewrites")
    trs = tr.add_subparsers(dest="what", required=True)
    tr_c = trs.add_parser("compose")
    tr_c.add_argument("first")
    tr_c.add_argument("second")
    tr_c.add_argument("-o", "--output", required=True)
    tr_e = trs.add_parser("decompose-elgot")
    tr_e.add_argument("file")
    tr_e.add_argument("-o", "--output", required=True, help="prefix for .f.json and .g.json")
    tr_r = trs.add_parser("rewrite")
    tr_r.add_argument("--pass", dest="pass_name", required=True, choices=REWRITE_PASSES)
    tr_r.add_argument("file")
    tr_r.add_argument("-o", "--output", required=True)
    tr_d = trs.add_parser("dom")
    tr_d.add_argument("file")
    tr_d.add_argument("-o", "--output", required=True)
    tr_x = trs.add_parser("export-dot")
    tr_x.add_argument("file")
    tr_x.add_argument("-o", "--output", required=True)

    df = sub.add_parser("difftest", help="compare two functions on all short words")
    df.add_argument("--left", required=True)
    df.add_argument("--right", required=True)
    df.add_argument("--alphabet", required=True, help="symbols in word syntax, e.g. 01 or 01#")
    df.add_argument("--maxlen", type=int, default=10)
    df.add_argument("--strip", action="store_true")
    df.add_argument("--json", action="store_true", help="machine-readable report")
    return p


def machine_outcome(m, w: Word, raw: bool = False) -> EvalOutcome:
    if isinstance(m, SequentialTransducer):
        return eval_sequential(m, w)
    if isinstance(m, Nft):
        return nft_outcome(m, w)
    if isinstance(m, TwoWayDft):
        out = eval_2dft(m, w)
        if raw or not out.is_unique():
            return out
        return out.map_outputs(strip_endmarkers)
    if isinstance(m, RegisterTransducer):
        return eval_register(m, w)
    raise ToolkitError(f"cannot evaluate {type(m).__name__}")


def load_ref(ref: str):
    """(name, evaluator) for a machine file, expression file, or decomposition."""
    if ref.startswith("elgot:"):
        prefix = ref[len("elgot:") :]
        d = ElgotDecomposition(
            annotate=load_machine(prefix + ".f.json"),
            read_back=load_machine(prefix + ".g.json"),
        )
        return ref, lambda w: elgot_eval(d, w)
    if ref.endswith(".rte"):
        with open(ref, "r", encoding="utf-8") as fh:
            expr = parse_rte(fh.read())
        return ref, lambda w: eval_rte(expr, w)
    m = load_machine(ref)
    return ref, lambda w: machine_outcome(m, w)


def _outcome_exit(outcome: EvalOutcome) -> int:
    print(outcome)
    if outcome.kind == "unique":
        return EXIT_OK
    if outcome.kind == "not-in-domain":
        return EXIT_NOT_IN_DOMAIN
    return EXIT_NEGATIVE


def cmd_eval(args) -> int:
    w = parse_word(args.input)
    if args.machine:
        m = load_machine(args.machine)
        return _outcome_exit(machine_outcome(m, w, raw=args.raw))
    with open(args.expr, "r", encoding="utf-8") as fh:
        expr = parse_rte(fh.read())
    return _outcome_exit(eval_rte(expr, w))


def _load_nft(path) -> Nft:
    m = load_machine(path)
    if isinstance(m, SequentialTransducer):
        return sequential_to_nft(m)
    if not isinstance(m, Nft):
        raise ToolkitError(f"{path}: functionality checks need a one-way machine")
    return m


def cmd_check(args) -> int:
    if args.what == "functional":
        verdict = check_functional(_load_nft(args.file))
        if args.json:
            print(json.dumps(verdict.to_dict()))
        elif verdict.functional:
            print("FUNCTIONAL")
        else:
            print(
                f"NOT-FUNCTIONAL witness={display_word(verdict.witness)}"
                f" out1={display_word(verdict.output1)} out2={display_word(verdict.output2)}"
            )
        return EXIT_OK if verdict.functional else EXIT_NEGATIVE
    if args.what == "equiv":
        verdict = equiv_functional(_load_nft(args.left), _load_nft(args.right))
        print(json.dumps(verdict.to_dict()) if args.json else verdict)
        return EXIT_OK if verdict.equivalent else EXIT_NEGATIVE
    if args.what == "unambiguous":
        with open(args.file, "r", encoding="utf-8") as fh:
            expr = parse_rte(fh.read())
        report = check_unambiguous(expr)
        if args.json:
            print(
                json.dumps(
                    {
                        "kind": "unambiguous" if report.unambiguous else "ambiguous",
                        "witness": None if report.unambiguous else display_word(report.witness),
                        "outputs": [] if report.unambiguous else [report.parse1, report.parse2],
                    }
                )
            )
        elif report.unambiguous:
            print("UNAMBIGUOUS")
        else:
            print(
                f"AMBIGUOUS witness={display_word(report.witness)}"
                f" parse1={report.parse1!r} parse2={report.parse2!r}"
            )
        return EXIT_OK if report.unambiguous else EXIT_NEGATIVE
    if args.what == "copyless":
        m = load_machine(args.file)
        if not isinstance(m, RegisterTransducer):
            raise ToolkitError(f"{args.file}: copyless checks need a register machine")
        res = validate_copyless(m)
        if args.json:
            print(
                json.dumps(
                    {
                        "kind": "copyless" if res.copyless else "violation",
                        "state": None if res.copyless else str(res.state),
                        "symbol": res.symbol,
                        "register": res.register,
                    }
                )
            )
        elif res.copyless:
            print("COPYLESS")
        else:
            print(f"VIOLATION state={res.state} symbol={res.symbol} register={res.register}")
        return EXIT_OK if res.copyless else EXIT_NEGATIVE
    raise ToolkitError(f"unknown check {args.what!r}")


def cmd_transform(args) -> int:
    if args.what == "compose":
        a = load_machine(args.first)
        b = load_machine(args.second)
        if not isinstance(a, SequentialTransducer) or not isinstance(b, SequentialTransducer):
            raise ToolkitError("compose needs two sequential machines")
        save_machine(compose_sequential(a, b), args.output)
        print(f"wrote {args.output}")
        return EXIT_OK
    if args.what == "decompose-elgot":
        d = elgot_decompose(_load_nft(args.file))
        save_machine(d.annotate, args.output + ".f.json")
        save_machine(d.read_back, args.output + ".g.json")
        print(f"wrote {args.output}.f.json and {args.output}.g.json")
        return EXIT_OK
    if args.what == "rewrite":
        with open(args.file, "r", encoding="utf-8") as fh:
            expr = parse_rte(fh.read())
        result = rewrite(expr, args.pass_name)
        # expression text is the exchange format; .json asks for the raw AST
        if str(args.output).endswith(".json"):
            payload = json.dumps(expr_to_json(result), indent=2) + "\n"
        else:
            payload = expr_to_text(result)
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(payload)
        print(f"wrote {args.output}")
        return EXIT_OK
    if args.what == "dom":
        with open(args.file, "r", encoding="utf-8") as fh:
            expr = parse_rte(fh.read())
        dr = rte_domain(expr)
        save_nfa(dr.nfa, args.output)
        print("exact" if dr.exact else "over-approx")
        return EXIT_OK
    if args.what == "export-dot":
        m = load_machine(args.file)
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(export_dot(m, name=args.file))
        print(f"wrote {args.output}")
        return EXIT_OK
    raise ToolkitError(f"unknown transform {args.what!r}")


def expr_to_json(e) -> dict:
    """Structural JSON for expression ASTs (tooling and rewrite output)."""
    from . import rte as R
    from .regexes import regex_to_text

    if isinstance(e, R.Atom):
        return {"op": "atom", "in": display_word(e.inp), "out": display_word(e.out)}
    if isinstance(e, R.Sum):
        return {"op": "sum", "left": expr_to_json(e.left), "right": expr_to_json(e.right)}
    if isinstance(e, R.Cat):
        return {"op": "cat", "left": expr_to_json(e.left), "right": expr_to_json(e.right)}
    if isinstance(e, R.Star):
        return {"op": "star", "inner": expr_to_json(e.inner)}
    if isinstance(e, R.RStar):
        return {"op": "rstar", "inner": expr_to_json(e.inner)}
    if isinstance(e, R.Hadamard):
        return {"op": "hadamard", "left": expr_to_json(e.left), "right": expr_to_json(e.right)}
    if isinstance(e, R.Compose):
        return {"op": "compose", "outer": expr_to_json(e.outer), "inner": expr_to_json(e.inner)}
    if isinstance(e, R.Reverse):
        return {"op": "reverse", "alphabet": [s for s in e.alphabet.symbols]}
    if isinstance(e, R.Duplicate):
        return {
            "op": "duplicate",
            "alphabet": [s for s in e.alphabet.symbols],
            "separator": e.separator,
        }
    if isinstance(e, R.Chain2):
        return {"op": "chain2", "k": regex_to_text(e.k), "inner": expr_to_json(e.inner)}
    if isinstance(e, R.RChain2):
        return {"op": "rchain2", "k": regex_to_text(e.k), "inner": expr_to_json(e.inner)}
    raise ToolkitError(f"cannot serialize expression node {type(e).__name__}")


def cmd_difftest(args) -> int:
    left_name, left = load_ref(args.left)
    right_name, right = load_ref(args.right)
    alphabet = Alphabet(parse_word(args.alphabet))
    report = run_difftest(
        left,
        right,
        alphabet,
        max_len=args.maxlen,
        strip=args.strip,
        left_name=left_name,
        right_name=right_name,
    )
    print(json.dumps(report.to_dict()) if args.json else report)
    return EXIT_OK if report.equal else EXIT_NEGATIVE


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        if args.command == "eval":
            return cmd_eval(args)
        if args.command == "check":
            return cmd_check(args)
        if args.command == "transform":
            return cmd_transform(args)
        if args.command == "difftest":
            return cmd_difftest(args)
        raise ToolkitError(f"unknown command {args.command!r}")
    except ToolkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()

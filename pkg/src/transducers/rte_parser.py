"""Concrete syntax for transducer expressions.

    program  := letdef* expr
    letdef   := "let" IDENT "=" expr ";"
    expr     := term ("+" term)*                      sum, left assoc
    term     := factor ("." factor)*                  concatenation, left assoc
    factor   := postfix | postfix "<*>" factor        two-pass product, right assoc
    postfix  := primary ("*" | "^r*")*                iteration / reversed iteration
    primary  := "(" QUOTED "|" QUOTED ")"             atom, '' for the empty word
              | "rev" "[" ALPHA "]"
              | "dup" "[" ALPHA "," SEP "]"
              | "chain2" "[" REGEX "]" "{" expr "}"
              | "rchain2" "[" REGEX "]" "{" expr "}"
              | IDENT | IDENT "@" primary             composition f@g, right assoc
              | "(" expr ")"

Text is UTF-8; ``#`` starts a comment outside quotes, so the hash symbol is
written ``'#'`` inside quotes or ``{hash}`` elsewhere.  ALPHA is a run of
symbols in word syntax; REGEX is the plain regular-expression syntax from
``regexes``.
"""
from __future__ import annotations

from .errors import RteSyntaxError
from .regexes import _Scanner, parse_regex_in
from .rte import (
    Atom,
    Cat,
    Chain2,
    Compose,
    Duplicate,
    Hadamard,
    RChain2,
    RStar,
    RteExpr,
    Star,
    Sum,
)
from .rte import Reverse
from .symbols import Alphabet, parse_word

_KEYWORDS = {"let", "rev", "dup", "chain2", "rchain2"}


class _ExprScanner(_Scanner):
    def ident(self) -> str:
        self.skip_ws()
        start = self.i
        if self.i < len(self.text) and (self.text[self.i].isalpha() or self.text[self.i] == "_"):
            while self.i < len(self.text) and (
                self.text[self.i].isalnum() or self.text[self.i] == "_"
            ):
                self._advance(1)
            return self.text[start : self.i]
        raise RteSyntaxError(self.line, self.col, "identifier", self.text[self.i : self.i + 8])

    def peek_ident(self) -> str:
        self.skip_ws()
        j = self.i
        if j < len(self.text) and (self.text[j].isalpha() or self.text[j] == "_"):
            k = j
            while k < len(self.text) and (self.text[k].isalnum() or self.text[k] == "_"):
                k += 1
            return self.text[j:k]
        return ""

    def raw_until(self, delims: str) -> str:
        """Raw characters (brace-aware) up to an unnested delimiter."""
        self.skip_ws()
        start = self.i
        depth = 0
        while self.i < len(self.text):
            c = self.text[self.i]
            if c == "{":
                depth += 1
            elif c == "}":
                depth -= 1
            elif depth == 0 and c in delims:
                break
            self._advance(1)
        return self.text[start : self.i].strip()


def parse_rte(text: str) -> RteExpr:
    """Parse a program (let-definitions followed by one expression)."""
    sc = _ExprScanner(text)
    env: dict[str, RteExpr] = {}
    while sc.peek_ident() == "let":
        sc.ident()
        name = sc.ident()
        if name in _KEYWORDS:
            raise RteSyntaxError(sc.line, sc.col, "a non-keyword name", name)
        sc.expect("=")
        env[name] = _parse_expr(sc, env)
        sc.expect(";")
    expr = _parse_expr(sc, env)
    if not sc.at_end():
        raise RteSyntaxError(sc.line, sc.col, "end of input", sc.text[sc.i : sc.i + 8])
    return expr


def _parse_expr(sc: _ExprScanner, env) -> RteExpr:
    node = _parse_term(sc, env)
    while sc.eat("+"):
        node = Sum(node, _parse_term(sc, env))
    return node


def _parse_term(sc: _ExprScanner, env) -> RteExpr:
    node = _parse_factor(sc, env)
    while True:
        sc.skip_ws()
        # "." but only when it starts a factor, not part of another token
        if sc.text.startswith(".", sc.i):
            sc._advance(1)
            node = Cat(node, _parse_factor(sc, env))
        else:
            break
    return node


def _parse_factor(sc: _ExprScanner, env) -> RteExpr:
    node = _parse_postfix(sc, env)
    if sc.eat("<*>"):
        return Hadamard(node, _parse_factor(sc, env))
    return node


def _parse_postfix(sc: _ExprScanner, env) -> RteExpr:
    node = _parse_primary(sc, env)
    while True:
        if sc.eat("^r*"):
            node = RStar(node)
        elif sc.eat("*"):
            node = Star(node)
        else:
            break
    return node


def expr_to_text(e: RteExpr) -> str:
    """Pretty-print an expression back into the concrete syntax.

    Compositions become let-bound names because the grammar wants an
    identifier on the left of ``@``; the result parses back to an
    expression with the same meaning.
    """
    from .regexes import regex_to_text
    from .symbols import display_symbol, display_word

    lets: list[tuple[str, str]] = []

    def quoted(w) -> str:
        return "'" + display_word(w) + "'"

    def bracket_word(symbols) -> str:
        # '#' would start a comment outside quotes
        return "".join(
            "{hash}" if s == "HASH" else display_symbol(s) for s in symbols
        )

    def go(n: RteExpr, level: int) -> str:
        # levels: 0 sum, 1 cat, 2 two-pass product, 3 postfix, 4 primary
        def at(text: str, natural: int) -> str:
            return text if natural >= level else "(" + text + ")"

        if isinstance(n, Atom):
            return f"({quoted(n.inp)}|{quoted(n.out)})"
        if isinstance(n, Sum):
            return at(f"{go(n.left, 0)} + {go(n.right, 1)}", 0)
        if isinstance(n, Cat):
            return at(f"{go(n.left, 1)} . {go(n.right, 2)}", 1)
        if isinstance(n, Hadamard):
            return at(f"{go(n.left, 3)} <*> {go(n.right, 2)}", 2)
        if isinstance(n, Star):
            return at(f"{go(n.inner, 4)}*", 3)
        if isinstance(n, RStar):
            return at(f"{go(n.inner, 4)}^r*", 3)
        if isinstance(n, Reverse):
            return f"rev[{bracket_word(n.alphabet.symbols)}]"
        if isinstance(n, Duplicate):
            return f"dup[{bracket_word(n.alphabet.symbols)},{bracket_word((n.separator,))}]"
        if isinstance(n, (Chain2, RChain2)):
            head = "chain2" if isinstance(n, Chain2) else "rchain2"
            return f"{head}[{regex_to_text(n.k)}]{{ {go(n.inner, 0)} }}"
        if isinstance(n, Compose):
            outer_text = go(n.outer, 0)  # may hoist its own lets first
            name = f"f{len(lets)}"
            lets.append((name, outer_text))
            return f"{name}@{go(n.inner, 4)}"
        raise TypeError(n)

    body = go(e, 0)
    header = "".join(f"let {name} = {text} ;\n" for name, text in lets)
    return header + body + "\n"


def _parse_primary(sc: _ExprScanner, env) -> RteExpr:
    sc.skip_ws()
    pos = (sc.line, sc.col)
    word = sc.peek_ident()
    if word == "rev":
        sc.ident()
        sc.expect("[")
        alpha = sc.raw_until("]")
        sc.expect("]")
        return Reverse(Alphabet(parse_word(alpha)), span=pos)
    if word == "dup":
        sc.ident()
        sc.expect("[")
        alpha = sc.raw_until(",")
        sc.expect(",")
        sep = sc.raw_until("]")
        sc.expect("]")
        sep_word = parse_word(sep)
        if len(sep_word) != 1:
            raise RteSyntaxError(pos[0], pos[1], "a single separator symbol", sep)
        return Duplicate(Alphabet(parse_word(alpha)), sep_word[0], span=pos)
    if word in ("chain2", "rchain2"):
        sc.ident()
        sc.expect("[")
        k = parse_regex_in(sc)
        sc.expect("]")
        sc.expect("{")
        inner = _parse_expr(sc, env)
        sc.expect("}")
        return (Chain2 if word == "chain2" else RChain2)(k, inner, span=pos)
    if word:
        name = sc.ident()
        if name in _KEYWORDS:
            raise RteSyntaxError(pos[0], pos[1], "an expression", name)
        if name not in env:
            raise RteSyntaxError(pos[0], pos[1], f"a defined name (unknown {name!r})")
        node = env[name]
        if sc.eat("@"):
            return Compose(node, _parse_primary(sc, env), span=pos)
        return node
    if sc.peek() == "(":
        sc.expect("(")
        if sc.peek() == "'":
            inp = sc.quoted()
            sc.expect("|")
            out = sc.quoted()
            sc.expect(")")
            return Atom(inp, out, span=pos)
        node = _parse_expr(sc, env)
        sc.expect(")")
        return node
    raise RteSyntaxError(pos[0], pos[1], "an expression", sc.text[sc.i : sc.i + 8])

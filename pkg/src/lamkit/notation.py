"""Concrete syntax: a small parser and printers.

Grammar::

    term ::= ('\\' | 'λ') IDENT '.' term | app
    app  ::= atom { atom }
    atom ::= IDENT | '#' LABEL | '(' term ')'

Variables are bare identifiers, constants are ``#``-prefixed. Application is
left-associative and an abstraction body extends as far right as possible.
``#ctapp`` and ``#ctlm`` denote the two tag constants of the encoding.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .terms import App, ConstName, Ct, HoasTag, Lm, Term, Var, VarName, alpha_key

_TOKEN = re.compile(
    r"(?P<ws>\s+)|(?P<lam>\\|λ)|(?P<dot>\.)|(?P<lp>\()|(?P<rp>\))"
    r"|(?P<ct>#[A-Za-z0-9_:]+)|(?P<ident>[A-Za-z][A-Za-z0-9_]*)"
)
_TAGS = {tag.value: tag for tag in HoasTag}


class ParseError(ValueError):
    """Syntax error at ``line``/``col`` (both 1-based); ``expected`` lists acceptable tokens."""

    def __init__(self, line: int, col: int, expected: frozenset[str], found: str):
        self.line, self.col, self.expected, self.found = line, col, expected, found
        want = ", ".join(sorted(expected))
        super().__init__(f"line {line}, column {col}: expected {want}; found {found}")


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(line, pos - line_start + 1, frozenset({"a term"}), repr(text[pos]))
        kind = m.lastgroup
        if kind == "ws":
            chunk = m.group()
            nl = chunk.count("\n")
            if nl:
                line += nl
                line_start = pos + chunk.rfind("\n") + 1
        else:
            toks.append(_Tok(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


_ATOM_START = frozenset({"identifier", "'#'constant", "'('"})
_TERM_START = _ATOM_START | {"'\\'"}


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def fail(self, expected) -> ParseError:
        tok = self.peek()
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        return ParseError(tok.line, tok.col, frozenset(expected), found)

    def expect(self, kind: str, label: str) -> _Tok:
        tok = self.peek()
        if tok.kind != kind:
            raise self.fail({label})
        self.i += 1
        return tok

    def term(self) -> Term:
        if self.peek().kind == "lam":
            self.i += 1
            x = VarName.parse(self.expect("ident", "identifier").text)
            self.expect("dot", "'.'")
            return Lm(x, self.term())
        return self.app()

    def app(self) -> Term:
        t = self.atom()
        while self.peek().kind in ("ident", "ct", "lp", "lam"):
            if self.peek().kind == "lam":
                # a trailing abstraction is the last argument
                return App(t, self.term())
            t = App(t, self.atom())
        return t

    def atom(self) -> Term:
        tok = self.peek()
        if tok.kind == "ident":
            self.i += 1
            return Var(VarName.parse(tok.text))
        if tok.kind == "ct":
            self.i += 1
            label = tok.text[1:]
            return Ct(_TAGS.get(label) or ConstName(label))
        if tok.kind == "lp":
            self.i += 1
            t = self.term()
            self.expect("rp", "')'")
            return t
        raise self.fail(_TERM_START)


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    if p.peek().kind != "eof":
        raise p.fail({"end of input"} | _TERM_START)
    return t


# -- printing --------------------------------------------------------------------

def _const_text(c) -> str:
    return f"#{c.value if isinstance(c, HoasTag) else c.label}"


def print_named(t: Term) -> str:
    """Shortest text that parses back to ``t`` (the very same binders)."""
    out: list[str] = []
    _named(t, out, tail=True)
    return "".join(out)


def _named(t: Term, out: list, tail: bool) -> None:
    # ``tail``: nothing follows t inside its enclosing application
    match t:
        case Var(x):
            out.append(str(x))
        case Ct(c):
            out.append(_const_text(c))
        case Lm(x, b):
            if not tail:
                out.append("(")
            out.append(f"\\{x}. ")
            _named(b, out, True)
            if not tail:
                out.append(")")
        case App(f, a):
            _named(f, out, False)
            out.append(" ")
            if isinstance(a, App):
                out.append("(")
                _named(a, out, True)
                out.append(")")
            else:
                _named(a, out, tail)
        case _:
            raise TypeError(f"not a term: {t!r}")


def print_debruijn(t: Term) -> str:
    """Nameless rendering: bound variables as indices, free ones by name."""
    return _db(alpha_key(t), tail=True)


def _db(k: tuple, tail: bool) -> str:
    tag = k[0]
    if tag == "V":
        return str(k[1])
    if tag == "B":
        return str(k[1])
    if tag == "C":
        return _const_text(k[1])
    if tag == "L":
        s = "\\. " + _db(k[1], True)
        return s if tail else f"({s})"
    f = _db(k[1], False)
    a = _db(k[2], tail) if k[2][0] != "A" else f"({_db(k[2], True)})"
    return f"{f} {a}"


def print_term(t: Term, style: str = "named") -> str:
    """Render ``t``; two-sorted terms print through the unsorted embedding."""
    if type(t).__module__.endswith("cbv.syntax"):
        from .cbv.syntax import to_unsorted

        t = to_unsorted(t)
    if style == "named":
        return print_named(t)
    if style == "debruijn":
        return print_debruijn(t)
    if style == "json":
        from .serialize import dumps_term

        return dumps_term(t)
    raise ValueError(f"unknown style {style!r}")


def try_parse(text: str) -> Optional[Term]:
    try:
        return parse_term(text)
    except ParseError:
        return None

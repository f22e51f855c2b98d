"""Lexer and recursive-descent parser for the analyzed mini-language.

    program := decl* stmt*
    decl    := "real" IDENT ["=" ("[" NUM "," NUM "]" | expr)] ";"
    stmt    := IDENT "=" expr ";"
             | "if" "(" cond ")" block ["else" block]
             | "while" "(" cond ")" block
    block   := "{" stmt* "}" | stmt
    cond    := expr ("=="|"!="|"<="|"<"|">="|">") expr
    expr    := expr ("+"|"-") term | term
    term    := term "*" factor | term "/" NUM | factor
    factor  := NUM | IDENT | "(" expr ")" | "-" factor

Comments are ``/* ... */`` and ``// ...``.  A ``// @interest NAME`` comment
marks the variable reported by the benchmark runner.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Optional, Set, Tuple

from .numeric import parse_number
from .syntax import (RELS, Add, Assign, Cond, Const, Decl, DivConst, If, Mul, Neg,
                     Program, Sub, Var, While)


class ParseError(Exception):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        super().__init__(f"{line}:{col}: {message}")
        self.message, self.line, self.col = message, line, col


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>//[^\n]*|/\*.*?\*/)
  | (?P<open_comment>/\*)
  | (?P<num>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>==|!=|<=|>=|[-+*/<>=()\[\]{};,])
""", re.VERBOSE | re.DOTALL)

KEYWORDS = {"real", "if", "else", "while"}
_INTEREST_RE = re.compile(r"//\s*@interest\s+([A-Za-z_][A-Za-z_0-9]*)")


def tokenize(source: str) -> List[Token]:
    tokens = []
    pos, line, col = 0, 1, 1
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if not m:
            raise ParseError(f"unexpected character {source[pos]!r}", line, col)
        text = m.group()
        kind = m.lastgroup
        if kind == "open_comment":
            raise ParseError("unterminated comment", line, col)
        if kind == "ident" and text in KEYWORDS:
            kind = text
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind if kind != "op" else text, text, line, col))
        nl = text.count("\n")
        if nl:
            line += nl
            col = len(text) - text.rfind("\n")
        else:
            col += len(text)
        pos = m.end()
    tokens.append(Token("eof", "", line, col))
    return tokens


class Parser:
    def __init__(self, source: str, precision: str = "float64"):
        self.tokens = tokenize(source)
        self.i = 0
        self.precision = precision
        self.declared: Set[str] = set()
        m = _INTEREST_RE.search(source)
        self.interest = m.group(1) if m else None

    # -- token helpers
    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, msg: str, tok: Optional[Token] = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(msg, tok.line, tok.col)

    def accept(self, kind: str) -> Optional[Token]:
        if self.tok.kind == kind:
            t = self.tok
            self.i += 1
            return t
        return None

    def expect(self, kind: str) -> Token:
        t = self.accept(kind)
        if t is None:
            shown = self.tok.text or "end of input"
            raise self.error(f"expected {kind!r}, found {shown!r}")
        return t

    def number(self, text: str):
        return parse_number(text, self.precision)

    # -- grammar
    def program(self) -> Program:
        decls, stmts = [], []
        while self.tok.kind == "real":
            d, init = self.decl()
            decls.append(d)
            if init is not None:
                stmts.append(init)
        while self.tok.kind != "eof":
            if self.tok.kind == "real":
                raise self.error("declarations must precede statements")
            stmts.append(self.stmt())
        return Program(tuple(decls), tuple(stmts), self.interest)

    def signed_number(self):
        neg = self.accept("-") is not None
        v = self.number(self.expect("num").text)
        return -v if neg else v

    def decl(self) -> Tuple[Decl, Optional[Assign]]:
        """A declaration, plus the assignment an initializer expression
        stands for (evaluated in declaration order, before the body)."""
        start = self.expect("real")
        name = self.expect("ident").text
        pos = (start.line, start.col)
        if name in self.declared:
            raise self.error(f"variable {name!r} declared twice", start)
        if self.accept(";"):
            self.declared.add(name)
            return Decl(name, pos=pos), None
        eq = self.expect("=")
        if self.tok.kind == "[":
            open_tok = self.expect("[")
            lo = self.signed_number()
            self.expect(",")
            hi = self.signed_number()
            self.expect("]")
            self.expect(";")
            if lo > hi:
                raise self.error(f"empty range [{lo}, {hi}]", open_tok)
            self.declared.add(name)
            return Decl(name, lo, hi, pos=pos), None
        init = self.expr()
        self.expect(";")
        self.declared.add(name)
        return Decl(name, pos=pos), Assign(name, init, (eq.line, eq.col))

    def block(self):
        if self.accept("{"):
            body = []
            while not self.accept("}"):
                if self.tok.kind == "eof":
                    raise self.error("unterminated block")
                body.append(self.stmt())
            return tuple(body)
        return (self.stmt(),)

    def stmt(self):
        t = self.tok
        pos = (t.line, t.col)
        if self.accept("if"):
            self.expect("(")
            cond = self.cond()
            self.expect(")")
            then = self.block()
            orelse = self.block() if self.accept("else") else ()
            return If(cond, then, orelse, pos)
        if self.accept("while"):
            self.expect("(")
            cond = self.cond()
            self.expect(")")
            return While(cond, self.block(), pos)
        if t.kind == "ident":
            self.i += 1
            if t.text not in self.declared:
                raise self.error(f"undeclared variable {t.text!r}", t)
            self.expect("=")
            e = self.expr()
            self.expect(";")
            return Assign(t.text, e, pos)
        raise self.error(f"unexpected {t.text or 'end of input'!r}")

    def cond(self) -> Cond:
        left = self.expr()
        t = self.tok
        if t.kind not in RELS:
            raise self.error("expected a comparison")
        self.i += 1
        return Cond(left, t.kind, self.expr())

    def expr(self):
        e = self.term()
        while self.tok.kind in ("+", "-"):
            op = self.expect(self.tok.kind).kind
            r = self.term()
            e = Add(e, r) if op == "+" else Sub(e, r)
        return e

    def term(self):
        e = self.factor()
        while self.tok.kind in ("*", "/"):
            if self.accept("*"):
                e = Mul(e, self.factor())
            else:
                self.expect("/")
                t = self.tok
                neg = self.accept("-") is not None
                v = self.number(self.expect("num").text)
                v = -v if neg else v
                if v == 0:
                    raise self.error("division by zero", t)
                e = DivConst(e, v)
        return e

    def factor(self):
        t = self.tok
        if self.accept("num"):
            return Const(self.number(t.text))
        if self.accept("ident"):
            if t.text not in self.declared:
                raise self.error(f"undeclared variable {t.text!r}", t)
            return Var(t.text)
        if self.accept("("):
            e = self.expr()
            self.expect(")")
            return e
        if self.accept("-"):
            return Neg(self.factor())
        raise self.error(f"unexpected {t.text or 'end of input'!r} in expression")


def parse(source: str, precision: str = "float64") -> Program:
    return Parser(source, precision).program()

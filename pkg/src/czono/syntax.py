"""AST of the analyzed mini-language."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union

from .numeric import Number


@dataclass(frozen=True)
class Const:
    value: Number


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class Add:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Sub:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Mul:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class DivConst:
    left: "Expr"
    divisor: Number


Expr = Union[Const, Var, Neg, Add, Sub, Mul, DivConst]

RELS = ("==", "!=", "<=", "<", ">=", ">")
NEGATED = {"==": "!=", "!=": "==", "<": ">=", ">=": "<", ">": "<=", "<=": ">"}


@dataclass(frozen=True)
class Cond:
    left: Expr
    rel: str
    right: Expr

    def negate(self) -> "Cond":
        return Cond(self.left, NEGATED[self.rel], self.right)


@dataclass(frozen=True)
class Decl:
    """``real name = [lo, hi];`` or ``real name = expr;``."""

    name: str
    lo: Optional[Number] = None
    hi: Optional[Number] = None
    init: Optional[Expr] = None
    pos: Tuple[int, int] = (0, 0)


@dataclass(frozen=True)
class Assign:
    name: str
    expr: Expr
    pos: Tuple[int, int] = (0, 0)


@dataclass(frozen=True)
class If:
    cond: Cond
    then: Tuple["Stmt", ...]
    orelse: Tuple["Stmt", ...] = ()
    pos: Tuple[int, int] = (0, 0)


@dataclass(frozen=True)
class While:
    cond: Cond
    body: Tuple["Stmt", ...]
    pos: Tuple[int, int] = (0, 0)


Stmt = Union[Decl, Assign, If, While]


@dataclass(frozen=True)
class Program:
    decls: Tuple[Decl, ...] = ()
    stmts: Tuple[Stmt, ...] = ()
    interest: Optional[str] = None

    @property
    def body(self) -> List[Stmt]:
        return list(self.decls) + list(self.stmts)


def point_id(stmt) -> str:
    return f"{stmt.pos[0]}:{stmt.pos[1]}"


def variables(expr: Expr) -> List[str]:
    if isinstance(expr, Var):
        return [expr.name]
    if isinstance(expr, Const):
        return []
    if isinstance(expr, (Neg,)):
        return variables(expr.arg)
    if isinstance(expr, DivConst):
        return variables(expr.left)
    return variables(expr.left) + variables(expr.right)

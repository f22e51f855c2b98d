from fractions import Fraction as F

import pytest

from czono.parser import ParseError, parse, tokenize
from czono.syntax import (Add, Assign, Cond, Const, Decl, DivConst, If, Mul, Neg, Sub, Var,
                          While, point_id, variables)

RUNNING = """real x = [0,10];
real y = x*x - x;
if (y >= 0) y = x/10; /* x = 0 or x >= 1 */
else y = x*x+2;
"""


def test_running_example_has_four_statements():
    prog = parse(RUNNING)
    assert [type(s) for s in prog.body] == [Decl, Decl, Assign, If]
    x, y = prog.decls
    assert (x.name, x.lo, x.hi) == ("x", 0.0, 10.0)
    assert y.lo is None  # initializer becomes the assignment
    init, branch = prog.stmts
    assert init.expr == Sub(Mul(Var("x"), Var("x")), Var("x"))
    assert branch.cond == Cond(Var("y"), ">=", Const(0.0))
    assert branch.then == (Assign("y", DivConst(Var("x"), 10.0), (3, 13)),)
    assert point_id(branch) == "3:1" and point_id(init) == "2:8"


def test_precedence_and_associativity():
    prog = parse("real x = [0,1]; real y; y = x*x - x; y = 1 - x - x; y = -x*2; y = x/2/4;")
    a, b, c, d = prog.stmts
    assert a.expr == Sub(Mul(Var("x"), Var("x")), Var("x"))
    assert b.expr == Sub(Sub(Const(1.0), Var("x")), Var("x"))
    assert c.expr == Mul(Neg(Var("x")), Const(2.0))
    assert d.expr == DivConst(DivConst(Var("x"), 2.0), 4.0)
    assert variables(a.expr) == ["x", "x", "x"]


def test_rational_numbers():
    prog = parse("real x = [-0.1, 1e-1];", precision="rational")
    assert prog.decls[0].lo == F(-1, 10) and prog.decls[0].hi == F(1, 10)


def test_blocks_loops_and_comments():
    src = """// leading comment
    // @interest s
    real s = [0, 1];
    while (s < 10) { s = s + 1; /* body */ }
    if (s == 10) { } else { s = 0; }
    """
    prog = parse(src)
    assert prog.interest == "s"
    loop, branch = prog.stmts
    assert isinstance(loop, While) and len(loop.body) == 1
    assert branch.then == () and len(branch.orelse) == 1


@pytest.mark.parametrize("src, msg, line, col", [
    ("real x = [1,0];", "empty range", 1, 10),
    ("real x = [0,1];\ny = x;", "undeclared variable 'y'", 2, 1),
    ("real x = [0,1];\nx = z + 1;", "undeclared variable 'z'", 2, 5),
    ("real x = [0,1];\nx = x / 0;", "division by zero", 2, 9),
    ("real x = [0,1];\nx = x $ 1;", "unexpected character '$'", 2, 7),
    ("real x = [0,1];\nx = x + ;", "in expression", 2, 9),
    ("real x = [0,1];\nx = x", "expected ';'", 2, 6),
    ("real x = [0,1];\nif (x) x = 1;", "expected a comparison", 2, 6),
    ("real x = [0,1]; real x = [0,1];", "declared twice", 1, 17),
    ("real x = [0,1]; x = 1; real y = [0,1];", "declarations must precede", 1, 24),
    ("real x = [0,1]; /* open", "unterminated comment", 1, 17),
    ("real x = [0,1]; x = x / y;", "expected 'num'", 1, 25),
])
def test_diagnostics_carry_positions(src, msg, line, col):
    with pytest.raises(ParseError) as info:
        parse(src)
    e = info.value
    assert msg in e.message
    assert (e.line, e.col) == (line, col)
    assert str(e).startswith(f"{line}:{col}:")


def test_tokens_track_lines_and_columns():
    toks = tokenize("real x\n  = [0,1];")
    assert [(t.kind, t.line, t.col) for t in toks[:3]] == [("real", 1, 1), ("ident", 1, 6), ("=", 2, 3)]
    assert toks[-1].kind == "eof"

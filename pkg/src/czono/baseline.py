"""Plain interval analysis of the same language, used as a comparison
baseline: no correlation between variables, tests refine only variables
compared against something."""

from __future__ import annotations

from typing import Dict, Optional, Sequence

from .analyzer import AnalyzerConfig, widen_bound
from .noise import Interval
from .numeric import down, up
from .syntax import (Add, Assign, Cond, Const, DivConst, If, Mul, Neg, Program, Sub, Var,
                     While)

Store = Optional[Dict[str, Interval]]  # None is bottom


def _out(lo, hi, mag) -> Interval:
    return Interval(down(lo, mag), up(hi, mag))


def eval_interval(store: Dict[str, Interval], e) -> Interval:
    if isinstance(e, Const):
        return Interval(e.value, e.value)
    if isinstance(e, Var):
        return store[e.name]
    if isinstance(e, Neg):
        a = eval_interval(store, e.arg)
        return Interval(-a.hi, -a.lo)
    if isinstance(e, DivConst):
        a = eval_interval(store, e.left)
        x, y = a.lo / e.divisor, a.hi / e.divisor
        return _out(min(x, y), max(x, y), max(abs(x), abs(y)))
    a, b = eval_interval(store, e.left), eval_interval(store, e.right)
    if isinstance(e, Add):
        return _out(a.lo + b.lo, a.hi + b.hi, max(abs(a.lo), abs(a.hi)) + max(abs(b.lo), abs(b.hi)))
    if isinstance(e, Sub):
        return _out(a.lo - b.hi, a.hi - b.lo, max(abs(a.lo), abs(a.hi)) + max(abs(b.lo), abs(b.hi)))
    if isinstance(e, Mul):
        ps = [a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi]
        return _out(min(ps), max(ps), max(abs(p) for p in ps))
    raise TypeError(f"not an expression: {e!r}")


def _hull(s: Store, t: Store) -> Store:
    if s is None:
        return t
    if t is None:
        return s
    return {k: s[k].hull(t[k]) for k in s}


def _refine(store: Dict[str, Interval], e, lo, hi) -> Store:
    """Meet variable ``e`` (if it is one) with ``[lo, hi]``."""
    if not isinstance(e, Var):
        return store
    m = store[e.name].meet(Interval(lo, hi))
    if m is None:
        return None
    return {**store, e.name: m}


def guard_interval(store: Store, c: Cond) -> Store:
    if store is None:
        return None
    a, b = eval_interval(store, c.left), eval_interval(store, c.right)
    inf = float("inf")
    rel = c.rel
    if rel == "!=":
        if a.lo == a.hi == b.lo == b.hi:
            return None
        return store
    if rel in (">", ">="):
        a, b = b, a
        left, right = c.right, c.left
    else:
        left, right = c.left, c.right
    if rel == "==":
        if a.meet(b) is None:
            return None
        store = _refine(store, left, b.lo, b.hi)
        return store and _refine(store, right, a.lo, a.hi)
    # left <= right, strict abstracted as non-strict
    if a.lo > b.hi:
        return None
    store = _refine(store, left, -inf, b.hi)
    return store and _refine(store, right, a.lo, inf)


class IntervalEngine:
    def __init__(self, cfg: AnalyzerConfig):
        self.cfg = cfg

    def run(self, program: Program) -> Store:
        store: Dict[str, Interval] = {}
        for d in program.decls:
            if d.lo is None:
                store[d.name] = Interval(0, 0)
            else:
                store[d.name] = Interval(d.lo, d.hi)
        return self.block(store, program.stmts)

    def block(self, store: Store, stmts: Sequence) -> Store:
        for s in stmts:
            if store is None:
                return None
            store = self.stmt(store, s)
        return store

    def stmt(self, store: Dict[str, Interval], s) -> Store:
        if isinstance(s, Assign):
            return {**store, s.name: eval_interval(store, s.expr)}
        if isinstance(s, If):
            return _hull(self.block(guard_interval(store, s.cond), s.then),
                         self.block(guard_interval(store, s.cond.negate()), s.orelse))
        if isinstance(s, While):
            head: Store = store
            k = 0
            while True:
                out = self.block(guard_interval(head, s.cond), s.body)
                if out is None or all(out[v] in head[v] for v in head):
                    break
                new = _hull(head, out)
                k += 1
                if k >= self.cfg.unroll:
                    th = self.cfg.thresholds
                    new = {v: Interval(widen_bound(head[v].lo, new[v].lo, th, upper=False),
                                       widen_bound(head[v].hi, new[v].hi, th, upper=True))
                           for v in new}
                head = new
            return guard_interval(head, s.cond.negate())
        raise TypeError(f"unexpected statement {s!r}")


def analyze_intervals(program: Program, cfg: Optional[AnalyzerConfig] = None) -> Store:
    """Final interval store (``None`` when the end is unreachable)."""
    return IntervalEngine(cfg or AnalyzerConfig()).run(program)

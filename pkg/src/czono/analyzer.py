"""Forward abstract interpreter over constrained affine sets.

Every statement records the state reached right after it under the id
``line:col``; the final state is recorded as ``end``.  Noise symbols are
numbered globally: before each operation the state is padded to the largest
universe seen so far, so fresh symbols created in different branches never
share an index.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import guards
from .affine import (AffineForm, CapExceeded, ConstrainedAffineSet, gamma_form,
                     leq_set_sufficient, recenter_perturbations)
from .join import join_sets
from .noise import FULL, Interval, NoiseBox, new_central
from .numeric import Number, half
from .parser import parse
from .syntax import Assign, Cond, Decl, If, Program, Stmt, While, point_id
from .transfer import eval_expr

CAP = 1e38
DEFAULT_THRESHOLDS = (-1e6, -1e4, -1e3, -100.0, -10.0, -1.0, 0.0, 1.0, 10.0, 100.0,
                      1e3, 1e4, 1e6)


class AnalysisError(RuntimeError):
    """The analysis gave up (resource cap, divergent loop)."""


@dataclass(frozen=True)
class AnalyzerConfig:
    domain: str = "interval"
    unroll: int = 3
    max_symbols: int = 4096
    precision: str = "float64"
    seed: int = 0
    samples: int = 0
    thresholds: Tuple[float, ...] = DEFAULT_THRESHOLDS

    def __post_init__(self):
        if self.domain != "interval":
            raise ValueError(f"unsupported noise domain {self.domain!r}")
        if self.precision not in ("float64", "rational"):
            raise ValueError(f"unknown precision {self.precision!r}")
        if self.unroll < 1 or self.max_symbols < 1 or self.samples < 0:
            raise ValueError("counts must be positive")


@dataclass
class PointState:
    id: str
    reachable: bool
    state: Optional[ConstrainedAffineSet] = None

    @property
    def vars(self) -> Dict[str, Tuple[AffineForm, Interval]]:
        if not self.reachable:
            return {}
        X = self.state
        return {nm: (f, gamma_form(f, X.phi)) for nm, f in zip(X.names, X.forms)}

    def ranges(self) -> Dict[str, Interval]:
        return {nm: itv for nm, (_, itv) in self.vars.items()}

    @property
    def noise(self) -> Optional[NoiseBox]:
        return self.state.phi if self.reachable else None


@dataclass(frozen=True)
class LoopStats:
    """Head iterations of the last analysis of a loop, in total and after
    the first widening."""

    iterations: int
    after_widening: int


@dataclass
class AnalysisResult:
    program: Program
    points: Dict[str, PointState] = field(default_factory=dict)
    loops: Dict[str, LoopStats] = field(default_factory=dict)

    @property
    def final(self) -> PointState:
        return self.points["end"]

    def ranges(self, point: str = "end") -> Dict[str, Interval]:
        return self.points[point].ranges()

    def range(self, name: str, point: str = "end") -> Optional[Interval]:
        return self.ranges(point).get(name)


DRIFT = 1e-9


def _drift(x: Number) -> float:
    return DRIFT * max(1.0, abs(float(x)))


def widen_bound(old: Number, new: Number, thresholds: Sequence[float], upper: bool) -> Number:
    """Interval widening of one bound: jump to the next threshold, then to
    the cap; ``±1e38`` stands for infinity and absorbs anything beyond it.
    A move within rounding drift only gets a small margin, so float slack
    alone never climbs the thresholds."""
    if not upper:
        return -widen_bound(-old, -new, [-t for t in thresholds], upper=True)
    if new != new or abs(new) == float("inf"):
        raise AnalysisError("non-finite bound in a loop invariant")
    if new <= old or old >= CAP:
        return old
    if new >= CAP:
        return CAP
    if new - old <= _drift(old):
        return min(new + _drift(new), CAP)
    for t in sorted(thresholds):
        if t >= new:
            return t
    return CAP


def _within(a: Interval, b: Interval, drift: bool = True) -> bool:
    """``a`` inside ``b``; bounds at the cap are infinite."""
    lo = b.lo - _drift(b.lo) if drift else b.lo
    hi = b.hi + _drift(b.hi) if drift else b.hi
    return (a.lo >= lo or b.lo <= -CAP) and (a.hi <= hi or b.hi >= CAP)


class Engine:
    """Constrained affine set interpreter for one program."""

    def __init__(self, cfg: AnalyzerConfig):
        self.cfg = cfg
        self.n = 0
        self.m = 0
        self.points: Dict[str, PointState] = {}
        self.loops: Dict[str, LoopStats] = {}

    # -- bookkeeping
    def sync(self, X: ConstrainedAffineSet) -> ConstrainedAffineSet:
        self.n, self.m = max(self.n, X.n), max(self.m, X.m)
        live = len(X.live_symbols()) if not X.is_bottom else 0
        if live > self.cfg.max_symbols:
            raise CapExceeded(f"{live} live noise symbols exceed max_symbols={self.cfg.max_symbols}")
        return X.padded(self.n, self.m)

    def pad(self, X: ConstrainedAffineSet) -> ConstrainedAffineSet:
        return X.padded(self.n, self.m)

    def record(self, pid: str, X: ConstrainedAffineSet) -> None:
        self.points[pid] = PointState(pid, not X.is_bottom, None if X.is_bottom else X)

    def record_unreachable(self, stmts: Iterable[Stmt]) -> None:
        for s in stmts:
            self.points[point_id(s)] = PointState(point_id(s), False)
            if isinstance(s, If):
                self.record_unreachable(s.then)
                self.record_unreachable(s.orelse)
            elif isinstance(s, While):
                self.record_unreachable(s.body)

    # -- statements
    def run(self, program: Program) -> AnalysisResult:
        X = ConstrainedAffineSet((), (), NoiseBox())
        for d in program.decls:
            X = self.decl(X, d)
        X = self.block(X, program.stmts)
        self.record("end", X)
        return AnalysisResult(program, dict(self.points), dict(self.loops))

    def decl(self, X: ConstrainedAffineSet, d: Decl) -> ConstrainedAffineSet:
        X = self.pad(X)
        if d.lo is None:
            zero = 0 if self.cfg.precision == "rational" else 0.0
            X = X.with_var(d.name, AffineForm(zero))
        else:
            box, s = new_central(X.phi)
            X = X.with_var(d.name, AffineForm(half(d.lo + d.hi), {s.index: half(d.hi - d.lo)}), box)
        X = self.sync(X)
        self.record(point_id(d), X)
        return X

    def block(self, X: ConstrainedAffineSet, stmts: Sequence[Stmt]) -> ConstrainedAffineSet:
        for k, s in enumerate(stmts):
            if X.is_bottom:
                self.record_unreachable(stmts[k:])
                break
            X = self.stmt(X, s)
        return X

    def stmt(self, X: ConstrainedAffineSet, s: Stmt) -> ConstrainedAffineSet:
        if isinstance(s, Assign):
            f, Y = eval_expr(self.pad(X), s.expr)
            X = self.sync(Y.with_var(s.name, f))
        elif isinstance(s, If):
            X = self.if_(X, s)
        elif isinstance(s, While):
            X = self.while_(X, s)
        else:
            raise TypeError(f"unexpected statement {s!r}")
        self.record(point_id(s), X)
        return X

    def guard(self, X: ConstrainedAffineSet, c: Cond) -> ConstrainedAffineSet:
        if X.is_bottom:
            return X
        Y = guards.test(self.pad(X), c.left, c.rel, c.right)
        return self.sync(recenter_perturbations(Y))

    def join(self, X: ConstrainedAffineSet, Y: ConstrainedAffineSet) -> ConstrainedAffineSet:
        if X.is_bottom:
            return Y
        if Y.is_bottom:
            return X
        return self.sync(join_sets(self.pad(X), self.pad(Y)))

    def branch(self, X: ConstrainedAffineSet, stmts) -> ConstrainedAffineSet:
        if X.is_bottom:
            self.record_unreachable(stmts)
            return X
        return self.block(X, stmts)

    def if_(self, X: ConstrainedAffineSet, s: If) -> ConstrainedAffineSet:
        then = self.branch(self.guard(X, s.cond), s.then)
        orelse = self.branch(self.guard(X, s.cond.negate()), s.orelse)
        return self.join(then, orelse)

    def while_(self, X: ConstrainedAffineSet, s: While) -> ConstrainedAffineSet:
        head = X
        joins = 0
        boxed = False
        after = 0  # head iterations since the first widening
        while True:
            if joins >= self.cfg.unroll:
                after += 1
            out = self.branch(self.guard(head, s.cond), s.body)
            if out.is_bottom or leq_set_sufficient(self.pad(out), self.pad(head)):
                break
            if boxed and self.ranges_within(out, head):
                break
            new = self.join(head, out)
            joins += 1
            if joins >= self.cfg.unroll:
                collapse_all = joins >= self.cfg.unroll + 2
                new = self.widen(head, new, collapse_all)
                boxed = boxed or collapse_all
            head = new
        self.loops[point_id(s)] = LoopStats(joins + 1, after)
        return self.guard(head, s.cond.negate())

    # -- widening
    @staticmethod
    def ranges_within(X: ConstrainedAffineSet, Y: ConstrainedAffineSet) -> bool:
        gy = dict(zip(Y.names, (gamma_form(f, Y.phi) for f in Y.forms)))
        return all(_within(gamma_form(f, X.phi), gy[nm], drift=False)
                   for nm, f in zip(X.names, X.forms))

    def widen(self, old: ConstrainedAffineSet, new: ConstrainedAffineSet,
              collapse_all: bool) -> ConstrainedAffineSet:
        """Unstable variables (all of them once ``collapse_all`` is set)
        become fresh independent intervals over the widened hull."""
        if old.is_bottom or new.is_bottom:
            return new
        th = self.cfg.thresholds
        X = self.pad(new)
        fresh = []
        for nm, f in zip(new.names, new.forms):
            g_old = gamma_form(old.form(nm), old.phi)
            g_new = gamma_form(f, new.phi)
            if _within(g_new, g_old) and not collapse_all:
                continue
            lo = widen_bound(g_old.lo, g_new.lo, th, upper=False)
            hi = widen_bound(g_old.hi, g_new.hi, th, upper=True)
            fresh.append((nm, lo, hi))
        for nm, lo, hi in fresh:
            if self.cfg.precision == "rational":
                lo, hi = Fraction(lo), Fraction(hi)
            box, e = new_central(X.phi)
            X = X.with_var(nm, AffineForm(half(lo + hi), {e.index: half(hi - lo)}), box)
        return self.sync(_drop_dead(X))


def _drop_dead(X: ConstrainedAffineSet) -> ConstrainedAffineSet:
    """Reset the box entries of symbols no form refers to."""
    used = {s for f in X.forms for s in f.symbols()}
    dead = {s: FULL for s in X.phi.constrained() if s not in used}
    if not dead:
        return X
    return X.with_phi(X.phi.with_intervals(dead))


def analyze(program: Program, cfg: Optional[AnalyzerConfig] = None) -> AnalysisResult:
    return Engine(cfg or AnalyzerConfig()).run(program)


def analyze_source(source: str, cfg: Optional[AnalyzerConfig] = None) -> AnalysisResult:
    cfg = cfg or AnalyzerConfig()
    return analyze(parse(source, cfg.precision), cfg)

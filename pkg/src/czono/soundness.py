"""Concrete execution oracle: run a program on random inputs and check every
visited program point against the computed invariants."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Union

from .analyzer import AnalysisResult
from .noise import Interval
from .syntax import (Add, Assign, Cond, Const, DivConst, If, Mul, Neg, Program, Sub, Var,
                     While, point_id)

Invariants = Mapping[str, Optional[Mapping[str, Interval]]]

LOOP_CAP = 10_000
REL_TOL = 1e-9


@dataclass(frozen=True)
class Violation:
    sample: int
    point: str
    var: Optional[str]  # None: an unreachable point was reached
    value: Optional[float] = None
    range: Optional[Interval] = None

    def __str__(self) -> str:
        if self.var is None:
            return f"sample {self.sample}: reached unreachable point {self.point}"
        return (f"sample {self.sample}: {self.var} = {self.value!r} "
                f"outside {self.range} at {self.point}")


@dataclass
class SoundnessReport:
    samples: int
    seed: int
    violations: List[Violation] = field(default_factory=list)
    diverged: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        lines = [f"{self.samples} samples (seed {self.seed}), {len(self.violations)} violations"]
        if self.diverged:
            lines.append(f"{self.diverged} samples stopped at the {LOOP_CAP}-iteration loop cap")
        lines += [f"  {v}" for v in self.violations[:20]]
        if len(self.violations) > 20:
            lines.append(f"  ... {len(self.violations) - 20} more")
        return "\n".join(lines)


def invariants_of(result: AnalysisResult) -> Dict[str, Optional[Dict[str, Interval]]]:
    """Per-point variable ranges; ``None`` marks an unreachable point."""
    return {pid: (pt.ranges() if pt.reachable else None) for pid, pt in result.points.items()}


def shrink(inv: Invariants, fraction: float = 0.05, point: Optional[str] = None,
           var: Optional[str] = None) -> Dict[str, Optional[Dict[str, Interval]]]:
    """Copy of ``inv`` with intervals pulled inward by ``fraction`` of their
    width at each end (all of them, or just ``point``/``var``)."""
    out = {}
    for pid, ranges in inv.items():
        if ranges is None:
            out[pid] = None
            continue
        out[pid] = {}
        for nm, itv in ranges.items():
            if (point is None or pid == point) and (var is None or nm == var):
                lo, hi = float(itv.lo), float(itv.hi)
                d = (hi - lo) * fraction
                itv = Interval(lo + d, hi - d)
            out[pid][nm] = itv
    return out


class _Diverged(Exception):
    pass


def _eval(store: Dict[str, float], e) -> float:
    if isinstance(e, Const):
        return float(e.value)
    if isinstance(e, Var):
        return store[e.name]
    if isinstance(e, Neg):
        return -_eval(store, e.arg)
    if isinstance(e, DivConst):
        return _eval(store, e.left) / float(e.divisor)
    a, b = _eval(store, e.left), _eval(store, e.right)
    if isinstance(e, Add):
        return a + b
    if isinstance(e, Sub):
        return a - b
    if isinstance(e, Mul):
        return a * b
    raise TypeError(f"not an expression: {e!r}")


def _holds(store, c: Cond) -> bool:
    a, b = _eval(store, c.left), _eval(store, c.right)
    return {"==": a == b, "!=": a != b, "<": a < b, "<=": a <= b,
            ">": a > b, ">=": a >= b}[c.rel]


class _Runner:
    def __init__(self, inv: Invariants, sample: int, report: SoundnessReport):
        self.inv = inv
        self.sample = sample
        self.report = report

    def check(self, pid: str, store: Dict[str, float]) -> None:
        if pid not in self.inv:
            return
        ranges = self.inv[pid]
        if ranges is None:
            self.report.violations.append(Violation(self.sample, pid, None))
            return
        for nm, v in store.items():
            itv = ranges.get(nm)
            if itv is None:
                continue
            tol = REL_TOL * max(1.0, abs(v))
            if not (float(itv.lo) - tol <= v <= float(itv.hi) + tol):
                self.report.violations.append(Violation(self.sample, pid, nm, v, itv))

    def block(self, store, stmts) -> None:
        for s in stmts:
            self.stmt(store, s)

    def stmt(self, store, s) -> None:
        if isinstance(s, Assign):
            store[s.name] = _eval(store, s.expr)
        elif isinstance(s, If):
            self.block(store, s.then if _holds(store, s.cond) else s.orelse)
        elif isinstance(s, While):
            k = 0
            while _holds(store, s.cond):
                k += 1
                if k > LOOP_CAP:
                    raise _Diverged
                self.block(store, s.body)
        self.check(point_id(s), store)


def check_soundness(program: Program, result: Union[AnalysisResult, Invariants],
                    samples: int = 10_000, seed: int = 0) -> SoundnessReport:
    """Run ``program`` on ``samples`` inputs drawn uniformly from the
    declared ranges and report every store outside the invariants."""
    inv = invariants_of(result) if isinstance(result, AnalysisResult) else result
    rng = random.Random(seed)
    report = SoundnessReport(samples, seed)
    for k in range(samples):
        store: Dict[str, float] = {}
        runner = _Runner(inv, k, report)
        for d in program.decls:
            store[d.name] = 0.0 if d.lo is None else rng.uniform(float(d.lo), float(d.hi))
            runner.check(point_id(d), store)
        try:
            runner.block(store, program.stmts)
        except _Diverged:
            report.diverged += 1
            continue
        runner.check("end", store)
    return report


def sampled_hull(program: Program, var: str, samples: int = 10_000,
                 seed: int = 0) -> Optional[Interval]:
    """Hull of the final values of ``var`` over random runs."""
    lo = hi = None
    rng = random.Random(seed)
    empty: Dict[str, None] = {}
    for k in range(samples):
        store: Dict[str, float] = {}
        for d in program.decls:
            store[d.name] = 0.0 if d.lo is None else rng.uniform(float(d.lo), float(d.hi))
        try:
            _Runner(empty, k, SoundnessReport(0, seed)).block(store, program.stmts)
        except _Diverged:
            continue
        v = store[var]
        lo = v if lo is None else min(lo, v)
        hi = v if hi is None else max(hi, v)
    return None if lo is None else Interval(lo, hi)

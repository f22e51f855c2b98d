"""Benchmark table: constrained analysis vs interval baseline vs sampling."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

from . import corpus
from .analyzer import AnalyzerConfig, analyze
from .baseline import analyze_intervals
from .noise import Interval
from .parser import parse
from .soundness import sampled_hull

WIDTH_TOL = 1e-6


@dataclass
class BenchRow:
    program: str
    var: str
    constrained: Optional[Interval]
    baseline: Optional[Interval]
    sampled: Optional[Interval]

    @property
    def wider(self) -> bool:
        """Constrained range wider than the baseline, beyond rounding noise."""
        if self.constrained is None or self.baseline is None:
            return self.constrained is not None
        wc = float(self.constrained.hi - self.constrained.lo)
        wb = float(self.baseline.hi - self.baseline.lo)
        return wc > wb + WIDTH_TOL * max(1.0, wb)

    @property
    def contains_sampled(self) -> bool:
        if self.sampled is None:
            return True
        return all(r is not None and self.sampled in r for r in (self.constrained, self.baseline))


def run_program(name: str, source: str, cfg: AnalyzerConfig, samples: int) -> BenchRow:
    program = parse(source, cfg.precision)
    var = program.interest
    if var is None:
        raise ValueError(f"{name}: no '// @interest' variable")
    store = analyze_intervals(program, cfg)
    return BenchRow(name, var, analyze(program, cfg).range(var),
                    None if store is None else store[var],
                    sampled_hull(program, var, samples, cfg.seed))


def run(directory: Optional[str] = None, cfg: Optional[AnalyzerConfig] = None,
        samples: int = 10_000) -> List[BenchRow]:
    cfg = cfg or AnalyzerConfig()
    return [run_program(nm, src, cfg, samples) for nm, src in corpus.load(directory).items()]


def _itv(i: Optional[Interval]) -> str:
    return "bottom" if i is None else "[%.6g, %.6g]" % (float(i.lo), float(i.hi))


def render(rows: List[BenchRow]) -> str:
    head = ("program", "var", "constrained", "interval baseline", "sampled hull", "flag")
    body = []
    for r in rows:
        flags = []
        if r.wider:
            flags.append("WIDER")
        if not r.contains_sampled:
            flags.append("UNSOUND")
        body.append((r.program, r.var, _itv(r.constrained), _itv(r.baseline),
                     _itv(r.sampled), " ".join(flags)))
    widths = [max(len(row[k]) for row in [head] + body) for k in range(len(head))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in [head] + body]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)

"""Interval boxes over noise symbols.

A :class:`NoiseBox` is one closed interval per noise symbol, central symbols
``e1..en`` and perturbation symbols ``h1..hm``.  The implicit constant
symbol (always 1) is never stored.  Only intervals that differ from the
fresh range ``[-1, 1]`` are kept explicitly, so a box over thousands of
symbols that are mostly unconstrained stays small.

Linear constraints over the symbols are abstracted into a box by iterated
per-symbol interval projection (:func:`contract`).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Dict, Iterator, Mapping, NamedTuple, Tuple

from .numeric import Number, down, half, is_float, up


class EmptyBox(ValueError):
    """Raised when an operation needs a non-empty box and gets bottom."""


class Kind(enum.IntEnum):
    CENTRAL = 0
    PERTURBATION = 1


class NoiseId(NamedTuple):
    kind: Kind
    index: int

    def __str__(self) -> str:
        return ("e" if self.kind is Kind.CENTRAL else "h") + str(self.index)


def eps(i: int) -> NoiseId:
    return NoiseId(Kind.CENTRAL, i)


def eta(j: int) -> NoiseId:
    return NoiseId(Kind.PERTURBATION, j)


@dataclass(frozen=True)
class Interval:
    lo: Number
    hi: Number

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise ValueError(f"malformed interval [{self.lo}, {self.hi}]")

    @property
    def mid(self) -> Number:
        return half(self.lo + self.hi)

    @property
    def dev(self) -> Number:
        return half(self.hi - self.lo)

    @property
    def width(self) -> Number:
        return self.hi - self.lo

    def hull(self, other: "Interval") -> "Interval":
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def meet(self, other: "Interval") -> "Interval | None":
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        return Interval(lo, hi) if lo <= hi else None

    def __contains__(self, x) -> bool:
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        return self.lo <= x <= self.hi

    def is_full(self) -> bool:
        return self.lo == -1 and self.hi == 1

    def __iter__(self):
        yield self.lo
        yield self.hi

    def __repr__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


FULL = Interval(-1, 1)


def _strip(d: Mapping[int, Interval]) -> Dict[int, Interval]:
    return {k: v for k, v in d.items() if not v.is_full()}


@dataclass(frozen=True)
class NoiseBox:
    """Product of intervals over ``n`` central and ``m`` perturbation symbols.

    ``central`` and ``perturbation`` only hold the intervals that are not
    ``[-1, 1]``.  ``empty`` marks bottom.
    """

    n: int = 0
    m: int = 0
    central: Mapping[int, Interval] = field(default_factory=dict)
    perturbation: Mapping[int, Interval] = field(default_factory=dict)
    empty: bool = False

    def __post_init__(self):
        object.__setattr__(self, "central", _strip(self.central))
        object.__setattr__(self, "perturbation", _strip(self.perturbation))

    @classmethod
    def bottom(cls, n: int = 0, m: int = 0) -> "NoiseBox":
        return cls(n, m, empty=True)

    @classmethod
    def from_lists(cls, central=(), perturbation=()) -> "NoiseBox":
        """Build from dense lists of ``(lo, hi)`` pairs, index 1 first."""
        c = {i + 1: Interval(*itv) for i, itv in enumerate(central)}
        p = {j + 1: Interval(*itv) for j, itv in enumerate(perturbation)}
        return cls(len(c), len(p), c, p)

    def interval(self, nid: NoiseId) -> Interval:
        if self.empty:
            raise EmptyBox("bottom box has no intervals")
        table = self.central if nid.kind is Kind.CENTRAL else self.perturbation
        return table.get(nid.index, FULL)

    def symbols(self) -> Iterator[NoiseId]:
        for i in range(1, self.n + 1):
            yield eps(i)
        for j in range(1, self.m + 1):
            yield eta(j)

    def constrained(self) -> Iterator[NoiseId]:
        for i in sorted(self.central):
            yield eps(i)
        for j in sorted(self.perturbation):
            yield eta(j)

    def padded(self, n: int, m: int) -> "NoiseBox":
        """Same box over a universe of at least ``n``/``m`` symbols."""
        if n <= self.n and m <= self.m:
            return self
        return NoiseBox(max(n, self.n), max(m, self.m), self.central,
                        self.perturbation, self.empty)

    def with_intervals(self, updates: Mapping[NoiseId, Interval]) -> "NoiseBox":
        c, p = dict(self.central), dict(self.perturbation)
        n, m = self.n, self.m
        for nid, itv in updates.items():
            if nid.kind is Kind.CENTRAL:
                c[nid.index] = itv
                n = max(n, nid.index)
            else:
                p[nid.index] = itv
                m = max(m, nid.index)
        return NoiseBox(n, m, c, p, self.empty)

    def dense(self) -> Tuple[list, list]:
        """Dense ``(central, perturbation)`` interval lists."""
        return ([self.interval(eps(i)) for i in range(1, self.n + 1)],
                [self.interval(eta(j)) for j in range(1, self.m + 1)])

    def __repr__(self) -> str:
        if self.empty:
            return "NoiseBox(bottom)"
        parts = [f"{s}:{self.interval(s)}" for s in self.constrained()]
        return f"NoiseBox(n={self.n}, m={self.m}{', ' if parts else ''}{', '.join(parts)})"


class Rel(enum.Enum):
    EQ = "=="
    LE = "<="
    LT = "<"


@dataclass(frozen=True)
class LinearConstraint:
    """``a0 + sum a_i e_i + sum b_j h_j  rel  0``."""

    a0: Number
    a: Mapping[int, Number] = field(default_factory=dict)
    b: Mapping[int, Number] = field(default_factory=dict)
    rel: Rel = Rel.EQ

    def terms(self) -> Iterator[Tuple[NoiseId, Number]]:
        for i in sorted(self.a):
            if self.a[i] != 0:
                yield eps(i), self.a[i]
        for j in sorted(self.b):
            if self.b[j] != 0:
                yield eta(j), self.b[j]


def new_central(box: NoiseBox) -> Tuple[NoiseBox, NoiseId]:
    if box.empty:
        raise EmptyBox("cannot create a symbol in the bottom box")
    nid = eps(box.n + 1)
    return NoiseBox(box.n + 1, box.m, box.central, box.perturbation), nid


def new_perturbation(box: NoiseBox) -> Tuple[NoiseBox, NoiseId]:
    if box.empty:
        raise EmptyBox("cannot create a symbol in the bottom box")
    nid = eta(box.m + 1)
    return NoiseBox(box.n, box.m + 1, box.central, box.perturbation), nid


def mid_dev(box: NoiseBox, nid: NoiseId) -> Tuple[Number, Number]:
    itv = box.interval(nid)
    return itv.mid, itv.dev


def _eval_bounds(a0, terms, itvs):
    lo = hi = a0
    mag = abs(a0)
    for s, w in terms:
        i = itvs[s]
        x, y = w * i.lo, w * i.hi
        lo += min(x, y)
        hi += max(x, y)
        mag += max(abs(x), abs(y))
    return lo, hi, mag


def contract(box: NoiseBox, c: LinearConstraint, max_sweeps: int | None = None) -> NoiseBox:
    """Shrink ``box`` to (a box hull of) its points satisfying ``c``.

    Strict inequalities are treated as non-strict.  Returns a bottom box when
    no point of ``box`` can satisfy the constraint.
    """
    if box.empty:
        return box
    terms = list(c.terms())
    n = max([box.n] + [s.index for s, _ in terms if s.kind is Kind.CENTRAL])
    m = max([box.m] + [s.index for s, _ in terms if s.kind is Kind.PERTURBATION])
    box = box.padded(n, m)
    itvs = {s: box.interval(s) for s, _ in terms}
    eq = c.rel is Rel.EQ

    def feasible(lo, hi, mag):
        k = len(terms)
        if eq:
            return down(lo, mag, k) <= 0 <= up(hi, mag, k)
        return down(lo, mag, k) <= 0

    if not feasible(*_eval_bounds(c.a0, terms, itvs)):
        return NoiseBox.bottom(box.n, box.m)
    if not terms:
        return box

    sweeps = max_sweeps if max_sweeps is not None else 2 * max(1, len(terms))
    for _ in range(sweeps):
        change = 0
        for s, w in terms:
            rest = [(t, v) for t, v in terms if t != s]
            lo, hi, mag = _eval_bounds(c.a0, rest, itvs)
            k = len(terms)
            # w*s + rest <= 0 (and >= 0 for equalities)
            ub_ws = up(-lo, mag, k)
            lb_ws = down(-hi, mag, k) if eq else None
            cur = itvs[s]
            if w > 0:
                new_hi = up(ub_ws / w, mag / w, k)
                new_lo = down(lb_ws / w, mag / w, k) if eq else cur.lo
            else:
                new_lo = down(ub_ws / w, mag / abs(w), k)
                new_hi = up(lb_ws / w, mag / abs(w), k) if eq else cur.hi
            lo2, hi2 = max(cur.lo, new_lo), min(cur.hi, new_hi)
            if lo2 > hi2:
                return NoiseBox.bottom(box.n, box.m)
            change = max(change, (lo2 - cur.lo) + (cur.hi - hi2))
            itvs[s] = Interval(lo2, hi2)
        if change == 0 or (is_float(change) and change < 1e-12):
            break
    return box.with_intervals(itvs)


def join2(b1: NoiseBox, b2: NoiseBox) -> NoiseBox:
    """Per-symbol interval hull; bottom is the unit."""
    n, m = max(b1.n, b2.n), max(b1.m, b2.m)
    if b1.empty:
        return b2.padded(n, m)
    if b2.empty:
        return b1.padded(n, m)
    c = {i: b1.interval(eps(i)).hull(b2.interval(eps(i)))
         for i in set(b1.central) & set(b2.central)}
    p = {j: b1.interval(eta(j)).hull(b2.interval(eta(j)))
         for j in set(b1.perturbation) & set(b2.perturbation)}
    return NoiseBox(n, m, c, p)


def leq2(b1: NoiseBox, b2: NoiseBox) -> bool:
    """Per-symbol inclusion, padding missing symbols with ``[-1, 1]``."""
    if b1.empty:
        return True
    if b2.empty:
        return False
    for s in b2.constrained():
        if b1.interval(s) not in b2.interval(s):
            return False
    return True

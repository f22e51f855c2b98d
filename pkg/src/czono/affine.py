"""Constrained affine forms and sets, concretization and the order relations."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from .noise import (FULL, EmptyBox, Interval, Kind, NoiseBox, NoiseId, eps, eta,
                    leq2)
from .numeric import Number, directed_sum, down, is_float, to_exact, two_product, up


class CapExceeded(RuntimeError):
    pass


def _clean(d: Mapping[int, Number]) -> Dict[int, Number]:
    return {k: v for k, v in d.items() if v != 0}


@dataclass(frozen=True)
class AffineForm:
    """``center + sum central[i]*e_i + sum perturbation[j]*h_j (+/- beta)``.

    ``beta`` is an extra non-negative deviation used only by the one-variable
    join; sets carry it as a dedicated perturbation symbol instead.
    """

    center: Number = 0
    central: Mapping[int, Number] = field(default_factory=dict)
    perturbation: Mapping[int, Number] = field(default_factory=dict)
    beta: Number = 0

    def __post_init__(self):
        if self.beta < 0:
            raise ValueError("beta must be non-negative")
        object.__setattr__(self, "central", _clean(self.central))
        object.__setattr__(self, "perturbation", _clean(self.perturbation))

    @classmethod
    def from_terms(cls, center: Number, terms: Iterable[Tuple[NoiseId, Number]],
                   beta: Number = 0) -> "AffineForm":
        c: Dict[int, Number] = {}
        p: Dict[int, Number] = {}
        for s, v in terms:
            table = c if s.kind is Kind.CENTRAL else p
            table[s.index] = table.get(s.index, 0) + v
        return cls(center, c, p, beta)

    def coef(self, s: NoiseId) -> Number:
        table = self.central if s.kind is Kind.CENTRAL else self.perturbation
        return table.get(s.index, 0)

    def terms(self) -> Iterator[Tuple[NoiseId, Number]]:
        for i in sorted(self.central):
            yield eps(i), self.central[i]
        for j in sorted(self.perturbation):
            yield eta(j), self.perturbation[j]

    def symbols(self) -> List[NoiseId]:
        return [s for s, _ in self.terms()]

    def is_constant(self) -> bool:
        return not self.central and not self.perturbation and self.beta == 0

    def scale(self, k: Number) -> "AffineForm":
        return AffineForm(self.center * k,
                          {i: v * k for i, v in self.central.items()},
                          {j: v * k for j, v in self.perturbation.items()},
                          self.beta * abs(k))

    def __add__(self, other: "AffineForm") -> "AffineForm":
        c = dict(self.central)
        for i, v in other.central.items():
            c[i] = c.get(i, 0) + v
        p = dict(self.perturbation)
        for j, v in other.perturbation.items():
            p[j] = p.get(j, 0) + v
        return AffineForm(self.center + other.center, c, p, self.beta + other.beta)

    def __neg__(self) -> "AffineForm":
        return self.scale(-1)

    def __sub__(self, other: "AffineForm") -> "AffineForm":
        return self + other.scale(-1)

    def shift(self, k: Number) -> "AffineForm":
        return AffineForm(self.center + k, self.central, self.perturbation, self.beta)

    def evaluate(self, central: Mapping[int, Number], perturbation: Mapping[int, Number]) -> Number:
        v = self.center
        for i, c in self.central.items():
            v += c * central[i]
        for j, c in self.perturbation.items():
            v += c * perturbation[j]
        return v

    def __str__(self) -> str:
        out = [f"{float(self.center):.6g}"]
        for s, v in self.terms():
            out.append(f"{'-' if v < 0 else '+'} {abs(float(v)):.6g}*{s}")
        if self.beta:
            out.append(f"+/- {float(self.beta):.6g}")
        return " ".join(out)


def gamma_form(f: AffineForm, phi: NoiseBox) -> Interval:
    """Interval concretization of ``f`` over the box ``phi``."""
    if phi.empty:
        raise EmptyBox("concretization of bottom")
    if is_float(f.center, f.beta, *f.central.values(), *f.perturbation.values()):
        tight = _gamma_float(f, phi)
        if tight is not None:
            return tight
    lo = hi = f.center
    mag = abs(f.center)
    k = 0
    for s, c in f.terms():
        itv = phi.interval(s)
        x, y = c * itv.lo, c * itv.hi
        lo += min(x, y)
        hi += max(x, y)
        mag += max(abs(x), abs(y))
        k += 1
    if not k and not f.beta:
        return Interval(lo, hi)
    lo -= f.beta
    hi += f.beta
    return Interval(down(lo, mag + f.beta, k + 1), up(hi, mag + f.beta, k + 1))


_SAFE = 1e290


def _plain(*xs) -> bool:
    # floats and ints convert to float exactly (ints here are small)
    return all(isinstance(x, float) or (isinstance(x, int) and abs(x) < 2 ** 53) for x in xs)


def _gamma_float(f: AffineForm, phi: NoiseBox) -> Optional[Interval]:
    """Tight float concretization: products split exactly, sums rounded
    once outward.  ``None`` when magnitudes are too large for the split."""
    if not _plain(f.center, f.beta) or max(abs(f.center), abs(f.beta)) > _SAFE:
        return None
    lo_parts = [float(f.center), -float(f.beta)]
    hi_parts = [float(f.center), float(f.beta)]
    for s, c in f.terms():
        itv = phi.interval(s)
        if not _plain(c, itv.lo, itv.hi) or max(abs(c), abs(itv.lo), abs(itv.hi)) > 1e140:
            return None
        c, a, b = float(c), float(itv.lo), float(itv.hi)
        pa, pb = two_product(c, a), two_product(c, b)
        if c < 0:
            pa, pb = pb, pa
        lo_parts += pa
        hi_parts += pb
    return Interval(directed_sum(lo_parts, False), directed_sum(hi_parts, True))


def sup_abs(f: AffineForm, phi: NoiseBox) -> Number:
    """``sup |f|`` over ``phi`` (``beta`` included)."""
    g = gamma_form(f, phi)
    return max(abs(g.lo), abs(g.hi))


@dataclass(frozen=True)
class ConstrainedAffineSet:
    """``p`` named affine forms over a shared noise box.

    The matrix view of the same data is available through :attr:`C` (rows
    ``0..n``, row 0 holding the centers) and :attr:`P` (rows ``1..m``).
    """

    names: Tuple[str, ...] = ()
    forms: Tuple[AffineForm, ...] = ()
    phi: NoiseBox = field(default_factory=NoiseBox)

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "forms", tuple(self.forms))
        if len(self.names) != len(self.forms):
            raise ValueError("one form per variable name")
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names")
        n, m = self.phi.n, self.phi.m
        for f in self.forms:
            if f.central:
                n = max(n, max(f.central))
            if f.perturbation:
                m = max(m, max(f.perturbation))
        object.__setattr__(self, "phi", self.phi.padded(n, m))

    @classmethod
    def from_matrices(cls, C, P=(), phi: Optional[NoiseBox] = None,
                      names: Optional[Sequence[str]] = None) -> "ConstrainedAffineSet":
        """``C`` is ``(n+1) x p`` (row 0 = centers), ``P`` is ``m x p``."""
        C = [list(r) for r in C]
        P = [list(r) for r in P]
        p = len(C[0]) if C else 0
        names = list(names) if names is not None else [f"x{k + 1}" for k in range(p)]
        forms = []
        for k in range(p):
            forms.append(AffineForm(C[0][k],
                                    {i: C[i][k] for i in range(1, len(C))},
                                    {j + 1: P[j][k] for j in range(len(P))}))
        phi = phi if phi is not None else NoiseBox()
        return cls(names, forms, phi.padded(len(C) - 1, len(P)))

    @classmethod
    def bottom_like(cls, X: "ConstrainedAffineSet") -> "ConstrainedAffineSet":
        return cls(X.names, X.forms, NoiseBox.bottom(X.phi.n, X.phi.m))

    @property
    def is_bottom(self) -> bool:
        return self.phi.empty

    @property
    def n(self) -> int:
        return self.phi.n

    @property
    def m(self) -> int:
        return self.phi.m

    @property
    def p(self) -> int:
        return len(self.names)

    @property
    def C(self) -> List[List[Number]]:
        rows = [[f.center for f in self.forms]]
        for i in range(1, self.n + 1):
            rows.append([f.central.get(i, 0) for f in self.forms])
        return rows

    @property
    def P(self) -> List[List[Number]]:
        return [[f.perturbation.get(j, 0) for f in self.forms]
                for j in range(1, self.m + 1)]

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}") from None

    def form(self, name: str) -> AffineForm:
        return self.forms[self.index(name)]

    def pi(self, k: int) -> AffineForm:
        return self.forms[k]

    def with_phi(self, phi: NoiseBox) -> "ConstrainedAffineSet":
        return ConstrainedAffineSet(self.names, self.forms, phi)

    def with_var(self, name: str, form: AffineForm,
                 phi: Optional[NoiseBox] = None) -> "ConstrainedAffineSet":
        phi = self.phi if phi is None else phi
        if name in self.names:
            forms = list(self.forms)
            forms[self.index(name)] = form
            return ConstrainedAffineSet(self.names, forms, phi)
        return ConstrainedAffineSet(self.names + (name,), self.forms + (form,), phi)

    def without(self, names: Iterable[str]) -> "ConstrainedAffineSet":
        drop = set(names)
        keep = [k for k, nm in enumerate(self.names) if nm not in drop]
        return ConstrainedAffineSet([self.names[k] for k in keep],
                                    [self.forms[k] for k in keep], self.phi)

    def padded(self, n: int, m: int) -> "ConstrainedAffineSet":
        return self.with_phi(self.phi.padded(n, m))

    def reordered(self, names: Sequence[str]) -> "ConstrainedAffineSet":
        if set(names) != set(self.names) or len(names) != len(self.names):
            raise ValueError(f"variable sets differ: {sorted(names)} vs {sorted(self.names)}")
        return ConstrainedAffineSet(names, [self.form(nm) for nm in names], self.phi)

    def live_symbols(self) -> set:
        live = set(self.phi.constrained()) if not self.phi.empty else set()
        for f in self.forms:
            live.update(f.symbols())
        return live

    def __repr__(self) -> str:
        body = ", ".join(f"{nm} = {f}" for nm, f in zip(self.names, self.forms))
        return f"ConstrainedAffineSet({body}; {self.phi!r})"


def recenter_perturbations(X: ConstrainedAffineSet) -> ConstrainedAffineSet:
    """Rewrite every constrained ``eta_j in [a, b]`` as ``mid + dev * eta_j``
    with ``eta_j`` back in ``[-1, 1]``.

    The concretization is unchanged; joins of recentered sets are exact on
    the interval hull.
    """
    if X.is_bottom or not X.phi.perturbation:
        return X
    box = X.phi.perturbation
    forms = []
    for f in X.forms:
        center = f.center
        pert = dict(f.perturbation)
        for j, itv in box.items():
            c = pert.get(j)
            if c:
                center += c * itv.mid
                pert[j] = c * itv.dev
        forms.append(AffineForm(center, f.central, pert, f.beta))
    phi = NoiseBox(X.phi.n, X.phi.m, X.phi.central)
    return ConstrainedAffineSet(X.names, forms, phi)


def gamma_set(X: ConstrainedAffineSet) -> List[Interval]:
    return [gamma_form(f, X.phi) for f in X.forms]


def sample_point(phi: NoiseBox, rng: random.Random) -> List[float]:
    """Uniform point of ``phi`` as a vector ``(e1..en, h1..hm)``."""
    c, p = phi.dense()
    return [rng.uniform(float(i.lo), float(i.hi)) for i in c + p]


def sample_eval(X: ConstrainedAffineSet, point: Sequence[Number]) -> List[Number]:
    """Value of every variable at a point ``(e1..en, h1..hm)`` of the box."""
    if len(point) != X.n + X.m:
        raise ValueError(f"expected {X.n + X.m} coordinates, got {len(point)}")
    central = {i + 1: point[i] for i in range(X.n)}
    perturbation = {j + 1: point[X.n + j] for j in range(X.m)}
    return [f.evaluate(central, perturbation) for f in X.forms]


# -- order ------------------------------------------------------------------

def _split(f: AffineForm, kind: Kind) -> AffineForm:
    if kind is Kind.CENTRAL:
        return AffineForm(f.center, f.central)
    return AffineForm(0, {}, f.perturbation)


def leq_form(a: AffineForm, phi_a: NoiseBox, b: AffineForm, phi_b: NoiseBox,
             tol: Number = 0) -> bool:
    """One-variable order: ``phi_a <= phi_b`` and the central difference is
    absorbed by the extra deviation of ``b`` over that of ``a``.

    Perturbation coefficients count towards the deviation of their form, so
    this coincides with the set order for a single variable.
    """
    if phi_a.empty:
        return True
    if phi_b.empty or not leq2(phi_a, phi_b):
        return False
    diff = _split(b, Kind.CENTRAL) - _split(a, Kind.CENTRAL)
    lhs = sup_abs(diff, phi_a)
    dev_b = b.beta + sup_abs(_split(b, Kind.PERTURBATION), phi_b)
    dev_a = a.beta + sup_abs(_split(a, Kind.PERTURBATION), phi_a)
    return lhs <= dev_b - dev_a + tol


def _order_terms(X: ConstrainedAffineSet, Y: ConstrainedAffineSet):
    """Weighted functionals ``w*|r.t|`` whose sum is ``g - f - h``.

    Returns ``(lhs, rhs)``: lists of ``(w, r)`` with ``r`` an exact vector in
    ``Q^p``; the order holds iff ``sum_rhs >= sum_lhs`` for every ``t``.
    """
    p = X.p
    fx, fy = X.forms, Y.forms

    def vec(get):
        return tuple(to_exact(get(k)) for k in range(p))

    def itv(phi, s):
        i = phi.interval(s)
        return to_exact(i.mid), to_exact(i.dev)

    lhs, rhs = [], []
    # sup over phi^X of |<(C^Y - C^X) t, e>|
    centrals = sorted({i for f in fx + fy for i in f.central})
    center = [to_exact(fy[k].center) - to_exact(fx[k].center) for k in range(p)]
    for i in centrals:
        r = vec(lambda k: to_exact(fy[k].central.get(i, 0)) - to_exact(fx[k].central.get(i, 0)))
        mid, dev = itv(X.phi, eps(i))
        center = [c + mid * v for c, v in zip(center, r)]
        lhs.append((dev, r))
    lhs.append((Fraction(1), tuple(center)))

    def pert(Z, bucket):
        rows = sorted({j for f in Z.forms for j in f.perturbation})
        cen = [Fraction(0)] * p
        for j in rows:
            r = vec(lambda k: to_exact(Z.forms[k].perturbation.get(j, 0)))
            mid, dev = itv(Z.phi, eta(j))
            cen = [c + mid * v for c, v in zip(cen, r)]
            bucket.append((dev, r))
        bucket.append((Fraction(1), tuple(cen)))

    pert(X, lhs)
    pert(Y, rhs)
    nz = lambda terms: [(w, r) for w, r in terms if w != 0 and any(r)]
    return nz(lhs), nz(rhs)


def _direction(r):
    """Canonical representative of the line through ``r`` and its scale."""
    lead = next(v for v in r if v != 0)
    return tuple(v / lead for v in r), abs(lead)


def _aligned(X, Y):
    if X.names != Y.names:
        Y = Y.reordered(X.names)
    n, m = max(X.n, Y.n), max(X.m, Y.m)
    return X.padded(n, m), Y.padded(n, m)


def leq_set_sufficient(X: ConstrainedAffineSet, Y: ConstrainedAffineSet) -> Optional[bool]:
    """Cheap sound test for ``X <= Y``: ``True`` or ``None`` (unknown).

    Every weighted term on the left must be matched, direction by direction,
    by at least as much weight among the perturbation terms of ``Y``.
    """
    X, Y = _aligned(X, Y)
    if X.is_bottom:
        return True
    if Y.is_bottom or not leq2(X.phi, Y.phi):
        return None
    lhs, rhs = _order_terms(X, Y)
    need: Dict[tuple, Fraction] = {}
    for w, r in lhs:
        d, s = _direction(r)
        need[d] = need.get(d, 0) + w * s
    have: Dict[tuple, Fraction] = {}
    for w, r in rhs:
        d, s = _direction(r)
        have[d] = have.get(d, 0) + w * s
    for d, w in need.items():
        if have.get(d, 0) < w:
            return None
    return True


def _rank_basis(vectors: List[tuple]) -> List[tuple]:
    """Row-reduced basis of the span of ``vectors`` (exact)."""
    rows = [list(v) for v in vectors]
    basis = []
    p = len(rows[0]) if rows else 0
    col = 0
    while rows and col < p:
        piv = next((r for r in rows if r[col] != 0), None)
        if piv is None:
            col += 1
            continue
        rows.remove(piv)
        piv = [v / piv[col] for v in piv]
        rows = [[a - r[col] * b for a, b in zip(r, piv)] for r in rows]
        rows = [r for r in rows if any(r)]
        basis = [[a - b_[col] * b for a, b in zip(b_, piv)] for b_ in basis]
        basis.append(piv)
        col += 1
    return [tuple(b) for b in basis]


def _null_vector(eqs: List[tuple], basis: List[tuple]) -> Optional[tuple]:
    """Nonzero ``d`` in span(basis) with ``r.d = 0`` for ``r`` in ``eqs``.

    ``len(eqs) == len(basis) - 1``; returns None if the solution space is not
    one-dimensional.
    """
    k = len(basis)
    # unknowns: coefficients of d on the basis
    A = [[sum(a * b for a, b in zip(r, bv)) for bv in basis] for r in eqs]
    # gaussian elimination to find the null space of A (k-1 x k)
    rows = [list(r) for r in A]
    pivots = []
    ri = 0
    for c in range(k):
        piv = next((i for i in range(ri, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[ri], rows[piv] = rows[piv], rows[ri]
        pv = rows[ri][c]
        rows[ri] = [v / pv for v in rows[ri]]
        for i in range(len(rows)):
            if i != ri and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[ri])]
        pivots.append(c)
        ri += 1
    free = [c for c in range(k) if c not in pivots]
    if len(free) != 1:
        return None
    fc = free[0]
    coeffs = [Fraction(0)] * k
    coeffs[fc] = Fraction(1)
    for i, c in enumerate(pivots):
        coeffs[c] = -rows[i][fc]
    p = len(basis[0])
    return tuple(sum(coeffs[j] * basis[j][q] for j in range(k)) for q in range(p))


def leq_set_exact(X: ConstrainedAffineSet, Y: ConstrainedAffineSet, cap: int = 16) -> bool:
    """Exact decision of the global order ``X <= Y``.

    ``g(t) - f(t) - h(t)`` is a sum of weighted absolute values of linear
    functionals of ``t``.  It is linear on every closed cell of the
    arrangement of their kernels, and every such cell (modulo the common
    kernel) is a pointed cone spanned by intersections of ``rank - 1``
    kernels.  Checking non-negativity on those rays decides the order exactly.
    Arithmetic is done in rationals.
    """
    X, Y = _aligned(X, Y)
    if X.is_bottom:
        return True
    if Y.is_bottom:
        return False
    nsym = len(X.live_symbols() | Y.live_symbols())
    if nsym > cap:
        raise CapExceeded(f"{nsym} noise symbols exceed the exact-order cap {cap}")
    if not leq2(X.phi, Y.phi):
        return False
    lhs, rhs = _order_terms(X, Y)
    terms = [(-w, r) for w, r in lhs] + list(rhs)
    if not terms:
        return True
    dirs = {}
    for _, r in terms:
        d, _s = _direction(r)
        dirs[d] = True
    functionals = list(dirs)
    basis = _rank_basis(functionals)
    rank = len(basis)

    def value(t):
        return sum(w * abs(sum(a * b for a, b in zip(r, t))) for w, r in terms)

    for subset in itertools.combinations(functionals, rank - 1):
        d = _null_vector(list(subset), basis)
        if d is None:
            continue
        if value(d) < 0 or value(tuple(-v for v in d)) < 0:
            return False
    return True

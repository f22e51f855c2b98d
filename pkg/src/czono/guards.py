"""Interpretation of tests on constrained affine sets.

Inequalities only shrink the noise box.  Equalities also rewrite the
compared variables into one common form of minimal width, and for tests on
expressions substitute the eliminated noise symbol everywhere else.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .affine import AffineForm, ConstrainedAffineSet
from .noise import Kind, LinearConstraint, NoiseId, Rel, contract
from .numeric import Number, is_float
from .syntax import Var
from .transfer import as_expr, eval_expr


@dataclass(frozen=True)
class MinimizeAbsSumProblem:
    """Minimize ``sum w * |a + b * theta|`` over the scalar ``theta``."""

    terms: Sequence[Tuple[Number, Number, Number]]


def _objective(terms, theta):
    return sum(w * abs(a + b * theta) for a, b, w in terms)


def minimize_abs_sum(problem: MinimizeAbsSumProblem) -> Tuple[Number, Number, Optional[int]]:
    """Global minimizer of a weighted sum of absolute affine functions.

    The objective is convex and piecewise linear with breakpoints
    ``-a/b``; a minimizer is found by a sorted sweep of the slope.  Among all
    breakpoints attaining the minimum, the one of the lowest term index is
    returned.  Returns ``(theta, value, term_index)``; the index is ``None``
    when no term depends on ``theta``.
    """
    terms = list(problem.terms)
    points = [(-a / b, k) for k, (a, b, w) in enumerate(terms) if b != 0]
    if not points:
        return 0, _objective(terms, 0), None
    points.sort()
    slope = -sum(w * abs(b) for a, b, w in terms)
    value = _objective(terms, points[0][0])
    values = [value]
    for idx in range(1, len(points)):
        prev = points[idx - 1]
        _, b, w = terms[prev[1]]
        slope += 2 * w * abs(b)
        value += slope * (points[idx][0] - prev[0])
        values.append(value)
    best = min(values)
    tol = 1e-12 * max(1.0, abs(best)) if is_float(best) else 0
    winners = [points[i] for i, v in enumerate(values) if v <= best + tol]
    theta, k = min(winners, key=lambda p: p[1])
    return theta, _objective(terms, theta), k


def _ordered_symbols(*forms: AffineForm) -> List[NoiseId]:
    return sorted({s for f in forms for s in f.symbols()})


def _constraint(delta: AffineForm, rel: Rel) -> LinearConstraint:
    return LinearConstraint(delta.center, delta.central, delta.perturbation, rel)


def _pivot(delta: AffineForm) -> Optional[NoiseId]:
    for kind in (Kind.CENTRAL, Kind.PERTURBATION):
        cands = [(s, c) for s, c in delta.terms() if s.kind is kind]
        if cands:
            # largest |coefficient|, lowest index on ties
            return max(cands, key=lambda sc: (abs(sc[1]), -sc[0].index))[0]
    return None


def _merge(X: ConstrainedAffineSet, xi: str, xj: str):
    """Shared core of equality tests.

    Returns ``(Z, delta, eliminated)`` where ``delta = x_j - x_i`` is the
    constraint form and ``eliminated`` is the symbol absent from the merged
    form (``None`` when nothing was merged).
    """
    fi, fj = X.form(xi), X.form(xj)
    delta = fj - fi
    phi = contract(X.phi, _constraint(delta, Rel.EQ))
    if phi.empty:
        return ConstrainedAffineSet.bottom_like(X), delta, None
    Z = X.with_phi(phi)
    k = _pivot(delta)
    if k is None:
        return Z, delta, None
    dk = delta.coef(k)
    ik = fi.coef(k)
    syms = _ordered_symbols(fi, fj)
    # coefficient of symbol s in the merged form: a_s + b_s * theta, theta
    # being the merged coefficient on the pivot symbol
    lines = []
    for s in syms:
        if s == k:
            lines.append((0 * dk, 1 + 0 * dk))
        else:
            b = delta.coef(s) / dk
            lines.append((fi.coef(s) - b * ik, b))
    terms = [(a, b, phi.interval(s).dev) for s, (a, b) in zip(syms, lines)]
    theta, _, which = minimize_abs_sum(MinimizeAbsSumProblem(terms))
    center = fi.center + delta.center / dk * (theta - ik)
    merged = AffineForm.from_terms(
        center, [(s, a + b * theta) for s, (a, b) in zip(syms, lines)])
    if which is not None:
        # any symbol whose merged coefficient vanishes may be eliminated;
        # prefer perturbation symbols so that input symbols survive
        zeros = [s for s, (a, b) in zip(syms, lines)
                 if b != 0 and (a + b * theta == 0 or s == syms[which])]
        s0 = min(zeros, key=lambda s: (s.kind is Kind.CENTRAL, s.index))
        merged = AffineForm.from_terms(
            merged.center, [(s, c) for s, c in merged.terms() if s != s0])
        eliminated = s0
    else:
        eliminated = None
    Z = Z.with_var(xi, merged).with_var(xj, merged)
    return Z, delta, eliminated


def test_eq_vars(X: ConstrainedAffineSet, xi: str, xj: str) -> ConstrainedAffineSet:
    """``x_i == x_j``: contract the box and merge both columns."""
    X.form(xi), X.form(xj)  # unknown names raise even on bottom
    if X.is_bottom or xi == xj:
        return X
    return _merge(X, xi, xj)[0]


_TMP1, _TMP2 = "$lhs", "$rhs"


def _with_temps(X, e1, e2):
    f1, X = eval_expr(X, as_expr(e1))
    f2, X = eval_expr(X, as_expr(e2))
    return X.with_var(_TMP1, f1).with_var(_TMP2, f2)


def test_eq_exprs(X: ConstrainedAffineSet, e1, e2) -> ConstrainedAffineSet:
    """``e1 == e2`` on expressions.

    Both sides go to temporaries, the temporaries are merged, and the noise
    symbol eliminated from the merged form is substituted in every other
    variable using the exact equality constraint.
    """
    if X.is_bottom:
        return X
    Y = _with_temps(X, e1, e2)
    Z, delta, s0 = _merge(Y, _TMP1, _TMP2)
    if Z.is_bottom:
        return ConstrainedAffineSet.bottom_like(X).padded(Z.n, Z.m)
    if s0 is not None:
        d0 = delta.coef(s0)
        names = [nm for nm in Z.names if nm not in (_TMP1, _TMP2)]
        for nm in names:
            f = Z.form(nm)
            c = f.coef(s0)
            if c:
                g = f - delta.scale(c / d0)
                # the substituted symbol cancels exactly
                g = AffineForm.from_terms(g.center, [(s, v) for s, v in g.terms() if s != s0])
                Z = Z.with_var(nm, g)
    return Z.without([_TMP1, _TMP2])


def test_ineq(X: ConstrainedAffineSet, e1, rel: str, e2) -> ConstrainedAffineSet:
    """``e1 rel e2`` for ``rel`` in ``< <= > >=`` (``!=`` is the identity).

    Only the noise box changes; strict comparisons are abstracted as
    non-strict ones.
    """
    if X.is_bottom or rel == "!=":
        return X
    if rel == "==":
        return test_eq_exprs(X, e1, e2)
    Y = _with_temps(X, e1, e2)
    delta = Y.form(_TMP1) - Y.form(_TMP2)
    if rel in (">", ">="):
        delta = -delta
    elif rel not in ("<", "<="):
        raise ValueError(f"unknown comparison {rel!r}")
    phi = contract(Y.phi, _constraint(delta, Rel.LE))
    return ConstrainedAffineSet(X.names, X.forms, phi)


def test(X: ConstrainedAffineSet, e1, rel: str, e2) -> ConstrainedAffineSet:
    """Dispatch on the comparison; variable equalities use the plain merge."""
    e1, e2 = as_expr(e1), as_expr(e2)
    if rel == "==":
        if isinstance(e1, Var) and isinstance(e2, Var):
            return test_eq_vars(X, e1.name, e2.name)
        return test_eq_exprs(X, e1, e2)
    return test_ineq(X, e1, rel, e2)

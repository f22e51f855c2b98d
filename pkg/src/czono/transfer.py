"""Assignment transfer functions: fresh ranges, affine combinations, products."""

from __future__ import annotations

from typing import Iterable, Tuple

from .affine import AffineForm, ConstrainedAffineSet
from .noise import Kind, NoiseBox, new_central, new_perturbation
from .numeric import Number, half
from .syntax import Add, Const, DivConst, Expr, Mul, Neg, Sub, Var


def interval_form(box: NoiseBox, a: Number, b: Number) -> Tuple[AffineForm, NoiseBox]:
    if a > b:
        raise ValueError(f"malformed range [{a}, {b}]")
    box, s = new_central(box)
    return AffineForm(half(a + b), {s.index: half(b - a)}), box


def linear_combination(const: Number, terms: Iterable[Tuple[Number, AffineForm]]) -> AffineForm:
    out = AffineForm(const)
    for k, f in terms:
        out = out + f.scale(k)
    return out


def _square_range(itv) -> Tuple[Number, Number]:
    lo2, hi2 = itv.lo * itv.lo, itv.hi * itv.hi
    top = max(lo2, hi2)
    bottom = 0 if itv.lo <= 0 <= itv.hi else min(lo2, hi2)
    return bottom, top


def mul_forms(fi: AffineForm, fj: AffineForm, box: NoiseBox,
              linearize_at_zero: bool = False) -> Tuple[AffineForm, NoiseBox]:
    """Product of two forms over ``box``.

    The product is linearized at the center of the constrained symbol ranges.
    Quadratic terms in central symbols only go to a fresh central symbol;
    every quadratic term involving a perturbation symbol goes to a fresh
    perturbation symbol.  ``linearize_at_zero`` gives the plain affine
    arithmetic product (quadratic part still bounded over the box), kept for
    comparison.
    """
    if fi.beta or fj.beta:
        raise ValueError("products are defined on set columns (beta must be 0)")
    syms = sorted(set(fi.symbols()) | set(fj.symbols()))
    md = {s: box.interval(s) for s in syms}
    box, e_new = new_central(box)
    box, h_new = new_perturbation(box)

    if linearize_at_zero:
        return _mul_at_zero(fi, fj, syms, md, e_new, h_new), box

    mid = {s: md[s].mid for s in syms}
    dev = {s: md[s].dev for s in syms}
    di = fi.center + sum(c * mid[s] for s, c in fi.terms())
    dj = fj.center + sum(c * mid[s] for s, c in fj.terms())

    lin = {s: di * fj.coef(s) + dj * fi.coef(s) for s in syms}
    const = di * dj - sum(lin[s] * mid[s] for s in syms)

    # sums of |c| * dev per kind, for the cross terms
    def weight(f, kind):
        return sum(abs(c) * dev[s] for s, c in f.terms() if s.kind is kind)

    diag = {Kind.CENTRAL: 0, Kind.PERTURBATION: 0}
    for s in syms:
        q = fi.coef(s) * fj.coef(s)
        if q:
            const += half(q * dev[s] * dev[s])
            diag[s.kind] += abs(q) * dev[s] * dev[s]
    ci, cj = weight(fi, Kind.CENTRAL), weight(fj, Kind.CENTRAL)
    pi_, pj = weight(fi, Kind.PERTURBATION), weight(fj, Kind.PERTURBATION)
    e_dev = half(diag[Kind.CENTRAL]) + (ci * cj - diag[Kind.CENTRAL])
    h_dev = half(diag[Kind.PERTURBATION]) + (pi_ * pj - diag[Kind.PERTURBATION]) + ci * pj + pi_ * cj

    terms = [(s, v) for s, v in lin.items()] + [(e_new, e_dev), (h_new, h_dev)]
    return AffineForm.from_terms(const, terms), box


def _mul_at_zero(fi, fj, syms, md, e_new, h_new):
    const = fi.center * fj.center
    lin = [(s, fi.center * fj.coef(s) + fj.center * fi.coef(s)) for s in syms]
    e_dev = h_dev = 0
    mag = {s: max(abs(md[s].lo), abs(md[s].hi)) for s in syms}
    for r in syms:
        for l in syms:
            q = fi.coef(r) * fj.coef(l)
            if not q:
                continue
            if r == l:
                lo, hi = _square_range(md[r])
                const += half(q * (lo + hi))
                d = half(abs(q) * (hi - lo))
            else:
                d = abs(q) * mag[r] * mag[l]
            if r.kind is Kind.CENTRAL and l.kind is Kind.CENTRAL:
                e_dev += d
            else:
                h_dev += d
    return AffineForm.from_terms(const, lin + [(e_new, e_dev), (h_new, h_dev)])


def eval_expr(X: ConstrainedAffineSet, expr: Expr) -> Tuple[AffineForm, ConstrainedAffineSet]:
    """Affine form of ``expr``; products extend the noise box of ``X``."""
    if isinstance(expr, Const):
        return AffineForm(expr.value), X
    if isinstance(expr, Var):
        return X.form(expr.name), X
    if isinstance(expr, Neg):
        f, X = eval_expr(X, expr.arg)
        return -f, X
    if isinstance(expr, DivConst):
        if expr.divisor == 0:
            raise ZeroDivisionError("division by a zero constant")
        f, X = eval_expr(X, expr.left)
        return f.scale(1 / expr.divisor), X
    if isinstance(expr, Mul):
        if isinstance(expr.left, Const):
            f, X = eval_expr(X, expr.right)
            return f.scale(expr.left.value), X
        if isinstance(expr.right, Const):
            f, X = eval_expr(X, expr.left)
            return f.scale(expr.right.value), X
    left, X = eval_expr(X, expr.left)
    right, X = eval_expr(X, expr.right)
    if isinstance(expr, Add):
        return left + right, X
    if isinstance(expr, Sub):
        return left - right, X
    if isinstance(expr, Mul):
        f, phi = mul_forms(left, right, X.phi)
        return f, X.with_phi(phi)
    raise TypeError(f"not an expression: {expr!r}")


def as_expr(e) -> Expr:
    if isinstance(e, str):
        return Var(e)
    if isinstance(e, (int, float)) or hasattr(e, "denominator"):
        return Const(e)
    return e


# -- set-level operations ---------------------------------------------------

def assign_interval(X: ConstrainedAffineSet, name: str, a: Number, b: Number) -> ConstrainedAffineSet:
    f, phi = interval_form(X.phi, a, b)
    return X.with_var(name, f, phi)


def assign_affine(X: ConstrainedAffineSet, name: str, const: Number = 0,
                  terms: Iterable[Tuple[Number, str]] = ()) -> ConstrainedAffineSet:
    """``name = const + sum(coeff * var)``."""
    f = linear_combination(const, [(k, X.form(v)) for k, v in terms])
    return X.with_var(name, f)


def assign_div(X: ConstrainedAffineSet, name: str, src: str, divisor: Number) -> ConstrainedAffineSet:
    if divisor == 0:
        raise ZeroDivisionError("division by a zero constant")
    return X.with_var(name, X.form(src).scale(1 / divisor))


def assign_mul(X: ConstrainedAffineSet, name: str, xi: str, xj: str,
               linearize_at_zero: bool = False) -> ConstrainedAffineSet:
    f, phi = mul_forms(X.form(xi), X.form(xj), X.phi, linearize_at_zero)
    return X.with_var(name, f, phi)


def assign_expr(X: ConstrainedAffineSet, name: str, expr) -> ConstrainedAffineSet:
    f, X = eval_expr(X, as_expr(expr))
    return X.with_var(name, f)

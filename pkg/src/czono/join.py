"""Join of constrained affine forms and sets."""

from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

from .affine import AffineForm, ConstrainedAffineSet, gamma_form, sup_abs
from .noise import Interval, Kind, NoiseBox, eps, eta, join2
from .numeric import Number, le, up


def generic_position(i: Interval, j: Interval) -> bool:
    """Containment is only allowed when the two intervals share an endpoint."""
    if i in j or j in i:
        return i.lo == j.lo or i.hi == j.hi
    return True


def _same(a: AffineForm, phi_a: NoiseBox, b: AffineForm, phi_b: NoiseBox) -> bool:
    """Equal forms whose symbols range over equal intervals denote one set."""
    return a == b and all(phi_a.interval(s) == phi_b.interval(s) for s in a.symbols())


def join_forms(a: AffineForm, phi_a: NoiseBox, b: AffineForm, phi_b: NoiseBox,
               gamma_a: Optional[Interval] = None,
               gamma_b: Optional[Interval] = None) -> Tuple[AffineForm, NoiseBox]:
    """Upper bound of two one-variable forms with hull concretization.

    Coefficients shared by both operands are kept when their signs agree and
    the symbol ranges sit on the right side of their hull; the remaining
    spread goes to ``beta``.  If the resulting bound would not be valid, the
    result is the interval hull alone.

    ``gamma_a``/``gamma_b`` override the operand ranges (used to replay
    worked examples whose stated ranges are not the computed ones).
    """
    phi = join2(phi_a, phi_b)
    if phi_a.empty:
        return b, phi
    if phi_b.empty:
        return a, phi
    if gamma_a is None and gamma_b is None and _same(a, phi_a, b, phi_b):
        return a, phi
    ga = gamma_a if gamma_a is not None else gamma_form(a, phi_a)
    gb = gamma_b if gamma_b is not None else gamma_form(b, phi_b)
    hull = ga.hull(gb)

    if generic_position(ga, gb):
        if gb.mid <= ga.mid:
            a, phi_a, ga, b, phi_b, gb = b, phi_b, gb, a, phi_a, ga
        kept = []
        for s in sorted(set(a.symbols()) & set(b.symbols())):
            ia, ib = phi_a.interval(s), phi_b.interval(s)
            if not generic_position(ia, ib):
                continue
            ca, cb = a.coef(s), b.coef(s)
            h = ia.hull(ib)
            if ca >= 0 and cb >= 0 and ia.mid <= h.mid and ib.mid >= h.mid:
                kept.append((s, min(ca, cb), h))
            elif ca <= 0 and cb <= 0 and ia.mid >= h.mid and ib.mid <= h.mid:
                kept.append((s, max(ca, cb), h))
        sa = sum(c * (h.mid - phi_a.interval(s).mid) for s, c, h in kept)
        sb = sum(c * (h.mid - phi_b.interval(s).mid) for s, c, h in kept)
        if (le(0, sa) and le(sa, hull.mid - ga.mid)
                and le(hull.mid - gb.mid, sb) and le(sb, 0)):
            spread = sum(abs(c) * h.dev for s, c, h in kept)
            beta = hull.dev - spread
            center = hull.mid - sum(c * h.mid for s, c, h in kept)
            if le(0, beta):
                beta = up(max(beta, 0 * beta), hull.dev + spread, len(kept) + 2)
                return AffineForm.from_terms(center, [(s, c) for s, c, h in kept], beta), phi
    return AffineForm(hull.mid, beta=up(hull.dev, hull.dev)), phi


def bang(X: ConstrainedAffineSet, k: int) -> Tuple[AffineForm, NoiseBox]:
    """Column ``k`` as a one-variable form whose perturbation symbols are
    renumbered as central symbols ``n+1..n+m``."""
    f = X.forms[k]
    n = X.n
    central = dict(f.central)
    central.update({n + j: v for j, v in f.perturbation.items()})
    return AffineForm(f.center, central), _flatten(X.phi)


def _flatten(phi: NoiseBox) -> NoiseBox:
    if phi.empty:
        return NoiseBox.bottom(phi.n + phi.m, 0)
    central = dict(phi.central)
    central.update({phi.n + j: v for j, v in phi.perturbation.items()})
    return NoiseBox(phi.n + phi.m, 0, central)


def quest(forms: Sequence[AffineForm], phi: NoiseBox, l: int,
          names: Optional[Sequence[str]] = None) -> ConstrainedAffineSet:
    """Embed forms over central-only symbols into a set.

    Symbols ``1..l`` stay central, symbols ``l+1..`` become perturbation
    symbols ``1..``, and each form's ``beta`` becomes the coefficient of its
    own fresh perturbation symbol.
    """
    p = len(forms)
    total = phi.n
    names = list(names) if names is not None else [f"x{k + 1}" for k in range(p)]
    out = []
    mpert = total - l
    for k, f in enumerate(forms):
        central = {i: v for i, v in f.central.items() if i <= l}
        pert = {i - l: v for i, v in f.central.items() if i > l}
        if f.perturbation:
            raise ValueError("quest expects forms over central symbols only")
        pert[mpert + k + 1] = f.beta
        out.append(AffineForm(f.center, central, pert))
    if phi.empty:
        box = NoiseBox.bottom(l, mpert + p)
    else:
        box = NoiseBox(l, mpert + p,
                       {i: v for i, v in phi.central.items() if i <= l},
                       {i - l: v for i, v in phi.central.items() if i > l})
    return ConstrainedAffineSet(names, out, box)


def _split_deviation(f: AffineForm, X: ConstrainedAffineSet, k: int) -> Number:
    """Deviation needed for ``X <= J`` with central and perturbation parts
    of the column difference bounded separately.

    Equal to the one-variable requirement when perturbation ranges are
    centered; larger otherwise.
    """
    g = X.forms[k]
    n = X.n
    c = AffineForm(f.center - g.center,
                   {i: f.central.get(i, 0) - g.central.get(i, 0)
                    for i in set(g.central) | {i for i in f.central if i <= n}})
    p = AffineForm(0, {}, {j: f.central.get(n + j, 0) - g.perturbation.get(j, 0)
                           for j in set(g.perturbation) | {i - n for i in f.central if i > n}})
    dc, dp = sup_abs(c, X.phi), sup_abs(p, X.phi)
    return up(dc + dp, dc + dp)


def join_sets(X: ConstrainedAffineSet, Y: ConstrainedAffineSet) -> ConstrainedAffineSet:
    """Column-wise one-variable joins re-embedded as a set.

    Each column is joined over its own operand's noise box, and the result
    lives on the hull of both boxes plus one fresh perturbation symbol per
    variable.
    """
    if set(X.names) != set(Y.names):
        raise ValueError(f"cannot join sets over {sorted(X.names)} and {sorted(Y.names)}")
    Y = Y.reordered(X.names)
    n, m = max(X.n, Y.n), max(X.m, Y.m)
    X, Y = X.padded(n, m), Y.padded(n, m)
    if X.is_bottom:
        return Y
    if Y.is_bottom:
        return X
    forms = []
    phi = None
    for k in range(X.p):
        fx, px = bang(X, k)
        fy, py = bang(Y, k)
        f, phi = join_forms(fx, px, fy, py)
        if _same(fx, px, fy, py):
            forms.append(f)
            continue
        beta = max(f.beta, _split_deviation(f, X, k), _split_deviation(f, Y, k))
        forms.append(AffineForm(f.center, f.central, beta=beta))
    if phi is None:
        phi = _flatten(join2(X.phi, Y.phi))
    return quest(forms, phi, n, X.names)

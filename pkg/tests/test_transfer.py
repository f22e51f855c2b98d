import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from czono.affine import AffineForm, ConstrainedAffineSet, gamma_form
from czono.noise import Interval, NoiseBox, eps, eta
from czono.syntax import Add, Const, DivConst, Mul, Var
from czono.transfer import (assign_affine, assign_div, assign_expr, assign_interval, assign_mul,
                            eval_expr, interval_form, mul_forms)

X_FALSE = NoiseBox(1, 0, {1: Interval(F(-1), F(-4, 9))})  # false branch of y >= 0
X_FORM = AffineForm(F(5), {1: F(5)})


def test_interval_form():
    f, box = interval_form(NoiseBox(), F(0), F(10))
    assert f == X_FORM and box.n == 1
    with pytest.raises(ValueError):
        interval_form(NoiseBox(), 1, 0)


def test_square_linearized_at_the_box_center():
    f, box = mul_forms(X_FORM, X_FORM, X_FALSE)
    y = f.shift(2)
    assert float(y.center) == pytest.approx(14.9244, abs=1e-4)
    assert float(y.coef(eps(1))) == pytest.approx(13.8889, abs=1e-4)
    assert float(y.coef(eps(2))) == pytest.approx(0.964506, abs=1e-6)
    assert y.coef(eta(1)) == 0
    g = gamma_form(y, box)
    assert g == Interval(F(23, 324), F(787, 81))  # (25/9)^2 + 2 is the true maximum


def test_square_linearized_at_zero():
    f, _ = mul_forms(X_FORM, X_FORM, X_FALSE, linearize_at_zero=True)
    assert float(f.center + 2) == pytest.approx(41.9691, abs=1e-4)
    assert f.coef(eps(1)) == 50
    assert float(f.coef(eps(2))) == pytest.approx(10.0309, abs=1e-4)


def test_product_of_y_x_x_minus_x():
    box = NoiseBox(1, 0)
    sq, box = mul_forms(X_FORM, X_FORM, box)
    y = sq - X_FORM
    assert y == AffineForm(F(65, 2), {1: F(45), 2: F(25, 2)})


def test_products_always_create_two_symbols():
    f, box = mul_forms(AffineForm(F(2)), AffineForm(F(3)), NoiseBox(1, 1))
    assert f == AffineForm(F(6)) and (box.n, box.m) == (2, 2)
    with pytest.raises(ValueError):
        mul_forms(AffineForm(F(1), beta=F(1)), AffineForm(F(1)), NoiseBox())


coef = st.integers(-8, 8).map(lambda k: F(k, 4))
bound = st.integers(-4, 4).map(lambda k: F(k, 4))


def _form(draw_c, n, m):
    return AffineForm(draw_c[0], {i + 1: draw_c[1 + i] for i in range(n)},
                      {j + 1: draw_c[1 + n + j] for j in range(m)})


@settings(max_examples=60, deadline=None)
@given(ci=st.lists(coef, min_size=5, max_size=5), cj=st.lists(coef, min_size=5, max_size=5),
       ends=st.lists(st.tuples(bound, bound), min_size=4, max_size=4),
       at_zero=st.booleans(), seed=st.integers(0, 1000))
def test_product_is_sound(ci, cj, ends, at_zero, seed):
    """For every point of the box some value of the two fresh symbols gives
    the exact product."""
    n, m = 2, 2
    fi, fj = _form(ci, n, m), _form(cj, n, m)
    itvs = [Interval(min(a, b), max(a, b)) for a, b in ends]
    box = NoiseBox(n, m, {1: itvs[0], 2: itvs[1]}, {1: itvs[2], 2: itvs[3]})
    f, box2 = mul_forms(fi, fj, box, at_zero)
    e_new, h_new = eps(n + 1), eta(m + 1)
    slack = abs(f.coef(e_new)) + abs(f.coef(h_new))
    rng = random.Random(seed)
    for _ in range(30):
        c = {i: rng.choice([itvs[i - 1].lo, itvs[i - 1].hi, itvs[i - 1].mid]) for i in (1, 2)}
        p = {j: rng.choice([itvs[j + 1].lo, itvs[j + 1].hi, itvs[j + 1].mid]) for j in (1, 2)}
        exact = fi.evaluate(c, p) * fj.evaluate(c, p)
        lin = f.evaluate({**c, n + 1: 0}, {**p, m + 1: 0})
        assert abs(exact - lin) <= slack


def test_eval_expr_scales_by_constants_without_products():
    X = ConstrainedAffineSet(["x"], [X_FORM], NoiseBox(1, 0))
    f, Y = eval_expr(X, Mul(Const(F(3)), Var("x")))
    assert f == X_FORM.scale(3) and Y.n == 1
    f, Y = eval_expr(X, DivConst(Var("x"), F(10)))
    assert f == AffineForm(F(1, 2), {1: F(1, 2)})
    f, Y = eval_expr(X, Add(Mul(Var("x"), Var("x")), Const(F(1))))
    assert Y.n == 2 and Y.m == 1


def test_set_level_assignments():
    X = ConstrainedAffineSet((), (), NoiseBox())
    X = assign_interval(X, "x", F(0), F(10))
    X = assign_affine(X, "y", F(1), [(F(2), "x")])
    assert X.form("y") == AffineForm(F(11), {1: F(10)})
    X = assign_div(X, "z", "x", F(5))
    assert X.form("z") == AffineForm(F(1), {1: F(1)})
    X = assign_mul(X, "w", "x", "x")
    assert X.n == 2 and X.m == 1
    X = assign_expr(X, "v", "x")
    assert X.form("v") == X_FORM
    with pytest.raises(ZeroDivisionError):
        assign_div(X, "z", "x", 0)

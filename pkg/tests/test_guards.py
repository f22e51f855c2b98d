import itertools
import random
from fractions import Fraction as F

import pytest

from czono import guards
from czono.affine import AffineForm, ConstrainedAffineSet, gamma_form, sample_eval
from czono.noise import Interval, NoiseBox, eps, eta
from czono.syntax import Add, Const, Mul, Var


def example1():
    return ConstrainedAffineSet(
        ["x1", "x2"],
        [AffineForm(F(4), {1: F(1), 2: F(1)}, {1: F(1)}), AffineForm(F(0), {1: F(-1), 2: F(3)})],
        NoiseBox(2, 1))


def example2():
    return ConstrainedAffineSet(
        ["x1", "x2", "x3"],
        [AffineForm(F(2), {1: F(1)}), AffineForm(F(2), {2: F(1)}, {1: F(1)}),
         AffineForm(F(0), {1: F(-1), 2: F(3)})],
        NoiseBox(2, 1))


PHI_Z = NoiseBox(2, 1, {1: Interval(F(-1), F(-1, 2)), 2: Interval(F(1, 2), F(1))},
                 {1: Interval(F(-1), F(0))})
MERGED = AffineForm(F(2), {2: F(2)}, {1: F(1, 2)})


def test_minimizer_on_the_equality_example():
    prob = guards.MinimizeAbsSumProblem([(F(-1), F(2), F(1, 2)), (F(3), F(-2), F(1, 2)),
                                         (F(0), F(1), F(1))])
    theta, value, k = guards.minimize_abs_sum(prob)
    assert theta == F(1, 2) and value == F(3, 2) and k == 0


def test_minimizer_ties_pick_the_lowest_term():
    # |t| + |t - 1| is flat on [0, 1]
    theta, value, k = guards.minimize_abs_sum(
        guards.MinimizeAbsSumProblem([(F(0), F(1), F(1)), (F(-1), F(1), F(1))]))
    assert (theta, value, k) == (0, 1, 0)


def test_minimizer_without_theta():
    assert guards.minimize_abs_sum(guards.MinimizeAbsSumProblem([(F(2), F(0), F(1))])) == (0, 2, None)


def test_minimizer_matches_brute_force():
    rng = random.Random(5)
    for _ in range(200):
        terms = [(F(rng.randint(-9, 9)), F(rng.randint(-4, 4)), F(rng.randint(0, 4), 2))
                 for _ in range(rng.randint(1, 6))]
        theta, value, _ = guards.minimize_abs_sum(guards.MinimizeAbsSumProblem(terms))
        obj = lambda t: sum(w * abs(a + b * t) for a, b, w in terms)
        points = [-a / b for a, b, w in terms if b] or [0]
        assert value == obj(theta) == min(obj(t) for t in points)


def test_equality_of_variables():
    Z = guards.test_eq_vars(example1(), "x1", "x2")
    assert Z.phi == PHI_Z
    assert Z.form("x1") == Z.form("x2") == MERGED
    assert gamma_form(MERGED, Z.phi) == Interval(F(5, 2), F(4))


def test_equality_of_expressions():
    Z = guards.test_eq_exprs(example2(), Add(Var("x1"), Var("x2")), Var("x3"))
    assert Z.names == ("x1", "x2", "x3")
    assert Z.phi == PHI_Z
    assert Z.form("x1") == AffineForm(F(0), {2: F(1)}, {1: F(-1, 2)})
    assert Z.form("x2") == AffineForm(F(2), {2: F(1)}, {1: F(1)})
    assert Z.form("x3") == MERGED
    got = [gamma_form(f, Z.phi) for f in Z.forms]
    assert got == [Interval(F(1, 2), F(3, 2)), Interval(F(3, 2), F(3)), Interval(F(5, 2), F(4))]
    # x1 + x2 == x3 now holds identically
    assert Z.form("x1") + Z.form("x2") == Z.form("x3")


def test_equality_is_sound_on_the_constraint_set():
    X = example2()
    Z = guards.test_eq_exprs(X, Add(Var("x1"), Var("x2")), Var("x3"))
    grid = [F(k, 8) for k in range(-8, 9)]
    for e1, e2, h1 in itertools.product(grid, grid, grid):
        vals = sample_eval(X, [e1, e2, h1])
        if vals[0] + vals[1] != vals[2]:
            continue
        for v, f in zip(vals, Z.forms):
            assert v in gamma_form(f, Z.phi)


def test_infeasible_equality_is_bottom():
    X = ConstrainedAffineSet(["x"], [AffineForm(F(5), {1: F(1)})], NoiseBox(1, 0))
    assert guards.test(X, "x", "==", F(0)).is_bottom
    assert guards.test(X, "x", "<=", F(3)).is_bottom
    assert not guards.test(X, "x", ">=", F(3)).is_bottom


def test_inequalities_only_touch_the_box():
    X = ConstrainedAffineSet(["x"], [AffineForm(F(5), {1: F(5)})], NoiseBox(1, 0))
    Z = guards.test(X, "x", "<", F(5, 2))
    assert Z.forms == X.forms
    assert Z.phi.interval(eps(1)) == Interval(F(-1), F(-1, 2))
    Z = guards.test(X, Mul(Const(F(2)), Var("x")), ">", F(15))
    assert Z.phi.interval(eps(1)) == Interval(F(1, 2), F(1))


def test_disequality_is_the_identity():
    X = example1()
    assert guards.test(X, "x1", "!=", "x2") is X


def test_trivial_variable_equality():
    X = example1()
    assert guards.test_eq_vars(X, "x1", "x1") is X
    with pytest.raises(KeyError):
        guards.test_eq_vars(X, "x1", "nope")

"""Random small instances shared by the law and soundness tests."""

import random
from fractions import Fraction as F

from czono.affine import AffineForm, ConstrainedAffineSet
from czono.noise import FULL, Interval, NoiseBox


def quarter(rng: random.Random, lo: int = -3, hi: int = 3) -> F:
    return F(rng.randint(lo * 4, hi * 4), 4)


def sub_interval(rng: random.Random) -> Interval:
    if rng.random() < 0.5:
        return Interval(F(-1), F(1))
    a, b = sorted(F(rng.randint(-4, 4), 4) for _ in range(2))
    return Interval(a, b)


def random_set(rng: random.Random, p: int, n: int, m: int,
               constrain_eta: bool = True) -> ConstrainedAffineSet:
    forms = [AffineForm(quarter(rng),
                        {i: quarter(rng) for i in range(1, n + 1) if rng.random() < 0.7},
                        {j: quarter(rng) for j in range(1, m + 1) if rng.random() < 0.6})
             for _ in range(p)]
    box = NoiseBox(n, m, {i: sub_interval(rng) for i in range(1, n + 1)},
                   {j: (sub_interval(rng) if constrain_eta else FULL) for j in range(1, m + 1)})
    return ConstrainedAffineSet([f"v{k}" for k in range(p)], forms, box)


def corners(box: NoiseBox):
    """Points of the box: every symbol at its low end, mid or high end
    (capped to keep the count small)."""
    c, p = box.dense()
    itvs = c + p
    rng = random.Random(len(itvs))
    for _ in range(64):
        yield [rng.choice((i.lo, i.mid, i.hi)) for i in itvs]

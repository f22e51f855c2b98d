"""Scalar helpers shared by the float64 and exact-rational code paths.

Every routine in the package is written against plain arithmetic operators so
that the same code runs on ``float`` and on ``fractions.Fraction``.  Rational
inputs stay exact; float results get a small outward slack wherever an
interval endpoint is produced.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import List, Union

Number = Union[int, float, Fraction]

_UNIT = 2.0 ** -52


def is_float(*values: Number) -> bool:
    return any(isinstance(v, float) for v in values)


def slack(magnitude: Number, nterms: int = 1) -> Number:
    """Absolute rounding allowance for a float sum of ``nterms`` terms.

    Returns 0 for exact inputs.
    """
    if not isinstance(magnitude, float):
        return 0
    if math.isinf(magnitude) or math.isnan(magnitude):
        return 0.0
    return abs(magnitude) * _UNIT * (nterms + 2) + 5e-324


def down(x: Number, magnitude: Number = 0, nterms: int = 1) -> Number:
    if not isinstance(x, float):
        return x
    return math.nextafter(x - slack(max(abs(x), abs(magnitude)), nterms), -math.inf)


def up(x: Number, magnitude: Number = 0, nterms: int = 1) -> Number:
    if not isinstance(x, float):
        return x
    return math.nextafter(x + slack(max(abs(x), abs(magnitude)), nterms), math.inf)


_SPLIT = 134217729.0  # 2**27 + 1


def _split(a: float):
    t = _SPLIT * a
    hi = t - (t - a)
    return hi, a - hi


def two_product(a: float, b: float):
    """``(p, e)`` with ``p = fl(a*b)`` and ``p + e == a*b`` exactly (Dekker)."""
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def directed_sum(parts: List[float], upward: bool) -> float:
    """Sum of ``parts`` rounded toward +inf (``upward``) or -inf.

    ``parts`` must be finite and small enough for :func:`two_product`'s
    split not to overflow; callers check that.
    """
    r = math.fsum(parts)
    # residual of the correctly rounded sum, exact in sign
    rest = math.fsum(parts + [-r])
    if upward and rest > 0:
        return math.nextafter(r, math.inf)
    if not upward and rest < 0:
        return math.nextafter(r, -math.inf)
    return r


def half(x: Number) -> Number:
    """``x / 2`` that keeps integers exact."""
    return Fraction(x, 2) if isinstance(x, int) else x / 2


def le(x: Number, y: Number, rel: float = 1e-12) -> bool:
    """``x <= y``, exact for rationals, with a relative tie band for floats."""
    if is_float(x, y):
        return x <= y + rel * max(1.0, abs(x), abs(y))
    return x <= y


def parse_number(text: str, precision: str = "float64") -> Number:
    if precision == "rational":
        return Fraction(text)
    return float(text)


def to_exact(x: Number) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)

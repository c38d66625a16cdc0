"""Outward-rounded interval arithmetic on top of mpmath.iv.

Every transcendental evaluation in the bound calculators goes through these
helpers so that a reported "pass" is a rigorous statement: comparisons return
True only when the intervals certify the relation.
"""

from __future__ import annotations

import os
from contextlib import contextmanager
from fractions import Fraction
from typing import Union

import mpmath
from mpmath import iv, mp

DEFAULT_PRECISION = int(os.environ.get("FFDYN_PRECISION_BITS", "256"))
# Per-number cap on exact rational numerator/denominator bit length before
# calculators fall back to interval mode.
DEFAULT_EXACT_BITS = int(os.environ.get("FFDYN_EXACT_BITS", str(1 << 20)))

Number = Union[int, float, Fraction, mpmath.mpf]


@contextmanager
def precision(bits: int):
    """Temporarily set the working precision of the interval context."""
    old_iv, old_mp = iv.prec, mp.prec
    iv.prec = bits
    mp.prec = bits + 16
    try:
        yield
    finally:
        iv.prec, mp.prec = old_iv, old_mp


def interval(x: Number):
    """Enclose x in an interval at the current precision."""
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return iv.mpf(x.numerator)
        return iv.mpf(x.numerator) / iv.mpf(x.denominator)
    return iv.mpf(x)


def endpoints(x) -> tuple[mpmath.mpf, mpmath.mpf]:
    """Lower/upper endpoints of an interval as plain mpf values."""
    with mp.workprec(iv.prec + 16):
        return mpmath.mpf(x.a), mpmath.mpf(x.b)


def upper_float(x) -> float:
    return float(endpoints(x)[1])


def lower_float(x) -> float:
    return float(endpoints(x)[0])


def mid_float(x) -> float:
    lo, hi = endpoints(x)
    return float((lo + hi) / 2)


def certainly_less(a, b) -> bool:
    """True only when the intervals prove a < b."""
    return (a < b) is True


def certainly_leq(a, b) -> bool:
    return (a <= b) is True


def possibly_leq(a, b) -> bool:
    """False only when the intervals prove a > b."""
    return (a > b) is not True


def width_float(x) -> float:
    lo, hi = endpoints(x)
    return float(hi - lo)

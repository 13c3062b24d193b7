"""Canonical ``p/q`` string form for exact rationals."""

from fractions import Fraction


def fmt(x):
    """Format an int or Fraction as a reduced ``p/q`` string (``p`` alone if integral)."""
    if x is None:
        return "undetermined"
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse(s):
    s = s.strip()
    if s == "undetermined":
        return None
    return Fraction(s)

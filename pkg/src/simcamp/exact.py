"""Exact number handling.

Times and event values are kept as :class:`fractions.Fraction` so that
durations compare exactly on the base-step grid. Floats are converted through
their shortest repr, so ``0.04`` becomes ``1/25`` rather than the binary
approximation.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational

Number = int | float | str | Fraction


def exact(value: Number) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(str(value).strip())


def fmt(value: Fraction) -> str:
    """Shortest exact decimal text for ``value``; ``p/q`` if it does not terminate."""
    value = exact(value)
    den = value.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{value.numerator}/{value.denominator}"
    digits = max(twos, fives)
    if digits == 0:
        return str(value.numerator)
    scaled = value * 10**digits
    sign = "-" if scaled < 0 else ""
    text = str(abs(scaled.numerator)).rjust(digits + 1, "0")
    return f"{sign}{text[:-digits]}.{text[-digits:]}"

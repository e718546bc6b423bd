"""Exact arithmetic in Q/Z.

All group-theoretic phases in this package (conformal weights mod 1, monodromy
charges, bicharacter values) live in Q/Z and are represented as
`fractions.Fraction` values normalized to [0, 1).  Exponentials exp(2*pi*i*r)
are formed only at output boundaries.
"""

from __future__ import annotations

import cmath
from fractions import Fraction

ZERO = Fraction(0)


def mod1(x: Fraction | int) -> Fraction:
    """Canonical representative of x in Q/Z, in [0, 1)."""
    x = Fraction(x)
    return Fraction(x.numerator % x.denominator, x.denominator)


def residue_eq(a: Fraction, b: Fraction) -> bool:
    return mod1(a - b) == 0


def unit_phase(r: Fraction) -> complex:
    """exp(2*pi*i*r) for a rational residue r."""
    return cmath.exp(2j * cmath.pi * float(mod1(r)))


def format_rational(x: Fraction) -> str:
    """Serialize a rational as the string "p/q" (always with denominator)."""
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s: str) -> Fraction:
    return Fraction(s)


def snap_to_residue(phase: float, denominator: int, max_distance: float) -> Fraction | None:
    """Snap a phase in [0,1) to the nearest p/denominator, or None if too far.

    Distance is measured circularly in phase units.
    """
    p = round(phase * denominator)
    candidate = Fraction(p % denominator, denominator)
    dist = abs(phase - p / denominator)
    dist = min(dist, abs(dist - 1.0))
    if dist > max_distance:
        return None
    return candidate

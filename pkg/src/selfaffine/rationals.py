"""Exact rational helpers shared across the package.

All externally visible quantities are `fractions.Fraction`.  Hot
verification loops may run on `gmpy2.mpq` when gmpy2 is installed; the
two types agree on every arithmetic result, so the backend is invisible
except for speed.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import isqrt

try:
    from gmpy2 import mpq as fastq
except ImportError:
    fastq = Fraction

__all__ = ["Rational", "fastq", "parse_rational", "format_rational", "sqrt_upper_bound"]

Rational = Fraction

# "p/q" with positive denominator, or a bare integer; no decimals, no floats
_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse a rational string "p/q" or "p" into a Fraction.

    Rejects decimal notation, zero denominators, and anything else that
    is not an exact integer ratio.
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    match = _RATIONAL_RE.match(str(text))
    if match is None:
        raise ValueError(f"not a rational 'p/q' or integer string: {text!r}")
    numerator = int(match.group(1))
    denominator = int(match.group(2)) if match.group(2) else 1
    if denominator == 0:
        raise ValueError(f"zero denominator: {text!r}")
    return Fraction(numerator, denominator)


def format_rational(value: Fraction) -> str:
    """Render a Fraction as "p/q" (or "p" when the denominator is 1)."""
    return str(value)


def sqrt_upper_bound(x: Fraction | int, scale: int = 10**6) -> Fraction:
    """Smallest k/scale with (k/scale)^2 > x, for x >= 0.

    A strict rational upper bound on sqrt(x), within 1/scale of the true
    root.  Strictness matters: substituting the bound into a reciprocal
    keeps derived quantities strictly below their irrational targets.
    """
    x = Fraction(x)
    if x < 0:
        raise ValueError("negative input")
    target = x * scale * scale
    k = isqrt(target.numerator // target.denominator)
    while Fraction(k * k) <= target:
        k += 1
    return Fraction(k, scale)

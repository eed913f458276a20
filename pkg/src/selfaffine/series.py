"""Truncated power series with exact rational coefficients.

A series keeps coefficients of t⁰ through t^N for a fixed truncation
order N.  Multiplication, composition, and reversion are exact on the
kept coefficients; everything beyond order N is deliberately dropped.
Multi-coordinate series represent curve germs, one coefficient row per
coordinate, all sharing the same variable and order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

__all__ = [
    "TruncatedSeries",
    "series_multiply",
    "series_compose",
    "series_reverse",
]


@dataclass(frozen=True)
class TruncatedSeries:
    """Coefficient rows (one per coordinate) of a series truncated at order."""

    order: int
    coords: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        if self.order < 1:
            raise ValueError("truncation order must be at least 1")
        coords = tuple(tuple(Fraction(c) for c in row) for row in self.coords)
        if not coords:
            raise ValueError("a series needs at least one coordinate")
        if any(len(row) != self.order + 1 for row in coords):
            raise ValueError("every coordinate needs order + 1 coefficients")
        object.__setattr__(self, "coords", coords)

    @property
    def dim(self) -> int:
        return len(self.coords)

    @classmethod
    def from_coefficients(cls, coefficients: Sequence, order: int | None = None) -> "TruncatedSeries":
        """One-dimensional series from a coefficient list (c₀, c₁, …)."""
        row = [Fraction(c) for c in coefficients]
        if order is None:
            order = len(row) - 1
        if len(row) > order + 1:
            raise ValueError("more coefficients than the order admits")
        row.extend([Fraction(0)] * (order + 1 - len(row)))
        return cls(order, (tuple(row),))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], order: int | None = None) -> "TruncatedSeries":
        """Vector-valued series from per-coordinate coefficient lists."""
        if not rows:
            raise ValueError("need at least one coordinate row")
        if order is None:
            order = max(len(row) for row in rows) - 1
        padded = []
        for row in rows:
            entries = [Fraction(c) for c in row]
            if len(entries) > order + 1:
                raise ValueError("more coefficients than the order admits")
            entries.extend([Fraction(0)] * (order + 1 - len(entries)))
            padded.append(tuple(entries))
        return cls(order, tuple(padded))

    @classmethod
    def identity(cls, order: int) -> "TruncatedSeries":
        """The series t."""
        return cls.from_coefficients([0, 1], order)

    def coordinate(self, index: int) -> "TruncatedSeries":
        return TruncatedSeries(self.order, (self.coords[index],))

    def coefficients(self) -> tuple[Fraction, ...]:
        if self.dim != 1:
            raise ValueError("coefficients() expects a one-dimensional series")
        return self.coords[0]

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise ValueError("cannot extend a truncated series")
        return TruncatedSeries(order, tuple(row[: order + 1] for row in self.coords))


def _require_1d(series: TruncatedSeries, name: str) -> tuple[Fraction, ...]:
    if series.dim != 1:
        raise ValueError(f"{name} expects one-dimensional series")
    return series.coords[0]


def _mul(a: Sequence[Fraction], b: Sequence[Fraction], order: int) -> list[Fraction]:
    out = [Fraction(0)] * (order + 1)
    for i, ai in enumerate(a[: order + 1]):
        if ai == 0:
            continue
        top = order - i
        for j, bj in enumerate(b[: top + 1]):
            if bj != 0:
                out[i + j] += ai * bj
    return out


def _compose(outer: Sequence[Fraction], inner: Sequence[Fraction], order: int) -> list[Fraction]:
    # Horner over series; inner must have zero constant term.
    result = [Fraction(0)] * (order + 1)
    result[0] = outer[order] if order < len(outer) else Fraction(0)
    for k in range(order - 1, -1, -1):
        result = _mul(result, inner, order)
        result[0] += outer[k]
    return result


def series_multiply(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product truncated at the shared order."""
    left = _require_1d(a, "series_multiply")
    right = _require_1d(b, "series_multiply")
    if a.order != b.order:
        raise ValueError("series orders differ")
    return TruncatedSeries(a.order, (tuple(_mul(left, right, a.order)),))


def series_compose(outer: TruncatedSeries, inner: TruncatedSeries) -> TruncatedSeries:
    """outer∘inner truncated at the shared order; inner(0) must be 0."""
    out = _require_1d(outer, "series_compose")
    inn = _require_1d(inner, "series_compose")
    if outer.order != inner.order:
        raise ValueError("series orders differ")
    if inn[0] != 0:
        raise ValueError("inner series must have zero constant term")
    return TruncatedSeries(outer.order, (tuple(_compose(out, inn, outer.order)),))


def series_reverse(series: TruncatedSeries) -> TruncatedSeries:
    """Compositional inverse: compose(series, result) = t up to the order.

    Coefficients are solved one order at a time; at step m the residual
    of the composition determines the next coefficient through the
    (nonzero) linear coefficient of the input.
    """
    coeffs = _require_1d(series, "series_reverse")
    if coeffs[0] != 0:
        raise ValueError("series must vanish at 0 to be reversed")
    if coeffs[1] == 0:
        raise ValueError("series needs a nonzero linear coefficient to be reversed")
    order = series.order
    result = [Fraction(0)] * (order + 1)
    result[1] = 1 / coeffs[1]
    for m in range(2, order + 1):
        # result is correct below order m and has zero coefficient at m;
        # the composition residual at order m is linear in result[m].
        residual = _compose(coeffs, result, m)[m]
        result[m] = -residual / coeffs[1]
    return TruncatedSeries(order, (tuple(result),))

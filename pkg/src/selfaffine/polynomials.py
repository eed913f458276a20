"""Sparse exact multivariate polynomials and affine scaling factors.

A polynomial is a map from exponent multi-indices to nonzero rational
coefficients.  The central notion is a scaling factor: an affine map f
with P∘f = C·P for a single rational constant C.  Detection demands
exact proportionality; there is no tolerance anywhere in this module.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Mapping, Optional, Sequence

from .affine import AffineMap, compose, fixed_point, is_contractive
from .exactlinalg import determinant
from .rationals import format_rational, parse_rational

__all__ = [
    "MultiPoly",
    "ScalingCertificate",
    "FixedPointReport",
    "WordCheck",
    "evaluate",
    "compose_affine",
    "scaling_constant",
    "scaling_certificate",
    "is_self_affine_pair",
    "verify_fixed_points_on_surface",
    "parse_polynomial",
    "format_polynomial",
]

_WORD_CAP = 10_000_000


class MultiPoly:
    """Immutable sparse polynomial in dim variables over the rationals."""

    __slots__ = ("_dim", "_terms")

    def __init__(self, dim: int, terms: Mapping[tuple[int, ...], object]):
        if dim < 1:
            raise ValueError("polynomial dimension must be positive")
        cleaned: dict[tuple[int, ...], Fraction] = {}
        for exponent, coefficient in terms.items():
            key = tuple(exponent)
            if len(key) != dim:
                raise ValueError("exponent multi-index length must equal dim")
            if any(not isinstance(e, int) or e < 0 for e in key):
                raise ValueError("exponents must be non-negative integers")
            value = Fraction(coefficient)
            if value != 0:
                cleaned[key] = value
        self._dim = dim
        self._terms = cleaned

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def terms(self) -> Mapping[tuple[int, ...], Fraction]:
        return MappingProxyType(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degree(self) -> int:
        """Total degree; the zero polynomial reports -1."""
        if not self._terms:
            return -1
        return max(sum(exponent) for exponent in self._terms)

    @classmethod
    def zero(cls, dim: int) -> "MultiPoly":
        return cls(dim, {})

    @classmethod
    def constant(cls, dim: int, value) -> "MultiPoly":
        return cls(dim, {(0,) * dim: Fraction(value)})

    @classmethod
    def variable(cls, dim: int, index: int) -> "MultiPoly":
        if not 0 <= index < dim:
            raise ValueError("variable index out of range")
        exponent = tuple(1 if i == index else 0 for i in range(dim))
        return cls(dim, {exponent: Fraction(1)})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self._dim == other._dim and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self._dim, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        return f"MultiPoly({self._dim}, {format_polynomial(self)!r})"

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            return NotImplemented
        if self._dim != other._dim:
            raise ValueError("polynomial dimensions differ")
        merged = dict(self._terms)
        for exponent, coefficient in other._terms.items():
            merged[exponent] = merged.get(exponent, Fraction(0)) + coefficient
        return MultiPoly(self._dim, merged)

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self._dim, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, MultiPoly):
            if self._dim != other._dim:
                raise ValueError("polynomial dimensions differ")
            product: dict[tuple[int, ...], Fraction] = {}
            for ea, ca in self._terms.items():
                for eb, cb in other._terms.items():
                    key = tuple(a + b for a, b in zip(ea, eb))
                    product[key] = product.get(key, Fraction(0)) + ca * cb
            return MultiPoly(self._dim, product)
        return MultiPoly(self._dim, {e: c * Fraction(other) for e, c in self._terms.items()})

    def __rmul__(self, other):
        return self.__mul__(other)


def evaluate(poly: MultiPoly, point: Sequence) -> Fraction:
    x = tuple(Fraction(v) for v in point)
    if len(x) != poly.dim:
        raise ValueError("point dimension does not match the polynomial")
    total = Fraction(0)
    for exponent, coefficient in poly.terms.items():
        value = coefficient
        for base, power in zip(x, exponent):
            if power:
                value *= base**power
        total += value
    return total


def compose_affine(poly: MultiPoly, f: AffineMap) -> MultiPoly:
    """The exact expansion of x ↦ poly(f(x))."""
    if poly.dim != f.dim:
        raise ValueError("polynomial and map dimensions differ")
    n = poly.dim
    forms = []
    for i in range(n):
        terms: dict[tuple[int, ...], Fraction] = {}
        for j in range(n):
            if f.matrix[i][j] != 0:
                key = tuple(1 if k == j else 0 for k in range(n))
                terms[key] = f.matrix[i][j]
        if f.translation[i] != 0:
            terms[(0,) * n] = f.translation[i]
        forms.append(MultiPoly(n, terms))
    needed = [0] * n
    for exponent in poly.terms:
        for i, e in enumerate(exponent):
            needed[i] = max(needed[i], e)
    powers = []
    for i in range(n):
        ladder = [MultiPoly.constant(n, 1)]
        for _ in range(needed[i]):
            ladder.append(ladder[-1] * forms[i])
        powers.append(ladder)
    result = MultiPoly.zero(n)
    for exponent, coefficient in poly.terms.items():
        term = MultiPoly.constant(n, coefficient)
        for i, e in enumerate(exponent):
            if e:
                term = term * powers[i][e]
        result = result + term
    return result


def scaling_constant(poly: MultiPoly, f: AffineMap) -> Optional[Fraction]:
    """The C with poly∘f = C·poly when one exists, else None.

    The candidate is read off one term and then the whole identity is
    re-checked, so a returned constant is an exact certificate.
    """
    if poly.is_zero:
        raise ValueError("the zero polynomial admits every constant")
    composed = compose_affine(poly, f)
    exponent, coefficient = next(iter(poly.terms.items()))
    candidate = composed.terms.get(exponent, Fraction(0)) / coefficient
    if composed == candidate * poly:
        return candidate
    return None


@dataclass(frozen=True)
class ScalingCertificate:
    """A contractive invertible map f with poly∘f = constant·poly.

    fixed_point_value records poly at the fixed point of f; with two
    such maps at distinct fixed points this value is forced to zero.
    """

    map: AffineMap
    constant: Fraction
    fixed_point_value: Fraction


def scaling_certificate(poly: MultiPoly, f: AffineMap) -> Optional[ScalingCertificate]:
    """Build the certificate for a contractive invertible scaling factor.

    Rejects constant polynomials and non-contractive or singular maps;
    returns None when f is simply not a scaling factor for poly.
    """
    if poly.degree < 1:
        raise ValueError("polynomial must be non-constant")
    if determinant(f.matrix) == 0:
        raise ValueError("map must be invertible")
    if not is_contractive(f):
        raise ValueError("map must be strictly contractive")
    constant = scaling_constant(poly, f)
    if constant is None:
        return None
    if not abs(constant) < 1:
        raise ArithmeticError("contractive scaling factor with |C| >= 1")
    value = evaluate(poly, fixed_point(f))
    return ScalingCertificate(f, constant, value)


def is_self_affine_pair(poly: MultiPoly, f: AffineMap, g: AffineMap) -> bool:
    """True when f and g are scaling factors for poly with distinct fixed points."""
    for candidate in (f, g):
        if determinant(candidate.matrix) == 0:
            raise ValueError("maps must be invertible")
        if not is_contractive(candidate):
            raise ValueError("maps must be strictly contractive")
    if scaling_constant(poly, f) is None or scaling_constant(poly, g) is None:
        return False
    return fixed_point(f) != fixed_point(g)


@dataclass(frozen=True)
class WordCheck:
    word: tuple[int, ...]
    constant: Fraction
    fixed_point_value: Fraction


@dataclass(frozen=True)
class FixedPointReport:
    words_checked: int
    checks: tuple[WordCheck, ...]
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_fixed_points_on_surface(
    poly: MultiPoly, maps: Sequence[AffineMap], depth: int
) -> FixedPointReport:
    """Check that fixed points of all composition words lie on the zero set.

    Enumerates every word of length 1..depth over the given maps
    (breadth-first, no deduplication), verifies the composite is still a
    scaling factor with |C| < 1, and that the polynomial vanishes at its
    fixed point, all in exact arithmetic.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    if not maps:
        raise ValueError("at least one map is required")
    for index, f in enumerate(maps):
        if scaling_constant(poly, f) is None:
            raise ValueError(f"map {index} is not a scaling factor for the polynomial")
        if not is_contractive(f):
            raise ValueError(f"map {index} is not strictly contractive")
    total = sum(len(maps) ** k for k in range(1, depth + 1))
    if total > _WORD_CAP:
        raise ValueError(f"word tree has {total} nodes, above the cap {_WORD_CAP}")
    checks: list[WordCheck] = []
    violations: list[str] = []
    frontier = [((i,), f) for i, f in enumerate(maps)]
    for level in range(1, depth + 1):
        for word, composite in frontier:
            constant = scaling_constant(poly, composite)
            if constant is None:
                violations.append(f"word {word}: composite is not a scaling factor")
                continue
            if not abs(constant) < 1:
                violations.append(f"word {word}: |C| = {abs(constant)} is not below 1")
            value = evaluate(poly, fixed_point(composite))
            checks.append(WordCheck(word, constant, value))
            if value != 0:
                violations.append(f"word {word}: fixed point is off the zero set, P = {value}")
        if level < depth:
            frontier = [
                (word + (i,), compose(composite, maps[i]))
                for word, composite in frontier
                for i in range(len(maps))
            ]
    return FixedPointReport(len(checks), tuple(checks), tuple(violations))


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<number>\d+\s*/\s*\d+|\d+)|(?P<variable>x\d+)|(?P<op>[-+*^]))\s*"
)


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None or match.end() == pos:
            raise ValueError(f"unexpected character {text[pos]!r} in polynomial")
        if match.lastgroup is not None:
            tokens.append((match.lastgroup, match.group(match.lastgroup)))
        pos = match.end()
    return tokens


def parse_polynomial(text: str, dim: Optional[int] = None) -> MultiPoly:
    """Parse "coef * x1^a1 * ... + ..." with rational coefficients.

    Whitespace is ignored, '*' between factors is optional, and terms
    may carry leading signs.  Negative exponents are rejected.
    """
    tokens = _tokenize(text)
    if not tokens:
        raise ValueError("empty polynomial text")
    raw_terms: list[tuple[Fraction, dict[int, int]]] = []
    pos = 0
    sign = Fraction(1)
    if tokens[pos][0] == "op" and tokens[pos][1] in "+-":
        sign = Fraction(-1) if tokens[pos][1] == "-" else Fraction(1)
        pos += 1
    while True:
        coefficient = sign
        exponents: dict[int, int] = {}
        saw_factor = False
        while pos < len(tokens):
            kind, value = tokens[pos]
            if kind == "number":
                coefficient *= parse_rational(value)
                pos += 1
                saw_factor = True
            elif kind == "variable":
                index = int(value[1:]) - 1
                if index < 0:
                    raise ValueError("variable indices start at x1")
                pos += 1
                power = 1
                if pos < len(tokens) and tokens[pos] == ("op", "^"):
                    pos += 1
                    if pos < len(tokens) and tokens[pos] == ("op", "-"):
                        raise ValueError("negative exponents are not allowed")
                    if pos >= len(tokens) or tokens[pos][0] != "number":
                        raise ValueError("expected an exponent after '^'")
                    if "/" in tokens[pos][1]:
                        raise ValueError("exponents must be integers")
                    power = int(tokens[pos][1])
                    pos += 1
                exponents[index] = exponents.get(index, 0) + power
                saw_factor = True
            elif kind == "op" and value == "*":
                if not saw_factor:
                    raise ValueError("'*' without a preceding factor")
                pos += 1
                if pos >= len(tokens) or tokens[pos][0] not in ("number", "variable"):
                    raise ValueError("'*' without a following factor")
            else:
                break
        if not saw_factor:
            raise ValueError("empty term in polynomial text")
        raw_terms.append((coefficient, exponents))
        if pos >= len(tokens):
            break
        kind, value = tokens[pos]
        if kind != "op" or value not in "+-":
            raise ValueError(f"expected '+' or '-' between terms, found {value!r}")
        sign = Fraction(-1) if value == "-" else Fraction(1)
        pos += 1
        if pos >= len(tokens):
            raise ValueError("dangling sign at end of polynomial text")
    greatest = max((max(exps, default=-1) for _, exps in raw_terms), default=-1)
    if dim is None:
        dim = max(greatest + 1, 1)
    elif greatest + 1 > dim:
        raise ValueError(f"variable x{greatest + 1} exceeds dimension {dim}")
    terms: dict[tuple[int, ...], Fraction] = {}
    for coefficient, exponents in raw_terms:
        key = tuple(exponents.get(i, 0) for i in range(dim))
        terms[key] = terms.get(key, Fraction(0)) + coefficient
    return MultiPoly(dim, terms)


def format_polynomial(poly: MultiPoly) -> str:
    """Canonical text form; parse_polynomial round-trips it."""
    if poly.is_zero:
        return "0"
    ordered = sorted(poly.terms.items(), key=lambda kv: (-sum(kv[0]), kv[0]))
    pieces: list[str] = []
    for exponent, coefficient in ordered:
        factors = [format_rational(abs(coefficient))]
        for i, e in enumerate(exponent):
            if e == 1:
                factors.append(f"x{i + 1}")
            elif e > 1:
                factors.append(f"x{i + 1}^{e}")
        body = " * ".join(factors)
        if not pieces:
            pieces.append(body if coefficient > 0 else f"-{body}")
        else:
            pieces.append(f"+ {body}" if coefficient > 0 else f"- {body}")
    return " ".join(pieces)

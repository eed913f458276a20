"""Self-affine systems whose attractor is an arc of the moment curve.

The curve is η(t) = (t, t², …, tⁿ).  For a small enough contraction
ratio λ and anchors t_i tiling [c, d], the lower-triangular maps built
here satisfy f_i(η(t)) = η(λ(t−c) + t_i) exactly, so the arc η([c, d])
is the attractor of the system.  Every identity in this module is
checked in exact rational arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .affine import (
    AffineMap,
    IteratedFunctionSystem,
    ifs_from_jsonable,
    ifs_to_jsonable,
)
from .exactlinalg import mat_vec
from .rationals import fastq, format_rational, parse_rational, sqrt_upper_bound

__all__ = [
    "MomentCurveSpec",
    "MomentIfsRecipe",
    "InvarianceCounterexample",
    "InvarianceReport",
    "eval_moment",
    "lambda_bound",
    "choose_anchors",
    "build_moment_ifs",
    "verify_moment_invariance",
    "moment_homothety",
    "recipe_to_jsonable",
    "recipe_from_jsonable",
]


@dataclass(frozen=True)
class MomentCurveSpec:
    """The arc η([c, d]) in dimension dim."""

    dim: int
    c: Fraction
    d: Fraction

    def __post_init__(self) -> None:
        if self.dim < 2:
            raise ValueError("moment-curve dimension must be at least 2")
        object.__setattr__(self, "c", Fraction(self.c))
        object.__setattr__(self, "d", Fraction(self.d))
        if not self.c < self.d:
            raise ValueError("interval must satisfy c < d")


def eval_moment(n: int, t) -> tuple[Fraction, ...]:
    """η(t) = (t, t², …, tⁿ) exactly."""
    if n < 1:
        raise ValueError("dimension must be at least 1")
    value = Fraction(t)
    powers = []
    current = Fraction(1)
    for _ in range(n):
        current *= value
        powers.append(current)
    return tuple(powers)


def lambda_bound(spec: MomentCurveSpec) -> Fraction:
    """An exact admissible ceiling for the contraction ratio.

    The true ceiling is (2ⁿ√n·max{(2|c|+1)ⁿ, (|c|+|d|+1)ⁿ})⁻¹; the
    square root is replaced by a strictly larger rational, so every
    λ ≤ the returned value sits strictly below the true ceiling.
    """
    n = spec.dim
    root = sqrt_upper_bound(Fraction(n))
    scale = max((2 * abs(spec.c) + 1) ** n, (abs(spec.c) + abs(spec.d) + 1) ** n)
    return 1 / (Fraction(2) ** n * root * scale)


def choose_anchors(spec: MomentCurveSpec, ratio: Fraction) -> list[Fraction]:
    """A uniform anchor grid whose interval images tile [c, d] exactly.

    Uses ℓ = ⌈1/λ⌉ anchors; consecutive images of [c, d] under
    x ↦ λ(x−c) + t_i then overlap or abut, with no gaps.
    """
    ratio = Fraction(ratio)
    if not 0 < ratio <= lambda_bound(spec):
        raise ValueError("ratio must lie in (0, lambda_bound]")
    count = math.ceil(1 / ratio)
    step = (spec.d - spec.c) * (1 - ratio) / (count - 1)
    return [spec.c + i * step for i in range(count)]


@dataclass(frozen=True)
class MomentIfsRecipe:
    """A verified construction: spec, ratio λ, anchors, and the maps."""

    spec: MomentCurveSpec
    ratio: Fraction
    anchors: tuple[Fraction, ...]
    ifs: IteratedFunctionSystem

    def __post_init__(self) -> None:
        object.__setattr__(self, "ratio", Fraction(self.ratio))
        object.__setattr__(self, "anchors", tuple(Fraction(t) for t in self.anchors))
        if not 0 < self.ratio < 1:
            raise ValueError("contraction ratio must lie in (0, 1)")
        c, d = self.spec.c, self.spec.d
        if any(not c <= t <= d for t in self.anchors):
            raise ValueError("every anchor must lie in [c, d]")
        if len(self.anchors) != len(self.ifs.maps):
            raise ValueError("one anchor per map is required")
        if self.ifs.dim != self.spec.dim:
            raise ValueError("system dimension must match the curve dimension")
        width = self.ratio * (d - c)
        ordered = sorted(self.anchors)
        if ordered[0] != c or ordered[-1] + width != d:
            raise ValueError("interval images must reach both endpoints of [c, d]")
        for left, right in zip(ordered, ordered[1:]):
            if right > left + width:
                raise ValueError("interval images leave a gap inside [c, d]")


def build_moment_ifs(
    spec: MomentCurveSpec, ratio: Fraction, anchors: Sequence[Fraction]
) -> MomentIfsRecipe:
    """Construct the lower-triangular system for the arc η([c, d]).

    Row k of T_i holds λᵏ·binom(k, j)·(t_i/λ − c)^(k−j) in column j;
    the translation is −T_i·η(c − t_i/λ).  Each map then satisfies
    f_i(η(t)) = η(λ(t−c) + t_i) identically.
    """
    ratio = Fraction(ratio)
    if not 0 < ratio <= lambda_bound(spec):
        raise ValueError("ratio must lie in (0, lambda_bound]")
    anchors = tuple(Fraction(t) for t in anchors)
    if any(not spec.c <= t <= spec.d for t in anchors):
        raise ValueError("every anchor must lie in [c, d]")
    n = spec.dim
    maps = []
    for anchor in anchors:
        shift = anchor / ratio - spec.c
        rows = []
        ratio_power = Fraction(1)
        for k in range(1, n + 1):
            ratio_power *= ratio
            row = [
                ratio_power * math.comb(k, j) * shift ** (k - j) if j <= k else Fraction(0)
                for j in range(1, n + 1)
            ]
            rows.append(tuple(row))
        matrix = tuple(rows)
        base = eval_moment(n, spec.c - anchor / ratio)
        translation = tuple(-x for x in mat_vec(matrix, base))
        maps.append(AffineMap(matrix, translation))
    ifs = IteratedFunctionSystem(tuple(maps))
    return MomentIfsRecipe(spec, ratio, anchors, ifs)


@dataclass(frozen=True)
class InvarianceCounterexample:
    map_index: int
    sample: Fraction
    image: tuple[Fraction, ...]
    expected: tuple[Fraction, ...]


@dataclass(frozen=True)
class InvarianceReport:
    checks: int
    counterexamples: tuple[InvarianceCounterexample, ...]

    @property
    def ok(self) -> bool:
        return not self.counterexamples


def _as_fraction(value) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


def verify_moment_invariance(
    recipe: MomentIfsRecipe, samples: Sequence[Fraction]
) -> InvarianceReport:
    """Check f_i(η(t)) = η(λ(t−c) + t_i) for every map and sample.

    Every comparison is exact; violations are collected in the report
    rather than raised.  Runs on the fast rational backend when gmpy2
    is available, with identical results either way.
    """
    spec = recipe.spec
    n = spec.dim
    sample_values = [Fraction(t) for t in samples]
    if any(not spec.c <= t <= spec.d for t in sample_values):
        raise ValueError("samples must lie in [c, d]")
    lam = fastq(recipe.ratio)
    c = fastq(spec.c)
    points = [fastq(t) for t in sample_values]
    curve_points = []
    for t in points:
        powers = []
        current = t
        for _ in range(n):
            powers.append(current)
            current *= t
        curve_points.append(powers)
    checks = 0
    counterexamples = []
    for index, (anchor, f) in enumerate(zip(recipe.anchors, recipe.ifs.maps)):
        t_i = fastq(anchor)
        matrix = [[fastq(x) for x in row] for row in f.matrix]
        translation = [fastq(x) for x in f.translation]
        for t, eta_t in zip(points, curve_points):
            shifted = lam * (t - c) + t_i
            checks += 1
            image = []
            expected = []
            current = fastq(1)
            matches = True
            for k in range(n):
                current *= shifted
                # lower-triangular matrix: columns above k are zero
                value = translation[k]
                row = matrix[k]
                for j in range(k + 1):
                    value += row[j] * eta_t[j]
                image.append(value)
                expected.append(current)
                if value != current:
                    matches = False
            if not matches:
                counterexamples.append(
                    InvarianceCounterexample(
                        index,
                        _as_fraction(t),
                        tuple(_as_fraction(v) for v in image),
                        tuple(_as_fraction(v) for v in expected),
                    )
                )
    return InvarianceReport(checks, tuple(counterexamples))


def moment_homothety(n: int, s: Fraction, a: Fraction) -> AffineMap:
    """The affine map carrying η(t) to η(s·(t−a)) for every t.

    Expanding (s(t−a))ᵏ = Σ_j binom(k, j)·sᵏ·(−a)^(k−j)·tʲ gives the
    matrix; the j = 0 terms form the translation.
    """
    if n < 1:
        raise ValueError("dimension must be at least 1")
    s = Fraction(s)
    a = Fraction(a)
    if s == 0:
        raise ValueError("homothety scale must be nonzero")
    rows = []
    translation = []
    for k in range(1, n + 1):
        s_power = s**k
        rows.append(
            tuple(
                s_power * math.comb(k, j) * (-a) ** (k - j) if j <= k else Fraction(0)
                for j in range(1, n + 1)
            )
        )
        translation.append(s_power * (-a) ** k)
    return AffineMap(tuple(rows), tuple(translation))


def recipe_to_jsonable(recipe: MomentIfsRecipe) -> dict:
    """IFS interchange dict extended with a construction-describing meta."""
    data = ifs_to_jsonable(recipe.ifs)
    data["meta"] = {
        "n": recipe.spec.dim,
        "c": format_rational(recipe.spec.c),
        "d": format_rational(recipe.spec.d),
        "lambda": format_rational(recipe.ratio),
        "anchors": [format_rational(t) for t in recipe.anchors],
    }
    return data


def recipe_from_jsonable(data) -> MomentIfsRecipe:
    """Parse a recipe and re-derive the maps to confirm the stored ones."""
    ifs = ifs_from_jsonable(data)
    meta = data.get("meta")
    if not isinstance(meta, dict):
        raise ValueError('recipe document needs a "meta" object')
    n = meta.get("n")
    if not isinstance(n, int) or isinstance(n, bool):
        raise ValueError('meta "n" must be an integer')
    try:
        c = parse_rational(str(meta["c"]))
        d = parse_rational(str(meta["d"]))
        ratio = parse_rational(str(meta["lambda"]))
        anchors = [parse_rational(str(t)) for t in meta["anchors"]]
    except KeyError as exc:
        raise ValueError(f"meta is missing {exc.args[0]!r}") from None
    rebuilt = build_moment_ifs(MomentCurveSpec(n, c, d), ratio, anchors)
    if rebuilt.ifs != ifs:
        raise ValueError("stored maps do not match the recorded construction")
    return rebuilt

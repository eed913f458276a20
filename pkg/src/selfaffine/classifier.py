"""Classify curve germs against the moment curve via affine self-maps.

Input: an analytic curve germ as a truncated rational series, a matrix
M mapping the curve into itself near a fixed point, and a basis J whose
first column is the tangent there.  The pipeline normalizes the germ,
rewrites it as a graph over its first coordinate, extracts the leading
exponent of every graph coordinate, checks the diagonal conjugation
identity x_k*(λ·x₁*) = λ_k·x_k*(x₁*), and finally decides whether the
exponent profile admits the recentering onto the full moment curve.
Four verdicts are possible; everything is exact up to the truncation
order, which is the single visible approximation boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .exactlinalg import Matrix, as_matrix, as_vector, express_in_span, mat_inverse, mat_vec
from .rationals import format_rational, parse_rational
from .series import TruncatedSeries, _compose, series_reverse

__all__ = [
    "DEFAULT_ORDER",
    "VERDICT_MOMENT",
    "VERDICT_GAP",
    "VERDICT_CONJUGATION",
    "VERDICT_HYPERPLANE",
    "HyperplaneDegeneracyError",
    "InsufficientOrderError",
    "GraphForm",
    "ConjugationReport",
    "RecenterResult",
    "ClassificationResult",
    "normalize_at_fixed_point",
    "tangent_eigenvalue",
    "graph_form",
    "check_conjugation",
    "solve_recenter",
    "classify_curve",
    "germ_to_jsonable",
    "germ_from_jsonable",
]

DEFAULT_ORDER = 16

VERDICT_MOMENT = "affine image of moment curve, p_k = k"
VERDICT_GAP = "p-curve with exponent gap (not moment)"
VERDICT_CONJUGATION = "conjugation fails (no diagonal model to order N)"
VERDICT_HYPERPLANE = "hyperplane degenerate"


class HyperplaneDegeneracyError(ValueError):
    """A graph coordinate vanishes identically to the truncation order."""


class InsufficientOrderError(ValueError):
    """The truncation order is too small to trust the extracted exponents."""


def normalize_at_fixed_point(
    curve: TruncatedSeries, j_matrix: Sequence[Sequence], value_at_t0: Sequence
) -> TruncatedSeries:
    """Apply γ̃ = J⁻¹(γ − γ(t₀)) coefficient-wise.

    The result has zero constant term; when J's first column is the
    tangent γ′(t₀), its first-order coefficient vector is (1, 0, …, 0).
    """
    matrix = as_matrix(j_matrix)
    inverse = mat_inverse(matrix)
    value = as_vector(value_at_t0)
    n = curve.dim
    if len(matrix) != n or len(value) != n:
        raise ValueError("matrix and value dimensions must match the curve")
    for i in range(n):
        if curve.coords[i][0] != value[i]:
            raise ValueError("constant coefficients must equal the value at the base point")
    shifted = [list(row) for row in curve.coords]
    for i in range(n):
        shifted[i][0] = Fraction(0)
    rows = tuple(
        tuple(
            sum(inverse[i][j] * shifted[j][k] for j in range(n))
            for k in range(curve.order + 1)
        )
        for i in range(n)
    )
    return TruncatedSeries(curve.order, rows)


def tangent_eigenvalue(matrix: Sequence[Sequence], tangent: Sequence) -> Optional[Fraction]:
    """The λ with M·tangent = λ·tangent, or None when not an eigenvector."""
    m = as_matrix(matrix)
    v = as_vector(tangent)
    if all(x == 0 for x in v):
        raise ValueError("tangent vector must be nonzero")
    image = mat_vec(m, v)
    pivot = next(i for i, x in enumerate(v) if x != 0)
    candidate = image[pivot] / v[pivot]
    if all(image[i] == candidate * v[i] for i in range(len(v))):
        return candidate
    return None


@dataclass(frozen=True)
class GraphForm:
    """Graph coordinates x_k*(x₁*) with leading exponents and coefficients.

    Coordinates are sorted by leading exponent; coordinate_order records
    the original 0-based index of each sorted coordinate.
    """

    order: int
    exponents: tuple[int, ...]
    leading: tuple[Fraction, ...]
    series: tuple[tuple[Fraction, ...], ...]
    coordinate_order: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(p < 2 for p in self.exponents):
            raise ValueError("graph exponents must be at least 2")
        if any(a >= b for a, b in zip(self.exponents, self.exponents[1:])):
            raise ValueError("graph exponents must be strictly increasing")
        if any(c == 0 for c in self.leading):
            raise ValueError("leading coefficients must be nonzero")
        for row in self.series:
            if len(row) != self.order + 1:
                raise ValueError("series rows must carry order + 1 coefficients")
            if row[0] != 0 or row[1] != 0:
                raise ValueError("graph coordinates must vanish to second order at 0")


def graph_form(normalized: TruncatedSeries) -> GraphForm:
    """Reparametrize a normalized germ as a graph over its first coordinate.

    Requires zero constant term and first-order vector (1, 0, …, 0).
    Raises HyperplaneDegeneracyError when a coordinate is identically
    zero to the truncation order, and InsufficientOrderError when a
    leading exponent p exceeds order − 2.
    """
    n = normalized.dim
    if n < 2:
        raise ValueError("graph form needs at least two coordinates")
    order = normalized.order
    if any(row[0] != 0 for row in normalized.coords):
        raise ValueError("normalized germ must vanish at the base point")
    first_order = tuple(row[1] for row in normalized.coords)
    if first_order != (Fraction(1),) + (Fraction(0),) * (n - 1):
        raise ValueError("normalized germ must have first-order vector (1, 0, …, 0)")
    parameter = series_reverse(normalized.coordinate(0))
    inner = parameter.coefficients()
    extracted = []
    for k in range(1, n):
        row = tuple(_compose(normalized.coords[k], inner, order))
        exponent = next((i for i in range(1, order + 1) if row[i] != 0), None)
        if exponent is None:
            raise HyperplaneDegeneracyError(
                f"coordinate {k + 1} vanishes to order {order}; "
                "the curve lies in a hyperplane to this order"
            )
        extracted.append((exponent, row[exponent], row, k))
    extracted.sort(key=lambda item: item[0])
    exponents = tuple(item[0] for item in extracted)
    if len(set(exponents)) != len(exponents):
        raise ValueError(
            "two coordinates share a leading exponent; "
            "the germ is outside the simple graph-normalizable class"
        )
    if exponents[-1] > order - 2:
        raise InsufficientOrderError(
            f"leading exponent {exponents[-1]} requires order at least "
            f"{exponents[-1] + 2}; have {order}"
        )
    return GraphForm(
        order,
        exponents,
        tuple(item[1] for item in extracted),
        tuple(item[2] for item in extracted),
        tuple(item[3] for item in extracted),
    )


@dataclass(frozen=True)
class ConjugationReport:
    """Outcome of the conjugation identity check.

    mode "diagonal" verifies x_k*(λ₁·x₁*) = λ_k·x_k*(x₁*) together with
    λ_k = λ₁^{p_k} and exact monomiality of the graph; mode "matrix"
    verifies the general identity A·ξ(u) = ξ(Y(u)) with Y the first
    coordinate of A·ξ(u).
    """

    passed: bool
    mode: str
    mismatches: tuple[str, ...]
    eigenvalue_relation: Optional[bool] = None
    monomial: Optional[bool] = None


def _check_diagonal(gf: GraphForm, diagonal: Sequence[Fraction]) -> ConjugationReport:
    values = [Fraction(x) for x in diagonal]
    n = len(gf.exponents) + 1
    if len(values) != n:
        raise ValueError(f"expected {n} diagonal entries, got {len(values)}")
    lam = values[0]
    if lam == 0:
        raise ValueError("λ₁ must be nonzero")
    mismatches: list[str] = []
    eigen_ok = True
    monomial_ok = True
    lam_powers = [Fraction(1)]
    for _ in range(gf.order):
        lam_powers.append(lam_powers[-1] * lam)
    for position, (p, c, row) in enumerate(zip(gf.exponents, gf.leading, gf.series)):
        k = position + 2
        scale = values[position + 1]
        for degree in range(gf.order + 1):
            left = row[degree] * lam_powers[degree]
            right = scale * row[degree]
            if left != right:
                mismatches.append(
                    f"coordinate {k}: identity fails first at degree {degree} "
                    f"({left} vs {right})"
                )
                break
        if scale != lam_powers[p]:
            eigen_ok = False
            mismatches.append(
                f"coordinate {k}: λ_k = {scale} differs from λ₁^{p} = {lam_powers[p]}"
            )
        for degree in range(gf.order + 1):
            expected = c if degree == p else Fraction(0)
            if row[degree] != expected:
                monomial_ok = False
                mismatches.append(
                    f"coordinate {k}: not monomial, extra term at degree {degree}"
                )
                break
    identity_ok = not any("identity fails" in note for note in mismatches)
    passed = identity_ok and eigen_ok and monomial_ok
    return ConjugationReport(passed, "diagonal", tuple(mismatches), eigen_ok, monomial_ok)


def _check_matrix(gf: GraphForm, matrix: Matrix) -> ConjugationReport:
    n = len(gf.exponents) + 1
    m = as_matrix(matrix)
    if len(m) != n:
        raise ValueError(f"expected a {n}×{n} matrix")
    order = gf.order
    xi: list[tuple[Fraction, ...]] = [
        tuple(Fraction(1) if i == 1 else Fraction(0) for i in range(order + 1))
    ]
    xi.extend(gf.series)
    images = [
        tuple(
            sum(m[i][j] * xi[j][k] for j in range(n)) for k in range(order + 1)
        )
        for i in range(n)
    ]
    inner = images[0]
    if inner[0] != 0:
        raise ValueError("transformed first coordinate must vanish at 0")
    mismatches: list[str] = []
    for position in range(1, n):
        composed = _compose(xi[position], inner, order)
        for degree in range(order + 1):
            if images[position][degree] != composed[degree]:
                mismatches.append(
                    f"coordinate {position + 1}: identity fails first at degree "
                    f"{degree} ({images[position][degree]} vs {composed[degree]})"
                )
                break
    return ConjugationReport(not mismatches, "matrix", tuple(mismatches))


def check_conjugation(
    gf: GraphForm, scaling: Union[Sequence[Fraction], Sequence[Sequence]]
) -> ConjugationReport:
    """Verify the conjugation identity to the truncation order.

    Pass a flat sequence of rationals for the diagonal model λ₁, …, λ_n,
    or a full square matrix to test a non-diagonal candidate; the
    diagonal route additionally asserts λ_k = λ₁^{p_k} and that each
    graph coordinate is exactly the monomial c_k·(x₁*)^{p_k}.
    """
    entries = list(scaling)
    if entries and isinstance(entries[0], (list, tuple)):
        return _check_matrix(gf, as_matrix(entries))
    return _check_diagonal(gf, entries)


@dataclass(frozen=True)
class RecenterResult:
    """Feasibility of expressing (t−t1)^{p_k} over span{t^{p_j} − t1^{p_j}}.

    Feasible runs carry the exact coefficient matrix (row k gives
    (t−t1)^{p_k} = Σ_j matrix[k][j]·(t^{p_j} − t1^{p_j})); infeasible
    runs carry the first failing exponent index and the smallest
    monomial degree missing from the profile.
    """

    feasible: bool
    exponents: tuple[int, ...]
    quotient: tuple[int, ...]
    matrix: Optional[tuple[tuple[Fraction, ...], ...]]
    witness_index: Optional[int] = None
    witness_degree: Optional[int] = None

    @property
    def witness(self) -> Optional[str]:
        if self.feasible:
            return None
        return f"missing monomial t^{self.witness_degree}"


def solve_recenter(exponents: Sequence[int], t1: Fraction) -> RecenterResult:
    """Decide the recentering system for an exponent profile.

    The profile must start at 1 and increase strictly.  Feasibility of
    every row is equivalent to the profile being (1, 2, …, n); the
    degree filter fixes the free inner degree d at 1, so the quotient
    exponents equal the profile itself.
    """
    profile = tuple(int(p) for p in exponents)
    if not profile or profile[0] != 1:
        raise ValueError("exponent profile must start at 1")
    if any(a >= b for a, b in zip(profile, profile[1:])):
        raise ValueError("exponent profile must be strictly increasing")
    t1 = Fraction(t1)
    if t1 == 0:
        raise ValueError("t1 must be nonzero")
    top = profile[-1]
    span = []
    for p in profile:
        vector = [Fraction(0)] * (top + 1)
        vector[p] = Fraction(1)
        vector[0] = -(t1**p)
        span.append(vector)
    degrees = set(profile)
    rows = []
    for index, p in enumerate(profile, start=1):
        target = [Fraction(0)] * (top + 1)
        for m in range(p + 1):
            target[m] = math.comb(p, m) * (-t1) ** (p - m)
        coefficients = express_in_span(span, target)
        if coefficients is None:
            missing = next(m for m in range(1, p + 1) if m not in degrees)
            return RecenterResult(False, profile, profile, None, index, missing)
        rows.append(tuple(coefficients))
    return RecenterResult(True, profile, profile, tuple(rows))


@dataclass(frozen=True)
class ClassificationResult:
    verdict: str
    eigenvalue: Optional[Fraction]
    exponents: Optional[tuple[int, ...]]
    conjugation: Optional[ConjugationReport]
    recenter: Optional[RecenterResult]
    stages: tuple[str, ...]


def classify_curve(
    curve: TruncatedSeries,
    m_matrix: Sequence[Sequence],
    j_matrix: Sequence[Sequence],
    t1: Fraction,
) -> ClassificationResult:
    """Full pipeline: normalize, graph, conjugation check, recentering.

    The first column of J must be an eigenvector of M with rational
    eigenvalue λ, 0 < |λ| < 1, and t1 must be nonzero.
    """
    t1 = Fraction(t1)
    if t1 == 0:
        raise ValueError("t1 must be nonzero")
    m = as_matrix(m_matrix)
    j = as_matrix(j_matrix)
    tangent = tuple(row[0] for row in j)
    lam = tangent_eigenvalue(m, tangent)
    if lam is None:
        raise ValueError("the first column of J must be an eigenvector of M")
    if not 0 < abs(lam) < 1:
        raise ValueError(f"tangent eigenvalue must satisfy 0 < |λ| < 1, got {lam}")
    stages = [f"[tangent-eigenvalue] M fixes the tangent direction with λ = {lam}"]
    value = tuple(row[0] for row in curve.coords)
    normalized = normalize_at_fixed_point(curve, j, value)
    stages.append("[normalize] germ recentered, tangent aligned with the first axis")
    try:
        gf = graph_form(normalized)
    except HyperplaneDegeneracyError as exc:
        stages.append(f"[graph-form] {exc}")
        return ClassificationResult(VERDICT_HYPERPLANE, lam, None, None, None, tuple(stages))
    profile = (1,) + gf.exponents
    stages.append(f"[graph-form] exponent profile p = {profile}")
    diagonal = [lam] + [lam**p for p in gf.exponents]
    report = check_conjugation(gf, diagonal)
    if not report.passed:
        stages.append("[diagonal-conjugation] identity fails: " + "; ".join(report.mismatches))
        return ClassificationResult(
            VERDICT_CONJUGATION, lam, profile, report, None, tuple(stages)
        )
    stages.append(
        "[diagonal-conjugation] identity holds to the truncation order; "
        "λ_k = λ^{p_k}; graph coordinates are exact monomials"
    )
    recenter = solve_recenter(profile, t1)
    if recenter.feasible:
        stages.append("[recenter-span] every binomial power lies in the span; p_k = k")
        verdict = VERDICT_MOMENT
    else:
        stages.append(
            f"[recenter-span] infeasible at exponent index {recenter.witness_index}: "
            f"{recenter.witness}"
        )
        verdict = VERDICT_GAP
    return ClassificationResult(verdict, lam, profile, report, recenter, tuple(stages))


def germ_to_jsonable(curve: TruncatedSeries, t0: Fraction) -> dict:
    return {
        "t0": format_rational(Fraction(t0)),
        "order": curve.order,
        "coords": [[format_rational(c) for c in row] for row in curve.coords],
    }


def germ_from_jsonable(data) -> tuple[TruncatedSeries, Fraction]:
    """Parse {"t0": "p/q", "order": N, "coords": [[…], …]}."""
    if not isinstance(data, dict):
        raise ValueError("germ document must be a JSON object")
    try:
        t0 = parse_rational(str(data["t0"]))
    except KeyError:
        raise ValueError('germ document needs a "t0" field') from None
    order = data.get("order")
    if not isinstance(order, int) or isinstance(order, bool) or order < 1:
        raise ValueError('"order" must be a positive integer')
    coords = data.get("coords")
    if not isinstance(coords, list) or not coords:
        raise ValueError('"coords" must be a nonempty array')
    rows = []
    for index, row in enumerate(coords):
        if not isinstance(row, list) or len(row) != order + 1:
            raise ValueError(f"coordinate {index + 1} needs exactly order + 1 coefficients")
        parsed = []
        for j, entry in enumerate(row):
            if isinstance(entry, bool) or isinstance(entry, float):
                raise ValueError(f"coordinate {index + 1}, entry {j}: rationals only")
            if isinstance(entry, int):
                parsed.append(Fraction(entry))
            else:
                parsed.append(parse_rational(str(entry)))
        rows.append(tuple(parsed))
    return TruncatedSeries(order, tuple(rows)), t0

"""Exact affine maps, their algebra, and contraction certificates.

An affine map is f(x) = Mx + a with rational M and a.  Composition,
inversion, fixed points, and iteration are all exact; floating point
enters only through the spectral-norm estimate, and contraction can
always be certified by an exact row-sum bound instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .exactlinalg import (
    Matrix,
    Vector,
    as_matrix,
    as_vector,
    determinant,
    identity,
    mat_inverse,
    mat_mul,
    mat_vec,
    solve,
)
from .rationals import format_rational, parse_rational

__all__ = [
    "NORM_TOLERANCE",
    "AffineMap",
    "ContractionCertificate",
    "IteratedFunctionSystem",
    "identity_map",
    "compose",
    "invert",
    "fixed_point",
    "iterate",
    "operator_norm",
    "max_row_sum",
    "is_contractive",
    "ifs_to_jsonable",
    "ifs_from_jsonable",
    "map_from_jsonable",
    "map_to_jsonable",
    "matrix_from_jsonable",
]

NORM_TOLERANCE = 1e-12
_POWER_TOLERANCE = 1e-14
_POWER_CAP = 10_000


@dataclass(frozen=True)
class AffineMap:
    """f(x) = matrix·x + translation with exact rational entries."""

    matrix: Matrix
    translation: Vector

    def __post_init__(self) -> None:
        matrix = as_matrix(self.matrix)
        translation = as_vector(self.translation)
        n = len(matrix)
        if n == 0 or any(len(row) != n for row in matrix):
            raise ValueError("matrix must be square and nonempty")
        if len(translation) != n:
            raise ValueError("translation length must match the matrix side")
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "translation", translation)

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def apply(self, point: Sequence) -> Vector:
        x = as_vector(point)
        if len(x) != self.dim:
            raise ValueError("point dimension does not match the map")
        image = mat_vec(self.matrix, x)
        return tuple(m + t for m, t in zip(image, self.translation))

    def __call__(self, point: Sequence) -> Vector:
        return self.apply(point)


def identity_map(dim: int) -> AffineMap:
    if dim < 1:
        raise ValueError("dimension must be positive")
    return AffineMap(identity(dim), (Fraction(0),) * dim)


def compose(f: AffineMap, g: AffineMap) -> AffineMap:
    """The map x ↦ f(g(x))."""
    if f.dim != g.dim:
        raise ValueError("cannot compose maps of different dimensions")
    matrix = mat_mul(f.matrix, g.matrix)
    translation = tuple(
        m + t for m, t in zip(mat_vec(f.matrix, g.translation), f.translation)
    )
    return AffineMap(matrix, translation)


def invert(f: AffineMap) -> AffineMap:
    inverse = mat_inverse(f.matrix)
    translation = tuple(-x for x in mat_vec(inverse, f.translation))
    return AffineMap(inverse, translation)


def fixed_point(f: AffineMap) -> Vector:
    """The unique x with f(x) = x, solved exactly from (I − M)x = a."""
    n = f.dim
    eye = identity(n)
    system = tuple(
        tuple(eye[i][j] - f.matrix[i][j] for j in range(n)) for i in range(n)
    )
    try:
        return solve(system, f.translation)
    except ValueError:
        raise ValueError("map has 1 as an eigenvalue; fixed point is not unique") from None


def iterate(f: AffineMap, point: Sequence, count: int) -> Vector:
    if count < 0:
        raise ValueError("iteration count must be nonnegative")
    x = as_vector(point)
    for _ in range(count):
        x = f.apply(x)
    return x


def max_row_sum(matrix: Matrix) -> Fraction:
    """Largest row sum of absolute entries, an exact rational."""
    return max(sum(abs(x) for x in row) for row in matrix)


def _rayleigh_limit(gram: list[list[float]], start: list[float]) -> Optional[float]:
    """Power iteration on a symmetric PSD matrix; None when it stalls."""
    n = len(gram)
    norm = math.sqrt(sum(x * x for x in start))
    v = [x / norm for x in start]
    previous: Optional[float] = None
    for _ in range(_POWER_CAP):
        w = [sum(gram[i][j] * v[j] for j in range(n)) for i in range(n)]
        rayleigh = sum(v[i] * w[i] for i in range(n))
        wnorm = math.sqrt(sum(x * x for x in w))
        if wnorm == 0.0:
            return 0.0
        v = [x / wnorm for x in w]
        if previous is not None and abs(rayleigh - previous) <= _POWER_TOLERANCE * max(
            abs(rayleigh), 1.0
        ):
            return rayleigh
        previous = rayleigh
    return None


def operator_norm(matrix: Sequence[Sequence]) -> float:
    """Spectral norm (largest singular value) of an exact matrix.

    Power iteration on MᵀM from two deterministic start vectors; if both
    runs stall, or land provably below the top eigenvalue, the exact
    row-sum upper bound is returned instead.
    """
    mat = as_matrix(matrix)
    n = len(mat)
    if any(len(row) != n for row in mat):
        raise ValueError("matrix is not square")
    if n == 0:
        return 0.0
    rows = [[float(x) for x in row] for row in mat]
    gram = [
        [sum(rows[k][i] * rows[k][j] for k in range(n)) for j in range(n)]
        for i in range(n)
    ]
    if all(x == 0.0 for row in gram for x in row):
        return 0.0
    starts = (
        [1.0] * n,
        [(-1.0) ** i * (i + 1.0) for i in range(n)],
    )
    best: Optional[float] = None
    for start in starts:
        value = _rayleigh_limit(gram, start)
        if value is not None and (best is None or value > best):
            best = value
    # The top eigenvalue of a PSD matrix is at least the mean of the trace.
    trace_floor = sum(gram[i][i] for i in range(n)) / n
    if best is None or best < trace_floor * (1.0 - 1e-9):
        return math.sqrt(n * float(max_row_sum(mat)) ** 2)
    return math.sqrt(best)


@dataclass(frozen=True)
class ContractionCertificate:
    """Outcome of a contraction test, recording which route decided it.

    route is "row-sum-bound" when the exact inequality
    n·(max row sum)² < 1 certified contraction, else "spectral-norm".
    """

    contractive: bool
    route: str
    norm_bound: float
    row_sum_squared: Optional[Fraction] = None

    def __bool__(self) -> bool:
        return self.contractive


def is_contractive(f: AffineMap) -> ContractionCertificate:
    """Certified contraction test: exact row-sum route first, then numeric."""
    n = f.dim
    row_sum = max_row_sum(f.matrix)
    squared = n * row_sum * row_sum
    if squared < 1:
        return ContractionCertificate(
            True, "row-sum-bound", math.sqrt(float(squared)), squared
        )
    norm = operator_norm(f.matrix)
    return ContractionCertificate(norm < 1.0 - NORM_TOLERANCE, "spectral-norm", norm)


@dataclass(frozen=True)
class IteratedFunctionSystem:
    """A nonempty family of invertible, strictly contractive affine maps."""

    maps: tuple[AffineMap, ...]

    def __post_init__(self) -> None:
        maps = tuple(self.maps)
        if not maps:
            raise ValueError("an iterated function system needs at least one map")
        dim = maps[0].dim
        for index, current in enumerate(maps):
            if current.dim != dim:
                raise ValueError(f"map {index} has dimension {current.dim}, expected {dim}")
            if determinant(current.matrix) == 0:
                raise ValueError(f"map {index} is not invertible")
            if not is_contractive(current):
                raise ValueError(f"map {index} is not strictly contractive")
        object.__setattr__(self, "maps", maps)

    @property
    def dim(self) -> int:
        return self.maps[0].dim

    def __len__(self) -> int:
        return len(self.maps)

    def __iter__(self) -> Iterator[AffineMap]:
        return iter(self.maps)

    def __getitem__(self, index: int) -> AffineMap:
        return self.maps[index]


def ifs_to_jsonable(ifs: IteratedFunctionSystem) -> dict:
    """Plain-dict form of an IFS, with every entry a rational string."""
    return {
        "dim": ifs.dim,
        "maps": [
            {
                "matrix": [[format_rational(x) for x in row] for row in m.matrix],
                "translation": [format_rational(x) for x in m.translation],
            }
            for m in ifs.maps
        ],
    }


def _parse_entry(value, where: str) -> Fraction:
    if isinstance(value, bool):
        raise ValueError(f"{where}: booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return parse_rational(value)
        except ValueError as exc:
            raise ValueError(f"{where}: {exc}") from None
    raise ValueError(f"{where}: entries must be rational strings or integers")


def matrix_from_jsonable(rows, where: str = "matrix") -> Matrix:
    """Parse a square array of rational strings (or integers)."""
    if not isinstance(rows, list) or not rows:
        raise ValueError(f"{where} must be a nonempty array of rows")
    n = len(rows)
    parsed = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise ValueError(f"{where} must be square; row {i} has the wrong length")
        parsed.append(
            tuple(_parse_entry(x, f"{where}[{i}][{j}]") for j, x in enumerate(row))
        )
    return tuple(parsed)


def map_from_jsonable(entry, dim: Optional[int] = None, where: str = "map") -> AffineMap:
    """Parse {"matrix": …, "translation": …} with rational-string entries."""
    if not isinstance(entry, dict):
        raise ValueError(f"{where} must be an object")
    matrix = matrix_from_jsonable(entry.get("matrix"), f"{where} matrix")
    if dim is not None and len(matrix) != dim:
        raise ValueError(f"{where}: matrix must have {dim} rows")
    translation_field = entry.get("translation")
    if not isinstance(translation_field, list) or len(translation_field) != len(matrix):
        raise ValueError(f"{where}: translation must have {len(matrix)} entries")
    translation = tuple(
        _parse_entry(x, f"{where}, translation[{j}]")
        for j, x in enumerate(translation_field)
    )
    return AffineMap(matrix, translation)


def map_to_jsonable(f: AffineMap) -> dict:
    return {
        "matrix": [[format_rational(x) for x in row] for row in f.matrix],
        "translation": [format_rational(x) for x in f.translation],
    }


def ifs_from_jsonable(data) -> IteratedFunctionSystem:
    """Parse and validate the dict form produced by ifs_to_jsonable."""
    if not isinstance(data, dict):
        raise ValueError("IFS document must be a JSON object")
    dim = data.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise ValueError('"dim" must be a positive integer')
    entries = data.get("maps")
    if not isinstance(entries, list) or not entries:
        raise ValueError('"maps" must be a nonempty array')
    maps = [
        map_from_jsonable(entry, dim, where=f"map {index}")
        for index, entry in enumerate(entries)
    ]
    return IteratedFunctionSystem(tuple(maps))

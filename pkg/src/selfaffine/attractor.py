"""Numerical attractor sampling and set-distance diagnostics.

Attractors are sampled in floating point, either by the random chaos
game (PCG64 generator, so a seed fully determines the cloud) or by
deterministic enumeration of all composition words to a fixed depth.
Distances are exact scans; the nearest-neighbour structure used for
one_sided_hausdorff accelerates the scan without changing the result.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial import cKDTree
from scipy.spatial.distance import cdist

from .affine import IteratedFunctionSystem, fixed_point
from .cloud import PointCloud

__all__ = ["chaos_game", "hutchinson_iterate", "diameter", "one_sided_hausdorff"]

_EXACT_DIAMETER_LIMIT = 10_000
_WORD_GUARD = 10_000_000


def chaos_game(
    ifs: IteratedFunctionSystem, iterations: int, burn_in: int, seed: int
) -> PointCloud:
    """Sample the attractor by iterating uniformly random maps.

    Starts at the fixed point of the first map, applies `iterations`
    random maps, and discards the first `burn_in` images.  The same
    seed always yields the same cloud.
    """
    if burn_in < 0:
        raise ValueError("burn_in must be nonnegative")
    if iterations <= burn_in:
        raise ValueError("iterations must exceed burn_in")
    rng = np.random.Generator(np.random.PCG64(seed))
    count = len(ifs.maps)
    matrices = [np.array([[float(x) for x in row] for row in m.matrix]) for m in ifs.maps]
    translations = [np.array([float(x) for x in m.translation]) for m in ifs.maps]
    choices = rng.integers(0, count, size=iterations)
    x = np.array([float(v) for v in fixed_point(ifs.maps[0])])
    kept = np.empty((iterations - burn_in, ifs.dim))
    for step, index in enumerate(choices):
        x = matrices[index] @ x + translations[index]
        if step >= burn_in:
            kept[step - burn_in] = x
    return PointCloud(ifs.dim, kept)


def hutchinson_iterate(ifs: IteratedFunctionSystem, depth: int) -> PointCloud:
    """Enumerate f_w(x₀) over every word w of the given length.

    x₀ is the fixed point of the first map; the cloud has exactly
    ℓ^depth points.  Depths with ℓ^depth above 10⁷ are rejected.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    count = len(ifs.maps)
    total = count**depth
    if total > _WORD_GUARD:
        raise ValueError(f"word count {total} exceeds the guard {_WORD_GUARD}")
    points = np.array([[float(v) for v in fixed_point(ifs.maps[0])]])
    matrices = [np.array([[float(x) for x in row] for row in m.matrix]) for m in ifs.maps]
    translations = [np.array([float(x) for x in m.translation]) for m in ifs.maps]
    for _ in range(depth):
        points = np.vstack([points @ m.T + t for m, t in zip(matrices, translations)])
    return PointCloud(ifs.dim, points)


def diameter(cloud: PointCloud) -> float:
    """Largest pairwise distance in the cloud.

    Exact pairwise scan up to 10⁴ points; beyond that the bounding-box
    diagonal is returned, an upper bound exceeding the true diameter by
    at most a factor of √dim.
    """
    if len(cloud) == 0:
        raise ValueError("diameter of an empty cloud is undefined")
    points = cloud.points
    if len(cloud) <= _EXACT_DIAMETER_LIMIT:
        worst = 0.0
        block = 512
        for start in range(0, len(points), block):
            chunk = cdist(points[start : start + block], points)
            worst = max(worst, float(chunk.max()))
        return worst
    extents = points.max(axis=0) - points.min(axis=0)
    return float(np.sqrt(np.sum(extents**2)))


def one_sided_hausdorff(source: PointCloud, target: PointCloud) -> float:
    """sup over source points of the distance to the nearest target point.

    Uses an exact nearest-neighbour tree; the result equals the brute
    nested scan.
    """
    if source.dim != target.dim:
        raise ValueError("clouds must share a dimension")
    if len(source) == 0 or len(target) == 0:
        raise ValueError("clouds must be nonempty")
    tree = cKDTree(target.points)
    distances, _ = tree.query(source.points, k=1)
    return float(np.max(distances))

"""Float point clouds: the numerical face of attractor computations.

Everything exact lives elsewhere; a cloud is plain double-precision
data plus CSV and SVG output.  CSV carries 17 significant digits so
clouds round-trip bit-for-bit through text.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Optional, Sequence, TextIO, Union

import numpy as np

__all__ = ["PointCloud", "write_csv", "read_csv", "write_svg"]

PathOrFile = Union[str, "io.TextIOBase", TextIO]


@dataclass(frozen=True)
class PointCloud:
    """An ordered list of dim-dimensional float points."""

    dim: int
    points: np.ndarray

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValueError("cloud dimension must be positive")
        array = np.array(self.points, dtype=float, copy=True)
        if array.size == 0:
            array = array.reshape(0, self.dim)
        if array.ndim != 2 or array.shape[1] != self.dim:
            raise ValueError("points must form an (count, dim) array")
        array.flags.writeable = False
        object.__setattr__(self, "points", array)

    def __len__(self) -> int:
        return int(self.points.shape[0])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PointCloud):
            return NotImplemented
        return self.dim == other.dim and np.array_equal(self.points, other.points)


def _open_for_write(target: PathOrFile):
    if isinstance(target, str):
        return open(target, "w", encoding="utf-8"), True
    return target, False


def write_csv(cloud: PointCloud, target: PathOrFile) -> None:
    """One point per line, comma-separated, 17 significant digits, no header."""
    handle, owned = _open_for_write(target)
    try:
        for row in cloud.points:
            handle.write(",".join(f"{x:.17g}" for x in row) + "\n")
    finally:
        if owned:
            handle.close()


def read_csv(source: PathOrFile, dim: Optional[int] = None) -> PointCloud:
    if isinstance(source, str):
        with open(source, "r", encoding="utf-8") as handle:
            text = handle.read()
    else:
        text = source.read()
    rows = []
    for line_number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        try:
            row = [float(field) for field in stripped.split(",")]
        except ValueError:
            raise ValueError(f"line {line_number}: not a comma-separated float row") from None
        rows.append(row)
    if not rows:
        raise ValueError("cloud file contains no points")
    widths = {len(row) for row in rows}
    if len(widths) != 1:
        raise ValueError("rows have inconsistent dimensions")
    width = widths.pop()
    if dim is not None and dim != width:
        raise ValueError(f"expected dimension {dim}, file has {width}")
    return PointCloud(width, np.array(rows, dtype=float))


def write_svg(
    cloud: PointCloud,
    target: PathOrFile,
    projection: tuple[int, int] = (0, 1),
    size: int = 800,
    radius: float = 1.0,
) -> None:
    """Flat scatter plot of a 2-D coordinate projection of the cloud.

    projection picks the two 0-based coordinate indices drawn as x and
    y; the y axis points up.  Output is self-contained SVG.
    """
    i, j = projection
    if not (0 <= i < cloud.dim and 0 <= j < cloud.dim):
        raise ValueError("projection indices out of range")
    if i == j:
        raise ValueError("projection indices must differ")
    if len(cloud) == 0:
        raise ValueError("cannot render an empty cloud")
    xs = cloud.points[:, i]
    ys = cloud.points[:, j]
    margin = size * 0.05
    span = size - 2 * margin
    x_min, x_max = float(xs.min()), float(xs.max())
    y_min, y_max = float(ys.min()), float(ys.max())
    x_extent = x_max - x_min or 1.0
    y_extent = y_max - y_min or 1.0
    scale = span / max(x_extent, y_extent)
    handle, owned = _open_for_write(target)
    try:
        handle.write(
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
            f'viewBox="0 0 {size} {size}">\n'
        )
        handle.write(f'<rect width="{size}" height="{size}" fill="white"/>\n')
        for x, y in zip(xs, ys):
            px = margin + (x - x_min) * scale
            py = size - margin - (y - y_min) * scale
            handle.write(f'<circle cx="{px:.3f}" cy="{py:.3f}" r="{radius}" fill="black"/>\n')
        handle.write("</svg>\n")
    finally:
        if owned:
            handle.close()

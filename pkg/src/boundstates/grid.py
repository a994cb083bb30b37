"""Uniform symmetric grids, sampled functions, and trapezoid quadrature."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import GridMismatchError


@dataclass(frozen=True)
class Grid:
    """Uniform mesh on [-half_width, +half_width] with an odd point count.

    The odd count guarantees a node exactly at x = 0, which serves both as
    the default normalization point and as the axis for parity splitting.
    """

    half_width: float
    n_points: int
    spacing: float
    points: np.ndarray

    @property
    def mid_index(self) -> int:
        """Index of the node at x = 0."""
        return (self.n_points - 1) // 2

    def compatible(self, other: "Grid") -> bool:
        return self is other or (
            self.n_points == other.n_points and self.half_width == other.half_width
        )

    def node_index(self, x: float) -> int:
        """Index of the node at coordinate ``x``; raises if x is off-grid."""
        i = int(round((x + self.half_width) / self.spacing))
        if (
            i < 0
            or i >= self.n_points
            or abs(self.points[i] - x) > 1e-9 * max(1.0, self.half_width)
        ):
            raise ValueError(f"x={x!r} is not a node of this grid")
        return i

    def weights(self) -> np.ndarray:
        """Trapezoid quadrature weights for this grid."""
        w = np.full(self.n_points, self.spacing)
        w[0] = w[-1] = 0.5 * self.spacing
        return w


def make_grid(half_width: float, n_points: int) -> Grid:
    """Build a symmetric uniform grid with ``n_points`` nodes on [-L, L].

    ``n_points`` must be odd so that x = 0 is a node.
    """
    if not half_width > 0:
        raise ValueError(f"half_width must be positive, got {half_width!r}")
    n_points = int(n_points)
    if n_points < 3 or n_points % 2 == 0:
        raise ValueError(f"n_points must be an odd integer >= 3, got {n_points}")
    spacing = 2.0 * half_width / (n_points - 1)
    mid = (n_points - 1) // 2
    # (k - mid) * spacing keeps the mesh exactly antisymmetric in floating point.
    points = (np.arange(n_points) - mid) * spacing
    points.setflags(write=False)
    return Grid(
        half_width=float(half_width),
        n_points=n_points,
        spacing=spacing,
        points=points,
    )


@dataclass
class SampledFunction:
    """Real values sampled on a :class:`Grid`."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.grid.n_points,):
            raise ValueError(
                f"expected {self.grid.n_points} values, got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("sampled values must be finite")
        self.values = values

    @classmethod
    def from_callable(
        cls, grid: Grid, fn: Callable[[np.ndarray], np.ndarray]
    ) -> "SampledFunction":
        return cls(grid, np.asarray(fn(grid.points), dtype=float))


def integrate(f: SampledFunction) -> float:
    """Trapezoid-rule integral of ``f`` over its grid; exact for affine data."""
    v = f.values
    return float(f.grid.spacing * (v.sum() - 0.5 * (v[0] + v[-1])))


def inner_product(f: SampledFunction, g: SampledFunction) -> float:
    """Trapezoid approximation of the L2 pairing of ``f`` and ``g``."""
    if not f.grid.compatible(g.grid):
        raise GridMismatchError("inner_product requires both functions on one grid")
    p = f.values * g.values
    return float(f.grid.spacing * (p.sum() - 0.5 * (p[0] + p[-1])))

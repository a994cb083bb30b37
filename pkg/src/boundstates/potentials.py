"""Catalog of attractive well shapes V(x) >= 0 and their samplers.

The attraction is carried by an explicit minus sign and coupling strength
in the eigenvalue problem, so all shapes here are nonnegative and decay
(or vanish) away from the origin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .grid import Grid, SampledFunction

KINDS = ("gaussian", "poschl_teller", "square_well", "table")


@dataclass(frozen=True)
class PotentialSpec:
    """One attractive well shape.

    kind      one of ``gaussian``, ``poschl_teller``, ``square_well``, ``table``
    a         half-width of the square well (square_well only)
    values    explicit samples (table only); must match the target grid length
    """

    kind: str
    a: float | None = None
    values: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown potential kind {self.kind!r}")
        if self.kind == "square_well":
            if self.a is None or not self.a > 0:
                raise ValueError("square_well requires a positive half-width a")
        elif self.a is not None:
            raise ValueError(f"{self.kind} takes no half-width parameter")
        if self.kind == "table":
            if self.values is None:
                raise ValueError("table requires explicit values")
            vals = np.asarray(self.values, dtype=float)
            if not np.all(np.isfinite(vals)) or np.any(vals < 0):
                raise ValueError("table values must be finite and nonnegative")
        elif self.values is not None:
            raise ValueError(f"{self.kind} takes no explicit values")

    @classmethod
    def gaussian(cls) -> "PotentialSpec":
        return cls("gaussian")

    @classmethod
    def poschl_teller(cls) -> "PotentialSpec":
        return cls("poschl_teller")

    @classmethod
    def square_well(cls, a: float) -> "PotentialSpec":
        return cls("square_well", a=float(a))

    @classmethod
    def table(cls, values) -> "PotentialSpec":
        return cls("table", values=tuple(float(v) for v in values))


def _square_well_mask(x: np.ndarray, a: float) -> np.ndarray:
    # Closed-interval test; the tiny slack keeps a node that lands exactly on
    # the edge inside the well regardless of rounding in the mesh coordinates.
    return np.abs(x) <= a + 1e-12 * max(1.0, a)


def sample_potential(spec: PotentialSpec, grid: Grid) -> SampledFunction:
    """Pointwise samples of the potential on ``grid``."""
    x = grid.points
    if spec.kind == "gaussian":
        vals = np.exp(-0.5 * x * x)
    elif spec.kind == "poschl_teller":
        vals = 1.0 / np.cosh(x) ** 2
    elif spec.kind == "square_well":
        vals = np.where(_square_well_mask(x, spec.a), 1.0, 0.0)
    else:  # table
        vals = np.asarray(spec.values, dtype=float)
        if vals.shape != (grid.n_points,):
            raise ValueError(
                f"table has {vals.shape[0]} values but grid has {grid.n_points} points"
            )
    return SampledFunction(grid, vals)


def potential_function(spec: PotentialSpec) -> Callable[[float], float]:
    """Scalar evaluator V(x) for off-grid use (shooting integrator)."""
    if spec.kind == "gaussian":
        return lambda x: math.exp(-0.5 * x * x)
    if spec.kind == "poschl_teller":
        return lambda x: 1.0 / math.cosh(x) ** 2
    if spec.kind == "square_well":
        a = spec.a
        return lambda x: 1.0 if abs(x) <= a else 0.0
    raise ValueError("table potentials have no off-grid evaluator")


def potential_pieces(
    spec: PotentialSpec, half_width: float
) -> list[tuple[float, float, Callable[[float], float]]]:
    """Smooth pieces of V on [0, half_width] for piecewise integration.

    Splitting at jump locations lets a fixed-step integrator keep its full
    order; within each piece the returned callable is smooth on the closure.
    """
    if spec.kind == "square_well" and spec.a < half_width:
        return [
            (0.0, spec.a, lambda x: 1.0),
            (spec.a, half_width, lambda x: 0.0),
        ]
    return [(0.0, half_width, potential_function(spec))]


def peak_value(spec: PotentialSpec) -> float:
    """Maximum of V; used to bracket admissible binding energies."""
    if spec.kind == "table":
        return float(max(spec.values))
    return 1.0

"""Uniform cell-centered grids and scalar fields with Neumann-aware stencils.

The domain is a rectangle discretized into cells; all fields are sampled at
cell centers. Quadrature is the midpoint rule, which is exact for constants
and linear functions and matches the second-order difference stencils.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Grid:
    """Uniform rectangular grid in 1 or 2 dimensions.

    Attributes:
        dim: spatial dimension, 1 or 2.
        extents: side lengths of the rectangle, one per axis.
        cells: number of cells per axis (>= 4 each).
    """

    dim: int
    extents: tuple[float, ...]
    cells: tuple[int, ...]

    @property
    def spacing(self) -> tuple[float, ...]:
        return tuple(e / n for e, n in zip(self.extents, self.cells))

    @property
    def shape(self) -> tuple[int, ...]:
        return self.cells

    @property
    def cell_measure(self) -> float:
        return math.prod(self.spacing)

    @property
    def measure(self) -> float:
        return math.prod(self.extents)

    def axes(self) -> tuple[np.ndarray, ...]:
        """Cell-center coordinates along each axis."""
        return tuple(
            (np.arange(n) + 0.5) * h for n, h in zip(self.cells, self.spacing)
        )

    def meshgrid(self) -> tuple[np.ndarray, ...]:
        return tuple(np.meshgrid(*self.axes(), indexing="ij"))


def make_grid(dim: int, extents, cells) -> Grid:
    """Build a validated uniform grid.

    Raises ValueError for dim outside {1, 2}, nonpositive extents, or fewer
    than 4 cells along any axis.
    """
    if dim not in (1, 2):
        raise ValueError(f"dim must be 1 or 2, got {dim}")
    extents = tuple(float(e) for e in extents)
    cells = tuple(int(n) for n in cells)
    if len(extents) != dim or len(cells) != dim:
        raise ValueError(
            f"expected {dim} extents and cell counts, got {len(extents)} and {len(cells)}"
        )
    if any(e <= 0 for e in extents):
        raise ValueError(f"extents must be positive, got {extents}")
    if any(n < 4 for n in cells):
        raise ValueError(f"need at least 4 cells per axis, got {cells}")
    return Grid(dim=dim, extents=extents, cells=cells)


@dataclass
class Field:
    """Scalar function sampled at the cell centers of a grid."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != self.grid.shape:
            raise ValueError(
                f"values shape {self.values.shape} does not match grid {self.grid.shape}"
            )

    @classmethod
    def constant(cls, grid: Grid, value: float) -> "Field":
        return cls(grid, np.full(grid.shape, float(value)))

    @classmethod
    def from_function(cls, grid: Grid, fn) -> "Field":
        return cls(grid, fn(*grid.meshgrid()))

    def copy(self) -> "Field":
        return Field(self.grid, self.values.copy())

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.values)))


def _require_finite(f: Field) -> None:
    if not f.is_finite():
        raise ValueError("field contains non-finite values")


def mean_integral(f: Field) -> float:
    """Domain average (1/|Omega|) * integral of f, midpoint rule."""
    _require_finite(f)
    return float(f.values.sum() * f.grid.cell_measure / f.grid.measure)


def lk_norm(f: Field, k: float) -> float:
    """L^k norm of f over the domain; k = inf gives the sup norm."""
    _require_finite(f)
    if math.isinf(k):
        return float(np.abs(f.values).max())
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    return float((np.abs(f.values) ** k).sum() * f.grid.cell_measure) ** (1.0 / k)


def laplacian_neumann(f: Field) -> Field:
    """Second-order Laplacian with zero-flux (mirror ghost) boundaries.

    The mirror convention makes every boundary face flux vanish, so the
    output integrates to zero for any input (discrete divergence theorem).
    """
    _require_finite(f)
    v = f.values
    out = np.zeros_like(v)
    for axis, h in enumerate(f.grid.spacing):
        padded = np.pad(v, [(1, 1) if a == axis else (0, 0) for a in range(v.ndim)],
                        mode="edge")
        lo = np.take(padded, range(0, v.shape[axis]), axis=axis)
        hi = np.take(padded, range(2, v.shape[axis] + 2), axis=axis)
        out += (lo - 2.0 * v + hi) / h**2
    return Field(f.grid, out)

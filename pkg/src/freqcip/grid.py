"""Uniform spatial/frequency grids, sampled functions and finite differences.

Everything downstream works on the unit interval sampled at equally spaced
nodes.  Derivatives are second order: centred stencils in the interior and
one-sided three/four point stencils at the two endpoints, so both ``diff1``
and ``diff2`` are exact on quadratics (``diff2`` on cubics too).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.sparse as sp

DEFAULT_POINTS = 201


class GridError(ValueError):
    """Raised for malformed grids or grid functions."""


@dataclass(frozen=True)
class SpatialGrid:
    n_points: int = DEFAULT_POINTS
    x_min: float = 0.0
    x_max: float = 1.0

    def __post_init__(self):
        if int(self.n_points) != self.n_points or self.n_points < 5:
            raise GridError(f"need an integer n_points >= 5, got {self.n_points}")
        if not self.x_max > self.x_min:
            raise GridError("x_max must exceed x_min")

    @property
    def spacing(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.spacing * np.arange(self.n_points)

    def weights(self) -> np.ndarray:
        """Composite trapezoid weights."""
        w = np.full(self.n_points, self.spacing)
        w[0] = w[-1] = 0.5 * self.spacing
        return w


@dataclass(frozen=True)
class FrequencyGrid:
    """Descending wavenumber nodes ``k_0 = k_max > k_1 > ... > k_N = k_min``."""

    k_max: float = 1.5
    k_min: float = 0.5
    step: float = 0.02

    def __post_init__(self):
        if not (self.k_min > 0 and self.k_max > self.k_min and self.step > 0):
            raise GridError("need 0 < k_min < k_max and step > 0")
        n = (self.k_max - self.k_min) / self.step
        if abs(n - round(n)) > 1e-9 * max(1.0, n):
            raise GridError(
                f"step {self.step} does not divide [{self.k_min}, {self.k_max}]")

    @property
    def n_intervals(self) -> int:
        return int(round((self.k_max - self.k_min) / self.step))

    @property
    def nodes(self) -> np.ndarray:
        # k_max - j*h rather than linspace so k_{j-1} - k_j == h up to rounding
        return self.k_max - self.step * np.arange(self.n_intervals + 1)

    def __len__(self):
        return self.n_intervals + 1


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Complex samples of a function on a :class:`SpatialGrid`."""

    grid: SpatialGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.shape != (self.grid.n_points,):
            raise GridError(
                f"expected {self.grid.n_points} samples, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise GridError("grid function has non-finite entries")
        object.__setattr__(self, "values", _frozen(v))

    @classmethod
    def from_callable(cls, grid: SpatialGrid, f) -> "GridFunction":
        return cls(grid, f(grid.x))

    def _check(self, other: "GridFunction"):
        if other.grid != self.grid:
            raise GridError("grid functions live on different grids")

    def __add__(self, other):
        if isinstance(other, GridFunction):
            self._check(other)
            other = other.values
        return GridFunction(self.grid, self.values + other)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, GridFunction):
            self._check(other)
            other = other.values
        return GridFunction(self.grid, self.values - other)

    def __mul__(self, scalar):
        if isinstance(scalar, GridFunction):
            self._check(scalar)
            scalar = scalar.values
        return GridFunction(self.grid, self.values * scalar)

    __rmul__ = __mul__

    def __neg__(self):
        return GridFunction(self.grid, -self.values)

    def __len__(self):
        return self.grid.n_points

    @property
    def real(self) -> np.ndarray:
        return self.values.real

    @property
    def imag(self) -> np.ndarray:
        return self.values.imag

    def d1(self) -> "GridFunction":
        return diff1(self)

    def d2(self) -> "GridFunction":
        return diff2(self)

    def integrate(self) -> complex:
        return trapezoid(self)

    def l2_norm(self) -> float:
        return l2_norm(self.values, self.grid)


@dataclass(frozen=True, eq=False)
class MediumProfile:
    """Dielectric constant ``c = 1 + beta`` sampled on the spatial grid.

    ``c_lo``/``c_hi`` are the a-priori bounds used both for validation and
    for clamping during reconstruction.  Since ``beta`` vanishes outside the
    open unit interval, ``c`` must equal 1 at both endpoints, which in turn
    forces ``c_lo <= 1 <= c_hi``.
    """

    grid: SpatialGrid
    c: np.ndarray = field(repr=False)
    c_lo: float = 1.0
    c_hi: float = 10.0

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float)
        if c.shape != (self.grid.n_points,):
            raise GridError(f"expected {self.grid.n_points} samples, got {c.shape}")
        if not np.all(np.isfinite(c)):
            raise GridError("profile has non-finite entries")
        if not 0 < self.c_lo <= 1.0 <= self.c_hi:
            raise GridError("need 0 < c_lo <= 1 <= c_hi")
        tol = 1e-12 * max(1.0, self.c_hi)
        if c.min() < self.c_lo - tol or c.max() > self.c_hi + tol:
            raise GridError(
                f"profile range [{c.min():g}, {c.max():g}] outside "
                f"[{self.c_lo:g}, {self.c_hi:g}]")
        if abs(c[0] - 1.0) > tol or abs(c[-1] - 1.0) > tol:
            raise GridError("c must equal 1 at both ends of [0, 1]")
        object.__setattr__(self, "c", _frozen(c))

    @property
    def beta(self) -> np.ndarray:
        return self.c - 1.0

    @classmethod
    def homogeneous(cls, grid: SpatialGrid, **bounds) -> "MediumProfile":
        return cls(grid, np.ones(grid.n_points), **bounds)

    @classmethod
    def inclusion(cls, grid: SpatialGrid, c_target: float,
                  left: float = 0.25, right: float = 1.0 / 3.0,
                  **bounds) -> "MediumProfile":
        """Piecewise-constant slab: ``c_target`` on the open ``(left, right)``."""
        x = grid.x
        c = np.where((x > left) & (x < right), c_target, 1.0)
        bounds.setdefault("c_lo", min(1.0, c_target))
        bounds.setdefault("c_hi", max(10.0, c_target))
        return cls(grid, c, **bounds)


# -- difference operators --------------------------------------------------

@lru_cache(maxsize=32)
def diff1_matrix(n: int, h: float) -> sp.csr_matrix:
    if n < 3:
        raise GridError("diff1 needs at least 3 points")
    D = sp.diags([-0.5 * np.ones(n - 1), 0.5 * np.ones(n - 1)], [-1, 1],
                 shape=(n, n), format="lil")
    D[0, :3] = [-1.5, 2.0, -0.5]
    D[n - 1, n - 3:] = [0.5, -2.0, 1.5]
    return (D.tocsr() / h)


@lru_cache(maxsize=32)
def diff2_matrix(n: int, h: float) -> sp.csr_matrix:
    if n < 4:
        raise GridError("diff2 needs at least 4 points")
    D = sp.diags([np.ones(n - 1), -2.0 * np.ones(n), np.ones(n - 1)], [-1, 0, 1],
                 shape=(n, n), format="lil")
    D[0, :4] = [2.0, -5.0, 4.0, -1.0]
    D[n - 1, n - 4:] = [-1.0, 4.0, -5.0, 2.0]
    return (D.tocsr() / h**2)


@lru_cache(maxsize=32)
def diff3_matrix(n: int, h: float) -> sp.csr_matrix:
    """Third derivative as ``diff1 @ diff2``; first order near the ends."""
    return (diff1_matrix(n, h) @ diff2_matrix(n, h)).tocsr()


def diff1(f: GridFunction) -> GridFunction:
    g = f.grid
    return GridFunction(g, diff1_matrix(g.n_points, g.spacing) @ f.values)


def diff2(f: GridFunction) -> GridFunction:
    g = f.grid
    return GridFunction(g, diff2_matrix(g.n_points, g.spacing) @ f.values)


def trapezoid(f: GridFunction) -> complex:
    return complex(np.dot(f.grid.weights(), f.values))


def l2_norm(values: np.ndarray, grid: SpatialGrid) -> float:
    return math.sqrt(float(np.dot(grid.weights(), np.abs(values) ** 2)))


def sobolev_norm(f: GridFunction | np.ndarray, order: int,
                 grid: SpatialGrid | None = None) -> float:
    """Discrete ``H^order`` norm, ``order`` in 0..3."""
    if isinstance(f, GridFunction):
        grid, vals = f.grid, f.values
    else:
        vals = np.asarray(f)
    if order not in (0, 1, 2, 3):
        raise ValueError("order must be 0, 1, 2 or 3")
    n, h = grid.n_points, grid.spacing
    ops = [None, diff1_matrix(n, h), diff2_matrix(n, h), diff3_matrix(n, h)]
    total = l2_norm(vals, grid) ** 2
    for m in range(1, order + 1):
        total += l2_norm(ops[m] @ vals, grid) ** 2
    return math.sqrt(total)

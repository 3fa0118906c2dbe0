"""Forward scattering problem ``u'' + k^2 c(x) u = -delta(x - x0)`` on the line.

Two independent solvers are provided:

* :func:`solve_lippmann_schwinger` -- the integral-equation formulation,
  discretised with trapezoid quadrature on the ``[0, 1]`` grid; this is the
  production path used to simulate data.
* :func:`solve_helmholtz_fd` -- a second-order finite-difference scheme on
  an extended interval with discrete radiation conditions, used as an oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Callable

import numpy as np
import scipy.linalg as sla

from .grid import FrequencyGrid, GridFunction, MediumProfile, SpatialGrid
from .phase import unwrap_log

COND_LIMIT = 1e12


class ForwardSolveError(RuntimeError):
    pass


@dataclass(frozen=True)
class SourceConfig:
    x0: float = -1.0

    def __post_init__(self):
        if not self.x0 < 0:
            raise ValueError("source must sit left of the medium (x0 < 0)")


def free_space_field(x, x0: float, k: float):
    """Outgoing free-space Green's function ``exp(-ik|x - x0|) / (2ik)``."""
    k = np.asarray(k, dtype=float)
    if not np.all(k > 0):
        raise ValueError("wavenumber must be positive")
    return np.exp(-1j * k * np.abs(np.asarray(x) - x0)) / (2j * k)


@dataclass(frozen=True, eq=False)
class FieldSolution:
    u: GridFunction
    k: float
    x0: float
    evaluate: Callable[[np.ndarray], np.ndarray] = field(repr=False)

    def scattered(self, x) -> np.ndarray:
        return self.evaluate(x) - free_space_field(x, self.x0, self.k)


def solve_lippmann_schwinger(profile: MediumProfile, k: float,
                             src: SourceConfig = SourceConfig()) -> FieldSolution:
    """Solve ``(I - K) u = u0`` on the grid and extend by the integral formula."""
    if not k > 0:
        raise ValueError("wavenumber must be positive")
    grid = profile.grid
    x = grid.x
    wb = grid.weights() * profile.beta
    u0 = free_space_field(x, src.x0, k)
    A = -(k / 2j) * np.exp(-1j * k * np.abs(x[:, None] - x[None, :])) * wb[None, :]
    A[np.diag_indices_from(A)] += 1.0

    cond = np.linalg.cond(A)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise ForwardSolveError(
            f"Lippmann-Schwinger system ill-conditioned at k={k} (cond ~ {cond:.3g})")
    u = sla.solve(A, u0)

    def evaluate(xe):
        xe = np.asarray(xe, dtype=float)
        kern = np.exp(-1j * k * np.abs(xe[..., None] - x))
        return free_space_field(xe, src.x0, k) + (k / 2j) * (kern @ (wb * u))

    return FieldSolution(GridFunction(grid, u), k, src.x0, evaluate)


def solve_helmholtz_fd(profile: MediumProfile, k: float,
                       src: SourceConfig = SourceConfig(),
                       spacing: float | None = None,
                       right_end: float = 2.0) -> FieldSolution:
    """Finite-difference oracle on ``[x0 - 1, right_end]``.

    ``spacing`` must divide the profile grid spacing (default: half of it) so
    the ``[0, 1]`` nodes are reproduced exactly.  ``c`` between profile nodes
    is linearly interpolated and equals 1 outside ``[0, 1]``.  The point
    source becomes ``1/spacing`` at the node nearest ``x0``; radiation
    conditions use centred ghost-point closures.
    """
    if not k > 0:
        raise ValueError("wavenumber must be positive")
    grid = profile.grid
    h = grid.spacing / 2 if spacing is None else float(spacing)
    ratio = grid.spacing / h
    if abs(ratio - round(ratio)) > 1e-9:
        raise ValueError("FD spacing must divide the profile grid spacing")
    ratio = int(round(ratio))

    i_lo = math.floor((src.x0 - 1.0) / h + 1e-9)
    i_hi = math.ceil(right_end / h - 1e-9)
    xs = h * np.arange(i_lo, i_hi + 1)
    n = xs.size
    c = np.interp(xs, grid.x, profile.c, left=1.0, right=1.0)

    # banded storage: rows = super, main, sub diagonals
    ab = np.zeros((3, n), dtype=complex)
    ab[0, 1:] = 1.0 / h**2
    ab[2, :-1] = 1.0 / h**2
    ab[1, :] = -2.0 / h**2 + k**2 * c
    # ghost-point radiation closures: u' - iku = 0 left, u' + iku = 0 right
    ab[0, 1] = 2.0 / h**2
    ab[1, 0] = (-2.0 - 2j * k * h) / h**2 + k**2 * c[0]
    ab[2, n - 2] = 2.0 / h**2
    ab[1, n - 1] = (-2.0 - 2j * k * h) / h**2 + k**2 * c[-1]

    rhs = np.zeros(n, dtype=complex)
    rhs[int(np.argmin(np.abs(xs - src.x0)))] = -1.0 / h
    try:
        u_all = sla.solve_banded((1, 1), ab, rhs)
    except np.linalg.LinAlgError as exc:
        raise ForwardSolveError(f"FD system singular at k={k}") from exc

    i0 = -i_lo
    u = u_all[i0:i0 + ratio * (grid.n_points - 1) + 1:ratio]

    def evaluate(xe):
        xe = np.asarray(xe, dtype=float)
        return np.interp(xe, xs, u_all.real) + 1j * np.interp(xe, xs, u_all.imag)

    return FieldSolution(GridFunction(grid, u), k, src.x0, evaluate)


@dataclass(frozen=True, eq=False)
class BoundaryData:
    """Measured ratio ``g0(k) = u(0, k) / u0(0, k)`` on a frequency grid.

    ``g1 = 2ik(g0 - 1)`` is the derivative ``w_x(0, k)`` of ``w = u/u0``
    implied by the outgoing-wave structure left of the medium.
    """

    freq: FrequencyGrid
    g0: np.ndarray = field(repr=False)
    x0: float = -1.0

    def __post_init__(self):
        g0 = np.array(self.g0, dtype=complex)
        if g0.shape != (len(self.freq),):
            raise ValueError(f"expected {len(self.freq)} samples, got {g0.shape}")
        if not np.all(np.isfinite(g0)):
            raise ValueError("boundary data has non-finite entries")
        if np.any(g0 == 0):
            raise ValueError("g0 vanishes at some frequency")
        g0.flags.writeable = False
        object.__setattr__(self, "g0", g0)

    @property
    def k(self) -> np.ndarray:
        return self.freq.nodes

    @property
    def g1(self) -> np.ndarray:
        return 2j * self.k * (self.g0 - 1.0)

    @cached_property
    def log_g0(self) -> np.ndarray:
        return unwrap_log(self.g0)

    def with_g0(self, g0) -> "BoundaryData":
        return replace(self, g0=g0)


def extract_boundary_data(profile: MediumProfile, freq: FrequencyGrid,
                          src: SourceConfig = SourceConfig(),
                          solver=solve_lippmann_schwinger) -> BoundaryData:
    g0 = np.empty(len(freq), dtype=complex)
    for j, k in enumerate(freq.nodes):
        try:
            sol = solver(profile, k, src)
        except ForwardSolveError as exc:
            raise ForwardSolveError(f"forward solve failed at node {j}: {exc}") from exc
        g0[j] = sol.u.values[0] / free_space_field(0.0, src.x0, k)
        if not abs(g0[j]) > 0:
            raise ForwardSolveError(f"g0 vanishes at k={k}")
    return BoundaryData(freq, g0, src.x0)


def add_noise(data: BoundaryData, level: float, rng_seed: int) -> BoundaryData:
    """Multiplicative noise ``g0 * (1 + level * zeta)``, zeta uniform in the unit disc."""
    if level < 0:
        raise ValueError("noise level must be non-negative")
    if level == 0:
        return data
    rng = np.random.default_rng(rng_seed)
    n = len(data.g0)
    zeta = np.sqrt(rng.uniform(size=n)) * np.exp(2j * np.pi * rng.uniform(size=n))
    return data.with_g0(data.g0 * (1.0 + level * zeta))

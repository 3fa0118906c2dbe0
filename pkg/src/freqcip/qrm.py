"""Quasi-reversibility solver for overdetermined second-order problems.

Minimises ::

    J(w) = 1/2 * ( ||w'' + a w' + b w - d||^2  +  alpha * ||w||_{H^3}^2 )

over complex ``w`` with ``w(0) = p0``, ``w'(0) = p1``, ``w'(1) = 0``.

The boundary conditions are imposed exactly: ``w = lift + E z`` where the
lift carries the data and the columns of ``E`` span the discrete functions
with homogeneous conditions.  Real and imaginary parts are split, giving a
real symmetric positive-definite normal-equation system that is factored
by Cholesky.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

from .grid import (GridFunction, SpatialGrid, diff1_matrix, diff2_matrix,
                   diff3_matrix, sobolev_norm)


class QrmError(RuntimeError):
    pass


def blend(x) -> np.ndarray:
    """C^2 cutoff: 1 on [0, 1/2], 0 on [3/4, 1], quintic smoothstep between."""
    t = np.clip((np.asarray(x, dtype=float) - 0.5) / 0.25, 0.0, 1.0)
    return 1.0 - t**3 * (10.0 - 15.0 * t + 6.0 * t**2)


def lift_boundary(p0: complex, p1: complex, grid: SpatialGrid) -> GridFunction:
    """``blend(x) * (p0 + p1 x)``; satisfies all three conditions exactly,
    including under the discrete one-sided derivative stencils."""
    x = grid.x
    return GridFunction(grid, blend(x) * (p0 + p1 * x))


def h3_norm(f: GridFunction) -> float:
    return sobolev_norm(f, 3)


@dataclass(frozen=True, eq=False)
class QrmProblem:
    grid: SpatialGrid
    a: np.ndarray = field(repr=False)
    b: np.ndarray = field(repr=False)
    d: np.ndarray = field(repr=False)
    p0: complex = 0.0
    p1: complex = 0.0
    alpha: float = 1e-6

    def __post_init__(self):
        n = self.grid.n_points
        for name in ("a", "b", "d"):
            v = getattr(self, name)
            if isinstance(v, GridFunction):
                v = v.values
            v = np.broadcast_to(np.asarray(v, dtype=complex), (n,)).copy()
            if not np.all(np.isfinite(v)):
                raise QrmError(f"coefficient {name} has non-finite entries")
            object.__setattr__(self, name, v)
        if not 0 < self.alpha <= 1:
            raise QrmError(f"alpha must lie in (0, 1], got {self.alpha}")
        if not (np.isfinite(self.p0) and np.isfinite(self.p1)):
            raise QrmError("boundary data not finite")

    def operator(self) -> sp.csr_matrix:
        ops = _operators(self.grid)
        return (ops.D2 + sp.diags(self.a) @ ops.D1 + sp.diags(self.b)).tocsr()

    def functional(self, w) -> float:
        """Evaluate J at ``w`` (array or GridFunction)."""
        vals = w.values if isinstance(w, GridFunction) else np.asarray(w)
        res = self.operator() @ vals - self.d
        wq = self.grid.weights()
        r2 = float(np.dot(wq, np.abs(res) ** 2))
        return 0.5 * (r2 + self.alpha * sobolev_norm(vals, 3, self.grid) ** 2)


@dataclass(frozen=True, eq=False)
class QrmSolution:
    w: GridFunction
    residual_l2: float
    penalty_h3: float
    functional_value: float


@dataclass(frozen=True)
class _Operators:
    D1: sp.csr_matrix
    D2: sp.csr_matrix
    R: sp.csr_matrix          # stacked [I; D1; D2; D3]
    E: sp.csr_matrix          # homogeneous-space basis, n x (n - 3)
    wq: np.ndarray
    RtWR: sp.csr_matrix       # E^T R^T W R E, real


@lru_cache(maxsize=8)
def _operators(grid: SpatialGrid) -> _Operators:
    n, h = grid.n_points, grid.spacing
    D1 = diff1_matrix(n, h)
    D2 = diff2_matrix(n, h)
    D3 = diff3_matrix(n, h)
    R = sp.vstack([sp.identity(n, format="csr"), D1, D2, D3]).tocsr()

    # z_0 = 0; z_2 = 4 z_1 (zero one-sided slope at 0);
    # z_{n-1} = (4 z_{n-2} - z_{n-3}) / 3 (zero one-sided slope at 1)
    free = [1] + list(range(3, n - 1))
    col = {node: j for j, node in enumerate(free)}
    E = sp.lil_matrix((n, len(free)))
    for node in free:
        E[node, col[node]] = 1.0
    E[2, col[1]] = 4.0
    E[n - 1, col[n - 2]] = 4.0 / 3.0
    if n - 3 in col:
        E[n - 1, col[n - 3]] = -1.0 / 3.0
    E = E.tocsr()

    wq = grid.weights()
    W4 = sp.diags(np.tile(wq, 4))
    RE = R @ E
    return _Operators(D1, D2, R, E, wq, (RE.T @ W4 @ RE).tocsr())


def _realify(M) -> np.ndarray:
    M = M.toarray() if sp.issparse(M) else np.asarray(M)
    return np.block([[M.real, -M.imag], [M.imag, M.real]])


def qrm_solve(problem: QrmProblem) -> QrmSolution:
    grid = problem.grid
    ops = _operators(grid)
    n = grid.n_points
    L = problem.operator()
    lift = lift_boundary(problem.p0, problem.p1, grid).values

    W = sp.diags(ops.wq)
    LE = (L @ ops.E).tocsr()
    f = problem.d - L @ lift
    G = LE.conj().T @ W @ LE                      # Hermitian, complex
    rhs_c = LE.conj().T @ (ops.wq * f)
    Rlift = ops.R @ lift
    rhs_c = rhs_c - problem.alpha * (
        ops.E.T @ (ops.R.T @ (np.tile(ops.wq, 4) * Rlift)))

    H = _realify(G + problem.alpha * ops.RtWR)
    rhs = np.concatenate([rhs_c.real, rhs_c.imag])
    try:
        cf = sla.cho_factor(H, lower=True, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise QrmError("QRM normal matrix is not positive definite") from exc
    sol = sla.cho_solve(cf, rhs, check_finite=False)
    m = sol.size // 2
    z = sol[:m] + 1j * sol[m:]
    w = lift + ops.E @ z
    if not np.all(np.isfinite(w)):
        raise QrmError("QRM produced non-finite values")

    res = L @ w - problem.d
    residual = float(np.sqrt(np.dot(ops.wq, np.abs(res) ** 2)))
    penalty = sobolev_norm(w, 3, grid)
    value = 0.5 * (residual**2 + problem.alpha * penalty**2)
    return QrmSolution(GridFunction(grid, w), residual, penalty, value)

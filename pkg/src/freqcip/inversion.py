"""Frequency-marching reconstruction of ``c(x) = 1 + beta(x)`` from ``g0(k)``.

With ``w = u / u0`` and ``v = log(w) / k^2`` the coefficient satisfies ::

    v'' + k^2 (v')^2 - 2ik v' = -beta

The scheme marches ``k`` from ``k_max`` down to ``k_min``, solving for
``q_n = dv/dk`` at each node by QRM with the tail ``V = v(., k_max)`` frozen,
re-deriving ``beta`` from ``v``, then refreshing the tail from a QRM solve of
the ``w`` equation at ``k_max``.  Whole sweeps over the band are repeated,
each starting from the tail implied by the previous sweep's coefficient.
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .forward import BoundaryData
from .grid import FrequencyGrid, GridFunction, MediumProfile, SpatialGrid, l2_norm
from .phase import LogBoundary, boundary_psi
from .qrm import QrmError, QrmProblem, qrm_solve

log = logging.getLogger(__name__)


class ReconstructionError(RuntimeError):
    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


class VanishingFieldError(ReconstructionError):
    pass


@dataclass
class AlgoConfig:
    k_min: float = 0.5
    k_max: float = 1.5
    h: float = 0.02
    n_points: int = 201
    alpha: float | None = None      # None: derived from noise_level / alpha_rule
    alpha_rule: str = "delta"       # "delta": alpha = delta^2, "eta": (h + delta)^2
    m: int = 5
    K: int = 50
    avg_radius: float = 0.05
    c_lo: float = 1.0
    c_hi: float = 10.0
    sign: int = 1                   # +1: c >= 1 targets, -1: c <= 1 targets
    noise_level: float = 0.0
    seed: int = 0
    inner_tol: float = 1e-4
    w_floor: float = 1e-6
    x0: float = -1.0

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if self.alpha_rule not in ("delta", "eta"):
            raise ValueError("alpha_rule must be 'delta' or 'eta'")
        if self.m < 1 or self.K < 1:
            raise ValueError("m and K must be positive")
        if not 0 < self.c_lo <= 1.0 <= self.c_hi:
            raise ValueError("need 0 < c_lo <= 1 <= c_hi")
        if self.avg_radius < 0:
            raise ValueError("avg_radius must be non-negative")

    @property
    def grid(self) -> SpatialGrid:
        return SpatialGrid(self.n_points)

    @property
    def freq(self) -> FrequencyGrid:
        return FrequencyGrid(self.k_max, self.k_min, self.h)

    def resolved_alpha(self) -> float:
        if self.alpha is not None:
            return self.alpha
        if self.alpha_rule == "eta":
            return (self.h + self.noise_level) ** 2
        if self.noise_level > 0:
            return self.noise_level**2
        return 1e-6

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "AlgoConfig":
        known = cls.__dataclass_fields__
        unknown = set(d) - set(known)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**d)


@dataclass(frozen=True, eq=False)
class TailState:
    V1: GridFunction
    V2: GridFunction


@dataclass
class IterationState:
    n: int
    q_list: list
    Q1: np.ndarray
    Q2: np.ndarray
    beta: np.ndarray
    tail: TailState


@dataclass
class SweepRecord:
    inner_changes: list = field(default_factory=list)   # per n: list over j
    j0: list = field(default_factory=list)              # per n, 1-based
    outer_changes: list = field(default_factory=list)   # per n
    n0: int | None = None                               # 1-based
    beta: np.ndarray | None = None
    aborted: str | None = None


@dataclass
class ReconstructionTrace:
    sweeps: list = field(default_factory=list)
    sweep_changes: list = field(default_factory=list)   # index m-1, m >= 2
    m0: int | None = None                               # 1-based
    alpha: float | None = None
    beta_initial: np.ndarray | None = None               # from the initial tail at k_max
    beta_min: float = math.inf
    beta_max: float = -math.inf
    profile: MediumProfile | None = None

    def note_beta(self, beta: np.ndarray):
        self.beta_min = min(self.beta_min, float(beta.min()))
        self.beta_max = max(self.beta_max, float(beta.max()))

    def to_dict(self) -> dict:
        out = {
            "alpha": self.alpha,
            "m0": self.m0,
            "sweep_changes": self.sweep_changes,
            "beta_range": [self.beta_min, self.beta_max],
            "sweeps": [],
        }
        for s in self.sweeps:
            out["sweeps"].append({
                "n0": s.n0,
                "j0": s.j0,
                "outer_changes": s.outer_changes,
                "inner_changes": s.inner_changes,
                "aborted": s.aborted,
            })
        if self.profile is not None:
            out["c"] = self.profile.c.tolist()
        return out


def relative_change(new: np.ndarray, old: np.ndarray, grid: SpatialGrid) -> float:
    """``||new - old|| / ||new||`` with 0/0 read as no change."""
    num = l2_norm(new - old, grid)
    den = l2_norm(new, grid)
    if den == 0:
        return 0.0 if num == 0 else math.inf
    return num / den


def _tail_from_w(w: GridFunction, k_bar: float, floor: float) -> TailState:
    wv = w.values
    small = np.abs(wv) < floor
    if np.any(small):
        i = int(np.flatnonzero(small)[0])
        raise VanishingFieldError(
            f"|w| = {abs(wv[i]):.3g} below floor at x = {w.grid.x[i]:.4f}")
    w1 = w.d1().values
    w2 = w.d2().values
    V1 = w1 / (k_bar**2 * wv)
    V2 = w2 / (k_bar**2 * wv) - w1**2 / (k_bar**2 * wv**2)
    return TailState(GridFunction(w.grid, V1), GridFunction(w.grid, V2))


def initial_tail(data: BoundaryData, grid: SpatialGrid, alpha: float) -> TailState:
    """QRM solution of ``V'' = 0`` with the asymptotic boundary values at ``k_max``."""
    k_bar = data.k[0]
    p0 = data.log_g0[0] / k_bar**2
    p1 = data.g1[0] / (k_bar**2 * data.g0[0])
    sol = qrm_solve(QrmProblem(grid, 0.0, 0.0, 0.0, p0, p1, alpha))
    return TailState(sol.w.d1(), sol.w.d2())


def solve_qn(Q1: np.ndarray, tail: TailState, kn: float, psi: tuple,
             alpha: float) -> GridFunction:
    """QRM solve of the linearised equation for ``q_n`` with ``Q'`` and ``V'`` frozen."""
    grid = tail.V1.grid
    A = -np.asarray(Q1) + tail.V1.values
    a = 2 * kn**2 * A - 2j * kn
    d = -2 * kn * A**2 + 2j * A
    return qrm_solve(QrmProblem(grid, a, 0.0, d, psi[0], psi[1], alpha)).w


def update_v(q: GridFunction, Q1, Q2, tail: TailState, h: float):
    """``v^(s) = -h q^(s) - Q^(s) + V^(s)`` for s = 1, 2."""
    grid = q.grid
    Q1 = Q1.values if isinstance(Q1, GridFunction) else np.asarray(Q1)
    Q2 = Q2.values if isinstance(Q2, GridFunction) else np.asarray(Q2)
    if Q1.shape != (grid.n_points,) or Q2.shape != (grid.n_points,):
        raise ValueError("shape mismatch between q and Q")
    v1 = -h * q.d1().values - Q1 + tail.V1.values
    v2 = -h * q.d2().values - Q2 + tail.V2.values
    return GridFunction(grid, v1), GridFunction(grid, v2)


def local_average(f: np.ndarray, grid: SpatialGrid, radius: float) -> np.ndarray:
    """Mean over ``[x - radius, x + radius]`` intersected with the grid."""
    if radius <= 0:
        return np.asarray(f, dtype=float).copy()
    r = int(math.floor(radius / grid.spacing + 1e-9))
    if r == 0:
        return np.asarray(f, dtype=float).copy()
    n = grid.n_points
    cs = np.concatenate([[0.0], np.cumsum(f)])
    i = np.arange(n)
    lo = np.maximum(i - r, 0)
    hi = np.minimum(i + r, n - 1) + 1
    return (cs[hi] - cs[lo]) / (hi - lo)


def update_beta(v1: GridFunction, v2: GridFunction, kn: float, c_lo: float,
                c_hi: float, avg_radius: float, sign: int = 1) -> np.ndarray:
    """Modulus of ``-v'' - k^2 (v')^2 + 2ik v'``, signed, clamped, locally averaged.

    ``sign = -1`` handles targets below the background (``beta <= 0``);
    the sign itself has to come from outside the algorithm.
    """
    expr = -v2.values - kn**2 * v1.values**2 + 2j * kn * v1.values
    beta = sign * np.abs(expr)
    beta = np.clip(beta, c_lo - 1.0, c_hi - 1.0)
    return local_average(beta, v1.grid, avg_radius)


def update_tail(beta: np.ndarray, data: BoundaryData, grid: SpatialGrid,
                alpha: float, w_floor: float = 1e-6):
    """Solve ``w'' - 2ik w' + k^2 beta w = 0`` at ``k_max`` by QRM; return tail and ``w``.

    The QRM unknown is ``y = w - g0(k_max)``, so the regularisation pulls
    towards the constant state rather than towards zero.
    """
    k_bar = data.k[0]
    g0, g1 = data.g0[0], data.g1[0]
    b = k_bar**2 * np.asarray(beta, dtype=float)
    prob = QrmProblem(grid, -2j * k_bar, b, -b * g0, 0.0, g1, alpha)
    w = qrm_solve(prob).w + g0
    return _tail_from_w(w, k_bar, w_floor), w


def _sweep(data: BoundaryData, log_bd: LogBoundary, tail: TailState,
           beta_start: np.ndarray, cfg: AlgoConfig, alpha: float,
           trace: ReconstructionTrace) -> SweepRecord:
    grid = tail.V1.grid
    rec = SweepRecord()
    h = data.freq.step
    state = IterationState(0, [GridFunction(grid, np.zeros(grid.n_points))],
                           np.zeros(grid.n_points, dtype=complex),
                           np.zeros(grid.n_points, dtype=complex),
                           beta_start, tail)
    betas = [beta_start]
    for n in range(1, len(data.k)):
        kn = data.k[n]
        psi = boundary_psi(log_bd, n)
        tail_j = state.tail
        prev = state.beta
        cands = []
        changes = []
        for _ in range(cfg.m):
            q = solve_qn(state.Q1, tail_j, kn, psi, alpha)
            v1, v2 = update_v(q, state.Q1, state.Q2, tail_j, h)
            beta = update_beta(v1, v2, kn, cfg.c_lo, cfg.c_hi,
                               cfg.avg_radius, cfg.sign)
            trace.note_beta(beta)
            try:
                tail_next, _ = update_tail(beta, data, grid, alpha, cfg.w_floor)
            except VanishingFieldError as exc:
                rec.aborted = f"n={n}: {exc}"
                rec.inner_changes.append(changes)
                raise ReconstructionError(rec.aborted) from exc
            change = relative_change(beta, prev, grid)
            cands.append((q, beta, tail_next))
            changes.append(change)
            prev = beta
            tail_j = tail_next
            if change < cfg.inner_tol:
                break
        j0 = int(np.argmin(changes))
        q, beta, tail_next = cands[j0]
        rec.inner_changes.append(changes)
        rec.j0.append(j0 + 1)
        rec.outer_changes.append(relative_change(beta, state.beta, grid))
        state.n = n
        state.q_list.append(q)
        state.Q1 = state.Q1 + h * q.d1().values
        state.Q2 = state.Q2 + h * q.d2().values
        state.beta = beta
        state.tail = tail_next
        betas.append(beta)
    n0 = int(np.argmin(rec.outer_changes)) + 1
    rec.n0 = n0
    rec.beta = betas[n0]
    return rec


def _finish_profile(beta: np.ndarray, grid: SpatialGrid, cfg: AlgoConfig) -> MediumProfile:
    c = 1.0 + beta
    c[0] = c[-1] = 1.0
    return MediumProfile(grid, c, c_lo=cfg.c_lo, c_hi=cfg.c_hi)


def reconstruct(data: BoundaryData, cfg: AlgoConfig | None = None):
    """Run ``cfg.K`` sweeps and return ``(profile, trace)``.

    Inside each sweep ``j0`` and ``n0`` pick the inner/outer iterates whose
    relative change is smallest; across sweeps ``m0`` does the same for ``c``.
    """
    cfg = cfg or AlgoConfig()
    if abs(data.freq.step - cfg.h) > 1e-12 or abs(data.k[0] - cfg.k_max) > 1e-12 \
            or abs(data.k[-1] - cfg.k_min) > 1e-12:
        raise ValueError("boundary data frequency grid does not match the config")
    grid = cfg.grid
    alpha = cfg.resolved_alpha()
    trace = ReconstructionTrace(alpha=alpha)
    log_bd = LogBoundary.from_data(data)
    k_bar = data.k[0]

    tail = initial_tail(data, grid, alpha)
    beta0 = update_beta(tail.V1, tail.V2, k_bar, cfg.c_lo, cfg.c_hi,
                        cfg.avg_radius, cfg.sign)
    trace.note_beta(beta0)
    trace.beta_initial = beta0
    cs = []
    for m in range(1, cfg.K + 1):
        try:
            rec = _sweep(data, log_bd, tail, beta0, cfg, alpha, trace)
        except ReconstructionError as exc:
            log.warning("sweep %d aborted: %s", m, exc)
            if not cs:
                exc.trace = trace
                raise
            break
        trace.sweeps.append(rec)
        cs.append(1.0 + rec.beta)
        if m >= 2:
            trace.sweep_changes.append(relative_change(cs[-1], cs[-2], grid))
            if np.array_equal(cs[-1], cs[-2]):
                # the sweep map is deterministic: every later sweep repeats this one
                log.debug("sweep %d reproduced sweep %d exactly; stopping", m, m - 1)
                break
        beta0 = rec.beta
        try:
            tail, _ = update_tail(beta0, data, grid, alpha, cfg.w_floor)
        except VanishingFieldError as exc:
            log.warning("tail refresh after sweep %d failed: %s", m, exc)
            break
        log.debug("sweep %d: n0=%d max c=%.4f", m, rec.n0, cs[-1].max())

    if trace.sweep_changes:
        trace.m0 = int(np.argmin(trace.sweep_changes)) + 2
    else:
        trace.m0 = 1
    profile = _finish_profile(cs[trace.m0 - 1] - 1.0, grid, cfg)
    trace.profile = profile
    return profile, trace

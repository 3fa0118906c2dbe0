"""Continuous complex logarithms along a frequency sweep.

``g0(k)`` is nonvanishing, so ``log g0`` can be followed from the top
frequency downward by accumulating increments of ``dw/w``.  At each step the
exact increment ``Log(w_j / w_{j-1})`` is used; the trapezoid estimate of
``int dw/w`` only selects its branch.  Steps whose phase change reaches pi
are rejected because the sampling cannot resolve them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class PhaseUnwrapError(ValueError):
    pass


def unwrap_log(series, anchor_log: complex | None = None) -> np.ndarray:
    """Continuous ``log`` of ``series`` ordered from the anchor frequency down.

    ``anchor_log`` defaults to the principal logarithm of ``series[0]``; a
    caller who knows the true branch there may pass it instead.
    """
    w = np.asarray(series, dtype=complex)
    if w.ndim != 1 or w.size == 0:
        raise PhaseUnwrapError("expected a non-empty 1-d series")
    if np.any(w == 0) or not np.all(np.isfinite(w)):
        raise PhaseUnwrapError("series vanishes or is non-finite")
    if anchor_log is None:
        anchor_log = np.log(w[0])
    elif abs(np.exp(anchor_log) - w[0]) > 1e-10 * abs(w[0]):
        raise PhaseUnwrapError("anchor_log is not a logarithm of series[0]")

    dw = np.diff(w)
    trap = 0.5 * dw * (1.0 / w[1:] + 1.0 / w[:-1])
    inc = np.log(w[1:] / w[:-1])
    inc = inc + 2j * np.pi * np.round((trap.imag - inc.imag) / (2 * np.pi))
    bad = np.flatnonzero(np.abs(inc.imag) >= np.pi)
    if bad.size:
        j = int(bad[0]) + 1
        raise PhaseUnwrapError(
            f"phase jump of {inc[j - 1].imag:.3f} rad into node {j}; data too coarse")
    out = np.empty_like(w)
    out[0] = anchor_log
    out[1:] = anchor_log + np.cumsum(inc)
    return out


@dataclass(frozen=True, eq=False)
class LogBoundary:
    """``log g0`` and the derived boundary values of ``v = log(w)/k^2`` and ``q = dv/dk``.

    ``psi0[n]``/``psi1[n]`` (index 0 unused) are the backward-in-``k``
    difference quotients prescribing ``q_n(0)`` and ``q_n'(0)``.
    """

    k: np.ndarray
    log_g0: np.ndarray
    v0: np.ndarray
    psi0: np.ndarray
    psi1: np.ndarray

    @classmethod
    def from_data(cls, data) -> "LogBoundary":
        k = data.k
        log_g0 = data.log_g0
        v0 = log_g0 / k**2
        dv1 = 2j / k * (1.0 - 1.0 / data.g0)
        h = data.freq.step
        psi0 = np.zeros_like(v0)
        psi1 = np.zeros_like(v0)
        psi0[1:] = (v0[:-1] - v0[1:]) / h
        psi1[1:] = (dv1[:-1] - dv1[1:]) / h
        return cls(k, log_g0, v0, psi0, psi1)


def boundary_psi(log_bd: LogBoundary, n: int) -> tuple[complex, complex]:
    if not 1 <= n < len(log_bd.k):
        raise IndexError(f"frequency index {n} outside 1..{len(log_bd.k) - 1}")
    return complex(log_bd.psi0[n]), complex(log_bd.psi1[n])

"""Turn a time-resolved backscatter record into frequency-domain boundary data.

Sample times are ``t_j = t0 + j*dt`` in seconds; the transform works in the
rescaled time ``t / time_unit`` (nanoseconds by default), so wavenumbers
come out in radians per nanosecond.  The record is integrated over its full
length, pre-trigger samples included: for a causal record starting at
``t0 >= 0`` this is the usual one-sided transform.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .forward import BoundaryData, free_space_field
from .grid import FrequencyGrid, MediumProfile

DEFAULT_DT = 0.133e-9
DEFAULT_CALIBRATION = 1e-7


class DegenerateSpectrumError(ValueError):
    """The record carries no usable energy."""


@dataclass(frozen=True, eq=False)
class TimeSeries:
    samples: np.ndarray = field(repr=False)
    dt: float = DEFAULT_DT
    t0: float = 0.0

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float)
        if s.ndim != 1 or s.size < 8:
            raise ValueError("a time series needs at least 8 samples")
        if not np.all(np.isfinite(s)):
            raise ValueError("time series has non-finite samples")
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        s = s.copy()
        s.flags.writeable = False
        object.__setattr__(self, "samples", s)

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.samples.size)


@dataclass(frozen=True)
class PreprocessConfig:
    calibration: float = DEFAULT_CALIBRATION
    target_band: tuple = (0.5, 1.5)
    step: float = 0.02
    band_selection: str | tuple = "auto"   # "auto" or an explicit (k_lo, k_hi)
    sign: int = 1                          # +1: target brighter than background
    time_unit: float = 1e-9
    x0: float = -1.0
    scan_max: float | None = None          # defaults to the Nyquist wavenumber
    energy_floor: float = 1e-300

    def __post_init__(self):
        lo, hi = self.target_band
        if not 0 < lo < hi:
            raise ValueError("target band must satisfy 0 < k_lo < k_hi")
        if not self.calibration > 0:
            raise ValueError("calibration must be positive")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if not self.time_unit > 0:
            raise ValueError("time_unit must be positive")
        if self.band_selection != "auto":
            blo, bhi = self.band_selection
            if not 0 < blo < bhi:
                raise ValueError("explicit band must satisfy 0 < k_lo < k_hi")
            if abs((bhi - blo) - (hi - lo)) > 1e-9:
                raise ValueError("explicit band must have the target band's width")
        object.__setattr__(self, "target_band", (float(lo), float(hi)))
        FrequencyGrid(hi, lo, self.step)   # validates the step

    @property
    def freq(self) -> FrequencyGrid:
        lo, hi = self.target_band
        return FrequencyGrid(hi, lo, self.step)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["target_band"] = list(self.target_band)
        if d["band_selection"] != "auto":
            d["band_selection"] = list(self.band_selection)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "PreprocessConfig":
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        d = dict(d)
        for key in ("target_band", "band_selection"):
            if isinstance(d.get(key), list):
                d[key] = tuple(d[key])
        return cls(**d)


@dataclass(frozen=True)
class ContrastReport:
    R_tilde: float
    c_bckgr_range: tuple
    c_comp_range: tuple
    sign: int

    def to_dict(self) -> dict:
        return {"R_tilde": self.R_tilde, "c_bckgr_range": list(self.c_bckgr_range),
                "c_comp_range": list(self.c_comp_range), "sign": self.sign}


def fourier_transform(ts: TimeSeries, k_nodes, time_unit: float = 1e-9) -> np.ndarray:
    """Trapezoid evaluation of ``int f(t) exp(-ikt) dt`` over the record."""
    k = np.atleast_1d(np.asarray(k_nodes, dtype=float))
    t = ts.times / time_unit
    wt = np.full(t.size, ts.dt / time_unit)
    wt[0] = wt[-1] = 0.5 * ts.dt / time_unit
    out = np.exp(-1j * np.outer(k, t)) @ (wt * ts.samples)
    return out if np.ndim(k_nodes) else out[0]


def scan_spectrum(ts: TimeSeries, cfg: PreprocessConfig) -> tuple[np.ndarray, np.ndarray]:
    """Calibrated spectrum on the uniform scan ``step, 2*step, ...`` up to ``scan_max``."""
    nyquist = np.pi * cfg.time_unit / ts.dt
    top = nyquist if cfg.scan_max is None else min(cfg.scan_max, nyquist)
    n = int(np.floor(top / cfg.step + 1e-9))
    k = cfg.step * np.arange(1, n + 1)
    return k, cfg.calibration * fourier_transform(ts, k, cfg.time_unit)


def select_band(k_scan: np.ndarray, u_scan: np.ndarray, n_nodes: int) -> int:
    """Start index of the ``n_nodes`` window with the largest trapezoid integral of ``|u|``."""
    if k_scan.size < n_nodes:
        raise DegenerateSpectrumError("scan range narrower than the target band")
    a = np.abs(u_scan)
    cs = np.concatenate([[0.0], np.cumsum(a)])
    win = cs[n_nodes:] - cs[:-n_nodes]
    win = win - 0.5 * (a[: win.size] + a[n_nodes - 1:])   # trapezoid end weights
    return int(np.argmax(win))


def preprocess(ts: TimeSeries, cfg: PreprocessConfig = PreprocessConfig()) -> BoundaryData:
    freq = cfg.freq
    n_nodes = len(freq)
    if cfg.band_selection == "auto":
        k_scan, u_scan = scan_spectrum(ts, cfg)
        if not np.any(np.abs(u_scan) > cfg.energy_floor):
            raise DegenerateSpectrumError("spectrum vanishes on the whole scan")
        i = select_band(k_scan, u_scan, n_nodes)
        # scan is ascending, boundary data descending
        u_band = u_scan[i:i + n_nodes][::-1]
    else:
        blo, bhi = cfg.band_selection
        k_src = bhi - cfg.step * np.arange(n_nodes)
        u_band = cfg.calibration * fourier_transform(ts, k_src, cfg.time_unit)
    if not np.any(np.abs(u_band) > cfg.energy_floor):
        raise DegenerateSpectrumError("spectrum vanishes on the selected band")
    if np.any(u_band == 0):
        raise DegenerateSpectrumError("spectrum has exact zeros in the selected band")
    g0 = u_band / free_space_field(0.0, cfg.x0, freq.nodes)
    return BoundaryData(freq, g0, cfg.x0)


def synthesize_time_series(data: BoundaryData, dt: float, t_range: tuple,
                           taper: float = 0.3, time_unit: float = 1e-9,
                           extended_g0=None) -> TimeSeries:
    """Real record whose transform reproduces ``u(0, k)`` on the data band.

    The band spectrum is extended by ``taper`` on each side with a cos^2
    roll-off; ``extended_g0(k)`` supplies ``g0`` outside the band (default:
    hold the end values).  The inverse transform is the usual
    ``(1/pi) Re int F(k) exp(ikt) dk`` evaluated by trapezoid on the data step.
    """
    h = data.freq.step
    lo, hi = data.freq.k_min, data.freq.k_max
    n_side = int(round(taper / h))
    k = lo + h * np.arange(-n_side, data.freq.n_intervals + n_side + 1)
    k = k[k > 0]
    if extended_g0 is not None:
        g = np.asarray(extended_g0(k), dtype=complex)
    else:
        g = np.interp(k, data.k[::-1], data.g0.real[::-1]) \
            + 1j * np.interp(k, data.k[::-1], data.g0.imag[::-1])
    ramp_lo = np.sin(0.5 * np.pi * np.clip((k - (lo - taper)) / taper, 0, 1)) ** 2
    ramp_hi = np.cos(0.5 * np.pi * np.clip((k - hi) / taper, 0, 1)) ** 2
    F = g * free_space_field(0.0, data.x0, k) * ramp_lo * ramp_hi
    wk = np.full(k.size, h)
    wk[0] = wk[-1] = 0.5 * h
    t0, t1 = t_range
    n = int(np.floor((t1 - t0) / dt)) + 1
    t = (t0 + dt * np.arange(n)) / time_unit
    f = np.real(np.exp(1j * np.outer(t, k)) @ (wk * F)) / np.pi
    return TimeSeries(f, dt, t0)


def contrast(profile, sign: int = 1, c_bckgr=(1.0, 1.0)) -> ContrastReport:
    """Target/background ratio: max of ``R`` for bright targets, min for dim ones.

    ``profile`` is read as ``R(x)``; a :class:`MediumProfile` or any positive
    array is accepted.
    """
    R = profile.c if isinstance(profile, MediumProfile) else np.asarray(profile, float)
    if R.size == 0 or not np.all(R > 0):
        raise ValueError("R must be a non-empty positive array")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    lo, hi = (float(c_bckgr), float(c_bckgr)) if np.isscalar(c_bckgr) else map(float, c_bckgr)
    if not 0 < lo <= hi:
        raise ValueError("background range must satisfy 0 < lo <= hi")
    r = float(R.max() if sign == 1 else R.min())
    return ContrastReport(r, (lo, hi), (r * lo, r * hi), sign)

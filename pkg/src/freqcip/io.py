"""Plain-text formats: profile and boundary-data CSV, raw time series, JSON, plot data."""

from __future__ import annotations

import csv
import json
import re
from pathlib import Path

import numpy as np

from .forward import BoundaryData
from .grid import FrequencyGrid, MediumProfile, SpatialGrid
from .ingest import DEFAULT_DT, TimeSeries


class InputError(ValueError):
    """Malformed or inconsistent input file."""


def _read_csv(path, header: list[str]) -> np.ndarray:
    try:
        with open(path, newline="") as fh:
            rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if not rows or [c.strip() for c in rows[0]] != header:
        raise InputError(f"{path}: expected header {','.join(header)}")
    try:
        arr = np.array([[float(c) for c in r] for r in rows[1:]], dtype=float)
    except ValueError as exc:
        raise InputError(f"{path}: non-numeric entry ({exc})") from exc
    if arr.ndim != 2 or arr.shape[1] != len(header) or arr.shape[0] == 0:
        raise InputError(f"{path}: expected {len(header)} columns per row")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{path}: non-finite entry")
    return arr


def write_profile(path, profile: MediumProfile):
    np.savetxt(path, np.column_stack([profile.grid.x, profile.c]), delimiter=",",
               header="x,c", comments="", fmt="%.17g")


def read_profile(path, c_lo: float | None = None, c_hi: float | None = None) -> MediumProfile:
    arr = _read_csv(path, ["x", "c"])
    x, c = arr[:, 0], arr[:, 1]
    if x.size < 5:
        raise InputError(f"{path}: need at least 5 grid nodes")
    grid = SpatialGrid(x.size)
    if np.max(np.abs(x - grid.x)) > 1e-9:
        raise InputError(f"{path}: x must be a uniform grid on [0, 1]")
    bounds = {"c_lo": min(1.0, c.min()) if c_lo is None else c_lo,
              "c_hi": max(10.0, c.max()) if c_hi is None else c_hi}
    try:
        return MediumProfile(grid, c, **bounds)
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from exc


def write_boundary_data(path, data: BoundaryData):
    np.savetxt(path, np.column_stack([data.k, data.g0.real, data.g0.imag]),
               delimiter=",", header="k,re_g0,im_g0", comments="", fmt="%.17g")


def read_boundary_data(path, x0: float = -1.0) -> BoundaryData:
    arr = _read_csv(path, ["k", "re_g0", "im_g0"])
    k = arr[:, 0]
    if k.size < 2:
        raise InputError(f"{path}: need at least two frequency nodes")
    step = k[0] - k[1]
    try:
        freq = FrequencyGrid(float(k[0]), float(k[-1]), float(round(step, 12)))
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from exc
    if len(freq) != k.size or np.max(np.abs(freq.nodes - k)) > 1e-9:
        raise InputError(f"{path}: k must descend on a uniform grid")
    try:
        return BoundaryData(freq, arr[:, 1] + 1j * arr[:, 2], x0)
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from exc


_HEADER_RE = re.compile(r"#\s*(dt|t0)\s*=\s*(\S+)")


def read_time_series(path) -> TimeSeries:
    """One sample per line; optional ``# dt=<seconds>`` and ``# t0=<seconds>`` headers."""
    meta = {"dt": DEFAULT_DT, "t0": 0.0}
    samples = []
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    for lineno, line in enumerate(lines, 1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            m = _HEADER_RE.match(line)
            if m:
                try:
                    meta[m.group(1)] = float(m.group(2))
                except ValueError as exc:
                    raise InputError(f"{path}:{lineno}: bad {m.group(1)}") from exc
            continue
        try:
            samples.append(float(line))
        except ValueError as exc:
            raise InputError(f"{path}:{lineno}: not a number: {line!r}") from exc
    try:
        return TimeSeries(np.array(samples), meta["dt"], meta["t0"])
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from exc


def write_time_series(path, ts: TimeSeries):
    with open(path, "w") as fh:
        fh.write(f"# dt={float(ts.dt)!r}\n")
        if ts.t0 != 0:
            fh.write(f"# t0={float(ts.t0)!r}\n")
        for s in ts.samples:
            fh.write(f"{float(s)!r}\n")


def read_json(path) -> dict:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read JSON {path}: {exc}") from exc
    if not isinstance(obj, dict):
        raise InputError(f"{path}: expected a JSON object")
    return obj


def write_json(path, obj):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_columns(path, columns: dict):
    """Whitespace-separated plot data with a commented header."""
    names = list(columns)
    arr = np.column_stack([np.asarray(columns[n], dtype=float) for n in names])
    np.savetxt(path, arr, header=" ".join(names), fmt="%.10g")


def write_gnuplot(path, datafile: str, series: list[tuple[int, int, str]],
                  xlabel: str, ylabel: str):
    """Minimal gnuplot script; ``series`` holds (xcol, ycol, title)."""
    plots = ", \\\n     ".join(
        f"'{datafile}' using {x}:{y} with lines title '{t}'" for x, y, t in series)
    Path(path).write_text(
        f"set xlabel '{xlabel}'\nset ylabel '{ylabel}'\nset grid\nplot {plots}\n")

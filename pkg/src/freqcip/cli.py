"""Command-line driver: ``simulate``, ``reconstruct`` and ``preprocess``.

Every run writes its outputs plus ``manifest.json`` into ``--out``.
Exit codes: 0 success, 2 bad input, 3 solver failure, 4 degenerate data.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .forward import ForwardSolveError, SourceConfig, add_noise, extract_boundary_data
from .ingest import DegenerateSpectrumError, PreprocessConfig, preprocess, scan_spectrum
from .inversion import AlgoConfig, ReconstructionError, reconstruct
from .io import (InputError, read_boundary_data, read_json, read_profile,
                 read_time_series, write_boundary_data, write_columns,
                 write_gnuplot, write_json, write_profile)
from .phase import PhaseUnwrapError
from .qrm import QrmError

EXIT_OK, EXIT_INPUT, EXIT_SOLVER, EXIT_DEGENERATE = 0, 2, 3, 4

log = logging.getLogger("freqcip")


@dataclasses.dataclass
class RunManifest:
    command: str
    config: dict
    inputs: dict
    outputs: list
    seed: int | None
    duration_s: float = 0.0
    version: str = __version__

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def _load_algo_config(path, seed) -> AlgoConfig:
    raw = read_json(path) if path else {}
    if seed is not None:
        raw["seed"] = seed
    try:
        return AlgoConfig.from_dict(raw)
    except (TypeError, ValueError) as exc:
        raise InputError(f"bad config: {exc}") from exc


def cmd_simulate(args, out: Path, manifest: RunManifest):
    cfg = _load_algo_config(args.config, args.seed)
    manifest.config = cfg.to_dict()
    manifest.seed = cfg.seed
    profile = read_profile(args.profile)
    if profile.grid.n_points != cfg.n_points:
        log.info("profile has %d nodes; config n_points ignored for simulation",
                 profile.grid.n_points)
    data = extract_boundary_data(profile, cfg.freq, SourceConfig(cfg.x0))
    data = add_noise(data, cfg.noise_level, cfg.seed)
    write_boundary_data(out / "boundary_data.csv", data)
    write_columns(out / "g0.dat", {"k": data.k, "re_g0": data.g0.real,
                                   "im_g0": data.g0.imag})
    write_gnuplot(out / "g0.gp", "g0.dat", [(1, 2, "Re g0"), (1, 3, "Im g0")], "k", "g0")
    manifest.outputs += ["boundary_data.csv", "g0.dat", "g0.gp"]


def cmd_reconstruct(args, out: Path, manifest: RunManifest):
    cfg = _load_algo_config(args.config, args.seed)
    manifest.config = cfg.to_dict()
    manifest.seed = cfg.seed
    data = read_boundary_data(args.data, cfg.x0)
    try:
        profile, trace = reconstruct(data, cfg)
    except ReconstructionError as exc:
        if exc.trace is not None:
            write_json(out / "trace.json", exc.trace.to_dict())
            manifest.outputs.append("trace.json")
        raise
    write_profile(out / "profile.csv", profile)
    write_json(out / "trace.json", trace.to_dict())
    cols = {"x": profile.grid.x, "c_rec": profile.c}
    series = [(1, 2, "reconstructed")]
    if args.truth:
        truth = read_profile(args.truth)
        cols["c_true"] = np.interp(profile.grid.x, truth.grid.x, truth.c)
        series.append((1, 3, "true"))
    write_columns(out / "profile.dat", cols)
    write_gnuplot(out / "profile.gp", "profile.dat", series, "x", "c(x)")
    manifest.outputs += ["profile.csv", "trace.json", "profile.dat", "profile.gp"]


def cmd_preprocess(args, out: Path, manifest: RunManifest):
    raw = read_json(args.config) if args.config else {}
    if args.calibration is not None:
        raw["calibration"] = args.calibration
    try:
        cfg = PreprocessConfig.from_dict(raw)
    except (TypeError, ValueError) as exc:
        raise InputError(f"bad config: {exc}") from exc
    manifest.config = cfg.to_dict()
    ts = read_time_series(args.timeseries)
    data = preprocess(ts, cfg)
    k_scan, u_scan = scan_spectrum(ts, cfg)
    write_boundary_data(out / "boundary_data.csv", data)
    write_columns(out / "spectrum_raw.dat", {"k": k_scan, "abs_u": np.abs(u_scan)})
    write_columns(out / "spectrum_band.dat", {
        "k": data.k, "re_g0": data.g0.real, "im_g0": data.g0.imag})
    write_gnuplot(out / "spectrum_raw.gp", "spectrum_raw.dat", [(1, 2, "|u|")], "k", "|u|")
    write_gnuplot(out / "spectrum_band.gp", "spectrum_band.dat",
                  [(1, 2, "Re g0"), (1, 3, "Im g0")], "k", "g0")
    manifest.outputs += ["boundary_data.csv", "spectrum_raw.dat", "spectrum_band.dat",
                         "spectrum_raw.gp", "spectrum_band.gp"]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="freqcip", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="JSON configuration file")
        sp.add_argument("--seed", type=int, help="overrides the config seed")
        sp.add_argument("--out", required=True, help="output directory")

    s = sub.add_parser("simulate", help="forward-simulate boundary data from a profile")
    s.add_argument("profile", help="CSV with header x,c")
    common(s)
    s.set_defaults(func=cmd_simulate)

    r = sub.add_parser("reconstruct", help="reconstruct c(x) from boundary data")
    r.add_argument("data", help="CSV with header k,re_g0,im_g0")
    r.add_argument("--truth", help="optional true profile for overlay plots")
    common(r)
    r.set_defaults(func=cmd_reconstruct)

    q = sub.add_parser("preprocess", help="time series -> boundary data")
    q.add_argument("timeseries", help="one sample per line, optional '# dt=' header")
    q.add_argument("--calibration", type=float, help="overrides the calibration factor")
    common(q)
    q.set_defaults(func=cmd_preprocess)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    inputs = {k: getattr(args, k) for k in ("profile", "data", "timeseries", "truth", "config")
              if getattr(args, k, None)}
    manifest = RunManifest(args.command, {}, inputs, [], args.seed)
    start = time.perf_counter()
    code = EXIT_OK
    try:
        args.func(args, out, manifest)
    except DegenerateSpectrumError as exc:
        print(f"error: degenerate data: {exc}", file=sys.stderr)
        code = EXIT_DEGENERATE
    except (ForwardSolveError, QrmError, ReconstructionError, PhaseUnwrapError) as exc:
        print(f"error: solver failure: {exc}", file=sys.stderr)
        code = EXIT_SOLVER
    except (InputError, ValueError) as exc:
        print(f"error: bad input: {exc}", file=sys.stderr)
        code = EXIT_INPUT
    manifest.duration_s = time.perf_counter() - start
    write_json(out / "manifest.json", {**manifest.to_dict(), "exit_code": code})
    return code


if __name__ == "__main__":
    sys.exit(main())

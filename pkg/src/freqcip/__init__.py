"""Frequency-domain reconstruction of a 1-d dielectric profile from backscatter data."""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("artifact")
except PackageNotFoundError:  # running from a source tree
    __version__ = "0.1.0"

from .forward import (BoundaryData, FieldSolution, ForwardSolveError, SourceConfig,
                      add_noise, extract_boundary_data, free_space_field,
                      solve_helmholtz_fd, solve_lippmann_schwinger)
from .grid import (FrequencyGrid, GridError, GridFunction, MediumProfile, SpatialGrid,
                   diff1, diff2, sobolev_norm, trapezoid)
from .ingest import (ContrastReport, DegenerateSpectrumError, PreprocessConfig,
                     TimeSeries, contrast, fourier_transform, preprocess)
from .inversion import (AlgoConfig, ReconstructionError, ReconstructionTrace,
                        VanishingFieldError, reconstruct)
from .phase import LogBoundary, PhaseUnwrapError, boundary_psi, unwrap_log
from .qrm import QrmError, QrmProblem, QrmSolution, h3_norm, lift_boundary, qrm_solve

__all__ = [
    "AlgoConfig", "BoundaryData", "ContrastReport", "DegenerateSpectrumError",
    "FieldSolution", "ForwardSolveError", "FrequencyGrid", "GridError", "GridFunction",
    "LogBoundary", "MediumProfile", "PhaseUnwrapError", "PreprocessConfig", "QrmError",
    "QrmProblem", "QrmSolution", "ReconstructionError", "ReconstructionTrace",
    "SourceConfig", "SpatialGrid", "TimeSeries", "VanishingFieldError", "add_noise",
    "boundary_psi", "contrast", "diff1", "diff2", "extract_boundary_data",
    "fourier_transform", "free_space_field", "h3_norm", "lift_boundary", "preprocess",
    "qrm_solve", "reconstruct", "sobolev_norm", "solve_helmholtz_fd",
    "solve_lippmann_schwinger", "trapezoid", "unwrap_log",
]

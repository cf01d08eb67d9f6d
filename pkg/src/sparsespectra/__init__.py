"""Numerical laboratory for spectra of sparse non-Hermitian random matrices.

Samples sparse and dense random-matrix ensembles from seed-addressed
counter RNG streams, computes eigenvalue and singular-value spectra with
in-package dense complex solvers, and runs Monte-Carlo experiments that
check circular-law and universality behaviour at desk scale.
"""

__version__ = "0.1.0"

from .ensembles import (
    Atom,
    EnsembleSpec,
    SeedPath,
    ShiftPattern,
    SparseParams,
    make_sparse_params,
    sample_entry,
    sample_matrix,
)
from .esd import ESD, esd_from_matrix
from .experiments import RunConfig, RunReport, run_experiment

__all__ = [
    "Atom",
    "ESD",
    "EnsembleSpec",
    "RunConfig",
    "RunReport",
    "SeedPath",
    "ShiftPattern",
    "SparseParams",
    "esd_from_matrix",
    "make_sparse_params",
    "run_experiment",
    "sample_entry",
    "sample_matrix",
]

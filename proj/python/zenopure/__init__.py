"""Purification of a subsystem by repeated confirmation of a probe state."""

from ._core import (
    BranchUnavailable,
    ConvergenceFailure,
    DensityMatrix,
    DimensionMismatch,
    Error,
    InvalidArgument,
    NoDominantEigenvalue,
    NonHermitianInput,
    NumericError,
    Operator,
    ProbeSpec,
    ZeroProbability,
    build_projector,
    condition_on_probe,
    efficiency_check,
    eig_general,
    fidelity,
    kron,
    matrix_exponential,
    model3q,
    predicted_success_probability,
    projected_evolution,
    run_protocol,
    run_shots,
    spectral_report,
)

__all__ = [name for name in dir() if not name.startswith("_")]

"""Python access to the fgcalc q-series and (f,g)-expansion library."""

from ._core import (
    FgError,
    case_ids,
    expansion_coefficients,
    inversion_deviation,
    kernel_residual,
    phi,
    qbinom,
    qpoch,
    qpoch_inf,
    run_cli,
    theta,
    verify_case,
)

__all__ = [
    "FgError",
    "case_ids",
    "expansion_coefficients",
    "inversion_deviation",
    "kernel_residual",
    "phi",
    "qbinom",
    "qpoch",
    "qpoch_inf",
    "run_cli",
    "theta",
    "verify_case",
]

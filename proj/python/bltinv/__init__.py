"""Inverse BLT factorizations: parameters, inversion, losses and noise streams."""

from ._core import (
    BltError,
    BltParams,
    InverseBltParams,
    Regime,
    canonical,
    from_interlaced,
    invert_params,
    jacobian,
    loss_gradient,
    maclaurin,
    materialize,
    max_loss,
    noise_rows,
    objective_value,
    optimize,
    polynomials,
    ratio_sum,
    regime_of,
    roots_companion,
    scale_identity_residual,
    scales_from_decays,
    sensitivity,
    toeplitz_coeffs,
    validate,
)

__all__ = [
    "BltError",
    "BltParams",
    "InverseBltParams",
    "Regime",
    "canonical",
    "from_interlaced",
    "invert_params",
    "jacobian",
    "loss_gradient",
    "maclaurin",
    "materialize",
    "max_loss",
    "noise_rows",
    "objective_value",
    "optimize",
    "polynomials",
    "ratio_sum",
    "regime_of",
    "roots_companion",
    "scale_identity_residual",
    "scales_from_decays",
    "sensitivity",
    "toeplitz_coeffs",
    "validate",
]

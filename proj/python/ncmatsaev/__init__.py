"""Python access to the ncmatsaev core (norm estimates, dilations, Fock tools)."""

from ._core import (
    NcmError,
    certify_schur,
    dilate_and_verify,
    discretize_kernel,
    gaussian_semigroup_dilate,
    matrix_pnorm,
    norm_chain,
    poly_norm,
    q_gram,
    schatten_norm,
    schoenberg_check,
    schur_apply,
    sigma_norm,
    singular_values,
    sup_circle,
    wick_trace,
)

__all__ = [
    "NcmError",
    "certify_schur",
    "dilate_and_verify",
    "discretize_kernel",
    "gaussian_semigroup_dilate",
    "matrix_pnorm",
    "norm_chain",
    "poly_norm",
    "q_gram",
    "schatten_norm",
    "schoenberg_check",
    "schur_apply",
    "sigma_norm",
    "singular_values",
    "sup_circle",
    "wick_trace",
]

"""Bayesian variable clustering with a noisy block-diagonal precision."""

from ._vclust import (
    DataError,
    InvalidArgument,
    NumericalError,
    SampleStats,
    anmi,
    basic_log_marginal,
    canonicalize,
    chib_log_marginal,
    generate,
    linkage_candidates,
    score,
    select,
    solve_map,
    spectral_candidates,
    variational_log_marginal,
)

__all__ = [
    "DataError",
    "InvalidArgument",
    "NumericalError",
    "SampleStats",
    "anmi",
    "basic_log_marginal",
    "canonicalize",
    "chib_log_marginal",
    "generate",
    "linkage_candidates",
    "score",
    "select",
    "solve_map",
    "spectral_candidates",
    "variational_log_marginal",
]

"""Maximal and gentle quantum leakage of classical-quantum ensembles."""

from ._qleak import (
    Ensemble,
    InvalidInput,
    NotConverged,
    PreconditionFailed,
    bound_sweep,
    certify,
    depolarize,
    depolarized_leakage,
    epsilon_prime,
    exact_round_statistics,
    gentle_interval,
    gentle_povm,
    grid_oracle,
    lower_bound,
    maximal_leakage,
    positive_part,
    povm_leakage,
    simulate,
    trace_distance,
)

__all__ = [
    "Ensemble",
    "InvalidInput",
    "NotConverged",
    "PreconditionFailed",
    "bound_sweep",
    "certify",
    "depolarize",
    "depolarized_leakage",
    "epsilon_prime",
    "exact_round_statistics",
    "gentle_interval",
    "gentle_povm",
    "grid_oracle",
    "lower_bound",
    "maximal_leakage",
    "positive_part",
    "povm_leakage",
    "simulate",
    "trace_distance",
]

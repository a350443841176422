"""Deterministic coresets for constrained least-squares regression."""

from richcore._core import (
    CoresetBundle,
    CoresetOperator,
    NumericalError,
    PreconditionError,
    SolverError,
    agnostic_coreset,
    apply,
    arbitrary_constrained_coreset,
    dual_set_spectral,
    dual_set_spectral_frobenius,
    error_ratio,
    hard_instance_for_coreset,
    lift_block_diagonal,
    multi_objective_coreset,
    multiple_frobenius_coreset,
    multiple_spectral_coreset,
    numerical_rank,
    pseudoinverse,
    simple_coreset,
    single_set_spectral,
    solve_nnls,
    solve_on_coreset,
    solve_unconstrained,
    two_point_instance,
    worst_ratio_over_coresets,
)

__all__ = [
    "CoresetBundle",
    "CoresetOperator",
    "NumericalError",
    "PreconditionError",
    "SolverError",
    "agnostic_coreset",
    "apply",
    "arbitrary_constrained_coreset",
    "dual_set_spectral",
    "dual_set_spectral_frobenius",
    "error_ratio",
    "hard_instance_for_coreset",
    "lift_block_diagonal",
    "multi_objective_coreset",
    "multiple_frobenius_coreset",
    "multiple_spectral_coreset",
    "numerical_rank",
    "pseudoinverse",
    "simple_coreset",
    "single_set_spectral",
    "solve_nnls",
    "solve_on_coreset",
    "solve_unconstrained",
    "two_point_instance",
    "worst_ratio_over_coresets",
]

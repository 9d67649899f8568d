"""Regularized continuous Newton flow for monotone operator equations F(u) = f."""

from ._dsm import (
    LikelyUnsolvable,
    NonConvergence,
    PreconditionViolation,
    Problem,
    Schedule,
    UsageError,
    check_admissible,
    check_monotone,
    gallery,
    integrate,
    make_problem,
    minimal_norm_limit,
    problem_names,
    run_cli,
    scaled_norm_sweep,
    solve_regularized,
    solve_shifted,
    verify,
)

__all__ = [
    "LikelyUnsolvable",
    "NonConvergence",
    "PreconditionViolation",
    "Problem",
    "Schedule",
    "UsageError",
    "check_admissible",
    "check_monotone",
    "gallery",
    "integrate",
    "make_problem",
    "minimal_norm_limit",
    "problem_names",
    "run_cli",
    "scaled_norm_sweep",
    "solve_regularized",
    "solve_shifted",
    "verify",
]

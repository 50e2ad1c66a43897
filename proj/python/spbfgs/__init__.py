"""SP-BFGS: a secant-penalized BFGS update for noisy optimization."""

from ._spbfgs import (
    SpbfgsError,
    bfgs_update,
    curvature_ok,
    evaluate,
    minimize,
    oracle_penalized_qp,
    penalty_scalars,
    problem_info,
    problem_names,
    run_config,
    spbfgs_inverse_update,
    spbfgs_update,
    verify,
)

__all__ = [
    "SpbfgsError",
    "bfgs_update",
    "curvature_ok",
    "evaluate",
    "minimize",
    "oracle_penalized_qp",
    "penalty_scalars",
    "problem_info",
    "problem_names",
    "run_config",
    "spbfgs_inverse_update",
    "spbfgs_update",
    "verify",
]

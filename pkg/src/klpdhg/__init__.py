"""Nonlinear primal-dual solvers for sparse logistic regression.

The dual step uses the Kullback-Leibler divergence of the binary entropy,
which turns into a closed-form update in logit coordinates, and the step
sizes depend only on the largest row norm of the design matrix.
"""
from .core import (
    Dataset,
    DesignMatrix,
    PenaltyParams,
    log1pexp,
    mat_tvec,
    mat_vec,
    objective,
    operator_norm,
)
from .elastic_net import FixedSteps, compute_fixed_steps, iterate_once, solve
from .entropy import DualPoint, grad_psi, kl_divergence, psi, sigmoid
from .estimator import PDHGLogisticRegression, logistic_lambda_max, pdhg_logistic_path
from .exceptions import (
    ContractError,
    DataError,
    DomainError,
    EmptyPathError,
    KLPDHGError,
    OracleFailure,
    ParameterError,
    ParseError,
    UnsupportedPenaltyError,
)
from .io import load_dataset, make_correlated_problem
from .lasso import AdaptiveSteps, init_adaptive_steps, iterate_once_l1, solve_l1, step_update
from .oracle import kkt_residual, lambda_max, prox_grad_reference, spectral_norm_power_iter
from .path import PathConfig, PathResult, make_lambda_grid, solve_path
from .prox import (
    ElasticNetPenalty,
    GroupLassoPenalty,
    L1Penalty,
    Penalty,
    ZeroPenalty,
    elastic_net_prox,
    l1_prox,
    penalty_prox,
)
from .state import SolveReport, SolverState, init_state, step_operator_norm

__version__ = "0.1.0"

"""Regularization paths over a log-spaced grid of ``lam`` values."""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .core import PenaltyParams, objective
from .elastic_net import DEFAULT_MAX_ITER, DEFAULT_TOL, solve
from .exceptions import EmptyPathError, ParameterError
from .lasso import solve_l1
from .oracle import lambda_max
from .state import STEP_NORMS, dual_from_primal

__all__ = ["PathConfig", "PathResult", "make_lambda_grid", "solve_path"]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PathConfig:
    alpha: float
    n_lambda: int = 100
    lambda_min_ratio: float = 1e-3
    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER
    step_norm: str = "row"

    def __post_init__(self):
        if self.n_lambda < 2:
            raise ParameterError("n_lambda must be at least 2")
        if not 0.0 < self.lambda_min_ratio < 1.0:
            raise ParameterError("lambda_min_ratio must lie in (0, 1)")
        if not 0.0 < self.alpha <= 1.0:
            raise ParameterError("alpha must lie in (0, 1]")
        if self.step_norm not in STEP_NORMS:
            raise ParameterError(f"step_norm must be one of {STEP_NORMS}")


@dataclass
class PathResult:
    lambdas: np.ndarray
    coefficients: np.ndarray  # shape (n_lambda, n_features)
    nonzero_counts: np.ndarray
    objectives: np.ndarray
    iterations: np.ndarray
    converged: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=bool))

    @property
    def partial(self):
        """True when at least one solve ran out of iterations."""
        return not bool(np.all(self.converged))

    @property
    def total_iterations(self):
        return int(np.sum(self.iterations))


def make_lambda_grid(data, cfg):
    """``n_lambda`` log-spaced values from ``lambda_max`` down to
    ``lambda_min_ratio * lambda_max``."""
    lmax = lambda_max(data, cfg.alpha)
    if lmax == 0.0:
        raise EmptyPathError("lambda_max is zero: A^T (y - 1/2) vanishes")
    return np.geomspace(lmax, lmax * cfg.lambda_min_ratio, cfg.n_lambda)


def _solve_one(data, lam, cfg, theta0=None, s0=None):
    if cfg.alpha < 1.0:
        return solve(data, PenaltyParams(lam, cfg.alpha), tol=cfg.tol,
                     max_iter=cfg.max_iter, theta0=theta0, s0=s0, step_norm=cfg.step_norm)
    return solve_l1(data, lam, tol=cfg.tol, max_iter=cfg.max_iter, theta0=theta0, s0=s0,
                    step_norm=cfg.step_norm)


def solve_path(data, cfg, lambdas=None, *, warm_start=True, n_jobs=None):
    """Solve along a decreasing grid of ``lam`` values.

    With ``warm_start`` each solve starts from the previous solution and its
    induced dual point ``sigmoid(A theta)``. Cold solves are independent and
    may run on ``n_jobs`` threads. A solve that hits ``max_iter`` is kept
    and flagged in ``converged``.
    """
    if lambdas is None:
        lambdas = make_lambda_grid(data, cfg)
    lambdas = np.asarray(lambdas, dtype=np.float64)
    if lambdas.ndim != 1 or lambdas.size == 0 or np.any(np.diff(lambdas) >= 0):
        raise ParameterError("lambdas must be a nonempty strictly decreasing sequence")

    if warm_start:
        reports = []
        theta0 = s0 = None
        for lam in lambdas:
            rep = _solve_one(data, lam, cfg, theta0, s0)
            reports.append(rep)
            theta0 = rep.theta
            s0 = dual_from_primal(data, theta0)
    elif n_jobs is not None and n_jobs > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            reports = list(pool.map(lambda lam: _solve_one(data, lam, cfg), lambdas))
    else:
        reports = [_solve_one(data, lam, cfg) for lam in lambdas]

    coefs = np.vstack([r.theta for r in reports])
    result = PathResult(
        lambdas=lambdas,
        coefficients=coefs,
        nonzero_counts=np.count_nonzero(coefs, axis=1),
        objectives=np.array([objective(data, c, PenaltyParams(lam, cfg.alpha))
                             for c, lam in zip(coefs, lambdas)]),
        iterations=np.array([r.iterations for r in reports]),
        converged=np.array([r.converged for r in reports]),
    )
    if result.partial:
        logger.warning("%d of %d path solves did not converge",
                       int(np.sum(~result.converged)), lambdas.size)
    return result

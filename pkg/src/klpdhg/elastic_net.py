"""Fixed-step nonlinear PDHG for elastic-net logistic regression.

Each iteration takes a KL-proximal ascent step on the dual variable ``s``
(closed form in logit coordinates) and a Euclidean proximal descent step on
``theta`` (soft-thresholding with ridge shrinkage). By default the step
sizes only need the largest row norm of ``A``, so setting up a solve costs
one pass over the data. ``step_norm="spectral"`` trades a power iteration
for steps that provably converge on any design.

With ``lambda2 = m*lam*(1 - alpha) > 0`` the iterates converge linearly:
``1/2|theta* - theta_k|^2 <= rho^k (1/2|theta* - theta_0|^2 + KL(s*, s_0)/lambda2)``.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .core import mat_tvec, mat_vec, objective
from .entropy import sigmoid
from .exceptions import ParameterError
from .prox import ElasticNetPenalty, penalty_prox
from .state import (
    CONVERGED,
    MAX_ITER_REACHED,
    SolveReport,
    SolverState,
    init_state,
    penalized_objective,
    step_operator_norm,
)

__all__ = ["FixedSteps", "compute_fixed_steps", "iterate_once", "solve"]

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-8
DEFAULT_MAX_ITER = 100_000


@dataclass(frozen=True)
class FixedSteps:
    """Extrapolation weight ``rho``, dual step ``sigma``, primal step ``tau``."""

    rho: float
    sigma: float
    tau: float


def compute_fixed_steps(op_norm, lambda2):
    """Closed-form ``(rho, sigma, tau)`` from ``|A|_op`` and ``lambda2``.

    ``rho = 1 - lambda2/(2 L^2) * (sqrt(1 + 4 L^2/lambda2) - 1)``,
    ``sigma = (1 - rho)/rho`` and ``tau = (1 - rho)/(lambda2 rho)``.
    """
    op_norm = float(op_norm)
    lambda2 = float(lambda2)
    if not op_norm > 0:
        raise ParameterError(f"operator norm must be positive, got {op_norm!r}")
    if not lambda2 > 0:
        raise ParameterError(f"lambda2 must be positive, got {lambda2!r}")
    r = 4.0 * op_norm ** 2 / lambda2
    # 1 - rho = (sqrt(1 + r) - 1) * 2/r, written to avoid cancellation for tiny r
    one_minus_rho = 2.0 / (math.sqrt(1.0 + r) + 1.0)
    rho = 1.0 - one_minus_rho
    if not 0.0 < rho < 1.0:
        raise ParameterError(
            f"step parameters degenerate (rho={rho!r}); lambda2 is too large "
            "relative to the operator norm for float64")
    sigma = one_minus_rho / rho
    tau = one_minus_rho / (lambda2 * rho)
    return FixedSteps(rho=rho, sigma=sigma, tau=tau)


def iterate_once(state, steps, data, p=None, penalty=None):
    """One primal-dual iteration; returns a new :class:`SolverState`.

    ``penalty`` overrides the elastic-net penalty built from ``p`` and must
    be expressed in solver scaling (weights multiplied by ``m``).
    """
    if penalty is None:
        penalty = ElasticNetPenalty(p.lambda1(data.m), p.lambda2(data.m))
    rho, sigma, tau = steps.rho, steps.sigma, steps.tau
    u, u_prev = state.u_curr, state.u_prev

    v = (sigma * u + sigma * rho * (u - u_prev) + state.v) / (1.0 + sigma)
    s = sigmoid(v)
    theta_hat = state.theta - tau * mat_tvec(data.design, s.s - data.y)
    theta = penalty_prox(penalty, theta_hat, tau)
    u_next = mat_vec(data.design, theta)
    return SolverState(theta=theta, u_curr=u_next, u_prev=u, v=v, s=s, k=state.k + 1)


def _report_objective(data, theta, p, penalty):
    if p is not None:
        return objective(data, theta, p)
    return penalized_objective(data, theta, penalty)


def solve(data, p=None, *, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER,
          theta0=None, s0=None, penalty=None, callback=None, step_norm="row"):
    """Minimize the elastic-net penalized logistic loss.

    Parameters
    ----------
    data : Dataset
    p : PenaltyParams
        Requires ``alpha < 1``. May be omitted when ``penalty`` is given.
    tol : float
        Stop once ``|u - v|_2 <= tol * max(1, |u|_2)``.
    max_iter : int
    theta0, s0 : array-like, optional
        Warm start. Default is ``theta0 = 0`` and ``s0 = 1/2``.
    penalty : Penalty, optional
        Strongly convex penalty in solver scaling; its
        ``strong_convexity`` replaces ``lambda2`` in the step sizes.
    callback : callable, optional
        Called with the state after initialisation and after every
        iteration.
    step_norm : {"row", "spectral"}
        Matrix constant for the step sizes, see
        :func:`klpdhg.state.step_operator_norm`.

    Returns
    -------
    SolveReport
        Running out of iterations is reported through ``termination``, not
        raised.
    """
    own_penalty = penalty is None
    if own_penalty:
        if p is None:
            raise ParameterError("either penalty parameters or a penalty is required")
        if p.alpha >= 1.0:
            raise ParameterError(
                "the fixed-step solver needs alpha < 1; use the lasso solver for alpha = 1")
        penalty = ElasticNetPenalty(p.lambda1(data.m), p.lambda2(data.m))
    lambda2 = penalty.strong_convexity
    if not lambda2 > 0:
        raise ParameterError("the fixed-step solver needs a strongly convex penalty")
    if max_iter < 0:
        raise ParameterError("max_iter must be nonnegative")

    op = step_operator_norm(data.design, step_norm)
    if op == 0.0:
        # A = 0: the loss is constant and the penalty minimiser is 0
        theta = np.zeros(data.n)
        s = sigmoid(np.zeros(data.m))
        return SolveReport(theta=theta, iterations=0, residual_history=np.zeros(0),
                           termination=CONVERGED, objective=_report_objective(
                               data, theta, p if own_penalty else None, penalty),
                           s=s.s)
    steps = compute_fixed_steps(op, lambda2)
    logger.debug("fixed steps: %s (|A|_op=%g)", steps, op)

    state = init_state(data, theta0, s0)
    if callback is not None:
        callback(state)
    history = np.empty(max_iter)
    termination = MAX_ITER_REACHED
    for it in range(max_iter):
        state = iterate_once(state, steps, data, penalty=penalty)
        res = state.residual()
        history[it] = res
        if callback is not None:
            callback(state)
        if res <= tol * max(1.0, float(np.linalg.norm(state.u_curr))):
            termination = CONVERGED
            break
    history = history[:state.k]
    if termination != CONVERGED:
        hint = "; step_norm='spectral' rules out divergence" if step_norm == "row" else ""
        logger.warning("elastic-net solve stopped at max_iter=%d (residual %.3g)%s",
                       max_iter, history[-1] if history.size else float("nan"), hint)
    return SolveReport(
        theta=state.theta,
        iterations=state.k,
        residual_history=history,
        termination=termination,
        objective=_report_objective(data, state.theta, p if own_penalty else None, penalty),
        s=state.s.s,
        steps={"rho": steps.rho, "sigma": steps.sigma, "tau": steps.tau, "op_norm": op},
    )

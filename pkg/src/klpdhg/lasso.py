"""Accelerated nonlinear PDHG for lasso logistic regression.

Without a ridge term the primal step is no longer strongly convex, so the
fixed steps of :mod:`klpdhg.elastic_net` do not apply. Instead the step
sizes adapt every iteration::

    rho+ = 1/sqrt(1 + sigma),  sigma+ = rho+ * sigma,  tau+ = tau / rho+

starting from ``sigma0 = 1/(tau0 |A|_op^2)``. The product
``sigma * tau * |A|_op^2`` stays equal to one and the iterates converge at
an ``O(1/k^2)`` rate.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .core import PenaltyParams, mat_tvec, mat_vec, objective
from .entropy import sigmoid
from .exceptions import ParameterError
from .prox import L1Penalty, penalty_prox
from .state import (
    CONVERGED,
    MAX_ITER_REACHED,
    SolveReport,
    SolverState,
    init_state,
    penalized_objective,
    step_operator_norm,
)

__all__ = [
    "AdaptiveSteps",
    "init_adaptive_steps",
    "step_update",
    "iterate_once_l1",
    "solve_l1",
    "rate_lower_bound",
]

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-8
DEFAULT_MAX_ITER = 100_000
DEFAULT_RHO0 = 0.5


@dataclass(frozen=True)
class AdaptiveSteps:
    rho: float
    sigma: float
    tau: float
    op_norm_sq: float


def init_adaptive_steps(op_norm, tau0=None, rho0=DEFAULT_RHO0):
    """Initial steps; ``tau0`` defaults to ``1/(2 |A|_op^2)``.

    That default maximizes the ``k^2`` coefficient of :func:`rate_lower_bound`.
    """
    op_norm = float(op_norm)
    if not op_norm > 0:
        raise ParameterError(f"operator norm must be positive, got {op_norm!r}")
    if not 0.0 < rho0 < 1.0:
        raise ParameterError(f"rho0 must lie in (0, 1), got {rho0!r}")
    L2 = op_norm * op_norm
    if tau0 is None:
        tau0 = 1.0 / (2.0 * L2)
    elif not tau0 > 0:
        raise ParameterError(f"tau0 must be positive, got {tau0!r}")
    return AdaptiveSteps(rho=float(rho0), sigma=1.0 / (tau0 * L2), tau=float(tau0),
                         op_norm_sq=L2)


def step_update(steps):
    rho = 1.0 / math.sqrt(1.0 + steps.sigma)
    return AdaptiveSteps(rho=rho, sigma=rho * steps.sigma, tau=steps.tau / rho,
                         op_norm_sq=steps.op_norm_sq)


def rate_lower_bound(tau0, op_norm, k):
    """Lower bound on the growth of the accelerated scheme after ``k`` iterations.

    ``2 tau0 L^2/(1 + 2 tau0 L^2) * k + 2 tau0/(1 + 2 tau0 L^2)^2 * k^2``
    with ``L = |A|_op``.
    """
    a = 2.0 * tau0 * op_norm ** 2
    return a / (1.0 + a) * k + 2.0 * tau0 / (1.0 + a) ** 2 * k ** 2


def iterate_once_l1(state, steps, data, lam, penalty=None):
    """One accelerated iteration; returns ``(new_state, new_steps)``.

    ``lam`` is the unscaled lasso weight; the soft threshold is
    ``m * lam * tau``. ``penalty`` (solver scaling) replaces the l1 term.
    """
    if penalty is None:
        penalty = L1Penalty(data.m * lam)
    rho, sigma, tau = steps.rho, steps.sigma, steps.tau
    u, u_prev = state.u_curr, state.u_prev

    v = (sigma * u + sigma * rho * (u - u_prev) + state.v) / (1.0 + sigma)
    s = sigmoid(v)
    theta_hat = state.theta - tau * mat_tvec(data.design, s.s - data.y)
    theta = penalty_prox(penalty, theta_hat, tau)
    u_next = mat_vec(data.design, theta)
    new_state = SolverState(theta=theta, u_curr=u_next, u_prev=u, v=v, s=s, k=state.k + 1)
    return new_state, step_update(steps)


def solve_l1(data, lam=None, *, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER,
             theta0=None, s0=None, tau0=None, rho0=DEFAULT_RHO0, penalty=None,
             callback=None, step_norm="row"):
    """Minimize the lasso penalized logistic loss.

    Parameters
    ----------
    data : Dataset
    lam : float
        Lasso weight (``alpha = 1``). May be omitted when ``penalty`` is given.
    tol, max_iter, theta0, s0 :
        As in :func:`klpdhg.elastic_net.solve`.
    tau0, rho0 : float, optional
        Initial primal step and extrapolation weight.
    penalty : Penalty, optional
        Convex penalty in solver scaling, used instead of ``m * lam * |x|_1``.
    callback : callable, optional
        Called as ``callback(state, steps)`` after initialisation and after
        every iteration.
    step_norm : {"row", "spectral"}
        Matrix constant used in place of ``|A|_op``, see
        :func:`klpdhg.state.step_operator_norm`.

    Returns
    -------
    SolveReport
        ``steps`` holds the per-iteration ``rho``, ``sigma`` and ``tau``
        arrays (the values used by each iteration).
    """
    p = None
    if penalty is None:
        if lam is None:
            raise ParameterError("either lam or a penalty is required")
        p = PenaltyParams(lam, 1.0)
        penalty = L1Penalty(data.m * p.lam)
    if max_iter < 0:
        raise ParameterError("max_iter must be nonnegative")

    def report_objective(theta):
        return objective(data, theta, p) if p is not None else penalized_objective(
            data, theta, penalty)

    op = step_operator_norm(data.design, step_norm)
    if op == 0.0:
        theta = np.zeros(data.n)
        return SolveReport(theta=theta, iterations=0, residual_history=np.zeros(0),
                           termination=CONVERGED, objective=report_objective(theta),
                           s=sigmoid(np.zeros(data.m)).s)
    steps = init_adaptive_steps(op, tau0, rho0)
    tau_init = steps.tau

    state = init_state(data, theta0, s0)
    if callback is not None:
        callback(state, steps)
    history = np.empty(max_iter)
    rhos = np.empty(max_iter)
    sigmas = np.empty(max_iter)
    taus = np.empty(max_iter)
    termination = MAX_ITER_REACHED
    for it in range(max_iter):
        rhos[it], sigmas[it], taus[it] = steps.rho, steps.sigma, steps.tau
        state, steps = iterate_once_l1(state, steps, data, None, penalty=penalty)
        res = state.residual()
        history[it] = res
        if callback is not None:
            callback(state, steps)
        if res <= tol * max(1.0, float(np.linalg.norm(state.u_curr))):
            termination = CONVERGED
            break
    k = state.k
    if termination != CONVERGED:
        hint = "; step_norm='spectral' rules out divergence" if step_norm == "row" else ""
        logger.warning("lasso solve stopped at max_iter=%d (residual %.3g)%s",
                       max_iter, history[k - 1] if k else float("nan"), hint)
    return SolveReport(
        theta=state.theta,
        iterations=k,
        residual_history=history[:k],
        termination=termination,
        objective=report_objective(state.theta),
        s=state.s.s,
        steps={"rho": rhos[:k], "sigma": sigmas[:k], "tau": taus[:k],
               "op_norm": op, "tau0": tau_init},
    )

"""Iterate bookkeeping shared by the two primal-dual solvers."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import log1pexp, mat_vec, operator_norm
from .entropy import DualPoint, grad_psi, sigmoid
from .exceptions import ContractError, ParameterError
from .oracle import spectral_norm_power_iter

__all__ = ["SolverState", "SolveReport", "init_state", "CONVERGED", "MAX_ITER_REACHED"]

CONVERGED = "converged"
MAX_ITER_REACHED = "max_iter_reached"

STEP_NORMS = ("row", "spectral")
SPECTRAL_SAFETY = 1.01


@dataclass
class SolverState:
    """Primal iterate, the two most recent ``A @ theta``, logits and dual point.

    ``u_prev`` holds ``A @ theta`` from the previous iteration and feeds the
    extrapolation term of the dual step.
    """

    theta: np.ndarray
    u_curr: np.ndarray
    u_prev: np.ndarray
    v: np.ndarray
    s: DualPoint
    k: int = 0

    def residual(self):
        """``||u - v||_2``, which vanishes at a saddle point."""
        return float(np.linalg.norm(self.u_curr - self.v))


@dataclass
class SolveReport:
    theta: np.ndarray
    iterations: int
    residual_history: np.ndarray
    termination: str
    objective: float
    s: np.ndarray
    steps: dict = field(default_factory=dict)

    @property
    def converged(self):
        return self.termination == CONVERGED

    @property
    def final_residual(self):
        if len(self.residual_history) == 0:
            return float("nan")
        return float(self.residual_history[-1])


def init_state(data, theta0=None, s0=None):
    """Starting state with ``theta^(-1) = theta^(0)``.

    Defaults to ``theta0 = 0`` and ``s0 = 1/2`` everywhere (zero logits).
    """
    m, n = data.m, data.n
    theta = np.zeros(n) if theta0 is None else np.array(theta0, dtype=np.float64)
    if theta.shape != (n,):
        raise ContractError(f"theta0 must have length {n}, got shape {theta.shape}")
    if s0 is None:
        s = sigmoid(np.zeros(m))
    elif isinstance(s0, DualPoint):
        s = s0
    else:
        s = DualPoint(s0)
    if len(s) != m:
        raise ContractError(f"s0 must have length {m}, got {len(s)}")
    v = grad_psi(s)
    u = mat_vec(data.design, theta)
    return SolverState(theta=theta, u_curr=u, u_prev=u.copy(), v=v, s=s, k=0)


def dual_from_primal(data, theta):
    """Dual point induced by a primal iterate, ``sigmoid(A @ theta)``."""
    return sigmoid(mat_vec(data.design, theta))


def penalized_objective(data, theta, penalty):
    """Loss plus ``penalty.value(theta) / m`` for a penalty in solver scaling."""
    u = mat_vec(data.design, theta)
    m = data.m
    return float((np.sum(log1pexp(u)) - np.dot(data.y, u) + penalty.value(theta)) / m)


def step_operator_norm(design, step_norm="row"):
    """Matrix constant that sets the primal-dual step sizes.

    ``"row"`` is the largest row norm of ``A``. It is cheap and usually
    gives the fastest iterations, but on strongly correlated designs at
    small ``lam`` the iteration can fail to settle. ``"spectral"`` uses
    ``max(row norm, 1.01 * |A|_2 / 2)``, for which convergence is
    guaranteed since the binary KL divergence dominates ``2 |s - s'|_2^2``.
    It costs a power iteration.
    """
    if step_norm not in STEP_NORMS:
        raise ParameterError(f"step_norm must be one of {STEP_NORMS}, got {step_norm!r}")
    row = operator_norm(design)
    if step_norm == "row" or row == 0.0:
        return row
    return max(row, SPECTRAL_SAFETY * spectral_norm_power_iter(design) / 2.0)

"""Independent checks: optimality residuals, the zero-solution threshold and
a proximal-gradient reference solver.

Nothing here shares code with the primal-dual solvers beyond the matrix
kernels, so agreement between the two is meaningful.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .core import PenaltyParams, mat_tvec, mat_vec
from .exceptions import OracleFailure, ParameterError

__all__ = [
    "KktReport",
    "kkt_residual",
    "lambda_max",
    "prox_grad_reference",
    "spectral_norm_power_iter",
]

ORACLE_MAX_ITER = 10_000_000
POWER_ITERS = 200
POWER_SEED = 20240601
STEP_SAFETY = 1.01


@dataclass(frozen=True)
class KktReport:
    """Sup-norm violations of the two optimality conditions."""

    stationarity_residual: float
    dual_consistency_residual: float

    @property
    def max(self):
        return max(self.stationarity_residual, self.dual_consistency_residual)


def _stationarity(data, theta, s, lam, alpha):
    g = mat_tvec(data.design, data.y - s) / data.m - lam * (1.0 - alpha) * theta
    thresh = lam * alpha
    nz = theta != 0
    res = np.where(nz, np.abs(g - thresh * np.sign(theta)),
                   np.maximum(0.0, np.abs(g) - thresh))
    return float(res.max()) if res.size else 0.0


def kkt_residual(data, theta, p, s=None):
    """Optimality residuals of ``theta`` (and optionally a dual point ``s``).

    Stationarity is measured coordinatewise: where ``theta_j != 0`` the
    gradient term must equal ``lam*alpha*sign(theta_j)``, where
    ``theta_j == 0`` it must lie in ``[-lam*alpha, lam*alpha]``. Without an
    explicit ``s`` the dual point is taken as ``sigmoid(A theta)`` and the
    consistency residual is zero.
    """
    theta = np.asarray(theta, dtype=np.float64)
    s_star = expit(mat_vec(data.design, theta))
    if s is None:
        s_used = s_star
        dual = 0.0
    else:
        s_used = np.asarray(s, dtype=np.float64)
        dual = float(np.max(np.abs(s_used - s_star)))
    return KktReport(_stationarity(data, theta, s_used, p.lam, p.alpha), dual)


def lambda_max(data, alpha):
    """Smallest ``lam`` for which ``theta = 0`` is optimal.

    At ``theta = 0`` the dual point is ``1/2``, so the threshold is
    ``|A^T (y - 1/2)|_inf / (m * alpha)``.
    """
    alpha = float(alpha)
    if not 0.0 < alpha <= 1.0:
        raise ParameterError(f"alpha must lie in (0, 1] for a finite threshold, got {alpha!r}")
    g = mat_tvec(data.design, data.y - 0.5)
    return float(np.max(np.abs(g)) / (data.m * alpha))


def spectral_norm_power_iter(A, iters=POWER_ITERS, seed=POWER_SEED):
    """Power-iteration estimate of the largest singular value of ``A``.

    The estimate ``|A x|`` for a unit ``x`` never exceeds the true value.
    """
    if iters < 1:
        raise ParameterError("iters must be at least 1")
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(A.n)
    x /= np.linalg.norm(x)
    for _ in range(iters):
        w = mat_tvec(A, mat_vec(A, x))
        nrm = np.linalg.norm(w)
        if nrm == 0.0:
            return 0.0
        x = w / nrm
    return float(np.linalg.norm(mat_vec(A, x)))


def _smooth_grad(data, theta, ridge):
    s = expit(mat_vec(data.design, theta))
    return mat_tvec(data.design, s - data.y) / data.m + ridge * theta


def prox_grad_reference(data, p, tol=1e-10, *, theta0=None, accelerated=False,
                        max_iter=ORACLE_MAX_ITER, check_every=10):
    """Reference minimizer by proximal gradient with step ``1/L``.

    ``L = |A|_2^2/(4m) + lam(1 - alpha)`` bounds the Lipschitz constant of
    the smooth part, with ``|A|_2`` from power iteration inflated by 1%.
    Iterates until :func:`kkt_residual` stationarity is at most ``tol``.

    ``accelerated=True`` adds Nesterov momentum with gradient-based
    restarts, which is much faster on poorly conditioned lasso problems.

    Raises
    ------
    OracleFailure
        If ``max_iter`` iterations do not reach ``tol``.
    """
    if not tol > 0:
        raise ParameterError("tol must be positive")
    if not isinstance(p, PenaltyParams):
        raise ParameterError("p must be PenaltyParams")
    ridge = p.lam * (1.0 - p.alpha)
    l1 = p.lam * p.alpha
    norm2 = spectral_norm_power_iter(data.design) * STEP_SAFETY
    L = norm2 * norm2 / (4.0 * data.m) + ridge
    if L == 0.0:
        return np.zeros(data.n)
    step = 1.0 / L

    def prox(w):
        return np.sign(w) * np.maximum(np.abs(w) - step * l1, 0.0)

    x = np.zeros(data.n) if theta0 is None else np.array(theta0, dtype=np.float64)
    z = x.copy()
    q = 1.0
    for it in range(max_iter):
        if it % check_every == 0:
            if _stationarity(data, x, expit(mat_vec(data.design, x)), p.lam, p.alpha) <= tol:
                return x
        point = z if accelerated else x
        x_new = prox(point - step * _smooth_grad(data, point, ridge))
        if accelerated:
            if np.dot(z - x_new, x_new - x) > 0:
                q = 1.0
                z = x_new.copy()
            else:
                q_new = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * q * q))
                z = x_new + ((q - 1.0) / q_new) * (x_new - x)
                q = q_new
        x = x_new
    res = _stationarity(data, x, expit(mat_vec(data.design, x)), p.lam, p.alpha)
    if res <= tol:
        return x
    raise OracleFailure(
        f"proximal gradient reached {max_iter} iterations with stationarity {res:.3e} > {tol:.1e}")

"""scikit-learn compatible front end."""
from __future__ import annotations

import numbers
import warnings

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import ConvergenceWarning
from sklearn.linear_model._base import LinearClassifierMixin, SparseCoefMixin
from sklearn.utils.multiclass import check_classification_targets, type_of_target
from sklearn.utils.validation import check_is_fitted, validate_data

from .core import Dataset, DesignMatrix, PenaltyParams
from .elastic_net import solve
from .lasso import solve_l1
from .oracle import lambda_max
from .path import PathConfig, solve_path
from .state import STEP_NORMS, dual_from_primal

__all__ = ["PDHGLogisticRegression", "pdhg_logistic_path", "logistic_lambda_max"]


def _to_dataset(X, y01):
    return Dataset(DesignMatrix(X), y01)


class PDHGLogisticRegression(LinearClassifierMixin, SparseCoefMixin, BaseEstimator):
    """Binary logistic regression with an elastic-net penalty, fitted by
    nonlinear primal-dual iterations.

    Minimizes::

        mean(log(1 + exp(X w))) - <y, X w>/n_samples
            + lam * (alpha * ||w||_1 + (1 - alpha)/2 * ||w||_2^2)

    with ``y`` encoded as 0/1 (``classes_[1]`` is the positive class). There
    is no intercept; append a constant column to ``X`` if one is needed.

    Parameters
    ----------
    lam : float, default=1.0
        Overall penalty strength, must be positive.
    alpha : float, default=0.9
        Mixing between l1 (``alpha=1``) and squared l2. ``alpha < 1`` uses
        the linearly convergent fixed-step solver, ``alpha = 1`` the
        accelerated lasso solver.
    tol : float, default=1e-8
        Relative tolerance on ``||X w - v||_2``, where ``v`` are the dual logits.
    max_iter : int, default=100000
    warm_start : bool, default=False
        Reuse ``coef_`` from a previous fit as the starting point.
    step_norm : {"row", "spectral"}, default="spectral"
        Matrix constant behind the step sizes. ``"spectral"`` spends a power
        iteration on steps that converge on any design. ``"row"`` uses the
        largest row norm, which is cheaper and often 1.3 to 3 times faster,
        but can oscillate forever on correlated predictors.

    Attributes
    ----------
    coef_ : ndarray of shape (1, n_features)
    intercept_ : ndarray of shape (1,)
        Always zero.
    classes_ : ndarray of shape (2,)
    n_iter_ : int
    converged_ : bool
    report_ : SolveReport
    """

    def __init__(self, lam=1.0, alpha=0.9, tol=1e-8, max_iter=100_000, warm_start=False,
                 step_norm="spectral"):
        self.lam = lam
        self.alpha = alpha
        self.tol = tol
        self.max_iter = max_iter
        self.warm_start = warm_start
        self.step_norm = step_norm

    def _validate_hyperparams(self):
        if not isinstance(self.lam, numbers.Real) or not self.lam > 0:
            raise ValueError(f"lam must be a positive number, got {self.lam!r}")
        if not isinstance(self.alpha, numbers.Real) or not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha!r}")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if not isinstance(self.max_iter, numbers.Integral) or self.max_iter < 1:
            raise ValueError("max_iter must be a positive integer")
        if self.step_norm not in STEP_NORMS:
            raise ValueError(f"step_norm must be one of {STEP_NORMS}, got {self.step_norm!r}")

    def fit(self, X, y):
        self._validate_hyperparams()
        X, y = validate_data(self, X, y, accept_sparse="csr", dtype=np.float64,
                             order="C")
        check_classification_targets(y)
        y_type = type_of_target(y, input_name="y", raise_unknown=True)
        if y_type not in ("binary", "unknown") and np.unique(y).size > 2:
            raise ValueError(
                "Only binary classification is supported. The type of the target "
                f"is {y_type}.")
        classes = np.unique(y)
        if classes.size < 2:
            raise ValueError(
                f"{type(self).__name__} needs samples of two classes in the data, "
                f"but the data contains only one class: {classes[0]!r}")
        self.classes_ = classes
        data = _to_dataset(X, (y == classes[1]).astype(np.float64))

        theta0 = s0 = None
        if self.warm_start and getattr(self, "coef_", None) is not None \
                and self.coef_.shape == (1, data.n):
            theta0 = np.array(self.coef_[0])
            s0 = dual_from_primal(data, theta0)

        if self.alpha < 1.0:
            rep = solve(data, PenaltyParams(self.lam, self.alpha), tol=self.tol,
                        max_iter=self.max_iter, theta0=theta0, s0=s0,
                        step_norm=self.step_norm)
        else:
            rep = solve_l1(data, self.lam, tol=self.tol, max_iter=self.max_iter,
                           theta0=theta0, s0=s0, step_norm=self.step_norm)
        if not rep.converged:
            hint = " Try step_norm='spectral'." if self.step_norm == "row" else ""
            warnings.warn(f"Solver stopped at max_iter={self.max_iter} with residual "
                          f"{rep.final_residual:.3g}.{hint}", ConvergenceWarning)
        self.report_ = rep
        self.coef_ = rep.theta.reshape(1, -1)
        self.intercept_ = np.zeros(1)
        self.n_iter_ = rep.iterations
        self.converged_ = rep.converged
        return self

    def predict_proba(self, X):
        check_is_fitted(self)
        p1 = 1.0 / (1.0 + np.exp(-np.clip(self.decision_function(X), -700, 700)))
        return np.column_stack([1.0 - p1, p1])

    def predict_log_proba(self, X):
        return np.log(self.predict_proba(X))

    def __sklearn_tags__(self):
        tags = super().__sklearn_tags__()
        tags.input_tags.sparse = True
        tags.classifier_tags.multi_class = False
        return tags


def pdhg_logistic_path(X, y, alpha=0.9, n_lambda=100, lambda_min_ratio=1e-3,
                       lambdas=None, tol=1e-8, max_iter=100_000, warm_start=True,
                       step_norm="spectral"):
    """Regularization path for :class:`PDHGLogisticRegression`.

    ``y`` must hold two classes; the larger one is coded as 1. ``step_norm``
    has the same meaning as on the estimator.

    Returns
    -------
    PathResult
    """
    X = np.asarray(X, dtype=np.float64) if not hasattr(X, "tocsr") else X.tocsr()
    y = np.asarray(y)
    classes = np.unique(y)
    if classes.size != 2:
        raise ValueError("need exactly two classes")
    data = _to_dataset(X, (y == classes[1]).astype(np.float64))
    cfg = PathConfig(alpha=alpha, n_lambda=n_lambda, lambda_min_ratio=lambda_min_ratio,
                     tol=tol, max_iter=max_iter, step_norm=step_norm)
    return solve_path(data, cfg, lambdas, warm_start=warm_start)


def logistic_lambda_max(X, y, alpha=0.9):
    """``lambda_max`` for the data as :class:`PDHGLogisticRegression` encodes it."""
    y = np.asarray(y)
    classes = np.unique(y)
    if classes.size != 2:
        raise ValueError("need exactly two classes")
    return lambda_max(_to_dataset(X, (y == classes[1]).astype(np.float64)), alpha)

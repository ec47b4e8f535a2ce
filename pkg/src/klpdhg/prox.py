"""Proximal maps for the primal step.

Besides the two closed-form soft-thresholding maps, this module defines a
small penalty protocol so that other regularizers can be plugged into the
solvers. A penalty exposes ``prox(theta_hat, step)`` and declares the
strong-convexity modulus it guarantees; the elastic-net solver needs a
positive modulus, the accelerated lasso solver accepts zero.
"""
from __future__ import annotations

import numpy as np

from .exceptions import ParameterError, UnsupportedPenaltyError

__all__ = [
    "elastic_net_prox",
    "l1_prox",
    "Penalty",
    "ZeroPenalty",
    "L1Penalty",
    "ElasticNetPenalty",
    "GroupLassoPenalty",
    "penalty_prox",
]


def _check_weight(w, name):
    w = float(w)
    if not np.isfinite(w) or w < 0:
        raise ParameterError(f"{name} must be finite and nonnegative, got {w!r}")
    return w


def elastic_net_prox(theta_hat, l1_weight, ridge_weight=0.0):
    """Soft-threshold then shrink.

    Returns ``sign(t) * max(0, (|t| - l1_weight) / (1 + ridge_weight))``
    componentwise, the minimizer of
    ``l1_weight*|x|_1 + ridge_weight/2*|x|^2 + 1/2*|x - theta_hat|^2``.
    """
    l1_weight = _check_weight(l1_weight, "l1_weight")
    ridge_weight = _check_weight(ridge_weight, "ridge_weight")
    t = np.asarray(theta_hat, dtype=np.float64)
    mag = np.maximum(np.abs(t) - l1_weight, 0.0)
    if ridge_weight:
        mag = mag / (1.0 + ridge_weight)
    # adding 0.0 turns the -0.0 from sign(t) * 0 into +0.0
    return np.sign(t) * mag + 0.0


def l1_prox(theta_hat, weight):
    """Plain soft-thresholding, ``sign(t) * max(0, |t| - weight)``."""
    return elastic_net_prox(theta_hat, weight, 0.0)


class Penalty:
    """Base class for prox-capable penalties.

    Subclasses override :meth:`prox`. ``strong_convexity`` is the modulus
    (in the Euclidean norm) the penalty author vouches for; the fixed-step
    solver uses it in place of ``lambda2``.
    """

    strong_convexity = 0.0

    def value(self, theta):
        raise NotImplementedError

    def prox(self, theta_hat, step):
        raise UnsupportedPenaltyError(
            f"{type(self).__name__} does not implement an exact proximal map")


class ZeroPenalty(Penalty):
    def value(self, theta):
        return 0.0

    def prox(self, theta_hat, step):
        return np.array(theta_hat, dtype=np.float64)


class ElasticNetPenalty(Penalty):
    """``l1*|x|_1 + l2/2*|x|_2^2`` with weights given per unit step."""

    def __init__(self, l1, l2):
        self.l1 = _check_weight(l1, "l1")
        self.l2 = _check_weight(l2, "l2")

    @property
    def strong_convexity(self):
        return self.l2

    def value(self, theta):
        theta = np.asarray(theta, dtype=np.float64)
        return float(self.l1 * np.sum(np.abs(theta)) + 0.5 * self.l2 * np.dot(theta, theta))

    def prox(self, theta_hat, step):
        return elastic_net_prox(theta_hat, self.l1 * step, self.l2 * step)

    def __repr__(self):
        return f"ElasticNetPenalty(l1={self.l1!r}, l2={self.l2!r})"


class L1Penalty(ElasticNetPenalty):
    def __init__(self, weight):
        super().__init__(weight, 0.0)

    def prox(self, theta_hat, step):
        return l1_prox(theta_hat, self.l1 * step)

    def __repr__(self):
        return f"L1Penalty(weight={self.l1!r})"


class GroupLassoPenalty(Penalty):
    """Placeholder for a group-lasso penalty.

    Declared so callers can see the hook; it has no proximal map and any
    attempt to use it in a solver raises :class:`UnsupportedPenaltyError`.
    """

    def __init__(self, groups, weight):
        self.groups = [np.asarray(g, dtype=np.intp) for g in groups]
        self.weight = _check_weight(weight, "weight")

    def value(self, theta):
        theta = np.asarray(theta, dtype=np.float64)
        return float(self.weight * sum(np.linalg.norm(theta[g]) for g in self.groups))


def penalty_prox(penalty, theta_hat, step):
    """Evaluate ``penalty``'s proximal map at ``theta_hat`` with step ``step``."""
    if not isinstance(penalty, Penalty) and not callable(getattr(penalty, "prox", None)):
        raise UnsupportedPenaltyError(f"{penalty!r} has no prox method")
    step = float(step)
    if not step > 0:
        raise ParameterError(f"step must be positive, got {step!r}")
    return penalty.prox(theta_hat, step)

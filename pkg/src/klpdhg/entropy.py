"""Binary-entropy geometry of the dual step.

``psi`` is the negative sum of binary entropies (the convex conjugate of
``sum(log(1 + exp(u)))``), ``grad_psi`` is the logit map, ``sigmoid`` its
inverse, and ``kl_divergence`` the Bregman divergence generated by ``psi``.
"""
from __future__ import annotations

import numpy as np
from scipy.special import expit, xlogy

from .exceptions import DomainError

__all__ = [
    "CLAMP_EPS",
    "DualPoint",
    "psi",
    "grad_psi",
    "sigmoid",
    "kl_divergence",
]

# sigmoid outputs are kept inside [CLAMP_EPS, 1 - CLAMP_EPS]
CLAMP_EPS = 1e-15


class DualPoint:
    """A point of the open cube ``(0, 1)^m``.

    Stores ``s`` together with its complement ``1 - s``. Near ``s = 1`` the
    float64 subtraction ``1 - s`` loses almost all of its digits, so points
    produced by :func:`sigmoid` keep the complement computed directly as
    ``sigmoid(-v)``. Converts to an ndarray of ``s`` via ``np.asarray``.
    """

    __slots__ = ("s", "complement")

    def __init__(self, s, complement=None):
        s = np.asarray(s, dtype=np.float64)
        if complement is None:
            complement = 1.0 - s
        else:
            complement = np.asarray(complement, dtype=np.float64)
            if complement.shape != s.shape:
                raise DomainError("s and its complement differ in shape")
        if not (np.all(s > 0.0) and np.all(complement > 0.0)):
            raise DomainError("dual point must lie strictly inside (0, 1)^m")
        self.s = s
        self.complement = complement

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.s
        return self.s.astype(dtype)

    def __len__(self):
        return self.s.shape[0]

    def __repr__(self):
        return f"DualPoint(m={self.s.size})"


def _split(s):
    """Return ``(s, 1 - s)`` from an array or a DualPoint."""
    if isinstance(s, DualPoint):
        return s.s, s.complement
    s = np.asarray(s, dtype=np.float64)
    return s, 1.0 - s


def psi(s):
    """Negative entropy ``sum(s log s + (1 - s) log(1 - s))``, with ``0 log 0 = 0``.

    Raises
    ------
    DomainError
        If any entry lies outside ``[0, 1]`` (where psi is ``+inf``).
    """
    s, c = _split(s)
    if np.any(s < 0.0) or np.any(s > 1.0) or np.any(np.isnan(s)):
        raise DomainError("psi is +inf outside [0, 1]^m")
    return float(np.sum(xlogy(s, s) + xlogy(c, c)))


def grad_psi(s):
    """Componentwise logit ``log(s / (1 - s))``; needs a strictly interior point."""
    s, c = _split(s)
    if not (np.all(s > 0.0) and np.all(c > 0.0)):
        raise DomainError("grad_psi is only defined on the open cube (0, 1)^m")
    return np.log(s) - np.log(c)


def sigmoid(v):
    """Logistic map ``1 / (1 + exp(-v))`` clamped into ``[CLAMP_EPS, 1 - CLAMP_EPS]``."""
    v = np.asarray(v, dtype=np.float64)
    s = np.clip(expit(v), CLAMP_EPS, 1.0 - CLAMP_EPS)
    c = np.clip(expit(-v), CLAMP_EPS, 1.0 - CLAMP_EPS)
    return DualPoint(s, c)


def kl_divergence(s, s_prime):
    """Bregman divergence of ``psi`` between two points of ``[0, 1]^m``.

    Evaluated term by term; logs of ``s_prime`` are taken at the clamped
    value so a boundary ``s_prime`` never produces ``log(0)``.
    """
    s, c = _split(s)
    t, tc = _split(s_prime)
    for a in (s, t):
        if np.any(a < 0.0) or np.any(a > 1.0) or np.any(np.isnan(a)):
            raise DomainError("kl_divergence is +inf outside [0, 1]^m")
    if s.shape != t.shape:
        raise DomainError("arguments differ in length")
    t = np.maximum(t, CLAMP_EPS)
    tc = np.maximum(tc, CLAMP_EPS)
    terms = xlogy(s, s) - xlogy(s, t) + xlogy(c, c) - xlogy(c, tc)
    return float(max(np.sum(terms), 0.0))

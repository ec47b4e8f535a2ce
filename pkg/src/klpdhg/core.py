"""Problem data, matrix-vector kernels and the penalized logistic objective.

The model has no intercept. Callers who want one append a constant column
to the design matrix themselves.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .exceptions import ContractError, DataError, ParameterError

__all__ = [
    "DesignMatrix",
    "Dataset",
    "PenaltyParams",
    "mat_vec",
    "mat_tvec",
    "operator_norm",
    "log1pexp",
    "objective",
]


def _frozen(arr):
    arr = np.array(arr, copy=True)
    arr.setflags(write=False)
    return arr


class DesignMatrix:
    """Immutable ``m x n`` predictor matrix, dense row-major or CSR.

    Parameters
    ----------
    data : array-like or scipy sparse matrix
        Dense input is stored C-contiguous as float64. Sparse input of any
        scipy format is converted to canonical CSR (sorted, no duplicates).
    """

    __slots__ = ("_A", "_shape", "_sparse")

    def __init__(self, data):
        if isinstance(data, DesignMatrix):
            data = data._A
        if sp.issparse(data):
            A = sp.csr_matrix(data, dtype=np.float64, copy=True)
            A.sum_duplicates()
            A.sort_indices()
            if A.ndim != 2:
                raise ContractError("design matrix must be two-dimensional")
            A.data = _frozen(A.data)
            A.indices = _frozen(A.indices)
            A.indptr = _frozen(A.indptr)
            values = A.data
            self._sparse = True
        else:
            arr = np.asarray(data, dtype=np.float64)
            if arr.ndim != 2:
                raise ContractError(
                    f"design matrix must be two-dimensional, got ndim={arr.ndim}")
            A = _frozen(np.ascontiguousarray(arr))
            values = A
            self._sparse = False
        m, n = A.shape
        if m < 1 or n < 1:
            raise DataError(f"design matrix must be at least 1x1, got {m}x{n}")
        if not np.all(np.isfinite(values)):
            raise DataError("design matrix contains NaN or infinite values")
        self._A = A
        self._shape = (int(m), int(n))

    @classmethod
    def from_csr(cls, indptr, indices, values, shape):
        """Build from a raw CSR triplet, checking the CSR invariants."""
        indptr = np.asarray(indptr, dtype=np.int64)
        indices = np.asarray(indices, dtype=np.int64)
        values = np.asarray(values, dtype=np.float64)
        m, n = shape
        if indptr.shape != (m + 1,) or indptr[0] != 0:
            raise ContractError("row offsets must have length m + 1 and start at 0")
        if np.any(np.diff(indptr) < 0) or indptr[-1] != values.size:
            raise ContractError("row offsets must be nondecreasing and end at nnz")
        if indices.size != values.size:
            raise ContractError("column indices and values differ in length")
        if indices.size and (indices.min() < 0 or indices.max() >= n):
            raise ContractError("column index out of range")
        for i in range(m):
            row = indices[indptr[i]:indptr[i + 1]]
            if row.size > 1 and np.any(np.diff(row) <= 0):
                raise ContractError(f"column indices of row {i} are not strictly increasing")
        return cls(sp.csr_matrix((values, indices, indptr), shape=(m, n)))

    @property
    def shape(self):
        return self._shape

    @property
    def m(self):
        return self._shape[0]

    @property
    def n(self):
        return self._shape[1]

    @property
    def is_sparse(self):
        return self._sparse

    @property
    def nnz(self):
        return int(self._A.nnz) if self._sparse else self.m * self.n

    @property
    def matrix(self):
        """The underlying read-only ndarray or CSR matrix."""
        return self._A

    def toarray(self):
        return self._A.toarray() if self._sparse else np.array(self._A)

    def __repr__(self):
        kind = "csr" if self._sparse else "dense"
        return f"DesignMatrix({self.m}x{self.n}, {kind}, nnz={self.nnz})"


@dataclass(frozen=True)
class Dataset:
    """Design matrix together with a binary response vector ``y``."""

    design: DesignMatrix
    y: np.ndarray

    def __post_init__(self):
        design = self.design
        if not isinstance(design, DesignMatrix):
            design = DesignMatrix(design)
            object.__setattr__(self, "design", design)
        y = np.asarray(self.y, dtype=np.float64).ravel()
        if y.shape != (design.m,):
            raise ContractError(
                f"response has length {y.size}, design matrix has {design.m} rows")
        if not np.all((y == 0.0) | (y == 1.0)):
            raise DataError("response entries must be exactly 0 or 1")
        object.__setattr__(self, "y", _frozen(y))

    @property
    def m(self):
        return self.design.m

    @property
    def n(self):
        return self.design.n


@dataclass(frozen=True)
class PenaltyParams:
    """Elastic-net tuning: overall strength ``lam`` and mixing ``alpha``.

    The solvers work with the sample-scaled weights ``lambda1 = m*lam*alpha``
    and ``lambda2 = m*lam*(1 - alpha)``.
    """

    lam: float
    alpha: float

    def __post_init__(self):
        lam, alpha = float(self.lam), float(self.alpha)
        if not np.isfinite(lam) or lam <= 0:
            raise ParameterError(f"lam must be positive, got {self.lam!r}")
        if not 0.0 <= alpha <= 1.0:
            raise ParameterError(f"alpha must lie in [0, 1], got {self.alpha!r}")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "alpha", alpha)

    def lambda1(self, m):
        return m * self.lam * self.alpha

    def lambda2(self, m):
        return m * self.lam * (1.0 - self.alpha)


def _as_vector(x, size, name):
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] != size:
        raise ContractError(f"{name} must be a vector of length {size}, got shape {x.shape}")
    return x


def mat_vec(A, theta):
    """Return ``A @ theta``."""
    theta = _as_vector(theta, A.n, "theta")
    return np.asarray(A.matrix @ theta, dtype=np.float64)


def mat_tvec(A, s):
    """Return ``A.T @ s``."""
    s = _as_vector(s, A.m, "s")
    if A.is_sparse:
        return np.asarray(A.matrix.T @ s, dtype=np.float64)
    return s @ A.matrix


def operator_norm(A):
    """Largest Euclidean row norm of ``A``.

    This is the norm of ``A.T`` viewed as a map from ``(R^m, l1)`` to
    ``(R^n, l2)``, which is what the step-size formulas need. One pass over
    the stored entries.

    Squares are summed left to right within each row, so the result is
    reproducible bit for bit by a plain loop over the entries.
    """
    M = A.matrix
    if A.is_sparse:
        sq = M.data * M.data
        if sq.size == 0:
            return 0.0
        counts = np.diff(M.indptr)
        longest = int(counts.max())
        if counts.size * longest <= 4 * sq.size:
            # balanced rows: scatter into a zero-padded block and accumulate
            pad = np.zeros((counts.size, longest))
            rows = np.repeat(np.arange(counts.size), counts)
            pad[rows, np.arange(sq.size) - M.indptr[rows]] = sq
            np.cumsum(pad, axis=1, out=pad)
            row_sq = pad[:, -1]
        else:
            # skewed rows: sorted by decreasing length, the rows that still
            # have an entry at offset k form a prefix
            order = np.argsort(-counts, kind="stable")
            starts = M.indptr[:-1][order]
            active = np.searchsorted(-counts[order], -np.arange(longest), side="left")
            row_sq = np.zeros(order.size)
            for k in range(longest):
                c = active[k]
                row_sq[:c] += sq[starts[:c] + k]
        return float(np.sqrt(row_sq.max()))
    sq = M * M
    np.cumsum(sq, axis=1, out=sq)
    return float(np.sqrt(sq[:, -1].max()))


def log1pexp(u):
    """Overflow-safe ``log(1 + exp(u))``."""
    u = np.asarray(u, dtype=np.float64)
    return np.maximum(u, 0.0) + np.log1p(np.exp(-np.abs(u)))


def objective(data, theta, p):
    """Penalized logistic loss

    ``mean(log(1 + exp(A theta))) - <y, A theta>/m
    + lam*(alpha*|theta|_1 + (1 - alpha)/2*|theta|_2^2)``.
    """
    theta = _as_vector(theta, data.n, "theta")
    u = mat_vec(data.design, theta)
    m = data.m
    loss = np.sum(log1pexp(u)) / m - np.dot(data.y, u) / m
    penalty = p.lam * (p.alpha * np.sum(np.abs(theta))
                       + 0.5 * (1.0 - p.alpha) * np.dot(theta, theta))
    return float(loss + penalty)

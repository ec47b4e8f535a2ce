"""Reading and writing datasets and coefficient files.

Two input formats are understood:

* CSV: one sample per line, predictors first, binary response last. Loaded
  as a dense matrix. A non-numeric first line is taken to be a header.
* svmlight: ``<label> <index>:<value> ...`` with 1-based feature indices
  and ``#`` comments. Loaded as a CSR matrix.

Labels may be ``{0, 1}`` or ``{-1, +1}``; the latter is mapped to ``{0, 1}``.
"""
from __future__ import annotations

import csv
import json
import math
import os

import numpy as np
import scipy.sparse as sp

from .core import Dataset, DesignMatrix
from .exceptions import DataError, ParseError

__all__ = [
    "load_dataset",
    "load_csv",
    "load_svmlight",
    "write_svmlight",
    "write_csv",
    "sniff_format",
    "normalize_labels",
    "make_correlated_problem",
    "sparse_pairs",
    "load_coefficients",
]


def _parse_float(token, lineno, what="value"):
    try:
        val = float(token)
    except ValueError:
        raise ParseError(f"cannot parse {what} {token!r}", lineno) from None
    if not math.isfinite(val):
        raise ParseError(f"{what} {token!r} is not finite", lineno)
    return val


def normalize_labels(labels):
    """Map a label vector onto ``{0, 1}``.

    ``{0, 1}`` is returned unchanged and ``{-1, +1}`` is remapped. Anything
    else raises :class:`DataError`.
    """
    y = np.asarray(labels, dtype=np.float64)
    values = set(np.unique(y).tolist())
    if values <= {0.0, 1.0}:
        return y
    if values <= {-1.0, 1.0}:
        return (y > 0).astype(np.float64)
    bad = sorted(values - {0.0, 1.0, -1.0}) or sorted(values)
    raise DataError(f"labels must be binary ({{0,1}} or {{-1,+1}}), found {bad[:5]}")


def _strip_comment(line):
    return line.split("#", 1)[0].strip()


def sniff_format(path):
    with open(path) as fh:
        for line in fh:
            body = _strip_comment(line)
            if not body:
                continue
            if ":" in body:
                return "svmlight"
            if "," in body:
                return "csv"
            return "svmlight"
    raise DataError(f"{path}: file is empty")


def load_svmlight(path, n_features=None):
    labels = []
    indptr = [0]
    indices = []
    values = []
    max_index = 0
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            body = _strip_comment(line)
            if not body:
                continue
            tokens = body.split()
            labels.append(_parse_float(tokens[0], lineno, "label"))
            row = {}
            for tok in tokens[1:]:
                idx, sep, val = tok.partition(":")
                if not sep:
                    raise ParseError(f"expected <index>:<value>, got {tok!r}", lineno)
                try:
                    j = int(idx)
                except ValueError:
                    raise ParseError(f"bad feature index {idx!r}", lineno) from None
                if j < 1:
                    raise ParseError(f"feature indices are 1-based, got {j}", lineno)
                if j in row:
                    raise ParseError(f"duplicate feature index {j}", lineno)
                row[j] = _parse_float(val, lineno)
            for j in sorted(row):
                indices.append(j - 1)
                values.append(row[j])
                max_index = max(max_index, j)
            indptr.append(len(indices))
    if not labels:
        raise DataError(f"{path}: no samples found")
    n = max_index if n_features is None else int(n_features)
    if n < max_index:
        raise DataError(f"n_features={n} is smaller than the largest index {max_index}")
    n = max(n, 1)
    A = sp.csr_matrix((np.asarray(values, dtype=np.float64),
                       np.asarray(indices, dtype=np.int64),
                       np.asarray(indptr, dtype=np.int64)), shape=(len(labels), n))
    return Dataset(DesignMatrix(A), normalize_labels(labels))


def load_csv(path):
    rows = []
    width = None
    with open(path, newline="") as fh:
        for lineno, fields in enumerate(csv.reader(fh), start=1):
            if not fields or all(not f.strip() for f in fields):
                continue
            if fields[0].lstrip().startswith("#"):
                continue
            if not rows and lineno == 1 and not _is_numeric_row(fields):
                continue  # header
            if width is None:
                width = len(fields)
                if width < 2:
                    raise ParseError("need at least one predictor and a response", lineno)
            elif len(fields) != width:
                raise ParseError(f"expected {width} fields, got {len(fields)}", lineno)
            rows.append([_parse_float(f.strip(), lineno) for f in fields])
    if not rows:
        raise DataError(f"{path}: no samples found")
    arr = np.asarray(rows, dtype=np.float64)
    return Dataset(DesignMatrix(arr[:, :-1]), normalize_labels(arr[:, -1]))


def _is_numeric_row(fields):
    try:
        [float(f) for f in fields]
    except ValueError:
        return False
    return True


def load_dataset(path, format="auto"):
    """Load a :class:`Dataset` from ``path``.

    Parameters
    ----------
    format : {"auto", "csv", "svmlight"}
        ``auto`` decides from the first non-comment line.
    """
    if not os.path.exists(path):
        raise DataError(f"{path}: no such file")
    if os.path.getsize(path) == 0:
        raise DataError(f"{path}: file is empty")
    if format == "auto":
        format = sniff_format(path)
    if format == "csv":
        return load_csv(path)
    if format == "svmlight":
        return load_svmlight(path)
    raise ValueError(f"unknown format {format!r}")


def write_svmlight(data, path):
    """Write ``data`` in svmlight format with round-trip exact values."""
    A = sp.csr_matrix(data.design.matrix)
    with open(path, "w") as fh:
        for i in range(data.m):
            lo, hi = A.indptr[i], A.indptr[i + 1]
            items = " ".join(f"{j + 1}:{float(v)!r}"
                             for j, v in zip(A.indices[lo:hi], A.data[lo:hi]) if v != 0.0)
            label = int(data.y[i])
            fh.write(f"{label} {items}\n" if items else f"{label}\n")


def write_csv(data, path):
    A = data.design.toarray()
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        for row, label in zip(A, data.y):
            w.writerow([repr(float(x)) for x in row] + [int(label)])


def make_correlated_problem(m, n, correlation=0.0, seed=0, n_informative=None,
                            signal=1.0):
    """Synthetic logistic-regression instance with equicorrelated predictors.

    Rows are Gaussian with unit variance and pairwise correlation
    ``correlation``. A sparse coefficient vector with ``n_informative``
    entries of size ``signal`` and random sign generates the labels through
    the logistic model.

    Returns
    -------
    data : Dataset
    theta_true : ndarray of shape (n,)
    """
    if not 0.0 <= correlation < 1.0:
        raise ValueError("correlation must lie in [0, 1)")
    rng = np.random.default_rng(seed)
    shared = rng.standard_normal((m, 1))
    A = math.sqrt(correlation) * shared + math.sqrt(1.0 - correlation) * rng.standard_normal((m, n))
    k = max(1, n // 10) if n_informative is None else int(n_informative)
    theta_true = np.zeros(n)
    support = rng.choice(n, size=min(k, n), replace=False)
    theta_true[support] = signal * rng.choice([-1.0, 1.0], size=support.size)
    prob = 1.0 / (1.0 + np.exp(-(A @ theta_true)))
    y = (rng.random(m) < prob).astype(np.float64)
    return Dataset(DesignMatrix(A), y), theta_true


def sparse_pairs(theta):
    """``[[index, value], ...]`` for the nonzero entries, 1-based indices."""
    theta = np.asarray(theta, dtype=np.float64)
    return [[int(j) + 1, float(theta[j])] for j in np.flatnonzero(theta)]


def load_coefficients(path, n_features):
    """Read a coefficient vector written by ``klpdhg solve``.

    Accepts the JSON output (``theta`` as ``[index, value]`` pairs) or the
    CSV output (``index,value`` rows); indices are 1-based.
    """
    theta = np.zeros(n_features)
    with open(path) as fh:
        text = fh.read()
    if not text.strip():
        raise DataError(f"{path}: file is empty")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError:
        doc = None
    if doc is not None:
        pairs = doc["theta"] if isinstance(doc, dict) else doc
    else:
        pairs = []
        for lineno, fields in enumerate(csv.reader(text.splitlines()), start=1):
            if not fields or (lineno == 1 and not _is_numeric_row(fields)):
                continue
            if len(fields) != 2:
                raise ParseError("expected index,value", lineno)
            pairs.append((int(_parse_float(fields[0], lineno, "index")),
                          _parse_float(fields[1], lineno)))
    for j, val in pairs:
        j = int(j)
        if not 1 <= j <= n_features:
            raise DataError(f"coefficient index {j} outside 1..{n_features}")
        theta[j - 1] = float(val)
    return theta

"""Clustering evaluation: accuracy under optimal label mapping, normalized
mutual information, and purity.

All three take (y_true, y_pred) as nonnegative integer vectors of equal
length and are invariant to relabeling either side and to permuting samples.
"""

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import ValidationError


def _as_labels(y, name):
    arr = np.asarray(y)
    if arr.ndim != 1 or arr.size < 1:
        raise ValidationError(f"{name} must be a nonempty 1-d array")
    if not np.issubdtype(arr.dtype, np.integer):
        cast = arr.astype(np.int64)
        if not np.array_equal(cast, arr):
            raise ValidationError(f"{name} must hold integers")
        arr = cast
    if (arr < 0).any():
        raise ValidationError(f"{name} must be nonnegative")
    return arr.astype(np.int64)


def _pair(y_true, y_pred):
    t = _as_labels(y_true, "y_true")
    p = _as_labels(y_pred, "y_pred")
    if t.size != p.size:
        raise ValidationError(
            f"label length mismatch: {t.size} vs {p.size}")
    return t, p


def contingency(y_true, y_pred):
    """Counts n[i, j] of samples with true class i and predicted cluster j.

    Rows and columns are indexed by the distinct values in sorted order.
    """
    t, p = _pair(y_true, y_pred)
    t_vals, t_idx = np.unique(t, return_inverse=True)
    p_vals, p_idx = np.unique(p, return_inverse=True)
    table = np.zeros((t_vals.size, p_vals.size), dtype=np.int64)
    np.add.at(table, (t_idx, p_idx), 1)
    return table


def accuracy(y_true, y_pred):
    """Fraction of samples correct under the best injective cluster-to-class
    mapping, found by optimal assignment on the contingency table padded to
    square."""
    table = contingency(y_true, y_pred)
    n = table.sum()
    size = max(table.shape)
    padded = np.zeros((size, size), dtype=np.int64)
    padded[:table.shape[0], :table.shape[1]] = table
    rows, cols = linear_sum_assignment(padded, maximize=True)
    return float(padded[rows, cols].sum()) / float(n)


def nmi(y_true, y_pred):
    """Mutual information normalized by the geometric mean of the entropies.

    Natural logs, 0 * log 0 taken as 0. When either side has zero entropy the
    ratio is undefined; by convention the result is 1.0 when the two label
    vectors induce the same partition of the samples and 0.0 otherwise.
    """
    table = contingency(y_true, y_pred).astype(np.float64)
    n = table.sum()
    a = table.sum(axis=1)
    b = table.sum(axis=0)
    h_true = _entropy(a / n)
    h_pred = _entropy(b / n)
    if h_true == 0.0 or h_pred == 0.0:
        return 1.0 if _same_partition(table) else 0.0
    rows, cols = np.nonzero(table > 0)
    pij = table[rows, cols] / n
    mi = float((pij * np.log(pij / ((a[rows] / n) * (b[cols] / n)))).sum())
    val = mi / np.sqrt(h_true * h_pred)
    return float(min(max(val, 0.0), 1.0))


def _entropy(p):
    p = p[p > 0]
    return float(-(p * np.log(p)).sum())


def _same_partition(table):
    """True when every class maps to exactly one cluster and vice versa."""
    return (np.count_nonzero(table) == table.shape[0]
            and table.shape[0] == table.shape[1])


def purity(y_true, y_pred):
    """Average over clusters of the dominant class fraction."""
    table = contingency(y_true, y_pred)
    n = table.sum()
    return float(table.max(axis=0).sum()) / float(n)

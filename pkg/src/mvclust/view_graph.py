"""Per-view affinity graphs with locality-constrained support.

Each sample's affinity row lives on its K nearest neighbors and on the
probability simplex. Initialization solves the locality-regularized row
problem with an adaptive per-row bandwidth; the in-loop update additionally
pulls each row toward the consensus graph.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ConfigurationError, ValidationError


@dataclass
class ViewAffinity:
    """K-sparse row-stochastic affinity matrix of one view.

    Stored compactly: values[i, t] is the affinity of sample i to sample
    indices[i, t], where indices holds the K nearest neighbors of i (self
    excluded). All entries outside the support are zero by construction.
    """

    view_id: int
    k: int
    n: int
    indices: np.ndarray
    values: np.ndarray

    def dense(self):
        """Materialize the full n x n affinity matrix."""
        s = np.zeros((self.n, self.n))
        rows = np.repeat(np.arange(self.n), self.k)
        s[rows, self.indices.ravel()] = self.values.ravel()
        return s


def _support_distances(dist, nbrs):
    n = dist.values.shape[0]
    rows = np.arange(n)[:, None]
    d_sup = dist.values[rows, nbrs.neighbors]
    d_bnd = dist.values[np.arange(n), nbrs.boundary]
    return d_sup, d_bnd


def auto_row_lambdas(dist, nbrs):
    """Adaptive per-row locality regularizer.

    lambda_i = (K * d_boundary - sum of the K neighbor distances) / 2, the
    smallest value for which the unconstrained row solution supported on the
    K nearest neighbors stays feasible. Floored at 1e-8.
    """
    d_sup, d_bnd = _support_distances(dist, nbrs)
    gaps = d_bnd[:, None] - d_sup
    lam = 0.5 * gaps.sum(axis=1)
    return np.maximum(lam, 1e-8)


def init_view_affinity(dist, nbrs, lam="auto", view_id=0):
    """Initial locality graph of one view.

    Each row minimizes sum_j d_ij s_j + lam * ||s||^2 on the simplex over the
    kNN support. With lam="auto" the bandwidth is chosen per row and the
    minimizer has the closed form s_ij = (d_boundary - d_ij) / (2 * lambda_i);
    rows whose neighbor distances all equal the boundary distance fall back to
    uniform 1/K. With a fixed lam > 0 the row is the simplex projection of
    -d_ij / (2 * lam).
    """
    n = dist.values.shape[0]
    k = nbrs.k
    d_sup, d_bnd = _support_distances(dist, nbrs)
    if isinstance(lam, str):
        if lam != "auto":
            raise ConfigurationError(f"unknown lambda mode {lam!r}")
        gaps = d_bnd[:, None] - d_sup
        denom = gaps.sum(axis=1)
        degenerate = denom <= 0.0
        safe = np.where(degenerate, 1.0, denom)
        values = gaps / safe[:, None]
        values[degenerate] = 1.0 / k
    else:
        lam = float(lam)
        if lam <= 0:
            raise ConfigurationError("fixed lambda must be positive")
        values = kernels.project_rows(-d_sup / (2.0 * lam))
    return ViewAffinity(view_id=view_id, k=k, n=n,
                        indices=nbrs.neighbors, values=values)


def update_view_affinity(dist, nbrs, s_star, w_v, lam, view_id=0):
    """In-loop update of one view's affinity graph.

    Each row minimizes, over the simplex restricted to the kNN support,

        sum_j d_ij s_j + lam * ||s||^2 + w_v * ||s - S*_i||^2

    where w_v is this view's weight contribution (the weight raised to the
    smoothing exponent). The stationarity conditions reduce the problem to
    projecting t_j = (2 * w_v * S*_ij - d_ij) / (2 * (lam + w_v)) onto the
    simplex, which is exact.
    """
    if w_v < 0:
        raise ValidationError("view weight contribution must be >= 0")
    if lam + w_v <= 0:
        raise ConfigurationError("lambda + w_v must be positive")
    n = dist.values.shape[0]
    rows = np.arange(n)[:, None]
    d_sup = dist.values[rows, nbrs.neighbors]
    s_star_sup = np.asarray(s_star, dtype=np.float64)[rows, nbrs.neighbors]
    target = (2.0 * w_v * s_star_sup - d_sup) / (2.0 * (lam + w_v))
    values = kernels.project_rows(target)
    return ViewAffinity(view_id=view_id, k=nbrs.k, n=n,
                        indices=nbrs.neighbors, values=values)

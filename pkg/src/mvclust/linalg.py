"""Shared numerical primitives: distances, neighbor sets, simplex projection,
graph Laplacians and small eigenpair extraction.

Everything downstream (per-view graphs, consensus fusion, the embedding step,
the spectral baseline) is built out of these few operations, so their contracts
are kept tight: exact symmetry where symmetry is promised, exact zeros where
sparsity is promised, deterministic output for identical input.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import kernels
from .errors import ConfigurationError, SolverError, ValidationError


@dataclass
class DistanceMatrix:
    """Dense squared-Euclidean distance matrix for one view.

    values is (n, n) float64, exactly symmetric, zero diagonal, nonnegative.
    """

    values: np.ndarray

    @property
    def n(self):
        return self.values.shape[0]


@dataclass
class NeighborSets:
    """k nearest neighbors per sample plus the first excluded neighbor.

    neighbors is (n, k) int64, row i sorted by ascending distance to i with
    ties broken by the smaller sample index; self is excluded. boundary[i] is
    the (k+1)-th nearest neighbor, the index whose distance pins the adaptive
    per-row bandwidth.
    """

    k: int
    neighbors: np.ndarray
    boundary: np.ndarray


def standardize_columns(x):
    """Center each column and scale it to unit variance.

    Columns whose variance is numerically zero (below 1e-12 relative to the
    column mean magnitude) are left at zero after centering instead of being
    blown up by the division.
    """
    x = np.asarray(x, dtype=np.float64)
    mu = x.mean(axis=0)
    centered = x - mu
    sd = centered.std(axis=0)
    degenerate = sd <= 1e-12 * np.maximum(1.0, np.abs(mu))
    scaled = centered / np.where(degenerate, 1.0, sd)
    scaled[:, degenerate] = 0.0
    return scaled


def pairwise_distances(x, standardize=True, name="features"):
    """Squared Euclidean distances between all sample pairs of one view.

    Parameters
    ----------
    x : (n, d) array of raw features.
    standardize : bool
        Per-feature zero mean, unit variance before distances are taken.
    name : str
        Label used in error messages, typically the view name.

    Returns
    -------
    DistanceMatrix with exactly symmetric values, zero diagonal, all entries
    finite and nonnegative.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2:
        raise ValidationError(f"{name}: expected a 2-d feature matrix, "
                              f"got ndim={x.ndim}")
    if x.shape[0] < 1:
        raise ValidationError(f"{name}: no samples")
    bad = ~np.isfinite(x)
    if bad.any():
        i, j = np.argwhere(bad)[0]
        raise ValidationError(
            f"{name}: non-finite value at row {i}, column {j}")
    if standardize:
        x = standardize_columns(x)
    sq = np.einsum("ij,ij->i", x, x)
    d = sq[:, None] + sq[None, :] - 2.0 * (x @ x.T)
    d = (d + d.T) / 2.0
    np.maximum(d, 0.0, out=d)
    np.fill_diagonal(d, 0.0)
    return DistanceMatrix(values=d)


def knn_sets(dist, k):
    """Neighbor sets of each sample from a distance matrix.

    Ascending by distance, ties broken by the smaller index (stable sort on
    the row), self excluded. k must leave room for the boundary neighbor,
    hence 1 <= k <= n - 2.
    """
    values = dist.values
    n = values.shape[0]
    if not 1 <= k <= n - 2:
        raise ConfigurationError(
            f"k={k} outside [1, {n - 2}] for n={n} samples")
    order = np.argsort(values, axis=1, kind="stable")
    keep = order != np.arange(n)[:, None]
    ranked = order[keep].reshape(n, n - 1)
    return NeighborSets(k=k,
                        neighbors=np.ascontiguousarray(ranked[:, :k]),
                        boundary=np.ascontiguousarray(ranked[:, k]))


def project_to_simplex(v):
    """Euclidean projection of a vector onto the probability simplex.

    Sort-and-threshold rule; entries cut by the threshold come out as exact
    zeros, the rest sum to one up to rounding.
    """
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1 or v.size < 1:
        raise ValidationError("project_to_simplex expects a nonempty vector")
    if not np.isfinite(v).all():
        raise ValidationError("project_to_simplex: non-finite input")
    return kernels.project_rows(v[None, :])[0]


def project_rows_to_simplex(v):
    """Row-wise simplex projection of a matrix (the batched hot kernel)."""
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 2 or v.shape[1] < 1:
        raise ValidationError("project_rows_to_simplex expects (n, m), m >= 1")
    return kernels.project_rows(v)


def laplacian(s):
    """Unnormalized Laplacian of the symmetrized graph (s + s^T) / 2."""
    s = np.asarray(s, dtype=np.float64)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise ValidationError("laplacian expects a square matrix")
    if (s < 0).any():
        raise ValidationError("laplacian: negative affinity entries")
    a = (s + s.T) / 2.0
    lap = np.diag(a.sum(axis=1)) - a
    return lap


# Below this size the dense LAPACK subset solver wins; above it, tridiagonal
# reduction is the one superquadratic step in an otherwise O(n^2) iteration,
# so a sparse shift-invert Lanczos route takes over (verified, with fallback).
DENSE_EIGEN_MAX = 800


def _eigenpairs_sparse(lap, c):
    """Shift-invert Lanczos for the c smallest eigenpairs, or None.

    Deterministic (fixed start vector), verified against the residual and
    orthonormality contracts before being trusted; any miss returns None and
    the caller falls back to the dense path.
    """
    import scipy.sparse
    import scipy.sparse.linalg

    n = lap.shape[0]
    if c >= n - 1:
        return None
    mean_degree = float(np.trace(lap)) / n
    if not np.isfinite(mean_degree) or mean_degree <= 0:
        return None
    csr = scipy.sparse.csr_matrix(lap)
    try:
        theta, f = scipy.sparse.linalg.eigsh(
            csr, k=c, sigma=-1e-2 * mean_degree, which="LM",
            v0=np.ones(n), maxiter=max(1000, 10 * n))
    except Exception:
        return None
    order = np.argsort(theta, kind="stable")
    theta = theta[order]
    f = f[:, order]
    bound = 1e-8 * max(1.0, float(np.abs(theta).max()))
    residual = float(np.abs(csr @ f - f * theta[None, :]).max())
    gram_err = float(np.abs(f.T @ f - np.eye(c)).max())
    if residual > bound or gram_err > 1e-8 or not np.all(np.isfinite(theta)):
        return None
    return theta, f


def smallest_eigenpairs(lap, c):
    """The c smallest eigenvalues and eigenvectors of a symmetric matrix.

    Returns (theta, f) with theta ascending (length c) and f an (n, c) matrix
    of orthonormal columns. Input must be symmetric within 1e-10 (scaled by
    its largest entry); only one triangle is read on the dense path, so
    symmetric rounding noise below that tolerance cannot change the result.

    Large matrices route through shift-invert Lanczos first; its output is
    accepted only after the residual and orthonormality checks pass, otherwise
    the dense solver decides.
    """
    lap = np.asarray(lap, dtype=np.float64)
    if lap.ndim != 2 or lap.shape[0] != lap.shape[1]:
        raise ValidationError("smallest_eigenpairs expects a square matrix")
    n = lap.shape[0]
    if not 1 <= c <= n:
        raise ConfigurationError(f"eigenpair count c={c} outside [1, {n}]")
    scale = max(1.0, float(np.abs(lap).max()))
    asym = float(np.abs(lap - lap.T).max())
    if asym > 1e-10 * scale:
        raise ValidationError(
            f"smallest_eigenpairs: matrix asymmetry {asym:.3e} exceeds "
            f"tolerance {1e-10 * scale:.3e}")
    if n > DENSE_EIGEN_MAX:
        pair = _eigenpairs_sparse(lap, c)
        if pair is not None:
            return pair
    try:
        theta, f = scipy.linalg.eigh(lap, subset_by_index=(0, c - 1))
    except scipy.linalg.LinAlgError as exc:
        raise SolverError(f"eigendecomposition failed: {exc}") from None
    return theta, f

"""Consensus graph learning with a spectral rank surrogate.

The consensus matrix S* fuses the per-view graphs under view weights while a
penalty beta * tr(F^T L* F) presses the c smallest Laplacian eigenvalues
toward zero, so the learned graph falls apart into exactly c connected
components. beta is adapted multiplicatively from the eigenvalue pattern.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ConfigurationError, ValidationError
from .linalg import laplacian, smallest_eigenpairs

BETA_MIN = 1e-8
BETA_MAX = 1e8


@dataclass
class ConsensusGraph:
    """Converged consensus state: the fused graph and its spectral summary.

    s_star is row-stochastic with full support allowed; lap is the
    unnormalized Laplacian of the symmetrized graph; embedding holds the c
    eigenvectors of the smallest eigenvalues (ascending in eigenvalues).
    """

    s_star: np.ndarray
    lap: np.ndarray
    embedding: np.ndarray
    eigenvalues: np.ndarray
    beta: float


def embedding_distances(f):
    """Squared Euclidean distances between embedding rows.

    Exactly symmetric, zero diagonal, nonnegative.
    """
    f = np.asarray(f, dtype=np.float64)
    if not np.isfinite(f).all():
        raise ValidationError("embedding contains non-finite values")
    sq = np.einsum("ij,ij->i", f, f)
    e = sq[:, None] + sq[None, :] - 2.0 * (f @ f.T)
    e = (e + e.T) / 2.0
    np.maximum(e, 0.0, out=e)
    np.fill_diagonal(e, 0.0)
    return e


def update_consensus(views, w, e, beta):
    """One exact block update of the consensus matrix.

    Each row i minimizes, over the full probability simplex,

        sum_v (w_v)^r * ||p - S^v_i||^2 + beta * sum_j p_j e_ij

    whose solution is the simplex projection of

        (sum_v (w_v)^r * S^v_i - (beta / 2) * e_i) / sum_v (w_v)^r.
    """
    if beta < 0:
        raise ValidationError("beta must be >= 0")
    contrib = w.contributions
    total = float(contrib.sum())
    if not total > 0:
        raise ConfigurationError("all view weight contributions are zero")
    n = views[0].n
    rows = np.arange(n)[:, None]
    target = np.zeros((n, n))
    for view, cv in zip(views, contrib):
        target[rows, view.indices] += cv * view.values
    if beta != 0:
        target -= (beta / 2.0) * np.asarray(e, dtype=np.float64)
    target /= total
    return kernels.project_rows(target)


def update_embedding(s_star, c):
    """Spectral embedding of the consensus graph.

    Returns (f, theta): the eigenvectors and ascending eigenvalues of the c
    smallest eigenpairs of the symmetrized unnormalized Laplacian.
    """
    theta, f = smallest_eigenpairs(laplacian(s_star), c)
    return f, theta


def default_zero_tol(lap):
    """Threshold under which a Laplacian eigenvalue counts as zero.

    Scaled to the graph: 1e-6 times the mean degree (trace over n), floored
    at 1e-12 so an empty graph still gets a usable tolerance.
    """
    n = lap.shape[0]
    mean_degree = float(np.trace(lap)) / n
    return max(1e-6 * mean_degree, 1e-12)


def adapt_beta(theta, c, beta, zero_tol):
    """Multiplicative beta schedule from the eigenvalue pattern.

    theta must hold at least the c+1 smallest eigenvalues, ascending. If the
    c smallest do not vanish the graph has too few components: double beta.
    If even the (c+1)-th vanishes it has too many: halve beta. Otherwise the
    component count is exactly c and beta stays. Result clamped to
    [1e-8, 1e8].
    """
    if beta <= 0:
        raise ConfigurationError("beta must be positive")
    theta = np.asarray(theta, dtype=np.float64)
    if theta.size < c + 1:
        raise ValidationError(
            f"need the {c + 1} smallest eigenvalues, got {theta.size}")
    if float(theta[:c].sum()) > zero_tol:
        beta = 2.0 * beta
    elif float(theta[c]) < zero_tol:
        beta = beta / 2.0
    return float(min(max(beta, BETA_MIN), BETA_MAX))

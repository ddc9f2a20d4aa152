"""Alternating-minimization driver.

One outer iteration cycles exact block updates: each view's affinity graph,
the view weights (recomputed after every view, following the published update
order literally), the consensus graph, and its spectral embedding. beta is
then adapted from the eigenvalue pattern unless the caller pinned it. The
loop stops when the relative objective change drops under tol, and, in
adaptive mode, the consensus graph additionally has exactly the requested
number of connected components.
"""

from dataclasses import dataclass, field

import numpy as np

from .clusters import default_edge_threshold, extract_components
from .consensus import (ConsensusGraph, adapt_beta, default_zero_tol,
                        embedding_distances, update_consensus)
from .errors import ConfigurationError, SolverError, ValidationError
from .linalg import laplacian, knn_sets, pairwise_distances, smallest_eigenpairs
from .view_graph import (auto_row_lambdas, init_view_affinity,
                         update_view_affinity)
from .weights import ViewWeights, fusion_divergences, update_weights


@dataclass
class SolverConfig:
    """Hyperparameters of one run.

    lam is either the string "auto" (locality regularizer derived from the
    data as the mean of the adaptive per-row values across views) or a fixed
    positive float.
    """

    k_neighbors: int = 10
    n_clusters: int = 2
    lam: object = "auto"
    r: float = 2.0
    beta_init: float = 1.0
    beta_adaptive: bool = True
    max_iters: int = 50
    tol: float = 1e-6
    seed: int = 0
    standardize: bool = True

    def validate(self, n_samples):
        if not 1 <= self.k_neighbors <= n_samples - 2:
            raise ConfigurationError(
                f"k_neighbors={self.k_neighbors} outside "
                f"[1, {n_samples - 2}] for N={n_samples}")
        if not 2 <= self.n_clusters <= n_samples:
            raise ConfigurationError(
                f"n_clusters={self.n_clusters} outside [2, {n_samples}]")
        if self.max_iters < 1:
            raise ConfigurationError("max_iters must be >= 1")
        if not self.tol > 0:
            raise ConfigurationError("tol must be > 0")
        if not self.r > 1:
            raise ConfigurationError("r must be > 1")
        if not self.beta_init > 0:
            raise ConfigurationError("beta_init must be > 0")
        if isinstance(self.lam, str):
            if self.lam != "auto":
                raise ConfigurationError(f"unknown lambda mode {self.lam!r}")
        elif not float(self.lam) > 0:
            raise ConfigurationError("fixed lambda must be > 0")


@dataclass
class SolverTrace:
    """Per-iteration history of the outer loop."""

    objective: list = field(default_factory=list)
    fusion_residual: list = field(default_factory=list)
    eig_sum: list = field(default_factory=list)
    components: list = field(default_factory=list)
    beta: list = field(default_factory=list)
    weights: list = field(default_factory=list)
    converged: bool = False
    iterations_run: int = 0


def objective(views, s_star, w, f, lam, beta, distances):
    """Full model objective at the given state.

    Sum of the per-view locality terms sum_ij d_ij s_ij, the quadratic
    regularizers lam * ||S^v||_F^2, the weighted fusion residuals
    (w_v)^r * ||S* - S^v||_F^2, and the spectral penalty beta * tr(F^T L* F)
    on the symmetrized consensus Laplacian.
    """
    if len(views) != len(distances) or len(views) != w.w.size:
        raise ValidationError("views, weights, and distances disagree on M")
    s_star = np.asarray(s_star, dtype=np.float64)
    n = s_star.shape[0]
    if s_star.shape != (n, n) or f.shape[0] != n:
        raise ValidationError("consensus matrix and embedding sizes disagree")
    locality = 0.0
    reg = 0.0
    for view, dist in zip(views, distances):
        if dist.values.shape[0] != n or view.n != n:
            raise ValidationError("view sizes disagree with the consensus")
        rows = np.arange(n)[:, None]
        d_sup = dist.values[rows, view.indices]
        locality += float((d_sup * view.values).sum())
        reg += float((view.values * view.values).sum())
    fusion = float((w.contributions * fusion_divergences(views, s_star)).sum())
    lap = laplacian(s_star)
    trace_term = float(np.einsum("ij,ij->", f, lap @ f))
    return locality + lam * reg + fusion + beta * trace_term


def resolve_lambda(config, dists, neighbor_sets):
    """Concrete locality regularizer for this run.

    "auto" averages the adaptive per-row values over all rows of all views.
    """
    if isinstance(config.lam, str):
        per_view = [auto_row_lambdas(d, nb)
                    for d, nb in zip(dists, neighbor_sets)]
        return float(np.mean(np.concatenate(per_view)))
    return float(config.lam)


def fit(dataset, config):
    """Run the alternating optimization on a multi-view dataset.

    Returns (graph, w, views, trace): the consensus state, final view
    weights, per-view affinity graphs, and the iteration trace.
    """
    views_data = [np.asarray(v, dtype=np.float64) for v in dataset.views]
    if not views_data:
        raise ValidationError("dataset has no views")
    n = views_data[0].shape[0]
    for v, x in enumerate(views_data):
        if x.ndim != 2:
            raise ValidationError(f"view {v} is not a matrix")
        if x.shape[0] != n:
            raise ValidationError(
                f"view {v} has {x.shape[0]} rows, expected {n}")
        bad = ~np.isfinite(x)
        if bad.any():
            i, j = np.argwhere(bad)[0]
            raise ValidationError(
                f"view {v}: non-finite value at row {i}, column {j}")
    config.validate(n)
    c = config.n_clusters
    m = len(views_data)

    dists = [pairwise_distances(x, standardize=config.standardize,
                                name=f"view {v}")
             for v, x in enumerate(views_data)]
    neighbor_sets = [knn_sets(d, config.k_neighbors) for d in dists]
    lam = resolve_lambda(config, dists, neighbor_sets)
    views = [init_view_affinity(d, nb, lam=config.lam, view_id=v)
             for v, (d, nb) in enumerate(zip(dists, neighbor_sets))]
    w = ViewWeights(w=np.full(m, 1.0 / m), r=config.r)

    s_star = update_consensus(views, w, e=None, beta=0.0)
    lap, f, theta = _embed(s_star, c, n)
    beta = float(config.beta_init)

    trace = SolverTrace()
    obj_prev = objective(views, s_star, w, f, lam, beta, dists)
    for iteration in range(1, config.max_iters + 1):
        for v in range(m):
            views[v] = update_view_affinity(
                dists[v], neighbor_sets[v], s_star,
                w_v=float(w.contributions[v]), lam=lam, view_id=v)
            w = update_weights(fusion_divergences(views, s_star), config.r)
        e = embedding_distances(f)
        s_star = update_consensus(views, w, e, beta)
        lap, f, theta = _embed(s_star, c, n)

        obj = objective(views, s_star, w, f, lam, beta, dists)
        if not np.isfinite(obj):
            raise SolverError(f"objective diverged at iteration {iteration}")
        divs = fusion_divergences(views, s_star)
        _, count = extract_components(s_star, default_edge_threshold(s_star))

        trace.objective.append(obj)
        trace.fusion_residual.append(float((w.contributions * divs).sum()))
        trace.eig_sum.append(float(theta[:c].sum()))
        trace.components.append(int(count))
        trace.beta.append(beta)
        trace.weights.append(w.w.copy())
        trace.iterations_run = iteration

        rel = abs(obj - obj_prev) / max(abs(obj_prev), 1e-12)
        settled = rel <= config.tol
        if config.beta_adaptive:
            settled = settled and count == c
        if settled:
            trace.converged = True
            break
        if config.beta_adaptive and theta.size > c:
            beta = adapt_beta(theta, c, beta, default_zero_tol(lap))
        obj_prev = obj

    graph = ConsensusGraph(s_star=s_star, lap=lap, embedding=f,
                           eigenvalues=theta[:c], beta=trace.beta[-1])
    return graph, w, views, trace


def _embed(s_star, c, n):
    """Laplacian plus the c (+1 when available) smallest eigenpairs."""
    lap = laplacian(s_star)
    want = min(c + 1, n)
    theta, vecs = smallest_eigenpairs(lap, want)
    return lap, vecs[:, :c], theta

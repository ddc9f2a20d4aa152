"""Cluster extraction from the consensus graph.

When the rank surrogate has done its job the symmetrized consensus graph has
exactly c connected components and the labels are read off directly. When it
has not (fixed beta, iteration cap), a documented fallback runs k-means on
the row-normalized spectral embedding.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, ValidationError


@dataclass
class ClusteringResult:
    labels: np.ndarray
    method: str  # "components" or "embedding_fallback"
    component_count: int
    threshold_used: float


def extract_components(s_star, eps):
    """Connected components of the thresholded symmetrized graph.

    Edge (i, j) exists iff (S*_ij + S*_ji) / 2 > eps. Component ids are
    assigned in ascending order of the smallest sample index they contain,
    which the ascending scan below produces directly.
    """
    s = np.asarray(s_star, dtype=np.float64)
    if eps < 0:
        raise ValidationError("eps must be >= 0")
    a = (s + s.T) / 2.0
    adj = a > eps
    n = s.shape[0]
    labels = np.full(n, -1, dtype=np.int64)
    count = 0
    for i in range(n):
        if labels[i] >= 0:
            continue
        member = np.zeros(n, dtype=bool)
        member[i] = True
        frontier = member.copy()
        while frontier.any():
            reached = adj[frontier].any(axis=0)
            frontier = reached & ~member
            member |= frontier
        labels[member] = count
        count += 1
    return labels, count


def kmeans(points, c, seed, restarts=10, max_iter=300):
    """Lloyd's algorithm with seeded random-point initialization.

    Runs `restarts` independent starts (per-restart streams derived from the
    seed), keeps the assignment with the smallest within-cluster sum of
    squares, ties going to the lower restart index. A cluster that empties
    during iteration is reseeded to the point farthest from its current
    centroid assignment.
    """
    x = np.asarray(points, dtype=np.float64)
    n = x.shape[0]
    if not 1 <= c <= n:
        raise ConfigurationError(f"kmeans cluster count c={c} outside [1, {n}]")
    best_labels = None
    best_wcss = np.inf
    for restart in range(restarts):
        rng = np.random.default_rng([seed, restart])
        centroids = x[rng.choice(n, size=c, replace=False)].copy()
        labels = np.full(n, -1, dtype=np.int64)
        for _ in range(max_iter):
            dist = ((x[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
            new_labels = dist.argmin(axis=1)
            point_cost = dist[np.arange(n), new_labels]
            # reseed empty clusters to the farthest points, one each
            for j in range(c):
                if not (new_labels == j).any():
                    far = int(point_cost.argmax())
                    centroids[j] = x[far]
                    new_labels[far] = j
                    point_cost[far] = 0.0
            if (new_labels == labels).all():
                break
            labels = new_labels
            for j in range(c):
                mask = labels == j
                if mask.any():
                    centroids[j] = x[mask].mean(axis=0)
        dist = ((x[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        wcss = float(dist[np.arange(n), labels].sum())
        if wcss < best_wcss:
            best_wcss = wcss
            best_labels = labels
    return best_labels


def default_edge_threshold(s_star):
    """1e-8 relative to the largest row sum of the symmetrized graph."""
    s = np.asarray(s_star, dtype=np.float64)
    a = (s + s.T) / 2.0
    return 1e-8 * float(a.sum(axis=1).max())


def assign_clusters(graph, c, eps=None, seed=0):
    """Final labels from a converged consensus graph.

    Components are used when their count is exactly c; otherwise k-means on
    the row-normalized embedding (zero rows left as-is) is the fallback.
    """
    if eps is None:
        eps = default_edge_threshold(graph.s_star)
    labels, count = extract_components(graph.s_star, eps)
    if count == c:
        return ClusteringResult(labels=labels, method="components",
                                component_count=count, threshold_used=eps)
    f = np.asarray(graph.embedding, dtype=np.float64)
    norms = np.sqrt((f * f).sum(axis=1))
    scaled = f / np.where(norms > 0, norms, 1.0)[:, None]
    labels = kmeans(scaled, c, seed=seed)
    return ClusteringResult(labels=labels, method="embedding_fallback",
                            component_count=count, threshold_used=eps)

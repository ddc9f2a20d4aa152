"""Sanity baseline: spectral clustering on concatenated views.

Single-view spectral clustering over the column-wise concatenation of all
(per-view standardized) feature matrices, using the same adaptive kNN
affinity construction as the main pipeline. Exists so a run can show the
fused consensus against the obvious single-graph alternative.
"""

from dataclasses import dataclass

import numpy as np

from .clusters import kmeans
from .linalg import (knn_sets, laplacian, pairwise_distances,
                     smallest_eigenpairs, standardize_columns)
from .view_graph import init_view_affinity


@dataclass
class BaselineResult:
    labels: np.ndarray
    method_name: str


def spectral_concat(dataset, c, k, seed):
    """Spectral clustering of the concatenated standardized features."""
    stacked = np.hstack([standardize_columns(np.asarray(v, dtype=np.float64))
                         for v in dataset.views])
    dist = pairwise_distances(stacked, standardize=False, name="concatenated")
    nbrs = knn_sets(dist, k)
    affinity = init_view_affinity(dist, nbrs, lam="auto")
    theta, f = smallest_eigenpairs(laplacian(affinity.dense()), c)
    norms = np.sqrt((f * f).sum(axis=1))
    scaled = f / np.where(norms > 0, norms, 1.0)[:, None]
    labels = kmeans(scaled, c, seed=seed)
    return BaselineResult(labels=labels, method_name="spectral_concat")

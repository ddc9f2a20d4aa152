"""Multi-view clustering by locality-constrained graph fusion.

The public surface is the solver entry point plus the handful of pieces a
script typically needs around it: dataset loading, cluster extraction, and
the label-agreement metrics.
"""

__version__ = "0.1.0"

from .baseline import BaselineResult, spectral_concat
from .clusters import ClusteringResult, assign_clusters, extract_components
from .consensus import ConsensusGraph
from .data import MultiViewDataset, load_dataset, make_synthetic
from .errors import (ConfigurationError, MvclustError, SolverError,
                     ValidationError)
from .metrics import accuracy, nmi, purity
from .solver import SolverConfig, SolverTrace, fit
from .weights import ViewWeights

__all__ = [
    "__version__",
    "BaselineResult",
    "ClusteringResult",
    "ConfigurationError",
    "ConsensusGraph",
    "MultiViewDataset",
    "MvclustError",
    "SolverConfig",
    "SolverError",
    "SolverTrace",
    "ValidationError",
    "ViewWeights",
    "accuracy",
    "assign_clusters",
    "extract_components",
    "fit",
    "load_dataset",
    "make_synthetic",
    "nmi",
    "purity",
    "spectral_concat",
]

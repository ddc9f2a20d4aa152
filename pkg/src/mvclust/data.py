"""Dataset ingestion and run-artifact file formats.

A dataset is a JSON manifest naming one headerless CSV matrix per view plus
an optional integer label file. All artifact writes are atomic (temp file in
the target directory, then rename) and floats are written with 12 significant
digits.
"""

import json
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (MissingFileError, NonNumericCellError, RaggedRowError,
                     RowCountMismatchError, ValidationError)

FLOAT_FORMAT = "%.12g"


@dataclass
class MultiViewDataset:
    """M feature matrices over the same N samples, optional ground truth."""

    name: str
    views: list
    labels: np.ndarray | None = None

    @property
    def n_samples(self):
        return self.views[0].shape[0]

    @property
    def n_views(self):
        return len(self.views)


def infer_cluster_count(labels):
    return int(np.unique(labels).size)


def read_matrix_csv(path, delimiter=","):
    """Parse a headerless CSV matrix, reporting file and line on failure."""
    path = Path(path)
    if not path.is_file():
        raise MissingFileError(f"{path}: file not found")
    rows = []
    width = None
    with open(path, "r") as handle:
        for lineno, line in enumerate(handle, 1):
            line = line.strip()
            if not line:
                continue
            cells = line.split(delimiter)
            if width is None:
                width = len(cells)
            elif len(cells) != width:
                raise RaggedRowError(
                    f"{path}:{lineno}: row has {len(cells)} cells, "
                    f"expected {width}")
            try:
                rows.append([float(cell) for cell in cells])
            except ValueError:
                for col, cell in enumerate(cells):
                    try:
                        float(cell)
                    except ValueError:
                        raise NonNumericCellError(
                            f"{path}:{lineno}: column {col}: "
                            f"cannot parse {cell.strip()!r}") from None
    if not rows:
        raise ValidationError(f"{path}: empty matrix")
    return np.asarray(rows, dtype=np.float64)


def read_labels_csv(path):
    """Parse one integer label per line."""
    path = Path(path)
    if not path.is_file():
        raise MissingFileError(f"{path}: file not found")
    labels = []
    with open(path, "r") as handle:
        for lineno, line in enumerate(handle, 1):
            token = line.strip()
            if not token:
                continue
            try:
                value = float(token)
            except ValueError:
                raise NonNumericCellError(
                    f"{path}:{lineno}: cannot parse label {token!r}") from None
            if value != int(value):
                raise NonNumericCellError(
                    f"{path}:{lineno}: label {token!r} is not an integer")
            labels.append(int(value))
    if not labels:
        raise ValidationError(f"{path}: empty label file")
    return np.asarray(labels, dtype=np.int64)


def load_dataset(manifest_path):
    """Load a dataset described by a JSON manifest.

    The manifest lists relative or absolute view paths, an optional labels
    path, an optional delimiter (default comma) and an optional name.
    """
    manifest_path = Path(manifest_path)
    if not manifest_path.is_file():
        raise MissingFileError(f"{manifest_path}: manifest not found")
    try:
        spec = json.loads(manifest_path.read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{manifest_path}: invalid JSON ({exc})") from None
    view_paths = spec.get("views")
    if not view_paths:
        raise ValidationError(f"{manifest_path}: manifest lists no views")
    base = manifest_path.parent
    delimiter = spec.get("delimiter", ",")
    views = []
    for rel in view_paths:
        views.append(read_matrix_csv(base / rel, delimiter=delimiter))
    counts = {str(base / rel): v.shape[0] for rel, v in zip(view_paths, views)}
    if len(set(counts.values())) > 1:
        detail = ", ".join(f"{p}: {c} rows" for p, c in counts.items())
        raise RowCountMismatchError(f"views disagree on sample count: {detail}")
    labels = None
    if spec.get("labels"):
        labels_path = base / spec["labels"]
        labels = read_labels_csv(labels_path)
        if labels.size != views[0].shape[0]:
            raise RowCountMismatchError(
                f"{labels_path}: {labels.size} labels for "
                f"{views[0].shape[0]} samples")
    name = spec.get("name", manifest_path.stem)
    return MultiViewDataset(name=name, views=views, labels=labels)


def atomic_write_text(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_matrix_csv(path, matrix, delimiter=","):
    matrix = np.atleast_2d(np.asarray(matrix, dtype=np.float64))
    lines = [delimiter.join(FLOAT_FORMAT % x for x in row) for row in matrix]
    atomic_write_text(path, "\n".join(lines) + "\n")


def write_labels_csv(path, labels):
    labels = np.asarray(labels)
    atomic_write_text(path, "\n".join(str(int(x)) for x in labels) + "\n")


def write_json(path, obj):
    atomic_write_text(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def synthetic_arrays(n_per_cluster, c, n_views, noise, seed):
    """Multi-view Gaussian blobs, in memory.

    c cluster centers are drawn in a 6-d latent space, redrawn (same stream)
    until the smallest pairwise center distance reaches 1.6, which keeps the
    blobs cleanly separable at the default noise scale without making
    neighborhood gaps so flat that the solver crawls; each view applies its
    own random orthogonal rotation before adding isotropic noise.
    Deterministic for a given seed.
    """
    if min(n_per_cluster, c, n_views) < 1 or noise < 0:
        raise ValidationError("synthetic parameters must be positive")
    rng = np.random.default_rng(seed)
    dim = 6
    centers = rng.normal(size=(c, dim))
    for _ in range(100):
        if c == 1:
            break
        diff = centers[:, None, :] - centers[None, :, :]
        gap = np.sqrt((diff ** 2).sum(axis=2))
        np.fill_diagonal(gap, np.inf)
        if gap.min() >= 1.6:
            break
        centers = rng.normal(size=(c, dim))
    labels = np.repeat(np.arange(c), n_per_cluster)
    latent = centers[labels]
    views = []
    for _ in range(n_views):
        q, _ = np.linalg.qr(rng.normal(size=(dim, dim)))
        views.append(latent @ q + noise * rng.normal(size=latent.shape))
    return MultiViewDataset(name="synthetic", views=views, labels=labels)


def make_synthetic(n_per_cluster, c, n_views, noise, seed, out_dir):
    """Generate synthetic blobs and write matrices, labels, and manifest.

    Same construction as synthetic_arrays (identical data for identical
    seed). Returns the manifest path.
    """
    dataset = synthetic_arrays(n_per_cluster, c, n_views, noise, seed)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    view_files = []
    for v, view in enumerate(dataset.views):
        fname = f"view_{v}.csv"
        write_matrix_csv(out_dir / fname, view)
        view_files.append(fname)
    write_labels_csv(out_dir / "labels.csv", dataset.labels)
    manifest = {
        "name": "synthetic",
        "views": view_files,
        "labels": "labels.csv",
        "delimiter": ",",
    }
    manifest_path = out_dir / "manifest.json"
    write_json(manifest_path, manifest)
    return manifest_path

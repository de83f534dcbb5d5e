"""2-D proxy embeddings: native PCA or an externally computed import.

Only the projection lives here; everything downstream (triangulation,
pruning, merging, anomaly scoring) accepts any 2-D proxy, so external
embeddings (e.g. UMAP output) are imported from file rather than
recomputed natively.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import io
from .errors import DegenerateError, ShapeMismatchError


@dataclass(frozen=True)
class Embedding:
    coords: np.ndarray  # (n, 2) float64
    source: str         # "pca_native" or "imported"


def pca2(data: np.ndarray, seed: int = 0) -> Embedding:
    """Project rows onto the top-2 eigenvectors of the sample covariance.

    Deterministic: the seed is reserved for future stochastic reducers and
    does not influence the result. Sign convention: the largest-magnitude
    component of each eigenvector is positive. Eigenvalue ties break by
    the axis order of the first nonzero eigenvector component.
    """
    data = np.asarray(data, dtype=np.float64)
    if data.ndim != 2:
        raise ShapeMismatchError("data must be a 2-D matrix")
    n, d = data.shape
    if n < 3:
        raise DegenerateError(f"PCA projection needs at least 3 points, got {n}")

    centered = data - data.mean(axis=0)
    cov = centered.T @ centered / (n - 1)
    eigvals, eigvecs = np.linalg.eigh(cov)

    # order by descending eigenvalue; ties by first nonzero component's axis
    def tie_key(idx):
        v = eigvecs[:, idx]
        nz = np.nonzero(v)[0]
        return int(nz[0]) if len(nz) else d

    order = sorted(range(d), key=lambda i: (-eigvals[i], tie_key(i)))
    coords = np.zeros((n, 2), dtype=np.float64)
    for out_col, idx in enumerate(order[:2]):
        v = eigvecs[:, idx].copy()
        peak = int(np.argmax(np.abs(v)))
        if v[peak] < 0:
            v = -v
        coords[:, out_col] = centered @ v
    return Embedding(coords=coords, source="pca_native")


def import_embedding(path, data: np.ndarray, fmt: str = "csv",
                     header: bool = False) -> Embedding:
    """Load an externally computed 2-column embedding aligned with data."""
    coords = io.load_matrix(path, fmt=fmt, header=header)
    return embedding_from_array(coords, data)


def embedding_from_array(coords: np.ndarray, data: np.ndarray) -> Embedding:
    """Wrap an in-memory (n, 2) array as an imported embedding."""
    coords = np.asarray(coords, dtype=np.float64)
    data = np.asarray(data, dtype=np.float64)
    if coords.ndim != 2 or coords.shape[1] != 2:
        raise ShapeMismatchError(
            f"embedding must have exactly 2 columns, got shape {coords.shape}"
        )
    if coords.shape[0] != data.shape[0]:
        raise ShapeMismatchError(
            f"embedding has {coords.shape[0]} rows, data has {data.shape[0]}"
        )
    return Embedding(coords=coords, source="imported")

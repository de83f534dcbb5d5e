"""Triangle sizing, robust normalization, sigma pruning and components.

Triangle sizes are measured in both the original space and the projection.
Sizes are normalized with median/MAD (robust to the skewed size
distributions triangulations produce), then thresholded with a mean/std
cut over the normalized values: theta = mean(z) + sigma_f * std(z). A
triangle survives when max(z, z_proj) <= theta; theta itself is computed
from the original-space z only. Surviving edges are the edges of the
retained triangles, and their connected components are the initial
clusters.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .delaunay import Triangulation
from .errors import EmptyError, ShapeMismatchError

SIZE_MODES = ("max_edge", "sum_edges", "min_edge")


@dataclass(frozen=True)
class TriangleSizes:
    sizes: np.ndarray       # original-space size per triangle
    sizes_proj: np.ndarray  # projected-space size per triangle
    mode: str


@dataclass(frozen=True)
class RobustStats:
    median: float
    mad: float


@dataclass(frozen=True)
class PruneResult:
    keep_mask: np.ndarray
    theta: float
    z: np.ndarray
    z_proj: np.ndarray


@dataclass(frozen=True)
class EdgeGraph:
    n_vertices: int
    edges: np.ndarray  # (e, 2) int64, sorted pairs, deduplicated


def _pairwise_sizes(tri: Triangulation, coords: np.ndarray, mode: str) -> np.ndarray:
    pts = coords[tri.unique_rows]
    t = tri.triangles
    if len(t) == 0:
        return np.zeros(0, dtype=np.float64)
    e1 = np.linalg.norm(pts[t[:, 0]] - pts[t[:, 1]], axis=1)
    e2 = np.linalg.norm(pts[t[:, 1]] - pts[t[:, 2]], axis=1)
    e3 = np.linalg.norm(pts[t[:, 2]] - pts[t[:, 0]], axis=1)
    stacked = np.stack([e1, e2, e3])
    if mode == "max_edge":
        return stacked.max(axis=0)
    if mode == "sum_edges":
        return stacked.sum(axis=0)
    if mode == "min_edge":
        return stacked.min(axis=0)
    raise ValueError(f"unknown size mode {mode!r}")


def triangle_sizes(tri: Triangulation, original, proj,
                   mode: str = "max_edge") -> TriangleSizes:
    """Per-triangle size in both spaces under the selected mode."""
    orig = np.asarray(getattr(original, "coords", original), dtype=np.float64)
    prj = np.asarray(getattr(proj, "coords", proj), dtype=np.float64)
    if orig.ndim == 1:
        orig = orig.reshape(-1, 1)
    for name, coords in (("original", orig), ("projected", prj)):
        if coords.shape[0] != tri.n_input:
            raise ShapeMismatchError(
                f"{name} space has {coords.shape[0]} rows, "
                f"triangulation expects {tri.n_input}"
            )
    return TriangleSizes(
        sizes=_pairwise_sizes(tri, orig, mode),
        sizes_proj=_pairwise_sizes(tri, prj, mode),
        mode=mode,
    )


def robust_z(sizes) -> tuple[RobustStats, np.ndarray]:
    """Median/MAD normalization: z_i = (s_i - median) / MAD.

    With zero dispersion nothing is an outlier, so all-equal inputs get
    z = 0. Otherwise a zero MAD is floored at 1e-12 * max(|median|, 1) to
    keep the genuinely deviant entries detectable.
    """
    s = np.asarray(sizes, dtype=np.float64)
    if s.size == 0:
        raise EmptyError("robust_z needs at least one value")
    med = float(np.median(s))
    mad = float(np.median(np.abs(s - med)))
    stats = RobustStats(median=med, mad=mad)
    if mad == 0.0:
        if np.all(s == s[0]):
            return stats, np.zeros_like(s)
        mad_eff = 1e-12 * max(abs(med), 1.0)
    else:
        mad_eff = mad
    return stats, (s - med) / mad_eff


def prune_threshold(z, sigma_f: float) -> float:
    """theta = mean(z) + sigma_f * population-stddev(z)."""
    z = np.asarray(z, dtype=np.float64)
    if z.size == 0:
        raise EmptyError("prune_threshold needs at least one z value")
    return float(z.mean() + sigma_f * z.std())


def prune(tri: Triangulation, sizes: TriangleSizes,
          sigma_f: float) -> tuple[PruneResult, EdgeGraph]:
    """Drop oversized triangles; keep edges backed by >= 1 retained triangle.

    An edge shared by a kept and a discarded triangle survives: removing it
    would disconnect dense interiors whenever one adjacent sliver dies.
    """
    _, z = robust_z(sizes.sizes)
    _, z_proj = robust_z(sizes.sizes_proj)
    theta = prune_threshold(z, sigma_f)
    keep = np.maximum(z, z_proj) <= theta

    edge_set = set()
    for a, b, c in tri.triangles[keep]:
        a, b, c = int(a), int(b), int(c)
        edge_set.add((a, b))
        edge_set.add((a, c))
        edge_set.add((b, c))
    edges = np.asarray(sorted(edge_set), dtype=np.int64).reshape(len(edge_set), 2)
    result = PruneResult(keep_mask=keep, theta=theta, z=z, z_proj=z_proj)
    return result, EdgeGraph(n_vertices=tri.n_vertices, edges=edges)


class UnionFind:
    """Disjoint sets with path compression and union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True


def connected_components(graph: EdgeGraph) -> np.ndarray:
    """Component labels 0..k-1, ordered by each component's minimum vertex.

    Isolated vertices form singleton components.
    """
    uf = UnionFind(graph.n_vertices)
    for a, b in graph.edges:
        uf.union(int(a), int(b))
    labels = np.empty(graph.n_vertices, dtype=np.int64)
    root_label = {}
    for v in range(graph.n_vertices):
        r = uf.find(v)
        if r not in root_label:
            root_label[r] = len(root_label)  # v ascends, so min-vertex order
        labels[v] = root_label[r]
    return labels

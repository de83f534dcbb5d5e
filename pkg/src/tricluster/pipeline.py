"""End-to-end clustering pipeline with ablation switches.

Stage order: project -> triangulate -> prune -> components ->
representatives -> merge -> anomaly -> label. Ablations: merging can be
skipped, back-projection can be disabled (all original-space reads are
replaced by the embedding, making the result a pure function of the
embedding), and anomaly_sensitivity = 0 merges every mergeable anomaly
group.
"""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from . import anomaly as anomaly_mod
from . import merging as merging_mod
from . import pruning as pruning_mod
from .delaunay import triangulate
from .errors import (
    CollinearError,
    NonFiniteError,
    ShapeMismatchError,
    TriclusterError,
)
from .projection import Embedding, embedding_from_array, pca2

PRUNE_RANGE = (0.5, 2.0)
MERGE_RANGE = (-2.0, -0.5)


@dataclass(frozen=True)
class ClusterParams:
    """Pipeline knobs; defaults mirror the published quick-start settings."""

    prune_param: float = 0.3
    merge_param: float = -0.8
    tau: int = 3
    anomaly_sensitivity: float = 0.99
    dim_reduction: str = "pca"          # "pca" or "imported"
    back_projection: bool = True
    merging_enabled: bool = True
    size_mode: str = "max_edge"
    seed: int = 0
    standardize: bool = False
    jitter_on_collinear: bool = False

    def validate(self):
        if self.tau < 1:
            raise ValueError("tau must be >= 1")
        if not 0.0 <= self.anomaly_sensitivity <= 1.0:
            raise ValueError("anomaly_sensitivity must lie in [0, 1]")
        if self.dim_reduction not in ("pca", "imported"):
            raise ValueError(f"unknown dim_reduction {self.dim_reduction!r}")
        if self.size_mode not in pruning_mod.SIZE_MODES:
            raise ValueError(f"unknown size_mode {self.size_mode!r}")
        # documented search ranges are soft guidance, not hard errors
        if not PRUNE_RANGE[0] < self.prune_param < PRUNE_RANGE[1]:
            warnings.warn(
                f"prune_param={self.prune_param} is outside the usual "
                f"search range {PRUNE_RANGE}",
                stacklevel=2,
            )
        if not MERGE_RANGE[0] < self.merge_param < MERGE_RANGE[1]:
            warnings.warn(
                f"merge_param={self.merge_param} is outside the usual "
                f"search range {MERGE_RANGE}",
                stacklevel=2,
            )


@dataclass(frozen=True)
class ClusteringResult:
    labels: np.ndarray
    n_clusters: int
    n_anomalies: int
    diagnostics: dict = field(default_factory=dict)


class _Stage:
    """Tags exceptions raised inside a stage with the stage name."""

    def __init__(self, name, diagnostics):
        self.name = name
        self.diagnostics = diagnostics

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        self.diagnostics[f"ms_{self.name}"] = (
            (time.perf_counter() - self.t0) * 1000.0
        )
        if exc is not None and isinstance(exc, TriclusterError):
            if exc.stage is None:
                exc.stage = self.name
        return False


def fit_predict(data, params: ClusterParams = None,
                external_embedding: Embedding = None) -> ClusteringResult:
    """Run the full pipeline and return labels plus diagnostics."""
    params = params or ClusterParams()
    params.validate()
    data = np.asarray(data, dtype=np.float64)
    if data.ndim != 2:
        raise ShapeMismatchError("data must be a 2-D matrix")
    if not np.isfinite(data).all():
        raise NonFiniteError("data contains NaN or Inf")

    diag = {}

    with _Stage("project", diag):
        if params.dim_reduction == "imported":
            if external_embedding is None:
                raise ShapeMismatchError(
                    "dim_reduction='imported' requires an external embedding"
                )
            coords = getattr(external_embedding, "coords", external_embedding)
            emb = embedding_from_array(coords, data)
        else:
            pca_input = data
            if params.standardize:
                std = data.std(axis=0)
                std[std == 0] = 1.0
                pca_input = (data - data.mean(axis=0)) / std
            emb = pca2(pca_input, seed=params.seed)
    proj = emb.coords

    # back-projection off: every original-space read uses the embedding,
    # so the outcome is a pure function of the embedding
    back_space = data if params.back_projection else proj

    with _Stage("triangulate", diag):
        try:
            tri = triangulate(proj)
        except CollinearError:
            if not params.jitter_on_collinear:
                raise
            proj = _deterministic_jitter(proj, params.seed)
            emb = Embedding(coords=proj, source=emb.source)
            if not params.back_projection:
                back_space = proj
            tri = triangulate(proj)
    diag["n_triangles"] = len(tri.triangles)

    x_u = back_space[tri.unique_rows]
    p_u = proj[tri.unique_rows]

    with _Stage("prune", diag):
        sizes = pruning_mod.triangle_sizes(tri, back_space, proj,
                                           mode=params.size_mode)
        prune_res, graph = pruning_mod.prune(tri, sizes, params.prune_param)
        labels_u = pruning_mod.connected_components(graph)
    diag["n_triangles_kept"] = int(prune_res.keep_mask.sum())
    diag["theta_prune"] = prune_res.theta
    diag["n_components_initial"] = int(labels_u.max()) + 1
    # references to the intermediates (cheap; used by --diag/--svg dumps)
    diag["embedding"] = emb
    diag["triangulation"] = tri
    diag["sizes"] = sizes
    diag["prune_result"] = prune_res

    with _Stage("merge", diag):
        merge_count = 0
        if params.merging_enabled:
            reps = merging_mod.compute_representatives(labels_u, p_u)
            before = int(labels_u.max()) + 1
            labels_u = merging_mod.merge_clusters(
                labels_u, reps, x_u, p_u, params.merge_param,
                diagnostics=diag,
            )
            merge_count = before - (int(labels_u.max()) + 1)
    diag["merge_count"] = merge_count

    with _Stage("anomaly", diag):
        groups = anomaly_mod.detect_anomaly_groups(labels_u, params.tau)
        pre_merge_anoms_u = {p for g in groups for p in g.point_indices}
        diag["pre_merge_anomaly_count"] = int(
            sum(1 for i in range(tri.n_input)
                if int(tri.rep_u[i]) in pre_merge_anoms_u)
        )
        aparams = anomaly_mod.AnomalyParams(
            tau=params.tau,
            anomaly_sensitivity=params.anomaly_sensitivity,
            size_mode=params.size_mode,
        )
        labels_u, decisions = anomaly_mod.score_and_merge(
            groups, labels_u, tri, back_space, proj, aparams
        )
    diag["anomaly_groups"] = decisions
    diag["n_anomaly_groups"] = len(decisions)
    diag["n_groups_merged"] = sum(1 for d in decisions if d.merged)

    # expand labels back to the input rows (duplicates inherit their
    # representative's label), then canonicalize to -1 plus 0..k-1
    expanded = labels_u[tri.rep_u]
    labels = _canonicalize(expanded)

    n_anomalies = int((labels == -1).sum())
    n_clusters = int(labels.max()) + 1 if (labels >= 0).any() else 0
    return ClusteringResult(
        labels=labels,
        n_clusters=n_clusters,
        n_anomalies=n_anomalies,
        diagnostics=diag,
    )


def _canonicalize(labels: np.ndarray) -> np.ndarray:
    out = np.full(labels.shape, -1, dtype=np.int64)
    mapping = {}
    for i, lab in enumerate(labels):
        if lab < 0:
            continue
        lab = int(lab)
        if lab not in mapping:
            mapping[lab] = len(mapping)
        out[i] = mapping[lab]
    return out


def _deterministic_jitter(coords: np.ndarray, seed: int) -> np.ndarray:
    """Opt-in escape hatch for exactly collinear embeddings."""
    span = coords.max(axis=0) - coords.min(axis=0)
    diagonal = float(np.sqrt((span * span).sum()))
    scale = 1e-9 * (diagonal if diagonal > 0 else 1.0)
    rng = np.random.Generator(np.random.PCG64(seed))
    return coords + rng.uniform(-scale, scale, size=coords.shape)


class DelaunayClusterer:
    """Object-style front end mirroring the published snippet semantics."""

    def __init__(self, prune_param=0.3, merge_param=-0.8,
                 dim_reduction="pca", back_proj=True,
                 anomaly_sensitivity=0.99, tau=3, merging_enabled=True,
                 size_mode="max_edge", seed=0, standardize=False,
                 jitter_on_collinear=False):
        self.params = ClusterParams(
            prune_param=prune_param,
            merge_param=merge_param,
            tau=tau,
            anomaly_sensitivity=anomaly_sensitivity,
            dim_reduction=dim_reduction,
            back_projection=back_proj,
            merging_enabled=merging_enabled,
            size_mode=size_mode,
            seed=seed,
            standardize=standardize,
            jitter_on_collinear=jitter_on_collinear,
        )
        self.result_ = None

    def fit_predict(self, data, embedding=None) -> np.ndarray:
        params = self.params
        if embedding is not None and params.dim_reduction != "imported":
            params = replace(params, dim_reduction="imported")
        self.result_ = fit_predict(data, params, external_embedding=embedding)
        return self.result_.labels

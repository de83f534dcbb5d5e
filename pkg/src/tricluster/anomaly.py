"""Anomaly-group detection, scoring against neighbor clusters, merging.

Clusters no larger than tau become anomaly groups, provisionally labeled
-1. Each group A is scored against every cluster C that contains direct
triangulation neighbors of A's points:

    S(C | A) = (mu / n) * sum_{p in A} sum_{q in C, q ~ p} 1 / d_pq

where q ~ p means (p, q) is an edge of the stage-one triangulation,
n is the number of neighbor edges leaving the group, mu is the average
projected-space triangle size, and d_pq balances both spaces:

    d_pq = max(alpha * ||X_p - X_q||, ||Xproj_p - Xproj_q||),
    alpha = median(s_proj) / median(s).

The group is merged into the best-scoring cluster when its score exceeds
delta. The public knob is anomaly_sensitivity in [0, 1]; delta is the
sensitivity-quantile of all candidate scores in the run, with 1 mapping
to +inf (never merge) and 0 to -inf (always merge).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .delaunay import Triangulation
from .errors import ZeroDistanceError
from .pruning import triangle_sizes


@dataclass
class AnomalyGroup:
    point_indices: list        # vertex ids sharing one small pre-merge cluster
    neighbor_edges: list = field(default_factory=list)  # (p, q) pairs, q outside


@dataclass(frozen=True)
class AnomalyParams:
    tau: int = 3
    anomaly_sensitivity: float = 1.0
    size_mode: str = "max_edge"


@dataclass(frozen=True)
class GroupDecision:
    group_id: int
    point_indices: tuple
    best_cluster: int      # -1 when the group has no cluster neighbors
    best_score: float
    delta: float
    merged: bool


def detect_anomaly_groups(labels, tau: int) -> list[AnomalyGroup]:
    """Every cluster of size <= tau becomes an anomaly group.

    Groups are ordered by their minimum point index.
    """
    labels = np.asarray(labels, dtype=np.int64)
    groups = []
    for cid in np.unique(labels[labels >= 0]):
        members = np.where(labels == cid)[0]
        if len(members) <= tau:
            groups.append(AnomalyGroup(point_indices=[int(m) for m in members]))
    groups.sort(key=lambda g: min(g.point_indices))
    return groups


def anomaly_distance(p: int, q: int, original, proj, alpha: float) -> float:
    """max of the alpha-scaled original distance and the projected distance."""
    orig = np.asarray(getattr(original, "coords", original), dtype=np.float64)
    if orig.ndim == 1:
        orig = orig.reshape(-1, 1)
    prj = np.asarray(getattr(proj, "coords", proj), dtype=np.float64)
    d_orig = float(np.linalg.norm(orig[p] - orig[q]))
    d_proj = float(np.linalg.norm(prj[p] - prj[q]))
    d = max(alpha * d_orig, d_proj)
    if d == 0.0:
        raise ZeroDistanceError(f"points {p} and {q} coincide in both spaces")
    return d


def score_and_merge(groups, labels, tri: Triangulation, original, proj,
                    params: AnomalyParams):
    """Merge each group into its best-scoring neighbor cluster, or keep -1.

    Scores are computed against the pre-merge cluster labels for every
    group before any label is applied, so the outcome is independent of
    processing order. Returns (labels, decisions) where decisions carry
    the per-group diagnostics.
    """
    labels = np.asarray(labels, dtype=np.int64).copy()
    orig = np.asarray(getattr(original, "coords", original), dtype=np.float64)
    if orig.ndim == 1:
        orig = orig.reshape(-1, 1)
    prj = np.asarray(getattr(proj, "coords", proj), dtype=np.float64)

    anomaly_points = set()
    for g in groups:
        anomaly_points.update(g.point_indices)
    pre_labels = labels.copy()
    for p in anomaly_points:
        labels[p] = -1

    if not groups:
        return labels, []

    sizes = triangle_sizes(tri, orig, prj, mode=params.size_mode)
    med_proj = float(np.median(sizes.sizes_proj)) if len(sizes.sizes_proj) else 0.0
    med_orig = float(np.median(sizes.sizes)) if len(sizes.sizes) else 0.0
    alpha = med_proj / med_orig if med_orig > 0 else 1.0
    mu = float(sizes.sizes_proj.mean()) if len(sizes.sizes_proj) else 0.0
    dist_floor = 1e-12 * (med_proj if med_proj > 0 else 1.0)

    neighbors = {}
    for a, b in tri.edges:
        neighbors.setdefault(int(a), []).append(int(b))
        neighbors.setdefault(int(b), []).append(int(a))

    rows = tri.unique_rows

    # score every (group, cluster) candidate against pre-merge labels
    group_scores = []
    all_scores = []
    for g in groups:
        in_group = set(g.point_indices)
        g.neighbor_edges = []
        inv_sums = {}
        n_edges = 0
        for p in sorted(in_group):
            for q in neighbors.get(p, ()):
                if q in in_group:
                    continue
                g.neighbor_edges.append((p, q))
                n_edges += 1
                cid = int(pre_labels[q])
                if cid < 0 or q in anomaly_points:
                    continue
                d_orig = float(np.linalg.norm(orig[rows[p]] - orig[rows[q]]))
                d_proj = float(np.linalg.norm(prj[rows[p]] - prj[rows[q]]))
                d = max(alpha * d_orig, d_proj, dist_floor)
                inv_sums[cid] = inv_sums.get(cid, 0.0) + 1.0 / d
        scores = {
            cid: (mu / n_edges) * total for cid, total in inv_sums.items()
        } if n_edges else {}
        group_scores.append(scores)
        all_scores.extend(scores.values())

    sens = float(params.anomaly_sensitivity)
    if sens >= 1.0:
        delta = np.inf
    elif sens <= 0.0:
        delta = -np.inf
    elif all_scores:
        delta = float(np.quantile(np.asarray(all_scores), sens))
    else:
        delta = np.inf

    decisions = []
    for gid, (g, scores) in enumerate(zip(groups, group_scores)):
        best_cluster = -1
        best_score = -np.inf
        for cid in sorted(scores):  # ascending id: ties go to the smaller id
            if scores[cid] > best_score:
                best_score = scores[cid]
                best_cluster = cid
        merged = best_cluster >= 0 and best_score > delta
        if merged:
            for p in g.point_indices:
                labels[p] = best_cluster
        decisions.append(GroupDecision(
            group_id=gid,
            point_indices=tuple(g.point_indices),
            best_cluster=best_cluster,
            best_score=best_score if np.isfinite(best_score) else float("nan"),
            delta=delta,
            merged=merged,
        ))
    return labels, decisions

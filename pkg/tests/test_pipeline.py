import numpy as np
import pytest

from tricluster import (
    ClusterParams,
    CollinearError,
    DelaunayClusterer,
    NonFiniteError,
    ShapeMismatchError,
    ari,
    connected_components,
    fit_predict,
    nmi,
    prune,
    triangle_sizes,
    triangulate,
)
from tricluster.projection import embedding_from_array, pca2


def three_blobs(seed=7, n_per=30, std=1.0):
    rng = np.random.default_rng(seed)
    centers = np.array([[0.0, 0.0], [40.0, 0.0], [1.8125, 40.96]])
    pts = np.vstack([c + rng.normal(0, std, (n_per, 2)) for c in centers])
    truth = np.repeat([0, 1, 2], n_per)
    return pts, truth


def test_three_blobs_perfect_recovery():
    pts, truth = three_blobs()
    params = ClusterParams(prune_param=1.0, merge_param=-1.9,
                           anomaly_sensitivity=1.0)
    result = fit_predict(pts, params)
    assert result.n_clusters == 3
    assert result.n_anomalies == 0
    assert ari(truth, result.labels) == 1.0
    assert nmi(truth, result.labels) == 1.0


def test_determinism_bit_identical():
    pts, _ = three_blobs(seed=3)
    params = ClusterParams(prune_param=1.0, anomaly_sensitivity=0.9)
    a = fit_predict(pts, params)
    b = fit_predict(pts, params)
    assert np.array_equal(a.labels, b.labels)


def test_stage_composition_matches_component_labels():
    rng = np.random.default_rng(5)
    pts = np.vstack([rng.normal(0, 1, (40, 2)),
                     rng.normal(0, 1, (40, 2)) + [30, 0]])
    params = ClusterParams(prune_param=1.0, merging_enabled=False,
                           anomaly_sensitivity=1.0, tau=3)
    result = fit_predict(pts, params)

    emb = pca2(pts)
    tri = triangulate(emb.coords)
    sizes = triangle_sizes(tri, pts, emb.coords, "max_edge")
    _, graph = prune(tri, sizes, 1.0)
    comp = connected_components(graph)
    # small components become -1, the rest must match exactly (both sides
    # are canonicalized by ascending minimum point index)
    sizes_by_label = {c: int((comp == c).sum()) for c in np.unique(comp)}
    expected = comp.copy()
    for c, size in sizes_by_label.items():
        if size <= 3:
            expected[comp == c] = -1
    # renumber surviving labels in first-touch order
    out = np.full_like(expected, -1)
    mapping = {}
    for i, lab in enumerate(expected):
        if lab >= 0:
            mapping.setdefault(lab, len(mapping))
            out[i] = mapping[lab]
    assert np.array_equal(result.labels, out)


def test_proj_off_is_pure_function_of_embedding():
    rng = np.random.default_rng(8)
    data = rng.standard_normal((60, 5))
    emb = embedding_from_array(rng.standard_normal((60, 2)), data)
    params = ClusterParams(prune_param=1.0, back_projection=False,
                           dim_reduction="imported")
    a = fit_predict(data, params, external_embedding=emb)
    other = rng.standard_normal((60, 9)) * 100  # any matrix, same row count
    b = fit_predict(other, params, external_embedding=emb)
    assert np.array_equal(a.labels, b.labels)


def test_output_contract_contiguous_labels():
    rng = np.random.default_rng(9)
    data = rng.standard_normal((80, 4))
    result = fit_predict(data, ClusterParams(prune_param=0.8,
                                             anomaly_sensitivity=1.0))
    labels = result.labels
    assert len(labels) == 80
    present = set(labels.tolist())
    non_neg = sorted(v for v in present if v >= 0)
    assert non_neg == list(range(len(non_neg)))
    assert result.n_anomalies == int((labels == -1).sum())
    assert result.n_clusters == len(non_neg)


def test_duplicates_inherit_representative_label():
    pts, _ = three_blobs(seed=11, n_per=20)
    dup = np.vstack([pts, pts[:5]])  # exact duplicates of the first 5 rows
    result = fit_predict(dup, ClusterParams(prune_param=1.0,
                                            anomaly_sensitivity=1.0))
    assert np.array_equal(result.labels[60:], result.labels[:5])


def test_nonfinite_rejected():
    data = np.zeros((10, 2))
    data[3, 1] = np.nan
    with pytest.raises(NonFiniteError):
        fit_predict(data, ClusterParams())


def test_imported_embedding_required():
    data = np.random.default_rng(0).standard_normal((10, 3))
    with pytest.raises(ShapeMismatchError):
        fit_predict(data, ClusterParams(dim_reduction="imported"))


def test_collinear_raises_with_stage():
    data = np.column_stack([np.arange(10.0), np.arange(10.0)])
    emb = embedding_from_array(data[:, :2], data)
    with pytest.raises(CollinearError) as exc_info:
        fit_predict(data, ClusterParams(dim_reduction="imported",
                                        prune_param=1.0),
                    external_embedding=emb)
    assert exc_info.value.stage == "triangulate"


def test_collinear_jitter_flag_recovers():
    data = np.column_stack([np.arange(12.0), np.arange(12.0)])
    emb = embedding_from_array(data[:, :2], data)
    params = ClusterParams(dim_reduction="imported", prune_param=1.0,
                           jitter_on_collinear=True)
    result = fit_predict(data, params, external_embedding=emb)
    assert len(result.labels) == 12


def test_param_validation():
    with pytest.raises(ValueError):
        ClusterParams(tau=0).validate()
    with pytest.raises(ValueError):
        ClusterParams(anomaly_sensitivity=1.5).validate()
    with pytest.raises(ValueError):
        ClusterParams(dim_reduction="tsne").validate()
    with pytest.warns(UserWarning, match="prune_param"):
        ClusterParams(prune_param=0.3).validate()
    with pytest.warns(UserWarning, match="merge_param"):
        ClusterParams(merge_param=-5.0).validate()


def test_diagnostics_counters_present():
    pts, _ = three_blobs(seed=13)
    result = fit_predict(pts, ClusterParams(prune_param=1.0))
    d = result.diagnostics
    for key in ("ms_project", "ms_triangulate", "ms_prune", "ms_merge",
                "ms_anomaly", "n_triangles", "n_triangles_kept",
                "theta_prune", "merge_count", "n_components_initial"):
        assert key in d


def test_standardize_flag():
    rng = np.random.default_rng(23)
    # one dominant-scale column; standardizing changes the projection
    data = np.column_stack([rng.normal(0, 100.0, 60),
                            rng.normal(0, 1.0, 60),
                            rng.normal(0, 1.0, 60)])
    raw = fit_predict(data, ClusterParams(prune_param=1.0))
    std = fit_predict(data, ClusterParams(prune_param=1.0, standardize=True))
    a = raw.diagnostics["embedding"].coords
    b = std.diagnostics["embedding"].coords
    assert not np.allclose(a, b)
    assert len(std.labels) == 60


def test_theta_merge_recorded_when_k_at_least_3():
    pts, _ = three_blobs(seed=29)
    result = fit_predict(pts, ClusterParams(prune_param=1.0,
                                            merge_param=-1.9,
                                            anomaly_sensitivity=1.0))
    assert "theta_merge" in result.diagnostics
    assert result.diagnostics["n_rep_edges"] == 3


def test_clusterer_front_end():
    pts, truth = three_blobs(seed=17)
    model = DelaunayClusterer(prune_param=1.0, merge_param=-1.9,
                              anomaly_sensitivity=1.0)
    labels = model.fit_predict(pts)
    assert ari(truth, labels) == 1.0
    assert model.result_.n_clusters == 3


def test_anomaly_sensitivity_zero_merges_everything_mergeable():
    rng = np.random.default_rng(19)
    pts = np.vstack([rng.normal(0, 1, (50, 2)),
                     np.array([[6.0, 0.0], [7.0, 2.0]])])
    res_keep = fit_predict(pts, ClusterParams(prune_param=1.0,
                                              anomaly_sensitivity=1.0))
    res_merge = fit_predict(pts, ClusterParams(prune_param=1.0,
                                               anomaly_sensitivity=0.0))
    assert res_merge.n_anomalies <= res_keep.n_anomalies
    # every group with a cluster neighbor is absorbed at sensitivity 0
    unmergeable = sum(
        len(d.point_indices)
        for d in res_merge.diagnostics["anomaly_groups"]
        if d.best_cluster < 0
    )
    assert res_merge.n_anomalies == unmergeable

import numpy as np
import pytest

from tricluster import (
    ClusterParams,
    ConfigError,
    SynthConfig,
    fit_predict,
    generate,
    generate_backprojection_demo,
    generate_degradation_pair,
)


def test_cluster_std_formula():
    cfg = SynthConfig(overlap=0.5, n_dim=4)
    assert cfg.cluster_std == pytest.approx(0.5 * 2.0 * 2.0)


def test_no_anomalies_when_fraction_zero():
    _, labels = generate(SynthConfig(n_points=200, anomaly_fraction=0.0,
                                     random_state=1))
    assert (labels == -1).sum() == 0


def test_label_accounting_500_points():
    cfg = SynthConfig(n_points=500, n_clusters=4, n_dim=5, overlap=0.1,
                      anomaly_fraction=0.05, snake_fraction=0.2,
                      random_state=42)
    data, labels = generate(cfg)
    assert data.shape == (500, 5)
    values, counts = np.unique(labels, return_counts=True)
    hist = dict(zip(values.tolist(), counts.tolist()))
    assert hist[-1] == 25           # round(0.05 * 500)
    assert hist[4] == 95            # snake: round(0.2 * 475)
    assert sum(hist[i] for i in range(4)) == 380
    assert max(hist[i] for i in range(4)) - min(hist[i] for i in range(4)) <= 1


def test_snake_label_distinct():
    _, labels = generate(SynthConfig(n_points=300, n_clusters=3,
                                     snake_fraction=0.3, random_state=2))
    assert 3 in labels  # the snake's own label, one past the blobs


def test_deterministic_generation():
    cfg = SynthConfig(n_points=400, n_clusters=5, n_dim=7, random_state=77)
    d1, l1 = generate(cfg)
    d2, l2 = generate(cfg)
    assert np.array_equal(d1, d2)
    assert np.array_equal(l1, l2)


def test_different_seed_different_data():
    a, _ = generate(SynthConfig(n_points=100, random_state=1))
    b, _ = generate(SynthConfig(n_points=100, random_state=2))
    assert not np.array_equal(a, b)


def test_anomalies_inside_bounding_box():
    data, labels = generate(SynthConfig(n_points=600, n_clusters=4, n_dim=6,
                                        anomaly_fraction=0.1,
                                        random_state=3))
    regular = data[labels >= 0]
    anoms = data[labels == -1]
    lo = regular.min(axis=0)
    hi = regular.max(axis=0)
    assert np.all(anoms >= lo - 1e-12)
    assert np.all(anoms <= hi + 1e-12)


def test_config_validation():
    with pytest.raises(ConfigError):
        generate(SynthConfig(n_points=0))
    with pytest.raises(ConfigError):
        generate(SynthConfig(anomaly_fraction=1.0))
    with pytest.raises(ConfigError):
        generate(SynthConfig(overlap=0.0))
    with pytest.raises(ConfigError):
        generate(SynthConfig(n_points=3, n_clusters=10))


def test_degradation_pair_nn_spacing():
    for seed in (0, 1, 2):
        pts, labels = generate_degradation_pair(2.0, seed=seed)
        nn_all = []
        for lab in (0, 1):
            sub = pts[labels == lab]
            d2 = ((sub[:, None, :] - sub[None, :, :]) ** 2).sum(-1)
            np.fill_diagonal(d2, np.inf)
            nn_all.append(np.sqrt(d2.min(axis=1)))
        mean_nn = float(np.concatenate(nn_all).mean())
        assert abs(mean_nn - 0.88) <= 0.05


def test_degradation_pair_gap_sanity():
    pts, labels = generate_degradation_pair(5.0, seed=0)
    # huge gap: any reasonable clusterer separates the manifolds
    result = fit_predict(pts, ClusterParams(prune_param=0.8,
                                            anomaly_sensitivity=1.0))
    assert result.n_clusters == 2
    assert pytest.approx(1.0) == max(
        (result.labels[labels == 0] == result.labels[labels == 0][0]).mean(),
        (result.labels[labels == 1] == result.labels[labels == 1][0]).mean(),
    )


def test_degradation_pair_requires_positive_epsilon():
    with pytest.raises(ConfigError):
        generate_degradation_pair(0.0, seed=0)


def test_backprojection_demo_no_tail():
    data, labels = generate_backprojection_demo(10, 0, seed=0)
    assert data.shape == (500, 10)
    assert (labels == -1).sum() == 0


def test_backprojection_demo_tail_is_largest_norm():
    data, labels = generate_backprojection_demo(10, 25, seed=4)
    norms = np.linalg.norm(data, axis=1)
    top = set(np.argsort(-norms)[:25].tolist())
    assert set(np.where(labels == -1)[0].tolist()) == top
    # displacement only touches collapsed dimensions: the first two
    # coordinates of tail points stay inside the bulk footprint
    tail = labels == -1
    assert np.abs(data[tail, :2]).max() <= np.abs(data[~tail, :2]).max() + 1.0


def test_backprojection_demo_needs_three_dims():
    with pytest.raises(ConfigError):
        generate_backprojection_demo(2, 5, seed=0)

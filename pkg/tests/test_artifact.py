"""Model artifact round-trips: every model type serializes losslessly."""

import numpy as np
import pytest

from remitwatch.errors import SchemaMismatch
from remitwatch.mlcore import (
    ForestConfig,
    GbmConfig,
    KMeansConfig,
    LogisticConfig,
    anomaly_fit,
    fit_ar,
    kmeans_fit,
    load_artifact,
    make_artifact,
    save_artifact,
    train_forest,
    train_gbm,
    train_logistic,
)
from remitwatch.pipeline import fit_normalizer, schema_hash


@pytest.fixture(scope="module")
def toy():
    rng = np.random.default_rng(31)
    X = rng.normal(size=(80, 11))
    y = (X[:, 0] > 0).astype(float)
    return X, y


def roundtrip(artifact, tmp_path):
    path = tmp_path / "model.json"
    save_artifact(artifact, path)
    return load_artifact(path)


def test_logistic_artifact_roundtrip(toy, tmp_path):
    X, y = toy
    model = train_logistic(X, y, LogisticConfig(max_iters=50))
    norm = fit_normalizer(X)
    anom = anomaly_fit(X)
    art = make_artifact("logistic", model, schema_hash(), {"max_iters": 50},
                        {"seed": 0, "timestamp": "2023-01-01T00:00:00Z",
                         "dataset_digest": "d" * 64},
                        normalizer=norm, anomaly_stats=anom)
    back = roundtrip(art, tmp_path)
    assert back.model_id == art.model_id
    reloaded = back.load_model()
    np.testing.assert_array_equal(reloaded.weights, model.weights)
    np.testing.assert_array_equal(back.load_normalizer().mean, norm.mean)
    np.testing.assert_array_equal(back.load_anomaly_stats().median, anom.median)


def test_gbm_artifact_roundtrip(toy, tmp_path):
    X, y = toy
    model = train_gbm(X, y, GbmConfig(n_rounds=8, min_samples_leaf=3))
    art = make_artifact("gbm", model, schema_hash(), {"n_rounds": 8}, {"seed": 0})
    back = roundtrip(art, tmp_path).load_model()
    np.testing.assert_array_equal(back.predict_proba_batch(X),
                                  model.predict_proba_batch(X))


def test_forest_artifact_roundtrip(toy, tmp_path):
    X, y = toy
    model = train_forest(X, y, ForestConfig(n_trees=5, seed=2))
    art = make_artifact("forest", model, schema_hash(), {"n_trees": 5}, {"seed": 2})
    back = roundtrip(art, tmp_path).load_model()
    np.testing.assert_array_equal(back.predict_proba_batch(X),
                                  model.predict_proba_batch(X))


def test_kmeans_and_ar_roundtrip(toy, tmp_path):
    X, _ = toy
    clustering = kmeans_fit(X, 3, KMeansConfig(seed=3))
    art = make_artifact("kmeans", clustering, schema_hash(), {"k": 3}, {})
    back = roundtrip(art, tmp_path).load_model()
    np.testing.assert_array_equal(back.centroids, clustering.centroids)

    series = np.sin(np.arange(100) / 5.0) + np.arange(100) * 0.01
    model = fit_ar(series, p=3, d=1)
    art2 = make_artifact("ar", model, schema_hash(), {"p": 3, "d": 1}, {})
    save_artifact(art2, tmp_path / "ar.json")
    back2 = load_artifact(tmp_path / "ar.json").load_model()
    np.testing.assert_array_equal(back2.coefficients, model.coefficients)
    assert back2.intercept == model.intercept


def test_unknown_type_rejected(tmp_path):
    from remitwatch.mlcore.artifact import ModelArtifact
    with pytest.raises(SchemaMismatch):
        ModelArtifact.from_dict({"schema_version": 1, "model_type": "svm",
                                 "feature_schema_hash": "x"})
    with pytest.raises(SchemaMismatch):
        ModelArtifact.from_dict({"schema_version": 99, "model_type": "gbm",
                                 "feature_schema_hash": "x"})

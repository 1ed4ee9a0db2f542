"""Versioned model artifacts.

One JSON document per trained model: type, feature schema hash,
hyperparameters, parameters (including the fitted normalizer and the
anomaly reference stats for classifier artifacts), training metadata,
and the evaluation MetricsReport. Floats serialize via repr, which
round-trips float64 exactly.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from .. import docio
from ..errors import SchemaMismatch
from .anomaly import AnomalyStats
from .ar import ArModel
from .cluster import Clustering
from .forest import ForestModel
from .gbm import GbmModel
from .logistic import LogisticModel
from .metrics import MetricsReport

ARTIFACT_SCHEMA_VERSION = 1

_MODEL_TYPES = {
    "logistic": LogisticModel,
    "gbm": GbmModel,
    "forest": ForestModel,
    "kmeans": Clustering,
    "ar": ArModel,
}


@dataclass
class ModelArtifact:
    model_type: str
    feature_schema_hash: str
    hyperparameters: dict
    parameters: dict
    train_meta: dict
    metrics: MetricsReport = field(default_factory=MetricsReport)
    schema_version: int = ARTIFACT_SCHEMA_VERSION
    model_id: str = ""

    def to_dict(self) -> dict:
        return {
            "model_type": self.model_type,
            "schema_version": self.schema_version,
            "model_id": self.model_id,
            "feature_schema_hash": self.feature_schema_hash,
            "hyperparameters": dict(self.hyperparameters),
            "parameters": self.parameters,
            "train_meta": dict(self.train_meta),
            "metrics": self.metrics.to_dict(),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "ModelArtifact":
        if doc.get("schema_version") != ARTIFACT_SCHEMA_VERSION:
            raise SchemaMismatch(
                f"artifact schema_version {doc.get('schema_version')!r} unsupported")
        if doc.get("model_type") not in _MODEL_TYPES:
            raise SchemaMismatch(f"unknown model_type {doc.get('model_type')!r}")
        return cls(
            model_type=doc["model_type"],
            feature_schema_hash=doc["feature_schema_hash"],
            hyperparameters=dict(doc.get("hyperparameters", {})),
            parameters=doc.get("parameters", {}),
            train_meta=dict(doc.get("train_meta", {})),
            metrics=MetricsReport.from_dict(doc.get("metrics", {})),
            model_id=doc.get("model_id", ""),
        )

    def load_model(self):
        """Rehydrate the trained model object from parameters."""
        return _MODEL_TYPES[self.model_type].from_dict(self.parameters["model"])

    def load_normalizer(self):
        from ..pipeline.dataset import NormalizerStats
        doc = self.parameters.get("normalizer")
        return NormalizerStats.from_dict(doc) if doc else None

    def load_anomaly_stats(self):
        doc = self.parameters.get("anomaly")
        return AnomalyStats.from_dict(doc) if doc else None


def make_artifact(model_type, model, feature_schema_hash, hyperparameters,
                  train_meta, metrics=None, normalizer=None,
                  anomaly_stats=None) -> ModelArtifact:
    parameters = {"model": model.to_dict()}
    if normalizer is not None:
        parameters["normalizer"] = normalizer.to_dict()
    if anomaly_stats is not None:
        parameters["anomaly"] = anomaly_stats.to_dict()
    artifact = ModelArtifact(
        model_type=model_type,
        feature_schema_hash=feature_schema_hash,
        hyperparameters=hyperparameters,
        parameters=parameters,
        train_meta=train_meta,
        metrics=metrics or MetricsReport(),
    )
    digest = hashlib.sha256(docio.dumps_sorted(artifact.to_dict()).encode()).hexdigest()
    artifact.model_id = f"{model_type}-{digest[:12]}"
    return artifact


def save_artifact(artifact: ModelArtifact, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(artifact.to_dict(), fh, separators=(",", ":"))
        fh.write("\n")


def load_artifact(path) -> ModelArtifact:
    with open(path, "r", encoding="utf-8") as fh:
        return ModelArtifact.from_dict(json.load(fh))

from .logistic import LogisticConfig, LogisticModel, sigmoid, train_logistic
from .tree import RegressionTree, TreeConfig, train_tree
from .gbm import GbmConfig, GbmModel, log_loss, train_gbm
from .forest import ForestConfig, ForestModel, train_forest
from .cluster import Clustering, KMeansConfig, kmeans_fit
from .anomaly import AnomalyStats, anomaly_fit, anomaly_score, anomaly_score_batch, is_anomalous
from .ar import ArModel, fit_ar, forecast
from .metrics import (
    ConfusionMatrix,
    MetricsReport,
    classification_metrics,
    classification_report,
    pr_auc,
    regression_metrics,
    roc_auc,
)
from .artifact import ModelArtifact, load_artifact, make_artifact, save_artifact

__all__ = [
    "AnomalyStats", "ArModel", "Clustering", "ConfusionMatrix", "ForestConfig",
    "ForestModel", "GbmConfig", "GbmModel", "KMeansConfig", "LogisticConfig",
    "LogisticModel", "MetricsReport", "ModelArtifact", "RegressionTree",
    "TreeConfig", "anomaly_fit", "anomaly_score", "anomaly_score_batch",
    "classification_metrics", "classification_report", "fit_ar", "forecast",
    "is_anomalous", "kmeans_fit", "load_artifact", "log_loss", "make_artifact",
    "pr_auc", "regression_metrics", "roc_auc", "save_artifact", "sigmoid",
    "train_forest", "train_gbm", "train_logistic", "train_tree",
]

"""Real-time transaction scoring and risk tiers."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import SchemaMismatch
from ..mlcore.anomaly import anomaly_score as _anomaly_score
from ..pipeline.dataset import apply_normalizer
from ..pipeline.features import extract_features, schema_hash

TIERS = ("low", "medium", "high")
DEFAULT_THRESHOLDS = (0.5, 0.9)       # (t_med, t_high)


def tier_for(probability: float, thresholds=DEFAULT_THRESHOLDS) -> str:
    t_med, t_high = thresholds
    if not (0.0 <= t_med < t_high <= 1.0):
        raise ValueError("thresholds must satisfy 0 <= t_med < t_high <= 1")
    if probability >= t_high:           # boundaries fire inclusively upward
        return "high"
    if probability >= t_med:
        return "medium"
    return "low"


@dataclass
class RiskScore:
    tx_hash: str
    model_id: str
    probability: float
    anomaly_score: float
    tier: str

    def to_dict(self) -> dict:
        return {"tx_hash": self.tx_hash, "model_id": self.model_id,
                "probability": self.probability,
                "anomaly_score": self.anomaly_score, "tier": self.tier}


class TransactionScorer:
    """Loads a model artifact once and scores records against sender
    history windows. Immutable after construction; safe to share.

    Tree ensembles are packed into flat arrays up front so the per
    transaction probability is one kernel call."""

    def __init__(self, artifact, thresholds=DEFAULT_THRESHOLDS, corridor_risk=None):
        if artifact.feature_schema_hash != schema_hash():
            raise SchemaMismatch(
                f"artifact schema {artifact.feature_schema_hash[:12]}... does not "
                f"match pipeline schema {schema_hash()[:12]}...")
        self.artifact = artifact
        self.model = artifact.load_model()
        self.normalizer = artifact.load_normalizer()
        self.anomaly_stats = artifact.load_anomaly_stats()
        self.thresholds = thresholds
        self.corridor_risk = corridor_risk
        self._predict = self._build_fast_path(self.model)

    @staticmethod
    def _build_fast_path(model):
        from ..mlcore.gbm import GbmModel
        from ..mlcore.forest import ForestModel
        from ..mlcore.logistic import sigmoid
        from ..mlcore.tree import pack_trees

        if isinstance(model, GbmModel) and model.trees:
            packed = pack_trees(model.trees)

            def predict(z):
                margin = model.base_score + model.learning_rate * \
                    packed.predict_sum(z.reshape(1, -1))[0]
                return float(sigmoid(margin))
            return predict
        if isinstance(model, ForestModel):
            packed = pack_trees(model.trees)
            n = len(model.trees)

            def predict(z):
                return float(packed.predict_sum(z.reshape(1, -1))[0] / n)
            return predict
        return model.predict_proba

    def score_vector(self, record, features) -> RiskScore:
        anomaly = _anomaly_score(self.anomaly_stats, features) \
            if self.anomaly_stats is not None else 0.0
        z = apply_normalizer(self.normalizer, features) \
            if self.normalizer is not None else features
        probability = self._predict(z)
        return RiskScore(
            tx_hash=record.tx_hash,
            model_id=self.artifact.model_id,
            probability=probability,
            anomaly_score=anomaly,
            tier=tier_for(probability, self.thresholds),
        )

    def score(self, record, history) -> RiskScore:
        features = extract_features(record, history, self.corridor_risk)
        return self.score_vector(record, features)


def score_transaction(record, history, artifact, anomaly_stats=None,
                      thresholds=DEFAULT_THRESHOLDS, corridor_risk=None) -> RiskScore:
    """One-shot convenience wrapper around TransactionScorer."""
    scorer = TransactionScorer(artifact, thresholds, corridor_risk)
    if anomaly_stats is not None:
        scorer.anomaly_stats = anomaly_stats
    return scorer.score(record, history)

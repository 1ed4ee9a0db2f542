from .scoring import DEFAULT_THRESHOLDS, RiskScore, TransactionScorer, score_transaction, tier_for
from .rules import ACTIONS, AlertRule, RULE_KINDS, RuleFire, evaluate_rules
from .alerts import ALERT_STATES, Alert, transition_alert
from .engine import RuleEngine, default_ruleset

__all__ = [
    "ACTIONS", "ALERT_STATES", "Alert", "AlertRule", "DEFAULT_THRESHOLDS",
    "RULE_KINDS", "RiskScore", "RuleEngine", "RuleFire", "TransactionScorer",
    "default_ruleset", "evaluate_rules", "score_transaction", "tier_for",
    "transition_alert",
]

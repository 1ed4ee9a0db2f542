from .config import Corridor, ScenarioConfig, DEFAULT_CORRIDORS, DEFAULT_FRAUD_MIX, FRAUD_PATTERNS
from .entities import Block, CustomerProfile, EXPORT_FIELDS, NetworkMetrics, REASONS, RemittanceTransaction
from .simulator import (
    DIGEST_NAME,
    SCENARIO_START,
    Simulator,
    advance,
    export_dataset,
    init_scenario,
    inject_fraud_pattern,
)

__all__ = [
    "Block", "Corridor", "CustomerProfile", "DEFAULT_CORRIDORS", "DEFAULT_FRAUD_MIX",
    "DIGEST_NAME", "EXPORT_FIELDS", "FRAUD_PATTERNS", "NetworkMetrics", "REASONS",
    "RemittanceTransaction", "SCENARIO_START", "ScenarioConfig", "Simulator",
    "advance", "export_dataset", "init_scenario", "inject_fraud_pattern",
]

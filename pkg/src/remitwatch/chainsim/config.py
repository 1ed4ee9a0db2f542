"""Scenario configuration for the remittance network simulator."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import InvalidConfig

FRAUD_PATTERNS = ("structuring", "account_takeover", "mule_fan_in", "velocity_burst")

DEFAULT_FRAUD_MIX = {
    "structuring": 0.30,
    "account_takeover": 0.25,
    "mule_fan_in": 0.20,
    "velocity_burst": 0.25,
}

DEFAULT_CORRIDORS = [
    ("USD", "PHP", 0.15),
    ("USD", "MXN", 0.10),
    ("EUR", "NGN", 0.35),
    ("GBP", "INR", 0.12),
    ("AED", "PKR", 0.30),
    ("USD", "VND", 0.20),
]


@dataclass(frozen=True)
class Corridor:
    source_currency: str
    destination_currency: str
    base_risk: float

    @property
    def key(self) -> str:
        return f"{self.source_currency}->{self.destination_currency}"


@dataclass(frozen=True)
class ScenarioConfig:
    seed: int
    n_customers: int
    duration: float = 26_000.0          # simulated seconds
    mean_block_interval: float = 13.0   # seconds
    max_tx_per_block: int = 400
    fraud_rate: float = 0.02
    fraud_mix: dict = field(default_factory=lambda: dict(DEFAULT_FRAUD_MIX))
    corridors: list = field(default_factory=lambda: [Corridor(*c) for c in DEFAULT_CORRIDORS])
    report_threshold: int = 1_000_000   # minor units
    fee_policy: tuple = (50, 2)         # (base fee, per-byte fee), minor units

    def validate(self) -> None:
        if not (0 <= self.seed < 2 ** 64):
            raise InvalidConfig("seed must be a 64-bit unsigned integer")
        if self.n_customers < 1:
            raise InvalidConfig("n_customers must be >= 1")
        if self.duration <= 0:
            raise InvalidConfig("duration must be > 0")
        if self.mean_block_interval <= 0:
            raise InvalidConfig("mean_block_interval must be > 0")
        if self.max_tx_per_block < 1:
            raise InvalidConfig("max_tx_per_block must be >= 1")
        if not (0.0 <= self.fraud_rate <= 1.0):
            raise InvalidConfig("fraud_rate must be in [0, 1]")
        if not self.fraud_mix:
            raise InvalidConfig("fraud_mix must not be empty")
        for name, weight in self.fraud_mix.items():
            if name not in FRAUD_PATTERNS:
                raise InvalidConfig(f"fraud_mix: unknown pattern {name!r}")
            if weight < 0:
                raise InvalidConfig("fraud_mix weights must be >= 0")
        if abs(sum(self.fraud_mix.values()) - 1.0) > 1e-9:
            raise InvalidConfig("fraud_mix weights must sum to 1 within 1e-9")
        if not self.corridors:
            raise InvalidConfig("at least one corridor is required")
        for c in self.corridors:
            if len(c.source_currency) != 3 or len(c.destination_currency) != 3:
                raise InvalidConfig("corridor currency codes must be 3 letters")
            if not (0.0 <= c.base_risk <= 1.0):
                raise InvalidConfig("corridor base risk must be in [0, 1]")
        if self.report_threshold <= 0:
            raise InvalidConfig("report_threshold must be > 0")
        base, per_byte = self.fee_policy
        if base < 0 or per_byte < 0:
            raise InvalidConfig("fee_policy components must be >= 0")

    def corridor_risk_map(self) -> dict:
        return {c.key: c.base_risk for c in self.corridors}

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "n_customers": self.n_customers,
            "duration": self.duration,
            "mean_block_interval": self.mean_block_interval,
            "max_tx_per_block": self.max_tx_per_block,
            "fraud_rate": self.fraud_rate,
            "fraud_mix": dict(self.fraud_mix),
            "corridors": [
                [c.source_currency, c.destination_currency, c.base_risk]
                for c in self.corridors
            ],
            "report_threshold": self.report_threshold,
            "fee_policy": list(self.fee_policy),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "ScenarioConfig":
        kwargs = dict(doc)
        if "corridors" in kwargs:
            kwargs["corridors"] = [Corridor(str(c[0]), str(c[1]), float(c[2]))
                                   for c in kwargs["corridors"]]
        if "fee_policy" in kwargs:
            kwargs["fee_policy"] = tuple(int(v) for v in kwargs["fee_policy"])
        if "fraud_mix" in kwargs:
            kwargs["fraud_mix"] = {str(k): float(v) for k, v in kwargs["fraud_mix"].items()}
        unknown = set(kwargs) - {f for f in cls.__dataclass_fields__}
        if unknown:
            raise InvalidConfig(f"unknown config fields: {sorted(unknown)}")
        cfg = cls(**kwargs)
        cfg.validate()
        return cfg

"""Domain objects recorded by the simulator: customers, transactions,
blocks, and per-block network metrics."""

from __future__ import annotations

from dataclasses import dataclass, field

REASONS = ("family-support", "education", "medical", "business", "other")

# Exact field order of one exported dataset record.
EXPORT_FIELDS = (
    "tx_hash",
    "sender_id", "sender_name", "sender_address",
    "sender_identification_number", "sender_wallet",
    "receiver_id", "receiver_name", "receiver_address",
    "receiver_identification_number", "receiver_wallet",
    "amount_minor", "currency", "destination_currency", "reason",
    "timestamp", "fee_minor", "gas_fee_minor", "block_height", "label",
)


@dataclass
class CustomerProfile:
    customer_id: str
    name: str
    postal_address: str
    identification_number: str
    wallet_address: str
    home_currency: str
    activity_rate: float          # expected transactions per day
    typical_amount_mu: float      # log-normal parameters, minor units
    typical_amount_sigma: float
    token_balance: int
    home_corridor: str            # corridor key "SRC->DST"
    last_active_epoch: int        # synthetic pre-scenario activity marker

    def to_dict(self) -> dict:
        return {
            "customer_id": self.customer_id,
            "name": self.name,
            "postal_address": self.postal_address,
            "identification_number": self.identification_number,
            "wallet_address": self.wallet_address,
            "home_currency": self.home_currency,
            "activity_rate": self.activity_rate,
            "typical_amount_mu": self.typical_amount_mu,
            "typical_amount_sigma": self.typical_amount_sigma,
            "token_balance": self.token_balance,
            "home_corridor": self.home_corridor,
            "last_active_epoch": self.last_active_epoch,
        }


@dataclass
class RemittanceTransaction:
    tx_hash: str
    sender_id: str
    receiver_id: str
    sender_wallet: str
    receiver_wallet: str
    amount_minor: int
    currency: str
    destination_currency: str
    reason: str
    timestamp_epoch: int
    fee_minor: int
    gas_fee_minor: int
    label: str                    # "legit" or "fraud:<pattern>"
    block_height: int | None = None

    @property
    def corridor(self) -> str:
        return f"{self.currency}->{self.destination_currency}"


@dataclass
class Block:
    height: int
    timestamp_epoch: int
    block_size: int               # bytes
    tx_count: int
    transactions: list = field(default_factory=list)  # ordered tx hashes
    parent_height: int | None = None

    def to_dict(self) -> dict:
        return {
            "height": self.height,
            "timestamp_epoch": self.timestamp_epoch,
            "block_size": self.block_size,
            "tx_count": self.tx_count,
            "transactions": list(self.transactions),
            "parent_height": self.parent_height,
        }


@dataclass
class NetworkMetrics:
    height: int
    hash_rate: float              # synthetic hashes/s
    difficulty: float
    propagation_ms: float
    throughput_tps: float         # trailing-window tx count / window seconds

    def to_dict(self) -> dict:
        return {
            "height": self.height,
            "hash_rate": self.hash_rate,
            "difficulty": self.difficulty,
            "propagation_ms": self.propagation_ms,
            "throughput_tps": self.throughput_tps,
        }

"""Dataset record validation and cleaning.

validate() turns one raw export line into a CleanRecord or raises a
typed error naming the first violated rule. Recoverable oddities (an
unknown transfer reason, say) become warnings instead of rejections.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .. import docio
from ..chainsim.entities import EXPORT_FIELDS, REASONS
from ..errors import InvalidField, MalformedRecord

_STRING_FIELDS = (
    "tx_hash", "sender_id", "sender_name", "sender_address",
    "sender_identification_number", "sender_wallet",
    "receiver_id", "receiver_name", "receiver_address",
    "receiver_identification_number", "receiver_wallet",
)


@dataclass
class CleanRecord:
    tx_hash: str
    sender_id: str
    sender_name: str
    sender_address: str
    sender_identification_number: str
    sender_wallet: str
    receiver_id: str
    receiver_name: str
    receiver_address: str
    receiver_identification_number: str
    receiver_wallet: str
    amount_minor: int
    currency: str
    destination_currency: str
    reason: str
    timestamp: str
    fee_minor: int
    gas_fee_minor: int
    block_height: int | None
    label: str
    timestamp_epoch: int = 0
    warnings: list = field(default_factory=list)

    @property
    def corridor(self) -> str:
        return f"{self.currency}->{self.destination_currency}"

    @property
    def is_fraud(self) -> bool:
        return self.label != "legit"

    def to_dict(self) -> dict:
        return {name: getattr(self, name) for name in EXPORT_FIELDS}


def validate(raw) -> CleanRecord:
    """Validate one raw dataset line (bytes or str)."""
    if isinstance(raw, bytes):
        try:
            raw = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedRecord(f"not UTF-8: {exc}") from None
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise MalformedRecord(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise MalformedRecord("record must be an object")

    warnings: list[str] = []
    for name in EXPORT_FIELDS:
        if name not in doc:
            raise InvalidField(name, "missing")

    for name in _STRING_FIELDS:
        value = doc[name]
        if not isinstance(value, str) or not value:
            raise InvalidField(name, "must be a non-empty string")

    amount = doc["amount_minor"]
    if not isinstance(amount, int) or isinstance(amount, bool) or amount <= 0:
        raise InvalidField("amount_minor", "must be > 0")
    for name in ("fee_minor", "gas_fee_minor"):
        value = doc[name]
        if not isinstance(value, int) or isinstance(value, bool) or value < 0:
            raise InvalidField(name, "must be an integer >= 0")

    for name in ("currency", "destination_currency"):
        code = doc[name]
        if not isinstance(code, str) or len(code) != 3 or not code.isalpha() \
                or code != code.upper():
            raise InvalidField(name, "must be 3 uppercase letters")

    try:
        epoch = docio.parse_iso_utc(doc["timestamp"])
    except (ValueError, TypeError):
        raise InvalidField("timestamp", "must be ISO-8601 UTC (YYYY-MM-DDTHH:MM:SSZ)") from None

    height = doc["block_height"]
    if height is not None and (not isinstance(height, int) or isinstance(height, bool)
                               or height < 0):
        raise InvalidField("block_height", "must be a nonnegative integer or null")

    reason = doc["reason"]
    if reason not in REASONS:
        warnings.append(f"unknown reason {reason!r} mapped to 'other'")
        reason = "other"

    label = doc["label"]
    if not isinstance(label, str) or not (label == "legit" or label.startswith("fraud:")):
        raise InvalidField("label", "must be 'legit' or 'fraud:<pattern>'")

    return CleanRecord(
        tx_hash=doc["tx_hash"],
        sender_id=doc["sender_id"],
        sender_name=doc["sender_name"],
        sender_address=doc["sender_address"],
        sender_identification_number=doc["sender_identification_number"],
        sender_wallet=doc["sender_wallet"],
        receiver_id=doc["receiver_id"],
        receiver_name=doc["receiver_name"],
        receiver_address=doc["receiver_address"],
        receiver_identification_number=doc["receiver_identification_number"],
        receiver_wallet=doc["receiver_wallet"],
        amount_minor=amount,
        currency=doc["currency"],
        destination_currency=doc["destination_currency"],
        reason=reason,
        timestamp=doc["timestamp"],
        fee_minor=doc["fee_minor"],
        gas_fee_minor=doc["gas_fee_minor"],
        block_height=height,
        label=label,
        timestamp_epoch=epoch,
        warnings=warnings,
    )


def read_dataset(path) -> tuple[dict, list[CleanRecord]]:
    """Read a full export file: (header document, validated records)."""
    with open(path, "r", encoding="utf-8") as fh:
        header_line = fh.readline()
        if not header_line:
            raise MalformedRecord("empty dataset file")
        header = json.loads(header_line)
        if not isinstance(header, dict) or "schema_version" not in header:
            raise MalformedRecord("first line must be the dataset header")
        records = [validate(line) for line in fh if line.strip()]
    return header, records

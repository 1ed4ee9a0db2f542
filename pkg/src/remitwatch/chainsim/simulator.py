"""Deterministic blockchain-style remittance network simulator.

One `SimState` owns everything: the customer population, the pending
pool, the chain, per-block network metrics, and a single seeded RNG.
All randomness flows through that one `random.Random`, so a (seed,
config, operation sequence) triple fully determines every emitted byte.

Money is integer minor units throughout. Timestamps are integer epoch
seconds, rendered as ISO-8601 UTC at the export boundary.
"""

from __future__ import annotations

import bisect
import hashlib
import heapq
import io
import math
import random
from collections import deque

from .. import docio
from ..errors import InsufficientCustomers, InvalidConfig
from .config import ScenarioConfig
from .entities import (
    Block,
    CustomerProfile,
    EXPORT_FIELDS,
    NetworkMetrics,
    REASONS,
    RemittanceTransaction,
)
from . import fraud

SCENARIO_START = docio.parse_iso_utc("2023-01-01T00:00:00Z")
DIGEST_NAME = "sha256"
SCHEMA_VERSION = 1

MIN_AMOUNT_MINOR = 2_000          # floor keeps fee + gas strictly under amount
MAX_AMOUNT_MINOR = 5_000_000
INITIAL_BALANCE = 5_000_000_000
THROUGHPUT_WINDOW = 600.0         # seconds

_SYL_A = ("an", "bel", "cor", "dan", "el", "fa", "gio", "ha", "iv", "jo",
          "ka", "lu", "mar", "nia", "om", "pri", "qui", "ros", "sam", "tan")
_SYL_B = ("a", "el", "ia", "ika", "in", "ita", "on", "ra", "us", "ya")
_SYL_C = ("Reyes", "Santos", "Okafor", "Iqbal", "Garcia", "Nguyen", "Khan",
          "Mensah", "Alvarez", "Osei", "Patel", "Hassan", "Lopez", "Adeyemi",
          "Cruz", "Farah", "Ali", "Castro", "Bello", "Tran")
_STREETS = ("Harbor Rd", "Mill Lane", "Cedar Ave", "Station St", "Palm Dr",
            "Bridge Way", "Lakeview Rd", "Sunset Blvd", "Garden St", "Hill Ct")
_CITIES = ("Queenstown", "Port Adal", "Riverton", "New Calla", "Eastfield",
           "Marbury", "Solvale", "Kentbridge", "Arosa", "Dunmore")


class Simulator:
    """Mutable simulation state plus its operations. Mutation happens
    through a single logical writer; snapshots taken via serialize()
    are plain values."""

    def __init__(self, config: ScenarioConfig):
        config.validate()
        self.config = config
        self.rng = random.Random(config.seed)
        self.clock = SCENARIO_START
        self.n_customers = config.n_customers
        self.customers: list[CustomerProfile] = []
        self.typical_amounts: list[int] = []
        self.chain: list[Block] = []
        self.metrics: list[NetworkMetrics] = []
        self.ledger: dict[str, RemittanceTransaction] = {}
        self.pending: list = []          # heap of (timestamp, seq, tx_hash)
        self.history_index: dict[str, list] = {}   # sender_id -> [tx_hash]
        self.receivers_seen: list[set] = []
        self.sim_tx_count: list[int] = []
        self.fraud_hashes: set[str] = set()
        self.tx_seq = 0
        self.legit_emitted = 0
        self.fraud_emitted = 0
        self._fraud_credit = {name: 0.0 for name in config.fraud_mix}
        self.hash_rate = 2.0e14
        self._mined_times: deque = deque()   # timestamps of mined txs, trailing window
        self._wallets: set[str] = set()
        self._customer_index: dict[str, int] = {}
        self._corridors_by_source: dict[str, list] = {}
        for c in config.corridors:
            self._corridors_by_source.setdefault(c.source_currency, []).append(c.key)
        self._generate_customers()
        self._activity_cum = []
        total = 0.0
        for p in self.customers:
            total += p.activity_rate
            self._activity_cum.append(total)
        self._activity_total = total
        genesis = Block(height=0, timestamp_epoch=self.clock, block_size=80,
                        tx_count=0, transactions=[], parent_height=None)
        self.chain.append(genesis)
        self.metrics.append(self._network_metrics(genesis))

    # ------------------------------------------------------------------
    # population

    def _generate_customers(self):
        rng = self.rng
        corridor_keys = [c.key for c in self.config.corridors]
        for i in range(self.n_customers):
            while True:
                wallet = "0x" + format(rng.getrandbits(160), "040x")
                if wallet not in self._wallets:
                    self._wallets.add(wallet)
                    break
            name = (_SYL_A[rng.randrange(len(_SYL_A))].capitalize()
                    + _SYL_B[rng.randrange(len(_SYL_B))]
                    + " " + _SYL_C[rng.randrange(len(_SYL_C))])
            address = (f"{rng.randint(1, 999)} {_STREETS[rng.randrange(len(_STREETS))]}, "
                       f"{_CITIES[rng.randrange(len(_CITIES))]}")
            ident = f"ID{rng.randrange(10 ** 9):09d}"
            corridor = corridor_keys[rng.randrange(len(corridor_keys))]
            activity = math.exp(rng.uniform(math.log(0.5), math.log(6.0)))
            mu = rng.uniform(math.log(8_000), math.log(60_000))
            sigma = rng.uniform(0.4, 0.9)
            last_active = SCENARIO_START - int(rng.uniform(0, 90 * 86400))
            profile = CustomerProfile(
                customer_id=f"C{i:06d}",
                name=name,
                postal_address=address,
                identification_number=ident,
                wallet_address=wallet,
                home_currency=corridor.split("->")[0],
                activity_rate=activity,
                typical_amount_mu=mu,
                typical_amount_sigma=sigma,
                token_balance=INITIAL_BALANCE,
                home_corridor=corridor,
                last_active_epoch=last_active,
            )
            self.customers.append(profile)
            self.typical_amounts.append(int(math.exp(mu)))
            self.receivers_seen.append(set())
            self.sim_tx_count.append(0)
            self.history_index[profile.customer_id] = []
            self._customer_index[profile.customer_id] = i

    # ------------------------------------------------------------------
    # transaction emission

    def _canonical(self, seq: int, sender: CustomerProfile, receiver: CustomerProfile,
                   amount: int, corridor_key: str, reason: str, timestamp: int) -> str:
        src, dst = corridor_key.split("->")
        return "|".join((
            "v1", str(self.config.seed), str(seq),
            sender.customer_id, receiver.customer_id,
            sender.wallet_address, receiver.wallet_address,
            str(amount), src, dst, reason, docio.format_iso_utc(timestamp),
        ))

    def _emit_transaction(self, sender_idx: int, receiver_idx: int, amount: int,
                          timestamp: int, label: str, corridor_key: str | None,
                          reason: str | None) -> str | None:
        sender = self.customers[sender_idx]
        receiver = self.customers[receiver_idx]
        if corridor_key is None:
            corridor_key = sender.home_corridor
        amount = max(MIN_AMOUNT_MINOR, min(int(amount), MAX_AMOUNT_MINOR))
        if reason is None:
            reason = REASONS[self.rng.randrange(len(REASONS))]
        seq = self.tx_seq
        canonical = self._canonical(seq, sender, receiver, amount,
                                    corridor_key, reason, timestamp)
        size = len(canonical.encode("utf-8"))
        base_fee, per_byte = self.config.fee_policy
        gas_fee = base_fee + per_byte * size
        fee = amount // 100          # fixed 1% remitter margin, rounded down
        cost = amount + fee + gas_fee
        if sender.token_balance < cost:
            return None              # balances never go negative
        if fee + gas_fee >= amount:
            return None              # amount floor should prevent this
        self.tx_seq = seq + 1
        tx_hash = "0x" + hashlib.sha256(canonical.encode("utf-8")).hexdigest()
        src, dst = corridor_key.split("->")
        tx = RemittanceTransaction(
            tx_hash=tx_hash,
            sender_id=sender.customer_id,
            receiver_id=receiver.customer_id,
            sender_wallet=sender.wallet_address,
            receiver_wallet=receiver.wallet_address,
            amount_minor=amount,
            currency=src,
            destination_currency=dst,
            reason=reason,
            timestamp_epoch=timestamp,
            fee_minor=fee,
            gas_fee_minor=gas_fee,
            label=label,
            block_height=None,
        )
        sender.token_balance -= cost
        receiver.token_balance += amount
        self.ledger[tx_hash] = tx
        heapq.heappush(self.pending, (timestamp, seq, tx_hash))
        self.history_index[sender.customer_id].append(tx_hash)
        self.receivers_seen[sender_idx].add(receiver_idx)
        self.sim_tx_count[sender_idx] += 1
        if label == "legit":
            self.legit_emitted += 1
        else:
            self.fraud_hashes.add(tx_hash)
            self.fraud_emitted += 1
        return tx_hash

    def _pick_sender(self) -> int:
        r = self.rng.random() * self._activity_total
        return min(bisect.bisect_left(self._activity_cum, r), self.n_customers - 1)

    def _pick_receiver(self, sender_idx: int) -> int:
        seen = self.receivers_seen[sender_idx]
        if seen and self.rng.random() < 0.85:
            return self.rng.choice(sorted(seen))
        return fraud._pick_other(self, self.rng, {sender_idx})

    def _legit_arrivals(self, start: int, end: int):
        gap = end - start
        mid_sod = docio.seconds_of_day((start + end) // 2)
        diurnal = 1.0 + 0.35 * math.sin(2 * math.pi * mid_sod / 86400.0 - math.pi / 2)
        lam = self._activity_total / 86400.0 * gap * diurnal
        count = self._poisson(lam)
        for _ in range(count):
            sender_idx = self._pick_sender()
            profile = self.customers[sender_idx]
            amount = int(self.rng.lognormvariate(profile.typical_amount_mu,
                                                 profile.typical_amount_sigma))
            if self.rng.random() < 0.08:
                amount = max(10_000, round(amount / 10_000) * 10_000)
            ts = start + 1 + self.rng.randrange(gap) if gap > 1 else end
            corridor = profile.home_corridor
            if self.rng.random() < 0.15:
                keys = [c.key for c in self.config.corridors]
                corridor = keys[self.rng.randrange(len(keys))]
            self._emit_transaction(
                sender_idx=sender_idx,
                receiver_idx=self._pick_receiver(sender_idx),
                amount=amount,
                timestamp=min(ts, end),
                label="legit",
                corridor_key=corridor,
                reason=None,
            )

    def _poisson(self, lam: float) -> int:
        if lam <= 0:
            return 0
        if lam > 50:
            # normal approximation keeps the hot path O(1) for dense scenarios
            return max(0, int(round(self.rng.gauss(lam, math.sqrt(lam)))))
        limit = math.exp(-lam)
        k, p = 0, 1.0
        while True:
            p *= self.rng.random()
            if p <= limit:
                return k
            k += 1

    def _maybe_inject_fraud(self):
        if self.config.fraud_rate <= 0.0:
            return
        names = sorted(self.config.fraud_mix)
        for _ in range(3):      # bounded injections per block
            total = self.legit_emitted + self.fraud_emitted
            if total == 0 or self.fraud_emitted >= self.config.fraud_rate * total:
                break
            # smooth weighted round-robin: burst counts track mix weights
            # even over the handful of bursts a desk-scale run produces
            for name in names:
                self._fraud_credit[name] += self.config.fraud_mix[name]
            pattern = max(names, key=lambda n: self._fraud_credit[n])
            self._fraud_credit[pattern] -= 1.0
            try:
                fraud.run_pattern(self, pattern, {})
            except InsufficientCustomers:
                break

    # ------------------------------------------------------------------
    # operations

    def advance(self, n_blocks: int) -> list[Block]:
        """Mine n_blocks new blocks, generating arrivals along the way."""
        if n_blocks < 0:
            raise InvalidConfig("n_blocks must be >= 0")
        new_blocks = []
        for _ in range(n_blocks):
            gap = self.rng.expovariate(1.0 / self.config.mean_block_interval)
            gap = int(round(min(max(gap, 1.0), 120.0)))
            start = self.clock
            self.clock = start + gap
            self._legit_arrivals(start, self.clock)
            self._maybe_inject_fraud()
            block = self._mine_block()
            new_blocks.append(block)
        return new_blocks

    def _mine_block(self) -> Block:
        height = len(self.chain)
        hashes = []
        size = 80
        while self.pending and len(hashes) < self.config.max_tx_per_block:
            ts, seq, tx_hash = self.pending[0]
            if ts > self.clock:
                break
            heapq.heappop(self.pending)
            tx = self.ledger[tx_hash]
            tx.block_height = height
            hashes.append(tx_hash)
            size += 110 + len(tx.tx_hash)    # canonical payload + envelope
            self._mined_times.append(tx.timestamp_epoch)
        block = Block(height=height, timestamp_epoch=self.clock, block_size=size,
                      tx_count=len(hashes), transactions=hashes,
                      parent_height=height - 1)
        self.chain.append(block)
        self.metrics.append(self._network_metrics(block))
        return block

    def _network_metrics(self, block: Block) -> NetworkMetrics:
        self.hash_rate = min(max(self.hash_rate * math.exp(self.rng.gauss(0.0, 0.02)),
                                 1.0e12), 1.0e15)
        difficulty = self.hash_rate * self.config.mean_block_interval \
            * self.rng.uniform(0.95, 1.05)
        propagation = min(max(self.rng.lognormvariate(math.log(180.0), 0.4), 5.0), 5000.0)
        window = min(THROUGHPUT_WINDOW, max(block.timestamp_epoch - SCENARIO_START, 1.0))
        cutoff = block.timestamp_epoch - window
        while self._mined_times and self._mined_times[0] <= cutoff:
            self._mined_times.popleft()
        throughput = len(self._mined_times) / window
        return NetworkMetrics(height=block.height, hash_rate=self.hash_rate,
                              difficulty=difficulty, propagation_ms=propagation,
                              throughput_tps=throughput)

    def inject_fraud_pattern(self, pattern: str, params: dict | None = None) -> list[str]:
        return fraud.run_pattern(self, pattern, params or {})

    # ------------------------------------------------------------------
    # export and snapshots

    def _record_dict(self, tx: RemittanceTransaction) -> dict:
        sender = self.customers[self._customer_index[tx.sender_id]]
        receiver = self.customers[self._customer_index[tx.receiver_id]]
        return {
            "tx_hash": tx.tx_hash,
            "sender_id": tx.sender_id,
            "sender_name": sender.name,
            "sender_address": sender.postal_address,
            "sender_identification_number": sender.identification_number,
            "sender_wallet": tx.sender_wallet,
            "receiver_id": tx.receiver_id,
            "receiver_name": receiver.name,
            "receiver_address": receiver.postal_address,
            "receiver_identification_number": receiver.identification_number,
            "receiver_wallet": tx.receiver_wallet,
            "amount_minor": tx.amount_minor,
            "currency": tx.currency,
            "destination_currency": tx.destination_currency,
            "reason": tx.reason,
            "timestamp": docio.format_iso_utc(tx.timestamp_epoch),
            "fee_minor": tx.fee_minor,
            "gas_fee_minor": tx.gas_fee_minor,
            "block_height": tx.block_height,
            "label": tx.label,
        }

    def export_header(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "seed": self.config.seed,
            "digest_name": DIGEST_NAME,
            "config": self.config.to_dict(),
        }

    def export_dataset(self, destination) -> int:
        """Write all mined transactions, one JSON document per line, in
        (block_height, intra-block index) order. Pending stays out."""
        if isinstance(destination, (str, bytes)):
            with open(destination, "w", encoding="utf-8", newline="\n") as fh:
                return self.export_dataset(fh)
        count = 0
        destination.write(docio.dumps(self.export_header()) + "\n")
        for block in self.chain:
            for tx_hash in block.transactions:
                destination.write(docio.dumps(self._record_dict(self.ledger[tx_hash])) + "\n")
                count += 1
        return count

    def export_bytes(self) -> bytes:
        buf = io.StringIO()
        self.export_dataset(buf)
        return buf.getvalue().encode("utf-8")

    def serialize(self) -> str:
        """Canonical JSON of the full state; equal strings mean equal states."""
        state = self.rng.getstate()
        doc = {
            "config": self.config.to_dict(),
            "clock": self.clock,
            "rng_state": [state[0], list(state[1]), state[2]],
            "tx_seq": self.tx_seq,
            "legit_emitted": self.legit_emitted,
            "fraud_emitted": self.fraud_emitted,
            "customers": [p.to_dict() for p in self.customers],
            "chain": [b.to_dict() for b in self.chain],
            "metrics": [m.to_dict() for m in self.metrics],
            "pending": sorted(self.pending),
            "ledger": {h: self._record_dict(tx) for h, tx in sorted(self.ledger.items())},
        }
        return docio.dumps_sorted(doc)

    def rebuild_history_index(self) -> dict:
        """Recompute the per-sender index from the ledger (consistency check).
        Ledger insertion order is emission order, so a plain scan suffices."""
        rebuilt: dict[str, list] = {p.customer_id: [] for p in self.customers}
        for h, tx in self.ledger.items():
            rebuilt[tx.sender_id].append(h)
        return rebuilt


def init_scenario(config: ScenarioConfig) -> Simulator:
    return Simulator(config)


def advance(state: Simulator, n_blocks: int) -> list[Block]:
    return state.advance(n_blocks)


def inject_fraud_pattern(state: Simulator, pattern: str, params: dict | None = None):
    return state.inject_fraud_pattern(pattern, params)


def export_dataset(state: Simulator, destination) -> int:
    return state.export_dataset(destination)

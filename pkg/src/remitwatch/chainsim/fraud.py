"""Fraud pattern generators.

Each generator emits a labeled burst of transactions into the pending
pool and returns the new hashes. Patterns are deliberately conjunctive
(dormancy AND burst AND novel counterparty, amounts banded under the
reporting threshold, etc.) so that they are not separable by any single
feature.
"""

from __future__ import annotations

from ..errors import InsufficientCustomers, UnknownPattern

DORMANCY_SECONDS = 30 * 86400


def _pick_other(sim, rng, exclude: set) -> int:
    for _ in range(64):
        idx = rng.randrange(sim.n_customers)
        if idx not in exclude:
            return idx
    raise InsufficientCustomers("could not find a distinct counterparty")


def structuring(sim, rng, params: dict) -> list:
    """One sender splits a large transfer into 5..15 sub-threshold
    transfers inside a 24h window."""
    if sim.n_customers < 2:
        raise InsufficientCustomers("structuring needs a sender and a receiver")
    threshold = sim.config.report_threshold
    sender = params.get("sender_idx", rng.randrange(sim.n_customers))
    receiver = params.get("receiver_idx", _pick_other(sim, rng, {sender}))
    k = params.get("count", rng.randint(5, 15))
    spread = params.get("spread_seconds", rng.uniform(1800.0, 14400.0))
    offsets = sorted(rng.uniform(0.0, spread) for _ in range(k))
    hashes = []
    for off in offsets:
        amount = int(threshold * rng.uniform(0.70, 0.99))
        h = sim._emit_transaction(
            sender_idx=sender,
            receiver_idx=receiver,
            amount=amount,
            timestamp=sim.clock + int(off) + 1,
            label="fraud:structuring",
            corridor_key=None,
            reason="business",
        )
        if h:
            hashes.append(h)
    return hashes


def account_takeover(sim, rng, params: dict) -> list:
    """A dormant sender suddenly bursts >=5 transfers in one hour to a
    receiver it has never paid, over a corridor it does not use."""
    if sim.n_customers < 2:
        raise InsufficientCustomers("account_takeover needs two customers")
    sender = params.get("sender_idx")
    if sender is None:
        cutoff = sim.clock - DORMANCY_SECONDS
        for _ in range(400):
            idx = rng.randrange(sim.n_customers)
            if sim.sim_tx_count[idx] == 0 and sim.customers[idx].last_active_epoch <= cutoff:
                sender = idx
                break
        else:
            raise InsufficientCustomers("no dormant sender available")
    seen = sim.receivers_seen[sender]
    receiver = params.get("receiver_idx")
    if receiver is None:
        receiver = _pick_other(sim, rng, seen | {sender})
    profile = sim.customers[sender]
    foreign = [c.key for c in sim.config.corridors if c.key != profile.home_corridor]
    corridor = rng.choice(foreign) if foreign else profile.home_corridor
    k = params.get("count", rng.randint(5, 9))
    offsets = sorted(rng.uniform(0.0, 3000.0) for _ in range(k))
    typical = sim.typical_amounts[sender]
    hashes = []
    for off in offsets:
        amount = max(2000, int(typical * rng.uniform(1.0, 3.0)))
        h = sim._emit_transaction(
            sender_idx=sender,
            receiver_idx=receiver,
            amount=amount,
            timestamp=sim.clock + int(off) + 1,
            label="fraud:account_takeover",
            corridor_key=corridor,
            reason="other",
        )
        if h:
            hashes.append(h)
    return hashes


def mule_fan_in(sim, rng, params: dict) -> list:
    """>=8 distinct senders funnel into one receiver within 6 hours."""
    n_senders = params.get("count", rng.randint(8, 15))
    if sim.n_customers < n_senders + 1:
        raise InsufficientCustomers(
            f"mule_fan_in needs {n_senders + 1} customers, scenario has {sim.n_customers}")
    receiver = params.get("receiver_idx", rng.randrange(sim.n_customers))
    pool = [i for i in range(sim.n_customers) if i != receiver]
    senders = rng.sample(pool, n_senders)
    spread = params.get("spread_seconds", rng.uniform(1800.0, 10800.0))
    hashes = []
    for sender in senders:
        off = rng.uniform(0.0, spread)
        typical = sim.typical_amounts[sender]
        amount = max(2000, int(typical * rng.uniform(2.0, 4.0)))
        h = sim._emit_transaction(
            sender_idx=sender,
            receiver_idx=receiver,
            amount=amount,
            timestamp=sim.clock + int(off) + 1,
            label="fraud:mule_fan_in",
            corridor_key=None,
            reason="family-support",
        )
        if h:
            hashes.append(h)
    return hashes


def velocity_burst(sim, rng, params: dict) -> list:
    """One sender fires >=10 transfers inside 10 minutes."""
    if sim.n_customers < 2:
        raise InsufficientCustomers("velocity_burst needs a sender and a receiver")
    sender = params.get("sender_idx", rng.randrange(sim.n_customers))
    k = params.get("count", rng.randint(10, 18))
    offsets = sorted(rng.uniform(0.0, 540.0) for _ in range(k))
    typical = sim.typical_amounts[sender]
    receivers = [_pick_other(sim, rng, {sender}) for _ in range(rng.randint(1, 3))]
    hashes = []
    for off in offsets:
        amount = max(2000, int(typical * rng.uniform(0.3, 0.7)))
        h = sim._emit_transaction(
            sender_idx=sender,
            receiver_idx=rng.choice(receivers),
            amount=amount,
            timestamp=sim.clock + int(off) + 1,
            label="fraud:velocity_burst",
            corridor_key=None,
            reason="other",
        )
        if h:
            hashes.append(h)
    return hashes


GENERATORS = {
    "structuring": structuring,
    "account_takeover": account_takeover,
    "mule_fan_in": mule_fan_in,
    "velocity_burst": velocity_burst,
}


def run_pattern(sim, name: str, params: dict) -> list:
    try:
        gen = GENERATORS[name]
    except KeyError:
        raise UnknownPattern(f"unknown fraud pattern: {name!r}") from None
    return gen(sim, sim.rng, params or {})

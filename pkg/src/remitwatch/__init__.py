"""remitwatch: a self-contained remittance monitoring platform.

Generates labeled blockchain-style remittance streams, trains and
evaluates fraud models on them, scores transactions in real time,
raises rule- and model-driven alerts, and serves the whole thing to a
dashboard over HTTP + a push event stream.
"""

__version__ = "0.1.0"

from .eventlog import EVENT_KINDS, EventLog, scan_log
from .store import Store, replay
from .config import ServiceConfig, load_service_config
from .runtime import ServiceRuntime
from .app import Api, make_server, serve

__all__ = [
    "Api", "EVENT_KINDS", "EventLog", "ServiceConfig", "ServiceRuntime",
    "Store", "load_service_config", "make_server", "replay", "scan_log",
    "serve",
]

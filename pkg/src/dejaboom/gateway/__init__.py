from dejaboom.gateway.base import (
    ACTION,
    CATEGORIES,
    WORDS,
    Classification,
    CommandTrace,
    Provider,
    SegmentContext,
    Unrecognized,
)
from dejaboom.gateway.history import HistoryWindow, Turn, compress, digest_text
from dejaboom.gateway.remote import RemoteConfig, RemoteProvider, http_transport
from dejaboom.gateway.rule_based import RuleBasedProvider

__all__ = [
    "ACTION",
    "CATEGORIES",
    "WORDS",
    "Classification",
    "CommandTrace",
    "HistoryWindow",
    "Provider",
    "RemoteConfig",
    "RemoteProvider",
    "RuleBasedProvider",
    "SegmentContext",
    "Turn",
    "Unrecognized",
    "compress",
    "digest_text",
    "http_transport",
]

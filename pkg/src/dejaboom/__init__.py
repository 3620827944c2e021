"""Dejaboom: a text-adventure engine with language-model-mediated NPCs and a
narrative-graph pipeline that surfaces player-created emergent strategies."""

__version__ = "0.1.0"

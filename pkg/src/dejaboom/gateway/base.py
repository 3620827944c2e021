"""Provider contract for everything language-shaped.

A provider turns free player text into engine commands, voices NPCs and
game feedback, rewrites failures, compresses history, judges goal
conditions, and (for the analysis pipeline) distills log segments and
matches strategy summaries. Every operation is total: it returns a value
or raises a typed ProviderError; the session layer guarantees a fallback
so live play never dies on a provider fault.
"""

from __future__ import annotations

import abc
from dataclasses import dataclass

from dejaboom.actions import ActionResult, VerbObjectCommand
from dejaboom.gateway.history import HistoryWindow
from dejaboom.npcs import Condition, NpcContext
from dejaboom.world import Location, WorldState

ACTION = "action"
WORDS = "words"

CATEGORIES = (
    "extracting-information-from-npcs",
    "new-entity-suggestions",
    "creative-hidden-information",
    "new-defuse-methods",
    "other",
)


@dataclass(frozen=True)
class Classification:
    kind: str  # ACTION or WORDS
    rule: str = ""  # which rule fired; a model note for remote providers


@dataclass(frozen=True)
class Unrecognized:
    """Normalization fell through; raw text preserved for failure rewriting."""

    raw: str
    verb_token: str = ""
    object_token: str = ""


@dataclass(frozen=True)
class CommandTrace:
    """One executed command as seen by the offline distiller."""

    verb: str
    object: str | None
    outcome: str  # "success" / "failure"


@dataclass(frozen=True)
class SegmentContext:
    """Everything a provider needs to summarize one log sub-segment."""

    day: int
    location_id: str | None
    npc_id: str | None
    player_texts: tuple[str, ...]
    commands: tuple[CommandTrace, ...] = ()
    has_words: bool = False
    movement_only: bool = False
    greeted_npc: str | None = None


class Provider(abc.ABC):
    """Interface shared by the deterministic and the remote implementation."""

    name: str = "provider"

    @abc.abstractmethod
    def classify(self, raw: str, at_npc: bool) -> Classification: ...

    @abc.abstractmethod
    def normalize(self, raw: str) -> VerbObjectCommand | Unrecognized: ...

    @abc.abstractmethod
    def rewrite_failure(
        self, raw: str, failure: ActionResult, history: HistoryWindow, npc_name: str | None = None
    ) -> str: ...

    @abc.abstractmethod
    def npc_respond(self, context: NpcContext, utterance: str, history: HistoryWindow) -> str: ...

    @abc.abstractmethod
    def game_feedback(self, raw: str, location: Location, state: WorldState, history: HistoryWindow) -> str: ...

    @abc.abstractmethod
    def summarize(self, history: HistoryWindow, budget: int) -> HistoryWindow: ...

    @abc.abstractmethod
    def judge(self, condition: Condition, utterance: str) -> bool: ...

    @abc.abstractmethod
    def distill(self, segment: SegmentContext) -> str: ...

    @abc.abstractmethod
    def match(self, summary_a: str, summary_b: str) -> bool: ...

    @abc.abstractmethod
    def categorize_summary(self, summary: str) -> str: ...

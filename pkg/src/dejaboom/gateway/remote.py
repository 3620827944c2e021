"""Remote chat-completion provider.

Speaks a minimal JSON wire format: POST {endpoint} with
{"model": ..., "messages": [{"role", "content"}, ...]} and expects
{"content": "..."} back. One retry with exponential backoff, then the
operation falls back to the deterministic provider so a dead or slow
endpoint can never take a session down with it.

Prompts are external text assets with named placeholders; designers edit
them without touching code.
"""

from __future__ import annotations

import logging
import os
import time
from dataclasses import dataclass
from typing import Callable

import requests

from dejaboom.actions import ActionResult, VerbObjectCommand, VERBS
from dejaboom.assets import load_text
from dejaboom.errors import ProviderError, ProviderTimeout
from dejaboom.gateway.base import (
    ACTION,
    CATEGORIES,
    WORDS,
    Classification,
    Provider,
    SegmentContext,
    Unrecognized,
)
from dejaboom.gateway.history import HistoryWindow, compress
from dejaboom.gateway.rule_based import RuleBasedProvider
from dejaboom.npcs import Condition, NpcContext
from dejaboom.world import Location, WorldSpec, WorldState

log = logging.getLogger(__name__)

DEFAULT_TIMEOUT = 30.0
BACKOFF_SECONDS = 1.0


@dataclass
class RemoteConfig:
    endpoint: str
    model: str
    api_key: str = ""
    timeout: float = DEFAULT_TIMEOUT
    token_budget: int = 4096

    @classmethod
    def from_env(cls) -> "RemoteConfig":
        return cls(
            endpoint=os.environ.get("DEJABOOM_LLM_ENDPOINT", ""),
            model=os.environ.get("DEJABOOM_LLM_MODEL", ""),
            api_key=os.environ.get("DEJABOOM_LLM_API_KEY", ""),
            timeout=float(os.environ.get("DEJABOOM_LLM_TIMEOUT", DEFAULT_TIMEOUT)),
            token_budget=int(os.environ.get("DEJABOOM_LLM_BUDGET", 4096)),
        )


def http_transport(config: RemoteConfig) -> Callable[[list[dict]], str]:
    """Default transport: POST messages, return the response content string."""

    def send(messages: list[dict]) -> str:
        headers = {"Content-Type": "application/json"}
        if config.api_key:
            headers["Authorization"] = f"Bearer {config.api_key}"
        try:
            response = requests.post(
                config.endpoint,
                json={"model": config.model, "messages": messages},
                headers=headers,
                timeout=config.timeout,
            )
        except requests.Timeout as exc:
            raise ProviderTimeout(str(exc)) from exc
        except requests.RequestException as exc:
            raise ProviderError(str(exc)) from exc
        if response.status_code != 200:
            raise ProviderError(f"provider returned {response.status_code}")
        try:
            return response.json()["content"]
        except (ValueError, KeyError) as exc:
            raise ProviderError(f"malformed provider response: {exc}") from exc

    return send


class RemoteProvider(Provider):
    """Model-backed provider with deterministic fallbacks.

    `transport` is injectable for tests; it takes the messages list and
    returns the reply content or raises ProviderError/ProviderTimeout.
    """

    name = "remote"

    def __init__(
        self,
        spec: WorldSpec,
        config: RemoteConfig | None = None,
        transport: Callable[[list[dict]], str] | None = None,
        fallback: RuleBasedProvider | None = None,
        sleeper: Callable[[float], None] = time.sleep,
    ):
        self.spec = spec
        self.config = config or RemoteConfig.from_env()
        self.transport = transport or http_transport(self.config)
        self.fallback = fallback or RuleBasedProvider(spec)
        self.sleeper = sleeper
        self.last_call_failed = False

    def _call(self, prompt_name: str, **fields) -> str:
        prompt = load_text(f"prompts/{prompt_name}.txt").format(**fields)
        messages = [{"role": "user", "content": prompt}]
        try:
            reply = self.transport(messages)
            self.last_call_failed = False
            return reply.strip()
        except ProviderError as first:
            self.sleeper(BACKOFF_SECONDS)
            try:
                reply = self.transport(messages)
                self.last_call_failed = False
                return reply.strip()
            except ProviderError as second:
                log.warning("provider call %s failed twice: %s / %s", prompt_name, first, second)
                self.last_call_failed = True
                raise second

    # -- operations, each with a documented fallback -------------------------

    def classify(self, raw: str, at_npc: bool) -> Classification:
        try:
            reply = self._call("classify", raw=raw, at_npc=str(at_npc).lower()).lower()
        except ProviderError:
            return self.fallback.classify(raw, at_npc)
        if reply.startswith(ACTION):
            return Classification(ACTION, rule="model")
        if reply.startswith(WORDS):
            return Classification(WORDS, rule="model")
        return self.fallback.classify(raw, at_npc)

    def normalize(self, raw: str) -> VerbObjectCommand | Unrecognized:
        entities = ", ".join(
            [loc.name for loc in self.spec.locations if not loc.hidden]
            + [obj.name for obj in self.spec.objects]
        )
        try:
            reply = self._call("normalize", raw=raw, verbs=", ".join(VERBS), entities=entities)
        except ProviderError:
            return self.fallback.normalize(raw)
        if reply.upper().startswith("UNRECOGNIZED"):
            return self.fallback.normalize(raw)  # keeps token detail for rewriting
        verb, _, rest = reply.strip().partition(" ")
        candidate = f"{verb} {rest}".strip()
        normalized = self.fallback.normalize(candidate)
        if isinstance(normalized, Unrecognized):
            return self.fallback.normalize(raw)
        return VerbObjectCommand(verb=normalized.verb, object=normalized.object, raw=raw)

    def rewrite_failure(
        self, raw: str, failure: ActionResult, history: HistoryWindow, npc_name: str | None = None
    ) -> str:
        try:
            return self._call("rewrite_failure", raw=raw, message=failure.message)
        except ProviderError:
            # never block the game on a rewrite: canonical text is always valid
            return self.fallback.rewrite_failure(raw, failure, history, npc_name)

    def npc_respond(self, context: NpcContext, utterance: str, history: HistoryWindow) -> str:
        window = "\n".join(f"{speaker}: {text}" for speaker, text in context.window[-6:])
        try:
            return self._call(
                "npc_respond",
                name=context.name,
                persona=context.persona,
                backstory=context.backstory,
                goal=context.goal_prompt,
                condition=context.condition_description,
                met=str(bool(context.condition_met)).lower(),
                clues="; ".join(context.clues_revealed) or "none",
                window=window or "(first exchange)",
                utterance=utterance,
            )
        except ProviderError:
            raise ProviderTimeout(f"npc_respond failed for {context.npc_id}")

    def game_feedback(
        self, raw: str, location: Location, state: WorldState, history: HistoryWindow
    ) -> str:
        try:
            return self._call("game_feedback", raw=raw, location=location.description)
        except ProviderError:
            return self.fallback.game_feedback(raw, location, state, history)

    def summarize(self, history: HistoryWindow, budget: int) -> HistoryWindow:
        if not history.needs_summary(budget):
            return history
        tail = history.verbatim_tail()
        kept = {id(t) for t in tail}
        dropped = [t for t in history.turns if id(t) not in kept]
        turns_text = "\n".join(f"{t.speaker}: {t.text}" for t in dropped)
        try:
            summary = self._call("summarize", budget_words=budget // 8, turns=turns_text)
        except ProviderError:
            return self.fallback.summarize(history, budget)
        return compress(history, budget, summary)

    def judge(self, condition: Condition, utterance: str) -> bool:
        try:
            reply = self._call(
                "judge", instruction=condition.judge_instruction, utterance=utterance
            ).lower()
        except ProviderError:
            return self.fallback.judge(condition, utterance)
        if reply.startswith("yes"):
            return True
        if reply.startswith("no"):
            return False
        return self.fallback.judge(condition, utterance)

    def distill(self, segment: SegmentContext) -> str:
        # batch analysis: after the retry, fail loudly rather than degrade
        reply = self._call(
            "distill",
            location=segment.location_id or "unknown",
            npc=segment.npc_id or "none",
            lines="\n".join(segment.player_texts),
        )
        return " ".join(reply.split()[:15])

    def match(self, summary_a: str, summary_b: str) -> bool:
        reply = self._call("match", a=summary_a, b=summary_b).lower()
        if reply.startswith("same"):
            return True
        if reply.startswith("different"):
            return False
        raise ProviderError(f"unparseable match verdict: '{reply}'", retryable=False)

    def categorize_summary(self, summary: str) -> str:
        try:
            reply = self._call(
                "categorize", categories=", ".join(CATEGORIES), summary=summary
            ).strip().lower()
        except ProviderError:
            raise
        if reply in CATEGORIES:
            return reply
        raise ProviderError(f"unknown category '{reply}'", retryable=False)

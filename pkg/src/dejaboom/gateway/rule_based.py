"""Deterministic provider: lexicon classifier, synonym normalizer, template
responses, phrase-table distillation and synonym-table matching.

Byte-identical outputs for identical inputs, no I/O, no randomness. This is
both the offline/test provider and the fallback behind the remote one.
"""

from __future__ import annotations

import re
import string

from dejaboom.actions import ActionResult, VerbObjectCommand, UNKNOWN_VERB
from dejaboom.assets import load_json
from dejaboom.errors import EmptyInputError
from dejaboom.gateway.base import (
    ACTION,
    WORDS,
    Classification,
    Provider,
    SegmentContext,
    Unrecognized,
)
from dejaboom.gateway.history import HistoryWindow, compress, digest_text
from dejaboom.npcs import Condition, NpcContext
from dejaboom.world import Location, WorldSpec, WorldState, describe_location

_PUNCT = str.maketrans("", "", string.punctuation)


def _keywords_hit(text: str, all_kws, any_kws) -> bool:
    if any(kw not in text for kw in all_kws):
        return False
    if any_kws and not any(kw in text for kw in any_kws):
        return False
    return True


class RuleBasedProvider(Provider):
    name = "rule"

    def __init__(
        self,
        spec: WorldSpec,
        verbs: dict | None = None,
        phrases: dict | None = None,
        match_rules: dict | None = None,
        categories: dict | None = None,
    ):
        self.spec = spec
        self.verbs = verbs or load_json("verbs.json")
        self.phrases = phrases or load_json("phrases.json")
        self.match_rules = match_rules or load_json("match_rules.json")
        self.categories = categories or load_json("categories.json")
        self.messages = load_json("messages.json")["system"]

        # longest synonym phrase first so "go to" beats "go"
        self._verb_phrases = sorted(
            ((syn, verb) for verb, syns in self.verbs["synonyms"].items() for syn in syns),
            key=lambda pair: -len(pair[0]),
        )
        self._action_lexicon = set(self.verbs["action_lexicon"])
        self._speech_verbs = set(self.verbs["speech_verbs"])
        self._interrogatives = set(self.verbs["interrogatives"])
        self._articles = set(self.verbs["articles"])
        self._directions = set(self.verbs["directions"])
        self._synonym_map = {
            word: group[0] for group in self.match_rules["synonyms"] for word in group
        }
        self._entity_phrases = sorted(
            (
                (phrase, group[0].replace(" ", "_"))
                for group in self.match_rules["entities"]
                for phrase in group
            ),
            key=lambda pair: -len(pair[0]),
        )
        self._stopwords = set(self.match_rules["stopwords"])

    # -- classification ----------------------------------------------------

    def classify(self, raw: str, at_npc: bool) -> Classification:
        text = raw.strip()
        if not text:
            raise EmptyInputError("empty command")
        lowered = text.lower()
        tokens = lowered.translate(_PUNCT).split()
        first = tokens[0] if tokens else ""
        if "?" in lowered:
            return Classification(WORDS, rule="question-mark")
        if first in self._interrogatives:
            return Classification(WORDS, rule="interrogative")
        if first in self._speech_verbs:
            return Classification(WORDS, rule="speech-verb")
        if {"you", "your", "yours"} & set(tokens):
            return Classification(WORDS, rule="second-person")
        if first in self._action_lexicon:
            return Classification(ACTION, rule="action-verb")
        if at_npc:
            return Classification(WORDS, rule="tie-npc")
        return Classification(ACTION, rule="tie-default")

    # -- normalization ------------------------------------------------------

    def normalize(self, raw: str) -> VerbObjectCommand | Unrecognized:
        text = raw.strip().lower().rstrip(".!?")
        verb = None
        rest = text
        for phrase, canonical in self._verb_phrases:
            if text == phrase or text.startswith(phrase + " "):
                verb = canonical
                rest = text[len(phrase):].strip()
                break
        if verb is None:
            tokens = text.split()
            verb_token = tokens[0] if tokens else ""
            object_token = self._clean_object(" ".join(tokens[1:]))
            return Unrecognized(raw=raw, verb_token=verb_token, object_token=object_token)
        obj = self._resolve(verb, self._clean_object(rest))
        return VerbObjectCommand(verb=verb, object=obj, raw=raw)

    def _clean_object(self, token: str) -> str:
        words = [w for w in token.translate(_PUNCT).split()]
        while words and words[0] in (self._articles | {"to", "at", "on", "in"}):
            words.pop(0)
        return " ".join(words)

    def _resolve(self, verb: str, token: str) -> str | None:
        if not token:
            return None
        if token in self._directions:
            return token
        for loc in self.spec.locations:
            if token in (loc.id, loc.name.lower()):
                return loc.id
        for obj in self.spec.objects:
            if token in (obj.id, obj.name.lower()) or token in obj.name.lower().split():
                return obj.id
        return token

    # -- live-play text ------------------------------------------------------

    def rewrite_failure(
        self, raw: str, failure: ActionResult, history: HistoryWindow, npc_name: str | None = None
    ) -> str:
        if failure.failure_code != UNKNOWN_VERB:
            return failure.message
        if npc_name:
            return self.messages["npc_brushoff"].format(name=npc_name)
        if failure.message == load_json("messages.json")["failures"]["unknown_verb"]:
            return self.messages["failure_rewrite"].format(raw=raw.strip().rstrip(".!?"))
        return failure.message

    def npc_respond(self, context: NpcContext, utterance: str, history: HistoryWindow) -> str:
        npc = self.spec.npc(context.npc_id)
        in_chain = context.goal_index < len(npc.goals)
        if context.condition_met and in_chain:
            return npc.goals[context.goal_index].response_met
        lowered = utterance.lower()
        for line in npc.flavor:
            if any(kw in lowered for kw in line.any_keywords):
                return line.text
        if in_chain:
            return npc.goals[context.goal_index].response_unmet
        return npc.default_response or self.messages["stall"].format(name=npc.name)

    def game_feedback(
        self, raw: str, location: Location, state: WorldState, history: HistoryWindow
    ) -> str:
        return describe_location(location.id, state, self.spec)

    def summarize(self, history: HistoryWindow, budget: int) -> HistoryWindow:
        if not history.needs_summary(budget):
            return history
        return compress(history, budget, digest_text(history))

    def judge(self, condition: Condition, utterance: str) -> bool:
        return condition.keywords_met(utterance)

    # -- analysis ------------------------------------------------------------

    def distill(self, segment: SegmentContext) -> str:
        texts = " \n ".join(segment.player_texts).lower()
        location = self._display_location(segment.location_id)
        npc = self._display_npc(segment.npc_id)

        if segment.npc_id and segment.has_words:
            for rule in self.phrases["conversation_rules"]:
                if rule.get("npc") not in (None, segment.npc_id):
                    continue
                if _keywords_hit(texts, rule.get("all", []), rule.get("any", [])):
                    return self._cap(rule["summary"])

        for rule in self.phrases["action_rules"]:
            if rule.get("location") not in (None, segment.location_id):
                continue
            if _keywords_hit(texts, rule.get("all", []), rule.get("any", [])):
                return self._cap(rule["summary"])

        successes = {c.verb: c for c in segment.commands if c.outcome == "success"}
        for verb in self.phrases["verb_priority"]:
            if verb in successes:
                template = self.phrases["verb_templates"][verb]
                return self._cap(
                    template.format(object=self._display_object(successes[verb].object), location=location)
                )

        if segment.npc_id and segment.has_words:
            return self._cap(self.phrases["conversation_default"].format(npc=npc))

        if segment.movement_only:
            if segment.greeted_npc:
                return self._cap(
                    self.phrases["approach_summary"].format(
                        npc=self._display_npc(segment.greeted_npc), location=location
                    )
                )
            return self._cap(self.phrases["go_summary"].format(location=location))

        if segment.commands and all(c.verb == "wait" for c in segment.commands if c.outcome == "success"):
            if any(c.outcome == "success" for c in segment.commands):
                return self._cap(self.phrases["wait_summary"])

        return self._cap(self.phrases["action_default"].format(location=location))

    def match(self, summary_a: str, summary_b: str) -> bool:
        return self._normalize_summary(summary_a) == self._normalize_summary(summary_b)

    def _normalize_summary(self, summary: str) -> frozenset[str]:
        text = summary.lower().replace("'s", "")
        for phrase, token in self._entity_phrases:
            text = re.sub(rf"\b{re.escape(phrase)}\b", token, text)
        words = text.translate(_PUNCT).split()
        out = set()
        for word in words:
            if word in self._stopwords:
                continue
            out.add(self._synonym_map.get(word, word))
        return frozenset(out)

    def categorize_summary(self, summary: str) -> str:
        lowered = summary.lower()
        for rule in self.categories["rules"]:
            if any(kw in lowered for kw in rule["any"]):
                return rule["category"]
        return self.categories["fallback"]

    # -- helpers ---------------------------------------------------------------

    def _display_location(self, loc_id: str | None) -> str:
        if loc_id is None:
            return "the village"
        try:
            return self.spec.location(loc_id).name
        except KeyError:
            return loc_id.replace("_", " ")

    def _display_object(self, obj_id: str | None) -> str:
        if obj_id is None:
            return "something"
        try:
            return self.spec.object(obj_id).name
        except KeyError:
            return obj_id.replace("_", " ")

    def _display_npc(self, npc_id: str | None) -> str:
        if npc_id is None:
            return "someone"
        try:
            return self.spec.npc(npc_id).name
        except KeyError:
            return npc_id.replace("_", " ")

    @staticmethod
    def _cap(summary: str, max_words: int = 15) -> str:
        words = summary.split()
        return " ".join(words[:max_words])

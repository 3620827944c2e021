"""Distill day segments of a game log into ordered player strategies.

Segmentation is mechanical and provider-independent: a day is cut into
location visits at successful movement commands, and within a visit a new
sub-segment starts after every step that changed the state label (an NPC
goal advanced or a milestone item was acquired). Movement-only visits are
travel, not strategy: they attach forward to the next substantive segment,
except at the end of a day, where "approach X" is the strategy itself.

The provider then turns each sub-segment into a summary phrase; the
sub-segment's final state label becomes the strategy's label.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from dejaboom.errors import GraphError
from dejaboom.gateway.base import CommandTrace, Provider, SegmentContext
from dejaboom.narrative.graph import NarrativeGraph, Strategy, build_path_graph
from dejaboom.narrative.merge import NodeMatch, merge
from dejaboom.session import DaySegment, LogRecord, ROLE_PLAYER, ROLE_SYSTEM, split_days


@dataclass
class _Step:
    player: LogRecord
    responses: list[LogRecord] = field(default_factory=list)

    @property
    def verb(self) -> str | None:
        if self.player.canonical:
            return self.player.canonical.split(" ", 1)[0]
        return None

    @property
    def object(self) -> str | None:
        if self.player.canonical and " " in self.player.canonical:
            return self.player.canonical.split(" ", 1)[1]
        return None

    @property
    def is_go(self) -> bool:
        return self.verb == "go"

    @property
    def moved(self) -> bool:
        return self.is_go and self.player.outcome == "success"

    @property
    def label(self) -> str:
        return self.player.state_label_after

    def npc_responses(self) -> list[str]:
        return [r.role.split(":", 1)[1] for r in self.responses if r.role.startswith("npc:")]


@dataclass
class _Visit:
    location: str | None
    steps: list[_Step] = field(default_factory=list)

    @property
    def movement_only(self) -> bool:
        return bool(self.steps) and all(s.is_go for s in self.steps)


def distill_day(segment: DaySegment, provider: Provider) -> list[Strategy]:
    """Summarize one day of play into its ordered strategies."""
    steps = _collect_steps(segment.records)
    if not steps:
        raise GraphError(f"day {segment.day} contains no player steps")
    start_label = _initial_label(segment.records)
    visits = _split_visits(steps, provider)

    contexts: list[tuple[SegmentContext, str]] = []  # (context, final label)
    carried: list[_Step] = []  # movement-only visits waiting to attach forward
    carried_location: str | None = None

    for visit in visits:
        if visit.movement_only:
            carried.extend(visit.steps)
            carried_location = visit.location
            continue
        chunks = _split_on_label_change(visit.steps, _label_before(contexts, start_label))
        for i, chunk in enumerate(chunks):
            prefix = carried if i == 0 else []
            contexts.append(_build_context(segment.day, visit.location, prefix + chunk, False, None))
            carried = []
    if carried:
        # only the final location's greeting counts: the day ended facing that NPC
        final_npcs = carried[-1].npc_responses()
        greeted = final_npcs[-1] if final_npcs else None
        contexts.append(
            _build_context(segment.day, carried_location, carried, True, greeted)
        )

    strategies = []
    for context, label in contexts:
        summary = provider.distill(context)
        strategies.append(Strategy(summary=summary, state_label=label))
    deduped: list[Strategy] = []
    for strat in strategies:
        if deduped and deduped[-1] == strat:
            continue
        deduped.append(strat)
    return deduped


def _collect_steps(records: tuple[LogRecord, ...]) -> list[_Step]:
    steps: list[_Step] = []
    for record in records:
        if record.role == ROLE_PLAYER:
            steps.append(_Step(player=record))
        elif record.role == ROLE_SYSTEM:
            continue
        elif steps:
            steps[-1].responses.append(record)
    return steps


def _initial_label(records: tuple[LogRecord, ...]) -> str:
    for record in records:
        if record.role == ROLE_SYSTEM:
            return record.state_label_after
    for record in records:
        return "0" * len(record.state_label_after)
    return ""


def _split_visits(steps: list[_Step], provider: Provider) -> list[_Visit]:
    spec = getattr(provider, "spec", None)
    location = spec.start_location if spec is not None else None
    visits = [_Visit(location=location)]
    for step_unit in steps:
        if step_unit.moved:
            location = _go_target(step_unit, location, spec)
            visits.append(_Visit(location=location, steps=[step_unit]))
        else:
            visits[-1].steps.append(step_unit)
    return [v for v in visits if v.steps]


def _go_target(step_unit: _Step, current: str | None, spec) -> str | None:
    token = step_unit.object
    if token is None or spec is None:
        return token
    if current is not None:
        try:
            exits = spec.location(current).exits
        except KeyError:
            exits = {}
        if token in exits:
            return exits[token]
    try:
        spec.location(token)
        return token
    except KeyError:
        return token


def _split_on_label_change(steps: list[_Step], entry_label: str) -> list[list[_Step]]:
    chunks: list[list[_Step]] = [[]]
    previous = entry_label
    for step_unit in steps:
        chunks[-1].append(step_unit)
        if step_unit.label != previous:
            chunks.append([])
        previous = step_unit.label
    if not chunks[-1]:
        chunks.pop()
    elif len(chunks) > 1 and not any(
        s.player.classification == "words" for s in chunks[-1]
    ):
        # a trailing action run with no label change is residue of the previous
        # strategy (a failed follow-up, idle waits); trailing words start a new one
        tail = chunks.pop()
        chunks[-1].extend(tail)
    return chunks


def _label_before(contexts: list[tuple[SegmentContext, str]], start_label: str) -> str:
    return contexts[-1][1] if contexts else start_label


def _build_context(
    day: int,
    location: str | None,
    steps: list[_Step],
    movement_only: bool,
    greeted: str | None,
) -> tuple[SegmentContext, str]:
    player_texts = tuple(s.player.text for s in steps if not s.is_go)
    commands = tuple(
        CommandTrace(verb=s.verb, object=s.object, outcome=s.player.outcome or "failure")
        for s in steps
        if s.verb is not None
    )
    has_words = any(s.player.classification == "words" for s in steps)
    npc_id = None
    for step_unit in steps:
        if step_unit.is_go:
            continue
        npcs = step_unit.npc_responses()
        if npcs:
            npc_id = npcs[-1]
    label = steps[-1].label
    context = SegmentContext(
        day=day,
        location_id=location,
        npc_id=npc_id,
        player_texts=player_texts,
        commands=commands,
        has_words=has_words,
        movement_only=movement_only,
        greeted_npc=greeted,
    )
    return context, label


# ---------------------------------------------------------------------------
# Log-to-graph pipeline


def build_player_graph(
    records: list[LogRecord],
    provider: Provider,
    source: str,
    audit: list[NodeMatch] | None = None,
) -> NarrativeGraph:
    """Distill every day of one player's log and merge the day paths in order."""
    segments = split_days(records)
    graph: NarrativeGraph | None = None
    for segment in segments:
        if not any(r.role == ROLE_PLAYER for r in segment.records):
            continue
        strategies = distill_day(segment, provider)
        day_graph = build_path_graph(strategies, source, segment.day)
        graph = day_graph if graph is None else merge(graph, day_graph, provider, audit)
    if graph is None:
        raise GraphError(f"log for {source} contains no playable days")
    return graph

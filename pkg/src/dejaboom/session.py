"""Play-session orchestration and the structured game log.

Every accepted command, an action or an utterance to an NPC alike, consumes
exactly one step. When the step limit is reached without a defusal, an
explosion record is written, the world resets, and a new day begins; the
log itself is the player's memory and survives every reset. Logs are
line-delimited JSON, append-only, and are the interchange format for the
analysis pipeline and the UI.
"""

from __future__ import annotations

import json
import uuid
from dataclasses import dataclass, field, asdict, replace
from datetime import datetime, timezone
from pathlib import Path

from dejaboom import actions
from dejaboom.actions import ActionResult, execute, unrecognized_result
from dejaboom.assets import load_json
from dejaboom.errors import (
    CorruptLogError,
    EmptyInputError,
    MalformedLogError,
    ProviderError,
    SessionNotFoundError,
    SessionOverError,
)
from dejaboom.gateway.base import ACTION, Provider, Unrecognized
from dejaboom.gateway.history import HistoryWindow
from dejaboom.npcs import NpcRuntime, advance_npc, build_npc_context, evaluate_condition, npc_present
from dejaboom.world import WorldSpec, WorldState, fresh_state, reset_world, set_flag, state_label

RUNNING = "RUNNING"
WON = "WON"
TIME_UP = "TIME_UP"

ROLE_PLAYER = "player"
ROLE_FEEDBACK = "game_feedback"
ROLE_SYSTEM = "system"

DEFAULT_TOKEN_BUDGET = 4096


@dataclass(frozen=True)
class LogRecord:
    seq: int
    day: int
    step_in_day: int
    role: str
    text: str
    state_label_after: str
    classification: str | None = None
    canonical: str | None = None
    outcome: str | None = None
    fallback: bool = False

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "LogRecord":
        return cls(**data)


@dataclass(frozen=True)
class DaySegment:
    day: int
    records: tuple[LogRecord, ...]


@dataclass
class Session:
    session_id: str
    player_id: str
    spec: WorldSpec
    state: WorldState
    history: HistoryWindow
    provider: Provider | None = field(default=None, compare=False, repr=False)
    world_ref: str = "dejaboom"
    profiles: tuple[str, ...] = ()  # motivation-profile metadata only; never analyzed here
    status: str = RUNNING
    created: str = ""
    records: list[LogRecord] = field(default_factory=list)
    token_budget: int = DEFAULT_TOKEN_BUDGET

    @property
    def next_seq(self) -> int:
        return self.records[-1].seq + 1 if self.records else 1


def _system_messages() -> dict:
    return load_json("messages.json")["system"]


def start_session(
    spec: WorldSpec,
    provider: Provider,
    player_id: str = "player",
    profiles: tuple[str, ...] = (),
    world_ref: str = "dejaboom",
    session_id: str | None = None,
    created: str | None = None,
) -> Session:
    """Fresh session: day-1 state plus the intro as the first system record."""
    if provider is None:
        raise ProviderError("a provider is required to start a session", retryable=False)
    state = fresh_state(spec)
    session = Session(
        session_id=session_id or uuid.uuid4().hex,
        player_id=player_id,
        spec=spec,
        state=state,
        history=HistoryWindow(),
        provider=provider,
        world_ref=world_ref,
        profiles=tuple(profiles),
        created=created or datetime.now(timezone.utc).isoformat(timespec="seconds"),
    )
    session.records.append(
        LogRecord(
            seq=1,
            day=1,
            step_in_day=0,
            role=ROLE_SYSTEM,
            text=spec.intro_text,
            state_label_after=state_label(state, spec),
        )
    )
    session.history.append(ROLE_SYSTEM, spec.intro_text, 0, 1)
    return session


def step(session: Session, raw: str) -> list[LogRecord]:
    """Process one player command; returns the records it appended to the log."""
    if session.status != RUNNING:
        raise SessionOverError(session.status)
    text = raw.strip()
    if not text:
        raise EmptyInputError("empty command")

    spec, state, provider = session.spec, session.state, session.provider
    npc_id = npc_present(state.current_location, state, spec)
    classification = provider.classify(text, npc_id is not None)

    state.step_in_day += 1
    if classification.kind == ACTION:
        produced = _handle_action(session, text, npc_id)
    else:
        produced = _handle_words(session, text, npc_id)

    if session.status == RUNNING and state.step_in_day >= spec.bomb.step_limit:
        produced.extend(_explode_and_reset(session))

    numbered = []
    seq = session.next_seq
    for record in produced:
        numbered.append(replace(record, seq=seq))
        seq += 1
    session.records.extend(numbered)
    _maybe_summarize(session)
    return numbered


def _handle_action(session: Session, text: str, npc_id: str | None) -> list[LogRecord]:
    spec, state, provider = session.spec, session.state, session.provider
    day, step_no = state.day, state.step_in_day
    normalized = provider.normalize(text)
    normalize_fell_back = getattr(provider, "last_call_failed", False)

    canonical = None
    if isinstance(normalized, Unrecognized):
        result = unrecognized_result(text, normalized.verb_token, normalized.object_token, spec)
    else:
        result, _ = execute(normalized, state, spec)
        canonical = (
            normalized.verb if normalized.object is None else f"{normalized.verb} {normalized.object}"
        )

    if result.outcome == actions.SUCCESS and result.state_delta.get("defused"):
        session.status = WON

    feedback_fallback = False
    if result.failed:
        npc_name = spec.npc(npc_id).name if npc_id else None
        try:
            feedback_text = provider.rewrite_failure(text, result, session.history, npc_name)
            feedback_fallback = getattr(provider, "last_call_failed", False)
        except ProviderError:
            feedback_text = result.message
            feedback_fallback = True
        feedback_role = f"npc:{npc_id}" if npc_id else ROLE_FEEDBACK
    else:
        feedback_text = result.message
        feedback_role = ROLE_FEEDBACK

    label = state_label(state, spec)
    records = [
        LogRecord(
            seq=0,
            day=day,
            step_in_day=step_no,
            role=ROLE_PLAYER,
            text=text,
            state_label_after=label,
            classification=ACTION,
            canonical=canonical,
            outcome=result.outcome,
            fallback=normalize_fell_back,
        ),
        LogRecord(
            seq=0,
            day=day,
            step_in_day=step_no,
            role=feedback_role,
            text=feedback_text,
            state_label_after=label,
            fallback=feedback_fallback,
        ),
    ]
    session.history.append("player", text, step_no, day)
    session.history.append(feedback_role, feedback_text, step_no, day)

    greeting = _greeting_after_move(session, result)
    if greeting is not None:
        records.append(greeting)
    if session.status == WON:
        records.append(
            LogRecord(
                seq=0,
                day=day,
                step_in_day=step_no,
                role=ROLE_SYSTEM,
                text=_system_messages()["won"],
                state_label_after=label,
            )
        )
    return records


def _handle_words(session: Session, text: str, npc_id: str | None) -> list[LogRecord]:
    spec, state, provider = session.spec, session.state, session.provider
    day, step_no = state.day, state.step_in_day
    fallback_used = False

    if npc_id is not None:
        npc = spec.npc(npc_id)
        runtime = state.npc_runtimes[npc_id]
        met = False
        if runtime.goal_index < len(npc.goals):
            goal = npc.goals[runtime.goal_index]
            try:
                met = evaluate_condition(goal.condition, text, state, provider)
            except ProviderError:
                met = goal.condition.keywords_met(text)
                fallback_used = True
        context = build_npc_context(npc, runtime, state, spec)
        context.condition_met = met
        new_runtime, effects = advance_npc(runtime, text, state, npc, _FixedJudge(met))
        for flag in effects.flags:
            set_flag(state, flag)
        new_runtime.activated = True
        new_runtime.conversation.append(("player", text))
        state.npc_runtimes[npc_id] = new_runtime
        try:
            reply = provider.npc_respond(context, text, session.history)
            reply_fallback = getattr(provider, "last_call_failed", False)
        except ProviderError:
            reply = _system_messages()["stall"].format(name=npc.name)
            reply_fallback = True
        new_runtime.conversation.append((npc.name, reply))
        role = f"npc:{npc_id}"
        fallback_used = fallback_used or reply_fallback
    else:
        location = spec.location(state.current_location)
        try:
            reply = provider.game_feedback(text, location, state, session.history)
            fallback_used = getattr(provider, "last_call_failed", False)
        except ProviderError:
            reply = location.description
            fallback_used = True
        role = ROLE_FEEDBACK

    label = state_label(state, spec)
    records = [
        LogRecord(
            seq=0,
            day=day,
            step_in_day=step_no,
            role=ROLE_PLAYER,
            text=text,
            state_label_after=label,
            classification="words",
        ),
        LogRecord(
            seq=0,
            day=day,
            step_in_day=step_no,
            role=role,
            text=reply,
            state_label_after=label,
            fallback=fallback_used,
        ),
    ]
    session.history.append("player", text, step_no, day)
    session.history.append(role, reply, step_no, day)
    return records


class _FixedJudge:
    """Wraps an already-computed verdict so a condition is never judged twice."""

    def __init__(self, verdict: bool):
        self.verdict = verdict

    def judge(self, condition, utterance) -> bool:
        return self.verdict


def _greeting_after_move(session: Session, result: ActionResult) -> LogRecord | None:
    if result.failed or "moved_to" not in result.state_delta:
        return None
    spec, state = session.spec, session.state
    npc_id = npc_present(state.current_location, state, spec)
    if npc_id is None:
        return None
    npc = spec.npc(npc_id)
    state.npc_runtimes[npc_id].activated = True
    if not npc.greeting:
        return None
    session.history.append(f"npc:{npc_id}", npc.greeting, state.step_in_day, state.day)
    return LogRecord(
        seq=0,
        day=state.day,
        step_in_day=state.step_in_day,
        role=f"npc:{npc_id}",
        text=npc.greeting,
        state_label_after=state_label(state, spec),
    )


def _explode_and_reset(session: Session) -> list[LogRecord]:
    spec, state = session.spec, session.state
    messages = _system_messages()
    explosion = LogRecord(
        seq=0,
        day=state.day,
        step_in_day=state.step_in_day,
        role=ROLE_SYSTEM,
        text=messages["explosion"],
        state_label_after=state_label(state, spec),
    )
    session.state = reset_world(state, spec)
    intro = LogRecord(
        seq=0,
        day=session.state.day,
        step_in_day=0,
        role=ROLE_SYSTEM,
        text=messages["day_intro"].format(day=session.state.day),
        state_label_after=state_label(session.state, spec),
    )
    session.history.append(ROLE_SYSTEM, explosion.text, explosion.step_in_day, explosion.day)
    session.history.append(ROLE_SYSTEM, intro.text, 0, intro.day)
    return [explosion, intro]


def _maybe_summarize(session: Session) -> None:
    if session.provider is None:
        return
    if session.history.needs_summary(session.token_budget):
        try:
            session.history = session.provider.summarize(session.history, session.token_budget)
        except ProviderError:
            pass  # keep the uncompressed window; better long than lost


# ---------------------------------------------------------------------------
# Day segmentation


def split_days(records: list[LogRecord]) -> list[DaySegment]:
    """Partition a log into day segments; boundaries fall exactly at resets."""
    segments: list[DaySegment] = []
    current: list[LogRecord] = []
    last_seq = 0
    current_day: int | None = None
    for record in records:
        if record.seq <= last_seq:
            raise MalformedLogError(f"seq {record.seq} after {last_seq}")
        last_seq = record.seq
        if current_day is None:
            current_day = record.day
        if record.day != current_day:
            segments.append(DaySegment(day=current_day, records=tuple(current)))
            current = []
            current_day = record.day
        current.append(record)
    if current:
        segments.append(DaySegment(day=current_day, records=tuple(current)))
    return segments


# ---------------------------------------------------------------------------
# Persistence: append-only jsonl log + rewritable metadata sidecar


def _record_line(record: LogRecord) -> str:
    return json.dumps(record.to_dict(), ensure_ascii=False, sort_keys=True, separators=(",", ":"))


def log_lines(session: Session) -> list[str]:
    return [_record_line(r) for r in session.records]


def persist_session(store: str | Path, session: Session) -> Path:
    """Write new records (append-only) and refresh the metadata sidecar."""
    store = Path(store)
    store.mkdir(parents=True, exist_ok=True)
    log_path = store / f"{session.session_id}.jsonl"
    written = 0
    if log_path.exists():
        with log_path.open("r", encoding="utf-8") as fh:
            written = sum(1 for line in fh if line.strip())
    new_records = session.records[written:]
    if new_records:
        with log_path.open("a", encoding="utf-8") as fh:
            for record in new_records:
                fh.write(_record_line(record) + "\n")
    meta = {
        "session_id": session.session_id,
        "player_id": session.player_id,
        "world_ref": session.world_ref,
        "profiles": list(session.profiles),
        "status": session.status,
        "created": session.created,
        "token_budget": session.token_budget,
        "state": _state_to_dict(session.state),
        "history": [
            {"speaker": t.speaker, "text": t.text, "step": t.step, "day": t.day}
            for t in session.history.turns
        ],
    }
    meta_path = store / f"{session.session_id}.meta.json"
    meta_path.write_text(json.dumps(meta, ensure_ascii=False, indent=2), encoding="utf-8")
    return log_path


def load_records(path: str | Path) -> list[LogRecord]:
    records: list[LogRecord] = []
    last_seq = 0
    for i, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = LogRecord.from_dict(json.loads(line))
        except (ValueError, TypeError) as exc:
            raise CorruptLogError(f"bad record on line {i}: {exc}", seq=last_seq + 1) from exc
        if record.seq <= last_seq:
            raise CorruptLogError(f"non-monotone seq {record.seq}", seq=record.seq)
        last_seq = record.seq
        records.append(record)
    return records


def load_session(
    store: str | Path, session_id: str, spec: WorldSpec, provider: Provider | None = None
) -> Session:
    """Rebuild a persisted session; structurally equal to the original minus the provider."""
    store = Path(store)
    log_path = store / f"{session_id}.jsonl"
    meta_path = store / f"{session_id}.meta.json"
    if not log_path.exists() or not meta_path.exists():
        raise SessionNotFoundError(session_id)
    meta = json.loads(meta_path.read_text(encoding="utf-8"))
    records = load_records(log_path)
    history = HistoryWindow()
    for turn in meta["history"]:
        history.append(turn["speaker"], turn["text"], turn["step"], turn["day"])
    return Session(
        session_id=meta["session_id"],
        player_id=meta["player_id"],
        spec=spec,
        state=_state_from_dict(meta["state"]),
        history=history,
        provider=provider,
        world_ref=meta["world_ref"],
        profiles=tuple(meta["profiles"]),
        status=meta["status"],
        created=meta["created"],
        records=records,
        token_budget=meta.get("token_budget", DEFAULT_TOKEN_BUDGET),
    )


def _state_to_dict(state: WorldState) -> dict:
    return {
        "current_location": state.current_location,
        "inventory": sorted(state.inventory),
        "placements": dict(sorted(state.placements.items())),
        "flags": dict(sorted(state.flags.items())),
        "npc_runtimes": {
            npc_id: {
                "goal_index": rt.goal_index,
                "activated": rt.activated,
                "conversation": [list(turn) for turn in rt.conversation],
            }
            for npc_id, rt in sorted(state.npc_runtimes.items())
        },
        "step_in_day": state.step_in_day,
        "day": state.day,
    }


def _state_from_dict(data: dict) -> WorldState:
    return WorldState(
        current_location=data["current_location"],
        inventory=set(data["inventory"]),
        placements=dict(data["placements"]),
        flags=dict(data["flags"]),
        npc_runtimes={
            npc_id: NpcRuntime(
                npc_id,
                goal_index=rt["goal_index"],
                activated=rt["activated"],
                conversation=[tuple(turn) for turn in rt["conversation"]],
            )
            for npc_id, rt in data["npc_runtimes"].items()
        },
        step_in_day=data["step_in_day"],
        day=data["day"],
    )

"""NPC goal/condition state machines.

Each NPC carries an ordered chain of goals. A goal advances when its
condition is satisfied by a player utterance (or by world flags), which
releases the goal's effects: milestone flags and a clue line. Conditions
carry both a keyword evaluator (deterministic, offline) and a judgment
instruction (for a live model), so either provider can run them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Protocol

if TYPE_CHECKING:  # avoid a runtime cycle with world.py
    from dejaboom.world import WorldSpec, WorldState


@dataclass(frozen=True)
class Condition:
    """Gate in front of a goal; kind is one of flag_set / utterance_matches / always."""

    kind: str
    flag: str | None = None
    # every group must have at least one hit; each "all" phrase must appear
    any_groups: tuple[tuple[str, ...], ...] = ()
    all_keywords: tuple[str, ...] = ()
    judge_instruction: str = ""

    def keywords_met(self, utterance: str) -> bool:
        text = utterance.lower()
        if any(kw not in text for kw in self.all_keywords):
            return False
        for group in self.any_groups:
            if not any(kw in text for kw in group):
                return False
        return True


@dataclass(frozen=True)
class GoalEffects:
    flags: tuple[str, ...] = ()
    clue: str | None = None


@dataclass(frozen=True)
class NpcGoal:
    goal_prompt: str
    condition: Condition
    effects: GoalEffects
    response_met: str
    response_unmet: str


@dataclass(frozen=True)
class FlavorLine:
    """Utterance-keyed color response that never advances the goal chain."""

    any_keywords: tuple[str, ...]
    text: str


@dataclass(frozen=True)
class NpcSpec:
    id: str
    name: str
    location: str
    persona: str
    backstory: str
    goals: tuple[NpcGoal, ...]
    activation: str | None = None
    greeting: str = ""
    default_response: str = ""
    flavor: tuple[FlavorLine, ...] = ()


@dataclass
class NpcRuntime:
    """Per-session, per-day NPC state; reset_world returns it to fresh values."""

    npc_id: str
    goal_index: int = 0
    activated: bool = False
    conversation: list[tuple[str, str]] = field(default_factory=list)

    def copy(self) -> "NpcRuntime":
        return NpcRuntime(self.npc_id, self.goal_index, self.activated, list(self.conversation))


@dataclass
class NpcContext:
    """Provider-ready prompt context for one NPC turn."""

    npc_id: str
    name: str
    persona: str
    backstory: str
    goal_index: int
    goal_prompt: str
    condition_description: str
    clues_revealed: tuple[str, ...]
    window: tuple[tuple[str, str], ...]
    condition_met: bool | None = None


class ConditionJudge(Protocol):
    def judge(self, condition: Condition, utterance: str) -> bool: ...


def npc_present(location: str, state: "WorldState", spec: "WorldSpec") -> str | None:
    """Return the id of the NPC standing at `location`, if it is active."""
    for npc in spec.npcs:
        if npc.location != location:
            continue
        if npc.activation and not state.flags.get(npc.activation, False):
            return None
        return npc.id
    return None


def evaluate_condition(
    condition: Condition, utterance: str, state: "WorldState", judge: ConditionJudge
) -> bool:
    """Evaluate a goal condition against an utterance and the current state.

    flag_set conditions are a pure state lookup; utterance conditions are
    delegated to the judge, which is the keyword evaluator for the
    rule-based provider and a model verdict for a remote one. Judge
    failures propagate (retryable), never silently read as False.
    """
    if condition.kind == "always":
        return True
    if condition.kind == "flag_set":
        return bool(state.flags.get(condition.flag or "", False))
    if condition.kind == "utterance_matches":
        if not utterance.strip():
            return False
        return judge.judge(condition, utterance)
    raise ValueError(f"unknown condition kind: {condition.kind}")


def advance_npc(
    runtime: NpcRuntime,
    utterance: str,
    state: "WorldState",
    npc: NpcSpec,
    judge: ConditionJudge,
) -> tuple[NpcRuntime, GoalEffects]:
    """Advance the NPC by at most one goal if the current condition is met.

    Returns the (possibly unchanged) runtime and the effects to apply.
    Effects are returned, not applied; the session owns flag mutation.
    """
    if runtime.goal_index >= len(npc.goals):
        return runtime, GoalEffects()
    goal = npc.goals[runtime.goal_index]
    if not evaluate_condition(goal.condition, utterance, state, judge):
        return runtime, GoalEffects()
    advanced = runtime.copy()
    advanced.goal_index += 1
    return advanced, goal.effects


def build_npc_context(
    npc: NpcSpec,
    runtime: NpcRuntime,
    state: "WorldState",
    spec: "WorldSpec",
    history_window: tuple[tuple[str, str], ...] | None = None,
) -> NpcContext:
    """Assemble the prompt context for one NPC: persona, backstory, the
    current goal, its unmet condition, and clues already earned this day."""
    clues = tuple(
        goal.effects.clue for goal in npc.goals[: runtime.goal_index] if goal.effects.clue
    )
    if runtime.goal_index < len(npc.goals):
        goal = npc.goals[runtime.goal_index]
        prompt = goal.goal_prompt
        condition_desc = goal.condition.judge_instruction
    else:
        prompt = ""
        condition_desc = ""
    window = history_window if history_window is not None else tuple(runtime.conversation)
    return NpcContext(
        npc_id=npc.id,
        name=npc.name,
        persona=npc.persona,
        backstory=npc.backstory,
        goal_index=runtime.goal_index,
        goal_prompt=prompt,
        condition_description=condition_desc,
        clues_revealed=clues,
        window=window,
    )


def condition_from_dict(data: dict) -> Condition:
    any_groups: list[tuple[str, ...]] = []
    if "any" in data:
        any_groups.append(tuple(data["any"]))
    for group in data.get("any_groups", []):
        any_groups.append(tuple(group))
    return Condition(
        kind=data["kind"],
        flag=data.get("flag"),
        any_groups=tuple(any_groups),
        all_keywords=tuple(data.get("all", [])),
        judge_instruction=data.get("judge_instruction", ""),
    )


def condition_to_dict(cond: Condition) -> dict:
    out: dict = {"kind": cond.kind}
    if cond.flag is not None:
        out["flag"] = cond.flag
    if cond.any_groups:
        out["any_groups"] = [list(g) for g in cond.any_groups]
    if cond.all_keywords:
        out["all"] = list(cond.all_keywords)
    if cond.judge_instruction:
        out["judge_instruction"] = cond.judge_instruction
    return out


def npc_from_dict(data: dict) -> NpcSpec:
    goals = tuple(
        NpcGoal(
            goal_prompt=g["goal_prompt"],
            condition=condition_from_dict(g["condition"]),
            effects=GoalEffects(
                flags=tuple(g.get("effects", {}).get("flags", [])),
                clue=g.get("effects", {}).get("clue"),
            ),
            response_met=g["response_met"],
            response_unmet=g["response_unmet"],
        )
        for g in data["goals"]
    )
    flavor = tuple(
        FlavorLine(any_keywords=tuple(f["any"]), text=f["text"]) for f in data.get("flavor", [])
    )
    return NpcSpec(
        id=data["id"],
        name=data["name"],
        location=data["location"],
        persona=data["persona"],
        backstory=data["backstory"],
        goals=goals,
        activation=data.get("activation"),
        greeting=data.get("greeting", ""),
        default_response=data.get("default_response", ""),
        flavor=flavor,
    )


def npc_to_dict(npc: NpcSpec) -> dict:
    out: dict = {
        "id": npc.id,
        "name": npc.name,
        "location": npc.location,
        "persona": npc.persona,
        "backstory": npc.backstory,
        "goals": [],
    }
    for goal in npc.goals:
        g: dict = {
            "goal_prompt": goal.goal_prompt,
            "condition": condition_to_dict(goal.condition),
            "response_met": goal.response_met,
            "response_unmet": goal.response_unmet,
        }
        effects: dict = {}
        if goal.effects.flags:
            effects["flags"] = list(goal.effects.flags)
        if goal.effects.clue is not None:
            effects["clue"] = goal.effects.clue
        if effects:
            g["effects"] = effects
        out["goals"].append(g)
    if npc.activation is not None:
        out["activation"] = npc.activation
    if npc.greeting:
        out["greeting"] = npc.greeting
    if npc.default_response:
        out["default_response"] = npc.default_response
    if npc.flavor:
        out["flavor"] = [{"any": list(f.any_keywords), "text": f.text} for f in npc.flavor]
    return out

"""The fixed game agent: deterministic verb-object command execution.

This engine accepts only canonical verbs; all natural-language slack
(synonyms, articles, misspellings) is the gateway's problem. Failures are
values, never exceptions, and a failed command leaves the world state
bit-identical. Failure texts come from a fixed table so the rewriting
layer downstream stays testable.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from dejaboom.assets import load_json
from dejaboom.npcs import npc_present
from dejaboom.world import (
    INVENTORY,
    WorldSpec,
    WorldState,
    describe_location,
    location_revealed,
    set_flag,
)

VERBS = (
    "go",
    "take",
    "drop",
    "open",
    "read",
    "examine",
    "look",
    "inventory",
    "combine",
    "defuse",
    "wait",
)

SUCCESS = "success"
FAILURE = "failure"

UNKNOWN_VERB = "UNKNOWN_VERB"
MISSING_OBJECT = "MISSING_OBJECT"
PRECONDITION = "PRECONDITION"
NOT_HERE = "NOT_HERE"
NOT_PORTABLE = "NOT_PORTABLE"
LOCKED = "LOCKED"

FAILURE_CODES = (UNKNOWN_VERB, MISSING_OBJECT, PRECONDITION, NOT_HERE, NOT_PORTABLE, LOCKED)


@dataclass(frozen=True)
class VerbObjectCommand:
    verb: str
    object: str | None
    raw: str


@dataclass(frozen=True)
class ActionResult:
    outcome: str
    message: str
    state_delta: dict = field(default_factory=dict)
    failure_code: str | None = None

    @property
    def failed(self) -> bool:
        return self.outcome == FAILURE


def supported_verbs() -> list[str]:
    return list(VERBS)


def failure_messages() -> dict:
    return load_json("messages.json")["failures"]


def _fail(code: str, message: str) -> ActionResult:
    return ActionResult(outcome=FAILURE, message=message, failure_code=code)


def _msg(key: str, **kwargs) -> str:
    return failure_messages()[key].format(**kwargs)


def unrecognized_result(raw: str, verb_token: str, object_token: str | None, spec: WorldSpec) -> ActionResult:
    """Canonical failure for a verb outside the engine's vocabulary.

    With a recognizable object the classic refusal is used; otherwise the
    generic text, which the gateway may rewrite into friendlier feedback.
    """
    if object_token and _resolve_object(object_token, spec) is not None:
        return _fail(UNKNOWN_VERB, _msg("unknown_verb_with_object", verb=verb_token))
    return _fail(UNKNOWN_VERB, _msg("unknown_verb"))


def _resolve_object(token: str, spec: WorldSpec):
    token = token.lower().strip()
    for obj in spec.objects:
        if token == obj.id or token == obj.name.lower() or token in obj.name.lower().split():
            return obj
    return None


def _resolve_location(token: str, spec: WorldSpec):
    token = token.lower().strip()
    for loc in spec.locations:
        if token == loc.id or token == loc.name.lower():
            return loc
    return None


def execute(cmd: VerbObjectCommand, state: WorldState, spec: WorldSpec) -> tuple[ActionResult, WorldState]:
    """Run one canonical command. Mutates state only on success."""
    verb = cmd.verb
    if verb not in VERBS:
        return unrecognized_result(cmd.raw, verb, cmd.object, spec), state

    handler = {
        "go": _do_go,
        "take": _do_take,
        "drop": _do_drop,
        "open": _do_open,
        "read": _do_read,
        "examine": _do_examine,
        "look": _do_look,
        "inventory": _do_inventory,
        "combine": _do_combine,
        "defuse": _do_defuse,
        "wait": _do_wait,
    }[verb]
    result = handler(cmd, state, spec)
    return result, state


def _do_go(cmd: VerbObjectCommand, state: WorldState, spec: WorldSpec) -> ActionResult:
    token = (cmd.object or "").lower().strip()
    if not token:
        return _fail(MISSING_OBJECT, _msg("go_where"))
    exits = spec.location(state.current_location).exits
    target_id = None
    if token in exits:
        target_id = exits[token]
    else:
        loc = _resolve_location(token, spec)
        if loc is not None and loc.id in exits.values():
            target_id = loc.id
    if target_id is None:
        return _fail(NOT_HERE, _msg("cannot_go"))
    if not location_revealed(spec.location(target_id), state):
        # Adjacent but still secret: same text as an unknown way, distinct code.
        return _fail(LOCKED, _msg("cannot_go"))
    state.current_location = target_id
    return ActionResult(
        outcome=SUCCESS,
        message=describe_location(target_id, state, spec),
        state_delta={"moved_to": target_id},
    )


def _find_here(token: str, state: WorldState, spec: WorldSpec):
    obj = _resolve_object(token, spec)
    if obj is None:
        return None, None
    if obj.id in state.inventory:
        return obj, INVENTORY
    return obj, state.placements.get(obj.id)


def _do_take(cmd: VerbObjectCommand, state: WorldState, spec: WorldSpec) -> ActionResult:
    token = (cmd.object or "").strip()
    if not token:
        return _fail(MISSING_OBJECT, _msg("take_what"))
    obj, place = _find_here(token, state, spec)
    if obj is None or (place != state.current_location and place != INVENTORY):
        return _fail(NOT_HERE, _msg("not_here", name=token))
    if place == INVENTORY:
        return _fail(PRECONDITION, _msg("already_carrying", name=obj.name))
    if not obj.portable:
        return _fail(NOT_PORTABLE, _msg("not_portable"))
    del state.placements[obj.id]
    state.inventory.add(obj.id)
    flags_set = []
    for flag in obj.grants_flags:
        if not state.flags[flag]:
            set_flag(state, flag)
            flags_set.append(flag)
    return ActionResult(
        outcome=SUCCESS,
        message=f"You picked up the {obj.name}.",
        state_delta={"inventory_added": obj.id, "flags_set": flags_set},
    )


def _do_drop(cmd: VerbObjectCommand, state: WorldState, spec: WorldSpec) -> ActionResult:
    token = (cmd.object or "").strip()
    if not token:
        return _fail(MISSING_OBJECT, _msg("drop_what"))
    obj = _resolve_object(token, spec)
    if obj is None or obj.id not in state.inventory:
        return _fail(MISSING_OBJECT, _msg("not_carrying", name=token))
    state.inventory.remove(obj.id)
    state.placements[obj.id] = state.current_location
    return ActionResult(
        outcome=SUCCESS,
        message=f"You put down the {obj.name}.",
        state_delta={"inventory_removed": obj.id, "placed_at": state.current_location},
    )


def _do_open(cmd: VerbObjectCommand, state: WorldState, spec: WorldSpec) -> ActionResult:
    token = (cmd.object or "").strip()
    if not token:
        return _fail(MISSING_OBJECT, _msg("open_what"))
    obj, place = _find_here(token, state, spec)
    if obj is None or place not in (state.current_location, INVENTORY):
        return _fail(NOT_HERE, _msg("not_here", name=token))
    return _fail(PRECONDITION, _msg("cannot_open", name=obj.name))


def _do_read(cmd: VerbObjectCommand, state: WorldState, spec: WorldSpec) -> ActionResult:
    token = (cmd.object or "").strip()
    if not token:
        return _fail(MISSING_OBJECT, _msg("read_what"))
    obj, place = _find_here(token, state, spec)
    if obj is None or place not in (state.current_location, INVENTORY):
        return _fail(NOT_HERE, _msg("not_here", name=token))
    if not obj.readable:
        return _fail(PRECONDITION, _msg("nothing_to_read", name=obj.name))
    flags_set = []
    for flag in obj.grants_flags:
        if not state.flags[flag]:
            set_flag(state, flag)
            flags_set.append(flag)
    return ActionResult(
        outcome=SUCCESS,
        message=obj.readable_text or "",
        state_delta={"read": obj.id, "flags_set": flags_set},
    )


def _do_examine(cmd: VerbObjectCommand, state: WorldState, spec: WorldSpec) -> ActionResult:
    token = (cmd.object or "").strip()
    if not token:
        return _do_look(cmd, state, spec)
    obj, place = _find_here(token, state, spec)
    if obj is None or place not in (state.current_location, INVENTORY):
        return _fail(NOT_HERE, _msg("not_here", name=token))
    detail = obj.readable_text if obj.readable else f"It is a {obj.name}. Nothing unusual."
    return ActionResult(outcome=SUCCESS, message=detail, state_delta={"examined": obj.id})


def _do_look(cmd: VerbObjectCommand, state: WorldState, spec: WorldSpec) -> ActionResult:
    text = describe_location(state.current_location, state, spec)
    npc_id = npc_present(state.current_location, state, spec)
    if npc_id is not None:
        text += f" {spec.npc(npc_id).name} is here."
    return ActionResult(outcome=SUCCESS, message=text, state_delta={})


def _do_inventory(cmd: VerbObjectCommand, state: WorldState, spec: WorldSpec) -> ActionResult:
    if not state.inventory:
        return ActionResult(outcome=SUCCESS, message="You are carrying nothing.", state_delta={})
    names = ", ".join(sorted(spec.object(oid).name for oid in state.inventory))
    return ActionResult(outcome=SUCCESS, message=f"You are carrying: {names}.", state_delta={})


KIT_ITEMS = ("water_bucket", "redstone_torch", "shears")
KIT_FLAG = "has_kit"
RECIPE_FLAG = "read_recipe"


def combine_kit(state: WorldState, spec: WorldSpec) -> ActionResult:
    """Assemble the disposal kit from the three ingredients plus the recipe.

    Consumes the ingredients, so a repeat attempt reports them missing
    rather than silently succeeding twice.
    """
    missing = [oid for oid in KIT_ITEMS if oid not in state.inventory]
    if missing:
        return _fail(MISSING_OBJECT, _msg("kit_missing_items"))
    if not state.flags.get(RECIPE_FLAG, False):
        return _fail(PRECONDITION, _msg("kit_no_recipe"))
    for oid in KIT_ITEMS:
        state.inventory.remove(oid)
    set_flag(state, KIT_FLAG)
    return ActionResult(
        outcome=SUCCESS,
        message="You combine the water bucket, the redstone torch and the shears into a bomb disposal kit.",
        state_delta={"flags_set": [KIT_FLAG], "consumed": list(KIT_ITEMS)},
    )


def _do_combine(cmd: VerbObjectCommand, state: WorldState, spec: WorldSpec) -> ActionResult:
    return combine_kit(state, spec)


def try_defuse(state: WorldState, spec: WorldSpec) -> ActionResult:
    """Defuse succeeds only at the bomb with every required flag set; it ends the game."""
    if state.current_location != spec.bomb.location:
        return _fail(NOT_HERE, _msg("no_bomb_here"))
    unmet = [flag for flag in spec.bomb.defuse_requirement if not state.flags.get(flag, False)]
    if unmet:
        return _fail(PRECONDITION, _msg("cannot_defuse"))
    return ActionResult(
        outcome=SUCCESS,
        message="You carefully apply the bomb disposal kit. The ticking stops. The bomb is defused!",
        state_delta={"defused": True},
    )


def _do_defuse(cmd: VerbObjectCommand, state: WorldState, spec: WorldSpec) -> ActionResult:
    return try_defuse(state, spec)


def _do_wait(cmd: VerbObjectCommand, state: WorldState, spec: WorldSpec) -> ActionResult:
    # Legal no-op; it still consumes a step, which is the whole point.
    return ActionResult(outcome=SUCCESS, message="Time passes.", state_delta={})

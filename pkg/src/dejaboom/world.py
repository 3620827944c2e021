"""World definition and runtime state.

A world ships as a JSON document (see README for the schema). Loading
validates every structural invariant up front so the engine can assume a
consistent world afterwards. Runtime state is confined to one session;
the spec itself is immutable and shareable.

Milestone flags are the backbone of progress tracking: they are monotone
within a day, reset with the world, and their ordered bit vector is the
state label used by the analysis pipeline to identify graph nodes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from dejaboom.errors import UnknownFlagError, WorldParseError, WorldValidationError
from dejaboom.npcs import NpcRuntime, NpcSpec, npc_from_dict, npc_to_dict

OPPOSITE_DIRECTION = {
    "north": "south",
    "south": "north",
    "east": "west",
    "west": "east",
    "up": "down",
    "down": "up",
}

INVENTORY = "inventory"


@dataclass(frozen=True)
class Location:
    id: str
    name: str
    description: str
    exits: dict[str, str] = field(default_factory=dict)
    hidden: bool = False
    reveal_condition: str | None = None
    one_way: tuple[str, ...] = ()


@dataclass(frozen=True)
class GameObject:
    id: str
    name: str
    location: str
    portable: bool = True
    readable_text: str | None = None
    grants_flags: tuple[str, ...] = ()

    @property
    def readable(self) -> bool:
        return self.readable_text is not None


@dataclass(frozen=True)
class Bomb:
    location: str
    step_limit: int
    defuse_requirement: tuple[str, ...]


@dataclass(frozen=True)
class WorldSpec:
    locations: tuple[Location, ...]
    objects: tuple[GameObject, ...]
    npcs: tuple[NpcSpec, ...]
    bomb: Bomb
    milestones: tuple[str, ...]
    start_location: str
    intro_text: str

    def location(self, loc_id: str) -> Location:
        return self._locations_by_id[loc_id]

    def object(self, obj_id: str) -> GameObject:
        return self._objects_by_id[obj_id]

    def npc(self, npc_id: str) -> NpcSpec:
        return self._npcs_by_id[npc_id]

    @property
    def _locations_by_id(self) -> dict[str, Location]:
        return {loc.id: loc for loc in self.locations}

    @property
    def _objects_by_id(self) -> dict[str, GameObject]:
        return {obj.id: obj for obj in self.objects}

    @property
    def _npcs_by_id(self) -> dict[str, NpcSpec]:
        return {npc.id: npc for npc in self.npcs}


@dataclass
class WorldState:
    """Mutable runtime state for one session. Flags are monotone within a day."""

    current_location: str
    inventory: set[str]
    placements: dict[str, str]
    flags: dict[str, bool]
    npc_runtimes: dict[str, NpcRuntime]
    step_in_day: int = 0
    day: int = 1

    def copy(self) -> "WorldState":
        return WorldState(
            current_location=self.current_location,
            inventory=set(self.inventory),
            placements=dict(self.placements),
            flags=dict(self.flags),
            npc_runtimes={k: v.copy() for k, v in self.npc_runtimes.items()},
            step_in_day=self.step_in_day,
            day=self.day,
        )

    def equal_except_day(self, other: "WorldState") -> bool:
        return (
            self.current_location == other.current_location
            and self.inventory == other.inventory
            and self.placements == other.placements
            and self.flags == other.flags
            and self.npc_runtimes == other.npc_runtimes
            and self.step_in_day == other.step_in_day
        )


# ---------------------------------------------------------------------------
# Loading and validation


def load_world_spec(document: str | dict) -> WorldSpec:
    """Parse and validate a world document (JSON text or an already-parsed dict)."""
    if isinstance(document, str):
        try:
            data = json.loads(document)
        except json.JSONDecodeError as exc:
            raise WorldParseError(f"invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    else:
        data = document
    try:
        spec = _spec_from_dict(data)
    except (KeyError, TypeError) as exc:
        raise WorldParseError(f"missing or malformed field: {exc}", field=str(exc)) from exc
    _validate(spec)
    return spec


def load_world_file(path: str | Path) -> WorldSpec:
    return load_world_spec(Path(path).read_text(encoding="utf-8"))


def bundled_world_path() -> Path:
    """Stable path of the reference village world that ships with the package."""
    return Path(str(resources.files("dejaboom").joinpath("data/worlds/dejaboom.json")))


def load_bundled_world() -> WorldSpec:
    return load_world_file(bundled_world_path())


def _spec_from_dict(data: dict) -> WorldSpec:
    locations = tuple(
        Location(
            id=loc["id"],
            name=loc["name"],
            description=loc["description"],
            exits=dict(loc.get("exits", {})),
            hidden=loc.get("hidden", False),
            reveal_condition=loc.get("reveal_condition"),
            one_way=tuple(loc.get("one_way", [])),
        )
        for loc in data["locations"]
    )
    objects = []
    for obj in data["objects"]:
        grants = obj.get("grants_flags", [])
        if isinstance(grants, str):
            grants = [grants]
        objects.append(
            GameObject(
                id=obj["id"],
                name=obj["name"],
                location=obj["location"],
                portable=obj.get("portable", True),
                readable_text=obj.get("readable_text"),
                grants_flags=tuple(grants),
            )
        )
    npcs = tuple(npc_from_dict(npc) for npc in data["npcs"])
    bomb = Bomb(
        location=data["bomb"]["location"],
        step_limit=data["bomb"]["step_limit"],
        defuse_requirement=tuple(data["bomb"]["defuse_requirement"]),
    )
    return WorldSpec(
        locations=locations,
        objects=tuple(objects),
        npcs=npcs,
        bomb=bomb,
        milestones=tuple(data["milestones"]),
        start_location=data["start_location"],
        intro_text=data["intro_text"],
    )


def serialize_world_spec(spec: WorldSpec) -> dict:
    """Inverse of load_world_spec: load_world_spec(serialize_world_spec(s)) == s."""
    locations = []
    for loc in spec.locations:
        entry: dict = {
            "id": loc.id,
            "name": loc.name,
            "description": loc.description,
            "exits": dict(loc.exits),
        }
        if loc.hidden:
            entry["hidden"] = True
        if loc.reveal_condition is not None:
            entry["reveal_condition"] = loc.reveal_condition
        if loc.one_way:
            entry["one_way"] = list(loc.one_way)
        locations.append(entry)
    objects = []
    for obj in spec.objects:
        entry = {"id": obj.id, "name": obj.name, "location": obj.location, "portable": obj.portable}
        if obj.readable_text is not None:
            entry["readable_text"] = obj.readable_text
        if obj.grants_flags:
            entry["grants_flags"] = list(obj.grants_flags)
        objects.append(entry)
    return {
        "locations": locations,
        "objects": objects,
        "npcs": [npc_to_dict(npc) for npc in spec.npcs],
        "bomb": {
            "location": spec.bomb.location,
            "step_limit": spec.bomb.step_limit,
            "defuse_requirement": list(spec.bomb.defuse_requirement),
        },
        "milestones": list(spec.milestones),
        "start_location": spec.start_location,
        "intro_text": spec.intro_text,
    }


def _validate(spec: WorldSpec) -> None:
    loc_ids = [loc.id for loc in spec.locations]
    if len(set(loc_ids)) != len(loc_ids):
        raise WorldValidationError("unique location ids", "duplicate location id")
    known = set(loc_ids)

    if len(set(spec.milestones)) != len(spec.milestones):
        raise WorldValidationError("unique milestone ids", "duplicate milestone id")
    flags = set(spec.milestones)

    for loc in spec.locations:
        for direction, target in loc.exits.items():
            if target not in known:
                raise WorldValidationError(
                    "exits reference existing locations",
                    f"{loc.id} -> {direction} points at unknown location '{target}'",
                )
            if direction in loc.one_way:
                continue
            back = OPPOSITE_DIRECTION.get(direction)
            dest = next(l for l in spec.locations if l.id == target)
            if back is None or dest.exits.get(back) != loc.id:
                raise WorldValidationError(
                    "exits are symmetric unless marked one-way",
                    f"{loc.id} -{direction}-> {target} has no matching return exit",
                )
        if loc.hidden and loc.reveal_condition is None:
            raise WorldValidationError(
                "hidden locations carry a reveal condition", f"{loc.id} is hidden without one"
            )
        if loc.reveal_condition is not None and loc.reveal_condition not in flags:
            raise WorldValidationError(
                "reveal conditions are declared milestones",
                f"{loc.id} reveals on unknown flag '{loc.reveal_condition}'",
            )

    obj_ids = [obj.id for obj in spec.objects]
    if len(set(obj_ids)) != len(obj_ids):
        raise WorldValidationError("unique object ids", "duplicate object id")
    for obj in spec.objects:
        if obj.location != INVENTORY and obj.location not in known:
            raise WorldValidationError(
                "object placements reference existing locations",
                f"{obj.id} placed at unknown location '{obj.location}'",
            )
        if obj.location == INVENTORY and not obj.portable:
            raise WorldValidationError(
                "non-portable objects never start in the inventory", obj.id
            )
        for flag in obj.grants_flags:
            if flag not in flags:
                raise WorldValidationError(
                    "granted flags are declared milestones",
                    f"{obj.id} grants unknown flag '{flag}'",
                )

    npc_ids = [npc.id for npc in spec.npcs]
    if len(set(npc_ids)) != len(npc_ids):
        raise WorldValidationError("unique npc ids", "duplicate npc id")
    for npc in spec.npcs:
        if npc.location not in known:
            raise WorldValidationError(
                "npc placements reference existing locations",
                f"{npc.id} placed at unknown location '{npc.location}'",
            )
        if not npc.goals:
            raise WorldValidationError("npc goal chains are non-empty", npc.id)
        if npc.activation is not None and npc.activation not in flags:
            raise WorldValidationError(
                "activation flags are declared milestones",
                f"{npc.id} activates on unknown flag '{npc.activation}'",
            )
        for goal in npc.goals:
            for flag in goal.effects.flags:
                if flag not in flags:
                    raise WorldValidationError(
                        "goal effects reference declared milestones",
                        f"{npc.id} sets unknown flag '{flag}'",
                    )
            if goal.condition.kind == "flag_set" and goal.condition.flag not in flags:
                raise WorldValidationError(
                    "flag conditions reference declared milestones",
                    f"{npc.id} tests unknown flag '{goal.condition.flag}'",
                )

    if spec.bomb.step_limit < 1:
        raise WorldValidationError("bomb step limit is positive", str(spec.bomb.step_limit))
    if spec.bomb.location not in known:
        raise WorldValidationError(
            "bomb location exists", f"unknown location '{spec.bomb.location}'"
        )
    for flag in spec.bomb.defuse_requirement:
        if flag not in flags:
            raise WorldValidationError(
                "defuse requirements are declared milestones", f"unknown flag '{flag}'"
            )
    if spec.start_location not in known:
        raise WorldValidationError(
            "start location exists", f"unknown location '{spec.start_location}'"
        )


# ---------------------------------------------------------------------------
# Runtime state


def fresh_state(spec: WorldSpec) -> WorldState:
    """Day-1 state exactly as the spec defines it."""
    return WorldState(
        current_location=spec.start_location,
        inventory={obj.id for obj in spec.objects if obj.location == INVENTORY},
        placements={obj.id: obj.location for obj in spec.objects if obj.location != INVENTORY},
        flags={flag: False for flag in spec.milestones},
        npc_runtimes={npc.id: NpcRuntime(npc.id) for npc in spec.npcs},
        step_in_day=0,
        day=1,
    )


def reset_world(state: WorldState, spec: WorldSpec) -> WorldState:
    """Restore spec defaults after an explosion; only the day counter survives.

    The session log is intentionally untouched: the player keeps their
    memory across days, the world does not.
    """
    out = fresh_state(spec)
    out.day = state.day + 1
    return out


def set_flag(state: WorldState, flag: str) -> WorldState:
    """Set a milestone flag. Idempotent; never clears other flags."""
    if flag not in state.flags:
        raise UnknownFlagError(flag)
    state.flags[flag] = True
    return state


def state_label(state: WorldState, spec: WorldSpec) -> str:
    """Bitstring of milestone flags in spec order; the node-identity fingerprint."""
    return "".join("1" if state.flags.get(flag, False) else "0" for flag in spec.milestones)


def label_for_flags(flags: set[str] | frozenset[str], spec: WorldSpec) -> str:
    return "".join("1" if flag in flags else "0" for flag in spec.milestones)


def label_dominates(a: str, b: str) -> bool:
    """True when every bit set in b is also set in a (a is at least as advanced)."""
    if len(a) != len(b):
        raise ValueError("labels of different worlds are not comparable")
    return all(not (y == "1" and x == "0") for x, y in zip(a, b))


def location_revealed(loc: Location, state: WorldState) -> bool:
    if not loc.hidden:
        return True
    return bool(loc.reveal_condition and state.flags.get(loc.reveal_condition, False))


def visible_exits(loc_id: str, state: WorldState, spec: WorldSpec) -> dict[str, str]:
    """Exits from a location, with hidden rooms gated on their reveal flag."""
    loc = spec.location(loc_id)
    out = {}
    for direction, target in loc.exits.items():
        if location_revealed(spec.location(target), state):
            out[direction] = target
    return out


def objects_at(loc_id: str, state: WorldState, spec: WorldSpec) -> list[GameObject]:
    return [spec.object(oid) for oid, place in sorted(state.placements.items()) if place == loc_id]


def describe_location(loc_id: str, state: WorldState, spec: WorldSpec) -> str:
    """Player-facing description: room text, visible objects, visible exits."""
    loc = spec.location(loc_id)
    parts = [loc.description]
    objects = objects_at(loc_id, state, spec)
    for obj in objects:
        parts.append(f"There is a {obj.name} here.")
    exits = visible_exits(loc_id, state, spec)
    if exits:
        names = ", ".join(
            f"{spec.location(target).name} to the {direction}"
            for direction, target in sorted(exits.items())
        )
        parts.append(f"You can go to: {names}.")
    return " ".join(parts)

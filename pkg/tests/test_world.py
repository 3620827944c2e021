from __future__ import annotations

import copy
import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dejaboom.actions import VerbObjectCommand, execute, supported_verbs
from dejaboom.errors import UnknownFlagError, WorldParseError, WorldValidationError
from dejaboom.world import (
    bundled_world_path,
    fresh_state,
    label_dominates,
    load_world_spec,
    reset_world,
    serialize_world_spec,
    set_flag,
    state_label,
    visible_exits,
)


def minimal_world() -> dict:
    return {
        "locations": [
            {"id": "cell", "name": "cell", "description": "A bare cell.", "exits": {}}
        ],
        "objects": [],
        "npcs": [
            {
                "id": "ghost",
                "name": "Ghost",
                "location": "cell",
                "persona": "p",
                "backstory": "b",
                "goals": [
                    {
                        "goal_prompt": "haunt",
                        "condition": {"kind": "always"},
                        "response_met": "boo",
                        "response_unmet": "...",
                    }
                ],
            }
        ],
        "bomb": {"location": "cell", "step_limit": 1, "defuse_requirement": []},
        "milestones": ["done"],
        "start_location": "cell",
        "intro_text": "hello",
    }


class TestLoading:
    def test_reference_world_shape(self, spec):
        # 6 named places + residential street + two secret rooms
        assert len(spec.locations) == 9
        assert sum(1 for loc in spec.locations if loc.hidden) == 2
        assert len(spec.npcs) == 5
        kit_items = [obj for obj in spec.objects if obj.portable]
        assert len(kit_items) == 3
        assert spec.bomb.step_limit == 30
        assert len(spec.milestones) == 12

    def test_unknown_exit_rejected(self):
        world = minimal_world()
        world["locations"][0]["exits"] = {"north": "nowhere"}
        with pytest.raises(WorldValidationError) as err:
            load_world_spec(world)
        assert "existing locations" in err.value.invariant

    def test_minimal_world_is_legal(self):
        spec = load_world_spec(minimal_world())
        assert spec.bomb.step_limit == 1
        assert len(spec.locations) == 1

    def test_parse_error_carries_position(self):
        with pytest.raises(WorldParseError) as err:
            load_world_spec("{not json")
        assert "line" in str(err.value)

    def test_hidden_without_reveal_rejected(self):
        world = minimal_world()
        world["locations"].append(
            {"id": "vault", "name": "vault", "description": "d", "exits": {}, "hidden": True}
        )
        with pytest.raises(WorldValidationError) as err:
            load_world_spec(world)
        assert "reveal" in err.value.invariant

    def test_asymmetric_exit_rejected_unless_one_way(self):
        world = minimal_world()
        world["locations"] = [
            {"id": "a", "name": "a", "description": "d", "exits": {"north": "b"}},
            {"id": "b", "name": "b", "description": "d", "exits": {}},
        ]
        world["start_location"] = "a"
        world["bomb"]["location"] = "a"
        world["npcs"][0]["location"] = "a"
        with pytest.raises(WorldValidationError):
            load_world_spec(world)
        world["locations"][0]["one_way"] = ["north"]
        assert load_world_spec(world).locations[0].one_way == ("north",)

    def test_round_trip(self, spec):
        assert load_world_spec(serialize_world_spec(spec)) == spec

    def test_round_trip_from_file_text(self):
        text = bundled_world_path().read_text(encoding="utf-8")
        spec = load_world_spec(text)
        assert load_world_spec(json.dumps(serialize_world_spec(spec))) == spec


class TestStateAndLabels:
    def test_fresh_label_all_zero(self, spec):
        state = fresh_state(spec)
        assert state_label(state, spec) == "0" * 12

    def test_label_projects_flags(self, spec):
        state = fresh_state(spec)
        set_flag(state, "talked_thompson")
        set_flag(state, "hatter_active")
        label = state_label(state, spec)
        assert label == "110000000000"

    def test_set_flag_idempotent(self, spec):
        state = fresh_state(spec)
        set_flag(state, "read_recipe")
        snapshot = copy.deepcopy(state)
        set_flag(state, "read_recipe")
        assert state == snapshot

    def test_set_unknown_flag(self, spec):
        with pytest.raises(UnknownFlagError):
            set_flag(fresh_state(spec), "no_such_flag")

    def test_reveal_gates_exits(self, spec):
        state = fresh_state(spec)
        state.current_location = "blacksmith_shop"
        assert "down" not in visible_exits("blacksmith_shop", state, spec)
        set_flag(state, "bomb_located")
        assert visible_exits("blacksmith_shop", state, spec)["down"] == "storage_room"

    def test_dominance(self):
        assert label_dominates("110", "100")
        assert not label_dominates("100", "110")
        assert label_dominates("101", "101")
        with pytest.raises(ValueError):
            label_dominates("1", "10")


class TestReset:
    def test_bucket_back_on_table(self, spec, provider):
        from dejaboom.session import start_session, step

        session = start_session(spec, provider)
        step(session, "take water bucket")
        assert "water_bucket" in session.state.inventory
        session.state = reset_world(session.state, spec)
        assert session.state.placements["water_bucket"] == "home"
        assert not session.state.inventory

    def test_fresh_reset_identical_but_day(self, spec):
        state = fresh_state(spec)
        after = reset_world(state, spec)
        assert after.day == 2
        assert after.equal_except_day(fresh_state(spec))

    def test_hatter_hidden_again(self, spec, provider):
        from dejaboom.npcs import npc_present
        from dejaboom.session import start_session, step

        session = start_session(spec, provider)
        step(session, "go residential street")
        step(session, "I plan to stop the explosion, can you help me?")
        state = session.state
        state.current_location = "park"
        assert npc_present("park", state, spec) == "mad_hatter"
        session.state = reset_world(state, spec)
        assert npc_present("park", session.state, spec) is None

    @settings(max_examples=25, deadline=None)
    @given(st.lists(st.integers(min_value=0, max_value=10_000), min_size=0, max_size=25))
    def test_reset_soundness_over_random_play(self, spec, seeds):
        """Any reachable state resets to the fresh state, day aside."""
        rng = random.Random(1234)
        state = fresh_state(spec)
        verbs = supported_verbs()
        tokens = [obj.id for obj in spec.objects] + [loc.id for loc in spec.locations] + [None]
        for seed in seeds:
            local = random.Random(seed ^ rng.randrange(1 << 30))
            cmd = VerbObjectCommand(
                verb=local.choice(verbs), object=local.choice(tokens), raw="x"
            )
            execute(cmd, state, spec)
        after = reset_world(state, spec)
        assert after.equal_except_day(fresh_state(spec))


class TestMonotonicity:
    @settings(max_examples=30, deadline=None)
    @given(st.integers(min_value=0, max_value=10_000))
    def test_labels_only_gain_bits_within_day(self, spec, seed):
        rng = random.Random(seed)
        state = fresh_state(spec)
        verbs = supported_verbs()
        tokens = [obj.id for obj in spec.objects] + [loc.id for loc in spec.locations] + [None]
        previous = state_label(state, spec)
        for _ in range(40):
            cmd = VerbObjectCommand(verb=rng.choice(verbs), object=rng.choice(tokens), raw="x")
            execute(cmd, state, spec)
            current = state_label(state, spec)
            assert label_dominates(current, previous)
            previous = current

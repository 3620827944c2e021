from __future__ import annotations

from dejaboom.npcs import (
    Condition,
    NpcRuntime,
    advance_npc,
    build_npc_context,
    evaluate_condition,
    npc_present,
)
from dejaboom.world import fresh_state, reset_world, set_flag


class TestPresence:
    def test_hatter_hidden_until_thompson(self, spec):
        state = fresh_state(spec)
        assert npc_present("park", state, spec) is None

    def test_hatter_after_activation(self, spec):
        state = fresh_state(spec)
        set_flag(state, "hatter_active")
        assert npc_present("park", state, spec) == "mad_hatter"

    def test_maria_always_present(self, spec):
        state = fresh_state(spec)
        assert npc_present("restaurant", state, spec) == "chef_maria"


class TestConditions:
    def test_joke_keywords(self, spec, provider):
        state = fresh_state(spec)
        hatter = spec.npc("mad_hatter")
        condition = hatter.goals[0].condition
        assert evaluate_condition(condition, "knock knock, who is there?", state, provider)
        assert not evaluate_condition(condition, "tell me where the bomb is", state, provider)

    def test_flag_condition(self, spec, provider):
        state = fresh_state(spec)
        condition = Condition(kind="flag_set", flag="bomb_located")
        assert not evaluate_condition(condition, "", state, provider)
        set_flag(state, "bomb_located")
        assert evaluate_condition(condition, "", state, provider)

    def test_empty_utterance_never_matches(self, spec, provider):
        state = fresh_state(spec)
        condition = spec.npc("mad_hatter").goals[0].condition
        assert not evaluate_condition(condition, "   ", state, provider)

    def test_grouped_keywords_require_every_group(self, spec, provider):
        state = fresh_state(spec)
        thompson = spec.npc("mrs_thompson").goals[0].condition
        assert evaluate_condition(thompson, "I will stop the explosion", state, provider)
        assert not evaluate_condition(thompson, "tell me about the explosion", state, provider)
        assert not evaluate_condition(thompson, "I want to stop the rain", state, provider)


class TestAdvance:
    def test_hatter_joke_releases_riddle(self, spec, provider):
        state = fresh_state(spec)
        hatter = spec.npc("mad_hatter")
        runtime = NpcRuntime("mad_hatter")
        advanced, effects = advance_npc(runtime, "want to hear a joke?", state, hatter, provider)
        assert advanced.goal_index == 1
        assert "told_joke" in effects.flags and "riddle_received" in effects.flags
        assert "Riddle" in effects.clue

    def test_merlin_convinced_grants_kit(self, spec, provider):
        state = fresh_state(spec)
        merlin = spec.npc("merlin")
        runtime = NpcRuntime("merlin")
        _, effects = advance_npc(
            runtime, "please help me defuse the bomb", state, merlin, provider
        )
        assert set(effects.flags) == {"merlin_convinced", "has_kit"}

    def test_unmet_condition_changes_nothing(self, spec, provider):
        state = fresh_state(spec)
        hatter = spec.npc("mad_hatter")
        runtime = NpcRuntime("mad_hatter")
        advanced, effects = advance_npc(runtime, "nice weather", state, hatter, provider)
        assert advanced.goal_index == 0
        assert effects.flags == () and effects.clue is None

    def test_one_advance_per_utterance(self, spec, provider):
        # mentions both the joke and the riddle answer; only goal 0 advances
        state = fresh_state(spec)
        hatter = spec.npc("mad_hatter")
        runtime = NpcRuntime("mad_hatter")
        advanced, effects = advance_npc(
            runtime, "here is a joke about the blacksmith storage room", state, hatter, provider
        )
        assert advanced.goal_index == 1
        assert "bomb_located" not in effects.flags

    def test_goal_index_monotone_under_adversarial_replay(self, spec, provider):
        state = fresh_state(spec)
        hatter = spec.npc("mad_hatter")
        runtime = NpcRuntime("mad_hatter")
        utterances = [
            "hello", "give me the location", "storage room?",  # not yet: goal 0 wants a joke
            "knock knock! a joke!",  # advances to goal 1
            "hello again", "what was that riddle?",
            "it must be the blacksmith storage room",  # advances to goal 2
            "another joke! knock knock!",  # chain exhausted; nothing to advance
        ]
        indexes = [runtime.goal_index]
        fired_flags = []
        for utterance in utterances:
            runtime, effects = advance_npc(runtime, utterance, state, hatter, provider)
            indexes.append(runtime.goal_index)
            fired_flags.extend(effects.flags)
            for flag in effects.flags:
                set_flag(state, flag)
        assert indexes == sorted(indexes)
        assert runtime.goal_index == 2
        # gate soundness: the location flag never fired before the joke flag
        assert fired_flags.index("bomb_located") > fired_flags.index("told_joke")


class TestContext:
    def test_thompson_context_fresh(self, spec):
        state = fresh_state(spec)
        thompson = spec.npc("mrs_thompson")
        context = build_npc_context(thompson, NpcRuntime("mrs_thompson"), state, spec)
        assert "intends to stop" in context.goal_prompt or "intend" in context.goal_prompt
        assert context.backstory
        assert context.clues_revealed == ()

    def test_hatter_goal1_reveals_riddle_not_location(self, spec):
        state = fresh_state(spec)
        hatter = spec.npc("mad_hatter")
        runtime = NpcRuntime("mad_hatter", goal_index=1)
        context = build_npc_context(hatter, runtime, state, spec)
        assert any("Riddle" in clue for clue in context.clues_revealed)
        public = " ".join((context.persona, context.backstory, context.goal_prompt, *context.clues_revealed))
        assert "storage room" not in public.lower()

    def test_context_window_is_days_conversation(self, spec):
        state = fresh_state(spec)
        runtime = NpcRuntime("chef_maria")
        runtime.conversation.append(("player", "hi"))
        context = build_npc_context(spec.npc("chef_maria"), runtime, state, spec)
        assert context.window == (("player", "hi"),)


class TestReset:
    def test_runtimes_fresh_after_reset(self, spec):
        state = fresh_state(spec)
        runtime = state.npc_runtimes["mad_hatter"]
        runtime.goal_index = 2
        runtime.activated = True
        runtime.conversation.append(("player", "hello"))
        after = reset_world(state, spec)
        assert after.npc_runtimes["mad_hatter"] == NpcRuntime("mad_hatter")

from __future__ import annotations

import pytest

from dejaboom.errors import GraphError
from dejaboom.narrative import Strategy, build_path_graph, distill_day
from dejaboom.session import DaySegment, load_records, split_days
from tests.conftest import play

EXPECTED_EXAMPLE_DAY = [
    Strategy("Take water bucket at home", "000000010000"),
    Strategy("Ask Mrs. Thompson about the explosion", "110000010000"),
    Strategy("Approach Mad Hatter in park", "110000010000"),
]


class TestExampleDay:
    def test_distills_to_expected_sequence(self, provider, fixtures_dir):
        records = load_records(fixtures_dir / "logs" / "example_day.jsonl")
        (segment,) = split_days(records)
        assert distill_day(segment, provider) == EXPECTED_EXAMPLE_DAY

    def test_labels_monotone(self, provider, fixtures_dir):
        from dejaboom.world import label_dominates

        records = load_records(fixtures_dir / "logs" / "example_day.jsonl")
        (segment,) = split_days(records)
        strategies = distill_day(segment, provider)
        for prev, nxt in zip(strategies, strategies[1:]):
            assert label_dominates(nxt.state_label, prev.state_label)


class TestSegmentation:
    def test_empty_segment_rejected(self, provider):
        with pytest.raises(GraphError):
            distill_day(DaySegment(day=1, records=()), provider)

    def test_single_wait(self, spec, provider):
        session = play(spec, provider, ["wait"])
        (segment,) = split_days(session.records)
        assert distill_day(segment, provider) == [Strategy("Wait and observe", "0" * 12)]

    def test_failed_actions_fold_into_take(self, spec, provider):
        session = play(spec, provider, ["take water bucket", "wear the water bucket"])
        (segment,) = split_days(session.records)
        strategies = distill_day(segment, provider)
        assert [s.summary for s in strategies] == ["Take water bucket at home"]

    def test_travel_attaches_forward(self, spec, provider):
        session = play(
            spec, provider,
            ["go residential street", "go restaurant", "do you know anything about the explosion?"],
        )
        (segment,) = split_days(session.records)
        strategies = distill_day(segment, provider)
        assert [s.summary for s in strategies] == ["Ask Chef Maria about the explosion"]

    def test_trailing_travel_becomes_plain_go(self, spec, provider):
        session = play(
            spec, provider,
            ["take water bucket", "go residential street", "go park"],
        )
        # the day ends walking into an empty park: travel, not an approach,
        # even though Mrs. Thompson greeted the player in passing
        (segment,) = split_days(session.records)
        strategies = distill_day(segment, provider)
        assert strategies[-1].summary == "Go to park"

    def test_trailing_travel_with_npc_greeting(self, spec, provider):
        session = play(
            spec, provider,
            [
                "take water bucket",
                "go residential street",
                "I plan to stop the explosion, can you help me?",
                "go park",
            ],
        )
        (segment,) = split_days(session.records)
        strategies = distill_day(segment, provider)
        assert strategies[-1].summary == "Approach Mad Hatter in park"

    def test_goal_advance_splits_conversation(self, spec, provider):
        session = play(
            spec, provider,
            [
                "take water bucket",
                "go residential street",
                "I plan to stop the explosion, can you help me?",
                "go park",
                "knock knock! want to hear a joke?",
                "the bomb must be in the storage room at the blacksmith shop",
                "take redstone torch",
            ],
        )
        (segment,) = split_days(session.records)
        summaries = [s.summary for s in distill_day(segment, provider)]
        assert summaries == [
            "Take water bucket at home",
            "Ask Mrs. Thompson about the explosion",
            "Tell Mad Hatter a joke",
            "Answer Mad Hatter's riddle",
            "Take redstone torch at park",
        ]


class TestPathGraph:
    def test_three_strategies(self):
        strategies = [Strategy("a", "00"), Strategy("b", "10"), Strategy("c", "11")]
        graph = build_path_graph(strategies, "p1", 1)
        assert len(graph.nodes) == 3 and len(graph.edges) == 2
        assert len(graph.starts) == 1 and len(graph.ends) == 1

    def test_single_strategy(self):
        graph = build_path_graph([Strategy("a", "0")], "p1", 1)
        assert len(graph.nodes) == 1 and not graph.edges

    def test_empty_rejected(self):
        with pytest.raises(GraphError):
            build_path_graph([], "p1", 1)

    def test_non_monotone_rejected(self):
        with pytest.raises(GraphError):
            build_path_graph([Strategy("a", "10"), Strategy("b", "01")], "p1", 1)

    def test_provenance_carries_source_and_day(self):
        graph = build_path_graph([Strategy("a", "0")], "p7", 3)
        (node,) = graph.nodes.values()
        assert node.provenance == frozenset({("p7", 3)})

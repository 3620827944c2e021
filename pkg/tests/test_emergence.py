from __future__ import annotations

import pytest

from dejaboom.errors import GraphError, ProviderError
from dejaboom.narrative import (
    build_designer_graph,
    build_player_graph,
    categorize,
    emergence_report,
    find_emergent,
)
from dejaboom.narrative.graph import StrategyNode
from dejaboom.session import load_records
from tests.conftest import play


@pytest.fixture(scope="module")
def designer_graph(spec, provider, fixtures_dir):
    walkthroughs = [
        (path.stem, load_records(path))
        for path in sorted((fixtures_dir / "corpus" / "designer").glob("*.jsonl"))
    ]
    return build_designer_graph(walkthroughs, provider)


class TestDesignerGraph:
    def test_covers_both_solution_branches(self, designer_graph):
        summaries = {n.summary for n in designer_graph.nodes.values()}
        assert "Assemble the bomb disposal kit" in summaries
        assert "Convince Merlin to hand over the disposal kit" in summaries

    def test_single_walkthrough_is_path(self, spec, provider, fixtures_dir):
        records = load_records(fixtures_dir / "corpus" / "designer" / "designer-items.jsonl")
        graph = build_designer_graph([("designer-items", records)], provider)
        assert len(graph.edges) == len(graph.nodes) - 1
        assert len(graph.starts) == 1 and len(graph.ends) == 1

    def test_zero_walkthroughs_rejected(self, provider):
        with pytest.raises(GraphError):
            build_designer_graph([], provider)

    def test_designer_sources_recorded(self, designer_graph):
        assert designer_graph.designer_sources == {"designer-items", "designer-merlin"}


class TestFindEmergent:
    def test_designer_identical_log_has_no_emergence(self, spec, provider, designer_graph, fixtures_dir):
        records = load_records(fixtures_dir / "golden" / "items_route.jsonl")
        player = build_player_graph(records, provider, "p99")
        report = find_emergent(designer_graph, player, provider)
        assert report.total == 0 and report.unique == 0 and report.nodes == []

    def test_merlin_theft_is_emergent(self, spec, provider, designer_graph):
        session = play(
            spec, provider,
            [
                "go residential street",
                "go restaurant",
                "do you know anything about the explosion?",
                "go blacksmith shop",
                "go library",
                "go secret lab",
                "teach me fire magic",
                "steal his bomb disposal kit",
            ],
            session_id="thief",
        )
        player = build_player_graph(session.records, provider, "thief")
        report = find_emergent(designer_graph, player, provider)
        assert [n.summary for n in report.nodes] == [
            "Distract Merlin and steal his bomb disposal kit"
        ]
        assert report.nodes[0].category == "new-defuse-methods"
        assert report.per_player == {"thief": 1}

    def test_designer_nodes_preserved(self, spec, provider, designer_graph, fixtures_dir):
        records = load_records(fixtures_dir / "golden" / "merlin_route.jsonl")
        player = build_player_graph(records, provider, "p77")
        report = find_emergent(designer_graph, player, provider)
        merged = report.merged_graph
        for node in designer_graph.nodes.values():
            assert node.id in merged.nodes
            assert node.provenance <= merged.nodes[node.id].provenance

    def test_partition_is_exact(self, spec, provider, designer_graph, fixtures_dir):
        records = load_records(fixtures_dir / "corpus" / "players" / "p09.jsonl")
        player = build_player_graph(records, provider, "p09")
        report = find_emergent(designer_graph, player, provider)
        merged = report.merged_graph
        emergent = set(merged.emergent_ids())
        designer = {
            n.id
            for n in merged.nodes.values()
            if any(src in merged.designer_sources for src, _ in n.provenance)
        }
        assert emergent | designer == set(merged.nodes)
        assert not (emergent & designer)


class TestCategorize:
    def test_examples(self, provider):
        nodes = [
            StrategyNode("n1", "Trick Moriarty into revealing information", "0", frozenset({("p", 1)})),
            StrategyNode("n2", "Player searches for weapons at home", "0", frozenset({("p", 1)})),
        ]
        assert [c for c, _ in categorize(nodes, provider)] == [
            "extracting-information-from-npcs",
            "new-entity-suggestions",
        ]

    def test_empty_input(self, provider):
        assert categorize([], provider) == []

    def test_provider_failure_flags_other(self, provider):
        class Failing:
            def categorize_summary(self, summary):
                raise ProviderError("down")

        nodes = [StrategyNode("n1", "whatever", "0", frozenset({("p", 1)}))]
        assert categorize(nodes, Failing()) == [("other", True)]


class TestCorpusReport:
    def test_unique_counts_deduplicate_across_players(self, spec, provider, designer_graph):
        script = [
            "go residential street",
            "go town hall",
            "please, you must defuse the bomb before it explodes",
        ]
        graphs = {}
        for player in ("pa", "pb"):
            session = play(spec, provider, script, session_id=player)
            graphs[player] = build_player_graph(session.records, provider, player)
        report = emergence_report(designer_graph, graphs, provider)
        assert report.total == 2
        assert report.unique == 1
        assert report.per_player == {"pa": 1, "pb": 1}
        assert report.merge_order == ["pa", "pb"]
        (node,) = report.nodes
        assert node.players == ("pa", "pb")

    def test_report_dict_shape(self, spec, provider, designer_graph):
        session = play(spec, provider, ["wait"], session_id="pz")
        graphs = {"pz": build_player_graph(session.records, provider, "pz")}
        data = emergence_report(designer_graph, graphs, provider).to_dict()
        assert set(data) == {
            "nodes", "per_player", "total", "unique", "category_counts", "merge_order",
        }
        assert data["unique"] <= data["total"]

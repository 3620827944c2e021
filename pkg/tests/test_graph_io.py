from __future__ import annotations

import pytest

from dejaboom.errors import GraphError
from dejaboom.narrative import (
    Strategy,
    build_designer_graph,
    build_path_graph,
    graph_from_json,
    graph_to_dot,
    graph_to_json,
    merge,
)
from dejaboom.session import load_records


@pytest.fixture()
def small_graph(spec, provider, fixtures_dir):
    walkthroughs = [
        (path.stem, load_records(path))
        for path in sorted((fixtures_dir / "corpus" / "designer").glob("*.jsonl"))
    ]
    return build_designer_graph(walkthroughs, provider)


class TestJsonRoundTrip:
    def test_designer_graph_round_trips(self, small_graph):
        assert graph_from_json(graph_to_json(small_graph)) == small_graph

    def test_merged_graph_round_trips(self, small_graph, provider):
        other = build_path_graph(
            [Strategy("Hide and wait in the park for Mad Hatter", "0" * 12)], "p1", 1
        )
        merged = merge(small_graph, other, provider)
        assert graph_from_json(graph_to_json(merged)) == merged

    def test_malformed_document_rejected(self):
        with pytest.raises(GraphError):
            graph_from_json("{not json")
        with pytest.raises(GraphError):
            graph_from_json('{"nodes": [{"id": "n1"}]}')
        with pytest.raises(GraphError):
            graph_from_json('{"nodes": [], "edges": [], "starts": ["ghost"], "ends": []}')


class TestDot:
    def test_emergent_attribute_marked(self, small_graph, provider):
        player = build_path_graph(
            [Strategy("Convince Moriarty to defuse the bomb", "0" * 12)], "p1", 1
        )
        merged = merge(small_graph, player, provider)
        dot = graph_to_dot(merged)
        assert dot.count("emergent=true") == 1
        assert "emergent=false" in dot
        assert "palegreen" in dot and "lightblue" in dot

    def test_designer_only_graph_is_all_designer(self, small_graph):
        dot = graph_to_dot(small_graph)
        assert "emergent=true" not in dot

    def test_edges_rendered(self, small_graph):
        dot = graph_to_dot(small_graph)
        assert "->" in dot
        assert dot.startswith("digraph")

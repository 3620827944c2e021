from dejaboom.narrative.distill import build_player_graph, distill_day
from dejaboom.narrative.emergence import (
    EmergenceReport,
    EmergentNode,
    build_designer_graph,
    categorize,
    emergence_report,
    find_emergent,
)
from dejaboom.narrative.graph import NarrativeGraph, Strategy, StrategyNode, build_path_graph
from dejaboom.narrative.io import (
    graph_from_dict,
    graph_from_json,
    graph_to_dict,
    graph_to_dot,
    graph_to_json,
)
from dejaboom.narrative.merge import DIFFERENT, SAME, NodeMatch, merge

__all__ = [
    "DIFFERENT",
    "EmergenceReport",
    "EmergentNode",
    "NarrativeGraph",
    "NodeMatch",
    "SAME",
    "Strategy",
    "StrategyNode",
    "build_designer_graph",
    "build_path_graph",
    "build_player_graph",
    "categorize",
    "distill_day",
    "emergence_report",
    "find_emergent",
    "graph_from_dict",
    "graph_from_json",
    "graph_to_dict",
    "graph_to_dot",
    "graph_to_json",
    "merge",
]

"""Narrative-graph serialization: JSON round-trips, DOT for rendering.

The JSON form is the interchange format for the HTTP API, the CLI and the
UI. DOT is export-only; emergent nodes carry an `emergent=true` attribute
and a distinct fill so designer and player-created nodes are visually
separable.
"""

from __future__ import annotations

import json

from dejaboom.errors import GraphError
from dejaboom.narrative.graph import NarrativeGraph, StrategyNode


def graph_to_dict(graph: NarrativeGraph) -> dict:
    emergent = set(graph.emergent_ids()) if graph.designer_sources else set()
    return {
        "nodes": [
            {
                "id": node.id,
                "summary": node.summary,
                "state_label": node.state_label,
                "provenance": sorted([source, day] for source, day in node.provenance),
                "emergent": node.id in emergent,
            }
            for node in graph.nodes.values()
        ],
        "edges": sorted([a, b] for a, b in graph.edges),
        "starts": sorted(graph.starts),
        "ends": sorted(graph.ends),
        "designer_sources": sorted(graph.designer_sources),
    }


def graph_from_dict(data: dict) -> NarrativeGraph:
    try:
        graph = NarrativeGraph()
        for entry in data["nodes"]:
            graph.add_existing(
                StrategyNode(
                    id=entry["id"],
                    summary=entry["summary"],
                    state_label=entry["state_label"],
                    provenance=frozenset((source, day) for source, day in entry["provenance"]),
                )
            )
        for a, b in data["edges"]:
            graph.add_edge(a, b)
        graph.starts = set(data["starts"])
        graph.ends = set(data["ends"])
        graph.designer_sources = set(data.get("designer_sources", []))
    except (KeyError, TypeError, ValueError) as exc:
        raise GraphError(f"malformed graph document: {exc}") from exc
    unknown = (graph.starts | graph.ends) - set(graph.nodes)
    if unknown:
        raise GraphError(f"start/end ids missing from nodes: {sorted(unknown)}")
    return graph


def graph_to_json(graph: NarrativeGraph) -> str:
    return json.dumps(graph_to_dict(graph), ensure_ascii=False, indent=2, sort_keys=True)


def graph_from_json(text: str) -> NarrativeGraph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphError(f"invalid graph JSON: {exc}") from exc
    return graph_from_dict(data)


def graph_to_dot(graph: NarrativeGraph) -> str:
    """DOT digraph; emergent nodes are styled green, designer nodes blue."""
    emergent = set(graph.emergent_ids()) if graph.designer_sources else set()
    lines = ["digraph narrative {", "  rankdir=LR;", '  node [shape=box, style=filled];']
    for node in graph.nodes.values():
        label = node.summary.replace('"', '\\"')
        is_emergent = node.id in emergent
        color = "palegreen" if is_emergent else "lightblue"
        lines.append(
            f'  "{node.id}" [label="{label}\\n{node.state_label}", '
            f'fillcolor={color}, emergent={"true" if is_emergent else "false"}];'
        )
    for a, b in sorted(graph.edges):
        lines.append(f'  "{a}" -> "{b}";')
    lines.append("}")
    return "\n".join(lines) + "\n"

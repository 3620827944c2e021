"""Designer-graph construction and emergent-node reporting.

The designer graph G0 is the merge of the designers' walkthrough logs,
distilled by the same pipeline as player logs. A player node is emergent
when, after merging the player's graph into G0, it carries no designer
provenance. The corpus-level report counts per-player emergent nodes
(total) and the emergent nodes of the all-player merged graph (unique).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from dejaboom.errors import GraphError, ProviderError
from dejaboom.gateway.base import Provider
from dejaboom.narrative.distill import build_player_graph
from dejaboom.narrative.graph import NarrativeGraph, StrategyNode
from dejaboom.narrative.merge import NodeMatch, merge
from dejaboom.session import LogRecord


@dataclass(frozen=True)
class EmergentNode:
    node_id: str
    summary: str
    state_label: str
    players: tuple[str, ...]
    category: str
    category_fallback: bool = False


@dataclass
class EmergenceReport:
    nodes: list[EmergentNode]
    per_player: dict[str, int]
    total: int
    unique: int
    merged_graph: NarrativeGraph
    merge_order: list[str] = field(default_factory=list)

    def category_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for node in self.nodes:
            counts[node.category] = counts.get(node.category, 0) + 1
        return counts

    def to_dict(self) -> dict:
        return {
            "nodes": [
                {
                    "node_id": n.node_id,
                    "summary": n.summary,
                    "state_label": n.state_label,
                    "players": list(n.players),
                    "category": n.category,
                    "category_fallback": n.category_fallback,
                }
                for n in self.nodes
            ],
            "per_player": dict(sorted(self.per_player.items())),
            "total": self.total,
            "unique": self.unique,
            "category_counts": dict(sorted(self.category_counts().items())),
            "merge_order": list(self.merge_order),
        }


def build_designer_graph(
    walkthroughs: list[tuple[str, list[LogRecord]]],
    provider: Provider,
    audit: list[NodeMatch] | None = None,
) -> NarrativeGraph:
    """Distill and merge the designers' walkthrough logs into G0."""
    if not walkthroughs:
        raise GraphError("at least one designer walkthrough is required")
    graph: NarrativeGraph | None = None
    for source, records in walkthroughs:
        player_graph = build_player_graph(records, provider, source, audit)
        graph = player_graph if graph is None else merge(graph, player_graph, provider, audit)
    graph.designer_sources = {source for source, _ in walkthroughs}
    return graph


def categorize(nodes: list[StrategyNode], provider: Provider) -> list[tuple[str, bool]]:
    """Category per node, flagged True when the provider failed and we fell back."""
    out = []
    for node in nodes:
        try:
            out.append((provider.categorize_summary(node.summary), False))
        except ProviderError:
            out.append(("other", True))
    return out


def find_emergent(
    designer_graph: NarrativeGraph,
    player_graph: NarrativeGraph,
    matcher: Provider,
    audit: list[NodeMatch] | None = None,
) -> EmergenceReport:
    """Merge one player's graph into G0 and report the unmerged nodes."""
    players = sorted({source for node in player_graph.nodes.values() for source, _ in node.provenance})
    merged = merge(designer_graph, player_graph, matcher, audit)
    return _report_from_graph(merged, {p: merged for p in players}, matcher, players)


def emergence_report(
    designer_graph: NarrativeGraph,
    player_graphs: dict[str, NarrativeGraph],
    matcher: Provider,
    audit: list[NodeMatch] | None = None,
) -> EmergenceReport:
    """Corpus-level report over every player.

    Per-player counts come from merging each player's graph into G0 alone;
    the unique count comes from folding every player into one shared graph,
    in sorted player order (recorded for reproducibility).
    """
    order = sorted(player_graphs)
    per_player_graphs = {}
    combined = designer_graph
    for player in order:
        per_player_graphs[player] = merge(designer_graph, player_graphs[player], matcher, audit)
        combined = merge(combined, player_graphs[player], matcher, audit)
    return _report_from_graph(combined, per_player_graphs, matcher, order)


def _report_from_graph(
    combined: NarrativeGraph,
    per_player_graphs: dict[str, NarrativeGraph],
    matcher: Provider,
    order: list[str],
) -> EmergenceReport:
    emergent_ids = combined.emergent_ids()
    emergent_nodes = [combined.nodes[nid] for nid in emergent_ids]
    categories = categorize(emergent_nodes, matcher)
    nodes = [
        EmergentNode(
            node_id=node.id,
            summary=node.summary,
            state_label=node.state_label,
            players=tuple(sorted({source for source, _ in node.provenance})),
            category=category,
            category_fallback=fallback,
        )
        for node, (category, fallback) in zip(emergent_nodes, categories)
    ]
    per_player = {
        player: len(graph.emergent_ids()) for player, graph in per_player_graphs.items()
    }
    total = sum(per_player.values())
    if len(nodes) > total:
        # only reachable via pathological cross-player cycle splits; a report
        # violating its own counting invariant must not leave the pipeline
        raise GraphError(
            f"inconsistent emergence counts: {len(nodes)} unique > {total} total"
        )
    return EmergenceReport(
        nodes=nodes,
        per_player=per_player,
        total=total,
        unique=len(nodes),
        merged_graph=combined,
        merge_order=order,
    )

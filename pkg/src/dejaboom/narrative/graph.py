"""Narrative-graph model: strategy nodes with state labels and provenance.

A node is a distilled player strategy fingerprinted by the milestone
state label; edges are temporal progression. A single day's play yields a
path; merging folds many paths/graphs into one DAG.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from dejaboom.errors import GraphError
from dejaboom.world import label_dominates

Provenance = frozenset[tuple[str, int]]  # (source id, day) pairs


@dataclass(frozen=True)
class StrategyNode:
    id: str
    summary: str
    state_label: str
    provenance: Provenance

    def with_provenance(self, extra: Provenance) -> "StrategyNode":
        return replace(self, provenance=self.provenance | extra)


@dataclass
class NarrativeGraph:
    nodes: dict[str, StrategyNode] = field(default_factory=dict)  # insertion-ordered
    edges: set[tuple[str, str]] = field(default_factory=set)
    starts: set[str] = field(default_factory=set)
    ends: set[str] = field(default_factory=set)
    designer_sources: set[str] = field(default_factory=set)
    _next_id: int = 1

    # -- construction -------------------------------------------------------

    def new_node(self, summary: str, state_label: str, provenance: Provenance) -> StrategyNode:
        if not summary:
            raise GraphError("node summary must be non-empty")
        if not provenance:
            raise GraphError("node provenance must be non-empty")
        node_id = f"n{self._next_id}"
        self._next_id += 1
        node = StrategyNode(node_id, summary, state_label, provenance)
        self.nodes[node_id] = node
        return node

    def add_existing(self, node: StrategyNode) -> None:
        if node.id in self.nodes:
            raise GraphError(f"duplicate node id {node.id}")
        self.nodes[node.id] = node
        numeric = int(node.id[1:]) if node.id[1:].isdigit() else 0
        self._next_id = max(self._next_id, numeric + 1)

    def add_edge(self, a: str, b: str) -> None:
        if a not in self.nodes or b not in self.nodes:
            raise GraphError(f"edge endpoints missing: {a} -> {b}")
        if a == b:
            return
        if self.has_path(b, a):
            raise GraphError(f"edge {a} -> {b} would create a cycle")
        self.edges.add((a, b))

    def absorb_provenance(self, node_id: str, extra: Provenance) -> None:
        self.nodes[node_id] = self.nodes[node_id].with_provenance(extra)

    # -- queries --------------------------------------------------------------

    def has_path(self, a: str, b: str) -> bool:
        if a == b:
            return True
        stack = [a]
        seen = {a}
        adjacency: dict[str, list[str]] = {}
        for src, dst in self.edges:
            adjacency.setdefault(src, []).append(dst)
        while stack:
            current = stack.pop()
            for nxt in adjacency.get(current, ()):
                if nxt == b:
                    return True
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return False

    def is_acyclic(self) -> bool:
        indegree = {nid: 0 for nid in self.nodes}
        for _, dst in self.edges:
            indegree[dst] += 1
        queue = [nid for nid, deg in indegree.items() if deg == 0]
        visited = 0
        adjacency: dict[str, list[str]] = {}
        for src, dst in self.edges:
            adjacency.setdefault(src, []).append(dst)
        while queue:
            current = queue.pop()
            visited += 1
            for nxt in adjacency.get(current, ()):
                indegree[nxt] -= 1
                if indegree[nxt] == 0:
                    queue.append(nxt)
        return visited == len(self.nodes)

    def emergent_ids(self) -> list[str]:
        """Nodes with no designer provenance, in insertion order."""
        out = []
        for node in self.nodes.values():
            if not any(source in self.designer_sources for source, _ in node.provenance):
                out.append(node.id)
        return out

    def copy(self) -> "NarrativeGraph":
        return NarrativeGraph(
            nodes=dict(self.nodes),
            edges=set(self.edges),
            starts=set(self.starts),
            ends=set(self.ends),
            designer_sources=set(self.designer_sources),
            _next_id=self._next_id,
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NarrativeGraph):
            return NotImplemented
        return (
            self.nodes == other.nodes
            and self.edges == other.edges
            and self.starts == other.starts
            and self.ends == other.ends
            and self.designer_sources == other.designer_sources
        )


@dataclass(frozen=True)
class Strategy:
    """A distilled (summary, label) pair, the unit the path builder consumes."""

    summary: str
    state_label: str


def build_path_graph(strategies: list[Strategy], source: str, day: int) -> NarrativeGraph:
    """One day of strategies becomes a single path s1 -> s2 -> ... -> sk.

    Labels must be monotone along the path (the world only turns flags on);
    consecutive duplicates collapse into one node.
    """
    if not strategies:
        raise GraphError("cannot build a path from zero strategies")
    deduped: list[Strategy] = []
    for strat in strategies:
        if deduped and deduped[-1] == strat:
            continue
        deduped.append(strat)
    for prev, nxt in zip(deduped, deduped[1:]):
        if not label_dominates(nxt.state_label, prev.state_label):
            raise GraphError(
                f"non-monotone labels: {prev.state_label} -> {nxt.state_label}"
            )
    graph = NarrativeGraph()
    provenance = frozenset({(source, day)})
    previous = None
    for strat in deduped:
        node = graph.new_node(strat.summary, strat.state_label, provenance)
        if previous is not None:
            graph.add_edge(previous.id, node.id)
        previous = node
    first = next(iter(graph.nodes))
    graph.starts.add(first)
    graph.ends.add(previous.id)
    return graph

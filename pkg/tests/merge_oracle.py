"""Independent brute-force merge oracle for small graphs.

Instead of resolving incoming nodes greedily, this enumerates every
label-respecting unification assignment (each incoming node either stays
fresh or unifies with a matcher-approved, label-equal accumulated node),
keeps the assignments whose resulting graph is acyclic, and picks the one
with the most unifications. Ties break toward unifying earlier incoming
nodes, then earlier-inserted targets, mirroring the documented greedy
order. Exhaustive, so only usable on fixture-sized graphs.
"""

from __future__ import annotations

from itertools import product

import networkx as nx

from dejaboom.narrative.graph import NarrativeGraph


def brute_force_merge(accumulated: NarrativeGraph, incoming: NarrativeGraph, matcher) -> NarrativeGraph:
    incoming_ids = list(incoming.nodes)
    acc_ids = list(accumulated.nodes)

    options: list[list[str | None]] = []
    for node_id in incoming_ids:
        node = incoming.nodes[node_id]
        choices: list[str | None] = [
            cand
            for cand in acc_ids
            if accumulated.nodes[cand].state_label == node.state_label
            and matcher.match(node.summary, accumulated.nodes[cand].summary)
        ]
        choices.append(None)  # stay fresh
        options.append(choices)

    best: tuple | None = None
    for assignment in product(*options):
        graph = _apply(accumulated, incoming, incoming_ids, assignment)
        if graph is None:
            continue
        unified = sum(1 for choice in assignment if choice is not None)
        # preference vector: more unifications, earlier incoming unified,
        # earlier-inserted targets
        pref = (
            unified,
            tuple(choice is not None for choice in assignment),
            tuple(-acc_ids.index(choice) if choice is not None else 1 for choice in assignment),
        )
        if best is None or pref > best[0]:
            best = (pref, graph)
    assert best is not None  # the all-fresh assignment is always valid
    return best[1]


def _apply(
    accumulated: NarrativeGraph,
    incoming: NarrativeGraph,
    incoming_ids: list[str],
    assignment: tuple,
) -> NarrativeGraph | None:
    result = accumulated.copy()
    resolution: dict[str, str] = {}
    for node_id, choice in zip(incoming_ids, assignment):
        node = incoming.nodes[node_id]
        if choice is None:
            fresh = result.new_node(node.summary, node.state_label, node.provenance)
            resolution[node_id] = fresh.id
        else:
            result.absorb_provenance(choice, node.provenance)
            resolution[node_id] = choice
    for a, b in incoming.edges:
        ra, rb = resolution[a], resolution[b]
        if ra == rb:
            return None
        result.edges.add((ra, rb))
    if not result.is_acyclic():
        return None
    result.starts |= {resolution[s] for s in incoming.starts}
    result.ends |= {resolution[e] for e in incoming.ends}
    result.designer_sources |= incoming.designer_sources
    return result


def to_networkx(graph: NarrativeGraph) -> nx.DiGraph:
    out = nx.DiGraph()
    for node in graph.nodes.values():
        out.add_node(
            node.id,
            summary=node.summary,
            label=node.state_label,
            provenance=frozenset(node.provenance),
            start=node.id in graph.starts,
            end=node.id in graph.ends,
        )
    out.add_edges_from(graph.edges)
    return out


def isomorphic(a: NarrativeGraph, b: NarrativeGraph) -> bool:
    """Structure equality up to node renaming, matching on node content."""

    def node_match(x, y):
        return (
            x["summary"] == y["summary"]
            and x["label"] == y["label"]
            and x["provenance"] == y["provenance"]
            and x["start"] == y["start"]
            and x["end"] == y["end"]
        )

    return nx.is_isomorphic(to_networkx(a), to_networkx(b), node_match=node_match)

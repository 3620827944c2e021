"""Graph merging by state-labeled semantic matching.

Incoming nodes are resolved in chronological (insertion) order. The
candidates for unification are the accumulated nodes carrying the same
state label; the matcher then decides semantic sameness. Matching is
greedy first-best with every verdict recorded in an audit trail.

Unifying two nodes can close a temporal loop when equal-label strategies
were visited in opposite orders on different days. Because the narrative
graph is a DAG by definition, such a node is split into a fresh node
instead of unified; the duplicate is the price of acyclicity.
"""

from __future__ import annotations

from dataclasses import dataclass

from dejaboom.errors import GraphError
from dejaboom.narrative.graph import NarrativeGraph, StrategyNode

RULE_BASED = "rule_based"
MODEL = "model"

SAME = "same"
DIFFERENT = "different"


@dataclass(frozen=True)
class NodeMatch:
    """One matcher verdict from a merge; the audit trail is a list of these."""

    incoming_id: str
    incoming_summary: str
    candidate_id: str
    candidate_summary: str
    state_label: str
    verdict: str
    evaluator: str


def merge(
    accumulated: NarrativeGraph,
    incoming: NarrativeGraph,
    matcher,
    audit: list[NodeMatch] | None = None,
) -> NarrativeGraph:
    """Fold `incoming` into a copy of `accumulated`; both stay untouched.

    `matcher` is any provider exposing match(summary_a, summary_b) -> bool.
    """
    result = accumulated.copy()
    evaluator = RULE_BASED if getattr(matcher, "name", "") == "rule" else MODEL
    resolution: dict[str, str] = {}

    incoming_order = list(incoming.nodes)
    preds: dict[str, list[str]] = {}
    succs: dict[str, list[str]] = {}
    for a, b in incoming.edges:
        succs.setdefault(a, []).append(b)
        preds.setdefault(b, []).append(a)

    for node_id in incoming_order:
        node = incoming.nodes[node_id]
        resolved = _resolve_node(result, node, preds, succs, resolution, matcher, evaluator, audit)
        resolution[node_id] = resolved
        for raw_pred in preds.get(node_id, ()):
            if raw_pred in resolution:
                _add_edge_if_new(result, resolution[raw_pred], resolved)
        for raw_succ in succs.get(node_id, ()):
            if raw_succ in resolution:
                _add_edge_if_new(result, resolved, resolution[raw_succ])

    result.starts |= {resolution[s] for s in incoming.starts}
    result.ends |= {resolution[e] for e in incoming.ends}
    result.designer_sources |= incoming.designer_sources
    if not result.is_acyclic():
        raise GraphError("merge produced a cycle")  # defensive; split logic prevents this
    return result


def _resolve_node(
    result: NarrativeGraph,
    node: StrategyNode,
    preds: dict[str, list[str]],
    succs: dict[str, list[str]],
    resolution: dict[str, str],
    matcher,
    evaluator: str,
    audit: list[NodeMatch] | None,
) -> str:
    def pending_edges(target: str) -> list[tuple[str, str]]:
        return [
            (resolution[p], target) for p in preds.get(node.id, ()) if p in resolution
        ] + [(target, resolution[s]) for s in succs.get(node.id, ()) if s in resolution]

    for candidate_id in list(result.nodes):
        candidate = result.nodes[candidate_id]
        if candidate.state_label != node.state_label:
            continue
        same = bool(matcher.match(node.summary, candidate.summary))
        if audit is not None:
            audit.append(
                NodeMatch(
                    incoming_id=node.id,
                    incoming_summary=node.summary,
                    candidate_id=candidate_id,
                    candidate_summary=candidate.summary,
                    state_label=node.state_label,
                    verdict=SAME if same else DIFFERENT,
                    evaluator=evaluator,
                )
            )
        if not same:
            continue
        if _edges_safe(result, pending_edges(candidate_id)):
            result.absorb_provenance(candidate_id, node.provenance)
            return candidate_id
        # label-equal, matcher-same, but unification would close a cycle: split

    fresh = result.new_node(node.summary, node.state_label, node.provenance)
    return fresh.id


def _edges_safe(result: NarrativeGraph, edges: list[tuple[str, str]]) -> bool:
    """Would adding all these edges keep the graph acyclic? Checked incrementally,
    since two edges can be individually safe but close a cycle together."""
    working = set(result.edges)
    for a, b in edges:
        if a == b:
            return False
        if (a, b) in working:
            continue
        if _path_exists(working, b, a):
            return False
        working.add((a, b))
    return True


def _path_exists(edges: set[tuple[str, str]], a: str, b: str) -> bool:
    adjacency: dict[str, list[str]] = {}
    for src, dst in edges:
        adjacency.setdefault(src, []).append(dst)
    stack, seen = [a], {a}
    while stack:
        current = stack.pop()
        if current == b:
            return True
        for nxt in adjacency.get(current, ()):
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return False


def _add_edge_if_new(result: NarrativeGraph, a: str, b: str) -> None:
    if a == b or (a, b) in result.edges:
        return
    result.add_edge(a, b)

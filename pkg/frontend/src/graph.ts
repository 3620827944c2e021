// Graph-explorer logic: layered layout by state-label progress, styling,
// category filtering and node inspection. Everything here is read-only
// over the graph document; filters and selections never mutate it.

import type { EmergenceReport, GraphDoc, GraphNode } from "./types.js";

export function popcount(label: string): number {
  let bits = 0;
  for (const ch of label) if (ch === "1") bits += 1;
  return bits;
}

export interface NodePosition {
  x: number; // layer: milestones achieved
  y: number; // index within the layer
}

export interface Layout {
  positions: Map<string, NodePosition>;
  layerCount: number;
  layerSizes: number[];
}

/** Left-to-right layers by number of milestone bits: temporal progress
 * reads as horizontal position without running a layout solver. */
export function layoutGraph(doc: GraphDoc): Layout {
  const layers = new Map<number, string[]>();
  for (const node of doc.nodes) {
    const layer = popcount(node.state_label);
    const bucket = layers.get(layer) ?? [];
    bucket.push(node.id);
    layers.set(layer, bucket);
  }
  const orderedLayers = [...layers.keys()].sort((a, b) => a - b);
  const positions = new Map<string, NodePosition>();
  const layerSizes: number[] = [];
  orderedLayers.forEach((layer, x) => {
    const bucket = layers.get(layer)!;
    layerSizes.push(bucket.length);
    bucket.forEach((id, y) => positions.set(id, { x, y }));
  });
  return { positions, layerCount: orderedLayers.length, layerSizes };
}

export function styleClass(node: GraphNode): string {
  return node.emergent ? "node-emergent" : "node-designer";
}

export function categoryOf(report: EmergenceReport, nodeId: string): string | null {
  const entry = report.nodes.find((n) => n.node_id === nodeId);
  return entry ? entry.category : null;
}

/** Ids visible under a category filter: null shows everything; a category
 * shows exactly the emergent nodes of that category. */
export function visibleUnderFilter(
  doc: GraphDoc,
  report: EmergenceReport,
  category: string | null,
): Set<string> {
  if (category === null) return new Set(doc.nodes.map((n) => n.id));
  const matching = new Set(
    report.nodes.filter((n) => n.category === category).map((n) => n.node_id),
  );
  return new Set(doc.nodes.filter((n) => n.emergent && matching.has(n.id)).map((n) => n.id));
}

export function categoriesPresent(report: EmergenceReport): string[] {
  return [...new Set(report.nodes.map((n) => n.category))].sort();
}

export interface NodeDetail {
  id: string;
  summary: string;
  stateLabel: string;
  milestones: number;
  emergent: boolean;
  category: string | null;
  provenance: { source: string; day: number }[];
  players: string[];
}

export function nodeDetail(doc: GraphDoc, report: EmergenceReport, nodeId: string): NodeDetail | null {
  const node = doc.nodes.find((n) => n.id === nodeId);
  if (!node) return null;
  const reportEntry = report.nodes.find((n) => n.node_id === nodeId);
  return {
    id: node.id,
    summary: node.summary,
    stateLabel: node.state_label,
    milestones: popcount(node.state_label),
    emergent: node.emergent,
    category: reportEntry ? reportEntry.category : null,
    provenance: node.provenance.map(([source, day]) => ({ source, day })),
    players: reportEntry ? reportEntry.players : [],
  };
}

/** Every edge goes from a layer to the same or a later one; the merge
 * pipeline guarantees it, and the renderer relies on it. */
export function edgesAreForward(doc: GraphDoc, layout: Layout): boolean {
  for (const [a, b] of doc.edges) {
    const from = layout.positions.get(a);
    const to = layout.positions.get(b);
    if (!from || !to || from.x > to.x) return false;
  }
  return true;
}

// Wire types mirrored from the game service; field names match the
// server's JSON exactly.

export interface LogRecord {
  seq: number;
  day: number;
  step_in_day: number;
  role: string; // "player" | "game_feedback" | "system" | "npc:<id>"
  text: string;
  state_label_after: string;
  classification: string | null;
  canonical: string | null;
  outcome: string | null;
  fallback: boolean;
}

export interface CommandResponse {
  records: LogRecord[];
  status: SessionStatus;
}

export type SessionStatus = "RUNNING" | "WON" | "TIME_UP";

export interface ApiSession {
  session_id: string;
  status: SessionStatus;
  day: number;
  step_in_day: number;
  recent_records: LogRecord[];
}

export interface GraphNode {
  id: string;
  summary: string;
  state_label: string;
  provenance: [string, number][];
  emergent: boolean;
}

export interface GraphDoc {
  nodes: GraphNode[];
  edges: [string, string][];
  starts: string[];
  ends: string[];
  designer_sources: string[];
}

export interface EmergentNodeReport {
  node_id: string;
  summary: string;
  state_label: string;
  players: string[];
  category: string;
  category_fallback: boolean;
}

export interface EmergenceReport {
  nodes: EmergentNodeReport[];
  per_player: Record<string, number>;
  total: number;
  unique: number;
  category_counts: Record<string, number>;
  merge_order: string[];
}

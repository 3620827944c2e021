// Play-view state machine. Pure functions over an immutable state object;
// the DOM layer renders whatever this produces. One command is in flight
// at a time, matching the server's per-session serialization.

import type { CommandResponse, LogRecord, SessionStatus } from "./types.js";

export type Banner =
  | { kind: "explosion"; day: number }
  | { kind: "won" }
  | { kind: "over"; detail: string }
  | { kind: "error"; detail: string; retryText: string };

export interface PlayState {
  sessionId: string | null;
  records: LogRecord[]; // server-confirmed, strictly ordered by seq
  pendingEcho: string | null; // optimistic player line awaiting confirmation
  pending: boolean;
  status: SessionStatus;
  banner: Banner | null;
  stepLimit: number;
}

export function initialState(stepLimit = 30): PlayState {
  return {
    sessionId: null,
    records: [],
    pendingEcho: null,
    pending: false,
    status: "RUNNING",
    banner: null,
    stepLimit,
  };
}

export function withSession(state: PlayState, sessionId: string): PlayState {
  return { ...state, sessionId };
}

export function canSubmit(state: PlayState, text: string): boolean {
  if (state.pending || state.status !== "RUNNING" || state.sessionId === null) return false;
  return text.trim().length > 0;
}

export function beginSubmit(state: PlayState, text: string): PlayState {
  return { ...state, pending: true, pendingEcho: text.trim(), banner: null };
}

/** Merge server records by seq: dedupe, sort, drop the optimistic echo. */
export function applyResponse(state: PlayState, response: CommandResponse): PlayState {
  const bySeq = new Map<number, LogRecord>();
  for (const record of state.records) bySeq.set(record.seq, record);
  for (const record of response.records) bySeq.set(record.seq, record);
  const records = [...bySeq.values()].sort((a, b) => a.seq - b.seq);
  const banner = bannerFor(response, state.stepLimit);
  return {
    ...state,
    records,
    pendingEcho: null,
    pending: false,
    status: response.status,
    banner,
  };
}

function bannerFor(response: CommandResponse, stepLimit: number): Banner | null {
  if (response.status === "WON") return { kind: "won" };
  const explosion = response.records.find(
    (r) => r.role === "system" && r.step_in_day === stepLimit,
  );
  if (explosion) return { kind: "explosion", day: explosion.day + 1 };
  return null;
}

export function applyError(state: PlayState, status: number, detail: string): PlayState {
  if (status === 409) {
    // session finished on the server; recap and stop accepting input
    return {
      ...state,
      pending: false,
      pendingEcho: null,
      status: detail.includes("WON") ? "WON" : state.status,
      banner: { kind: "over", detail },
    };
  }
  const retryText = state.pendingEcho ?? "";
  return {
    ...state,
    pending: false,
    pendingEcho: null,
    banner: { kind: "error", detail, retryText },
  };
}

export function reconcile(state: PlayState, records: LogRecord[]): PlayState {
  return applyResponse({ ...state, records: [] }, { records, status: state.status });
}

// -- derived display values --------------------------------------------------

export function currentDay(state: PlayState): number {
  return state.records.length ? state.records[state.records.length - 1].day : 1;
}

export function currentStep(state: PlayState): number {
  let step = 0;
  const day = currentDay(state);
  for (const record of state.records) {
    if (record.day === day && record.role === "player") step = Math.max(step, record.step_in_day);
  }
  return step;
}

export function stepsUntilBoom(state: PlayState): number {
  return Math.max(0, state.stepLimit - currentStep(state));
}

export interface ChatLine {
  speaker: string;
  text: string;
  kind: "player" | "npc" | "feedback" | "system" | "echo";
}

export function visibleLines(state: PlayState): ChatLine[] {
  const lines: ChatLine[] = state.records.map((record) => {
    if (record.role === "player") return { speaker: "You", text: record.text, kind: "player" };
    if (record.role === "system") return { speaker: "", text: record.text, kind: "system" };
    if (record.role.startsWith("npc:")) {
      const name = record.role.slice(4).replace(/_/g, " ");
      return { speaker: titleCase(name), text: record.text, kind: "npc" };
    }
    return { speaker: "", text: record.text, kind: "feedback" };
  });
  if (state.pendingEcho !== null) {
    lines.push({ speaker: "You", text: state.pendingEcho, kind: "echo" });
  }
  return lines;
}

function titleCase(text: string): string {
  return text.replace(/\b\w/g, (c) => c.toUpperCase());
}

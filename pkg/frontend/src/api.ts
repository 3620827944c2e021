// Thin typed client over the game service. The UI touches the backend
// exclusively through these calls.

import type { ApiSession, CommandResponse, EmergenceReport, GraphDoc, LogRecord } from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: string,
  ) {
    super(`${status}: ${detail}`);
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class GameClient {
  constructor(
    private baseUrl: string = "",
    private fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path, {
      headers: { "Content-Type": "application/json" },
      ...init,
    });
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const body = (await response.json()) as { detail?: string };
        if (body.detail) detail = body.detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  createSession(world = "dejaboom", provider = "rule"): Promise<{ session_id: string }> {
    return this.request("/sessions", {
      method: "POST",
      body: JSON.stringify({ world, provider }),
    });
  }

  postCommand(sessionId: string, text: string): Promise<CommandResponse> {
    return this.request(`/sessions/${sessionId}/commands`, {
      method: "POST",
      body: JSON.stringify({ text }),
    });
  }

  getSession(sessionId: string): Promise<ApiSession> {
    return this.request(`/sessions/${sessionId}`);
  }

  getLog(sessionId: string, fromSeq = 0): Promise<{ records: LogRecord[]; next_seq: number }> {
    return this.request(`/sessions/${sessionId}/log?from_seq=${fromSeq}`);
  }

  createAnalysis(designerLogs: string[], playerLogs: string[]): Promise<{ graph_id: string }> {
    return this.request("/analysis/graphs", {
      method: "POST",
      body: JSON.stringify({ designer_logs: designerLogs, player_logs: playerLogs }),
    });
  }

  getGraph(graphId: string): Promise<GraphDoc> {
    return this.request(`/analysis/graphs/${graphId}`);
  }

  getEmergence(graphId: string): Promise<EmergenceReport> {
    return this.request(`/analysis/graphs/${graphId}/emergence`);
  }
}

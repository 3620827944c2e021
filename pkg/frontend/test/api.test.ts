import { describe, expect, it } from "vitest";

import { ApiError, GameClient } from "../src/api.js";

function stubFetch(status: number, body: unknown) {
  const calls: { url: string; init?: RequestInit }[] = [];
  const impl = async (url: string, init?: RequestInit) => {
    calls.push({ url, init });
    return new Response(JSON.stringify(body), {
      status,
      headers: { "Content-Type": "application/json" },
    });
  };
  return { impl, calls };
}

describe("GameClient", () => {
  it("creates sessions against the documented endpoint", async () => {
    const { impl, calls } = stubFetch(201, { session_id: "abc" });
    const client = new GameClient("http://game", impl);
    const result = await client.createSession();
    expect(result.session_id).toBe("abc");
    expect(calls[0].url).toBe("http://game/sessions");
    expect(JSON.parse(calls[0].init!.body as string)).toEqual({
      world: "dejaboom",
      provider: "rule",
    });
  });

  it("posts commands and returns records", async () => {
    const { impl, calls } = stubFetch(200, { records: [], status: "RUNNING" });
    const client = new GameClient("", impl);
    await client.postCommand("s1", "look");
    expect(calls[0].url).toBe("/sessions/s1/commands");
    expect(JSON.parse(calls[0].init!.body as string)).toEqual({ text: "look" });
  });

  it("surfaces HTTP failures as ApiError with the server detail", async () => {
    const { impl } = stubFetch(409, { detail: "session over: WON" });
    const client = new GameClient("", impl);
    await expect(client.postCommand("s1", "look")).rejects.toThrowError(ApiError);
    await client.postCommand("s1", "look").catch((error: ApiError) => {
      expect(error.status).toBe(409);
      expect(error.detail).toBe("session over: WON");
    });
  });

  it("pages logs by seq cursor", async () => {
    const { impl, calls } = stubFetch(200, { records: [], next_seq: 5 });
    const client = new GameClient("", impl);
    await client.getLog("s1", 5);
    expect(calls[0].url).toBe("/sessions/s1/log?from_seq=5");
  });

  it("graph reads issue no mutation requests", async () => {
    const { impl, calls } = stubFetch(200, {});
    const client = new GameClient("", impl);
    await client.getGraph("g1");
    await client.getEmergence("g1");
    for (const call of calls) {
      expect(call.init?.method ?? "GET").toBe("GET");
    }
  });
});

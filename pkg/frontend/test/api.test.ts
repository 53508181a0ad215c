import { describe, expect, it } from "vitest";

import { ApiError, GameClient, type FetchLike } from "../src/api.js";
import { makeSnapshot } from "./helpers.js";

interface Captured {
  url: string;
  method: string;
  body: unknown;
}

function clientWith(
  status: number,
  body: unknown,
): { client: GameClient; calls: Captured[] } {
  const calls: Captured[] = [];
  const fetchFn: FetchLike = async (url, init) => {
    calls.push({
      url,
      method: init?.method ?? "GET",
      body: init?.body ? JSON.parse(init.body as string) : null,
    });
    const payload = typeof body === "string" ? body : JSON.stringify(body);
    return new Response(payload, {
      status,
      headers: { "content-type": "application/json" },
    });
  };
  return { client: new GameClient("", fetchFn), calls };
}

describe("GameClient", () => {
  it("creates games with defaults and overrides", async () => {
    const { client, calls } = clientWith(200, makeSnapshot());
    const snap = await client.createGame({ L: 7, human_side: "II", seed: 4 });
    expect(snap.id).toBe("g1-feed");
    expect(calls).toHaveLength(1);
    expect(calls[0]!.url).toBe("/games");
    expect(calls[0]!.method).toBe("POST");
    expect(calls[0]!.body).toMatchObject({
      game: "hex",
      L: 7,
      human_side: "II",
      seed: 4,
    });
  });

  it("posts moves as [row, col]", async () => {
    const { client, calls } = clientWith(200, makeSnapshot());
    await client.postMove("g1-feed", [2, 1]);
    expect(calls[0]!.url).toBe("/games/g1-feed/moves");
    expect(calls[0]!.body).toEqual({ cell: [2, 1] });
  });

  it("fetches state and heatmap by id", async () => {
    const { client, calls } = clientWith(200, { id: "x", samples: 64, values: [] });
    await client.getHeatmap("x");
    await client.getState("x").catch(() => undefined);
    expect(calls[0]!.url).toBe("/games/x/heatmap");
    expect(calls[0]!.method).toBe("GET");
    expect(calls[1]!.url).toBe("/games/x");
  });

  it("resigns with a POST", async () => {
    const { client, calls } = clientWith(200, makeSnapshot());
    await client.resign("g1-feed");
    expect(calls[0]!.url).toBe("/games/g1-feed/resign");
    expect(calls[0]!.method).toBe("POST");
  });

  it("turns service error bodies into ApiError", async () => {
    const { client } = clientWith(400, {
      code: "illegal-move",
      message: "cell [0, 0] is already decided",
    });
    const err = await client.postMove("g1-feed", [0, 0]).catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(400);
    expect(err.code).toBe("illegal-move");
    expect(err.message).toContain("already decided");
  });

  it("survives non-JSON error responses", async () => {
    const { client } = clientWith(502, "bad gateway");
    const err = await client.getState("x").catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.code).toBe("unknown");
    expect(err.message).toContain("502");
  });
});

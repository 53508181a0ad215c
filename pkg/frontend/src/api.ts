/** Thin typed client over the game service HTTP API.
 *
 * The fetch implementation is injected so tests can run without a server;
 * every service error body {code, message} becomes an ApiError carrying
 * both, which the UI surfaces inline.
 */

import type { CreateGameOptions, HeatmapResponse, Snapshot } from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export class GameClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  createGame(options: CreateGameOptions = {}): Promise<Snapshot> {
    return this.request("/games", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ game: "hex", L: 5, ...options }),
    });
  }

  getState(id: string): Promise<Snapshot> {
    return this.request(`/games/${id}`);
  }

  postMove(id: string, cell: [number, number]): Promise<Snapshot> {
    return this.request(`/games/${id}/moves`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ cell }),
    });
  }

  getHeatmap(id: string): Promise<HeatmapResponse> {
    return this.request(`/games/${id}/heatmap`);
  }

  resign(id: string): Promise<Snapshot> {
    return this.request(`/games/${id}/resign`, { method: "POST" });
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path, init);
    let body: unknown = null;
    try {
      body = await response.json();
    } catch {
      body = null;
    }
    if (!response.ok) {
      const err = (body ?? {}) as { code?: string; message?: string };
      throw new ApiError(
        response.status,
        err.code ?? "unknown",
        err.message ?? `request failed with status ${response.status}`,
      );
    }
    return body as T;
  }
}

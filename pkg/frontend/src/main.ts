/** Browser bootstrap: wires the DOM to the api/state/render modules.
 *
 * One render loop, at most one outstanding request (state.beginRequest is
 * the lock), polling only via the responses to our own POSTs. Animations
 * drain one at a time so tosses and engine replies read as a sequence.
 */

import { ApiError, GameClient } from "./api.js";
import {
  applySnapshot,
  beginRequest,
  canPlay,
  failRequest,
  initialState,
  selectCell,
  setHeatmap,
  shiftAnimation,
  toggleHeatmap,
  type ClientGameState,
} from "./state.js";
import { boardScene, hitTest, sceneToSvg } from "./render.js";

const ANIMATION_MS = 260;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

function describeAnimation(state: ClientGameState): string {
  const next = state.animations[0];
  if (next === undefined) {
    return "";
  }
  if (next.kind === "toss") {
    return `coin: player ${next.winner} moves`;
  }
  return `player ${next.side} plays (${next.cell[0]}, ${next.cell[1]})`;
}

function statusLine(state: ClientGameState): string {
  const snap = state.snapshot;
  if (snap === null) {
    return "start a game";
  }
  if (snap.status === "finished") {
    return `finished, winner: player ${snap.winner}`;
  }
  if (state.requestInFlight) {
    return "engine thinking";
  }
  return `turn ${snap.turn}: your move (player ${snap.humanSide})`;
}

function main(): void {
  const client = new GameClient("");
  let state = initialState();
  let animationTimer: number | null = null;

  const board = el<HTMLDivElement>("board");
  const status = el<HTMLDivElement>("status");
  const ticker = el<HTMLDivElement>("ticker");
  const errorBox = el<HTMLDivElement>("error");
  const goal = el<HTMLDivElement>("goal");

  function render(): void {
    const scene = boardScene(state);
    board.innerHTML = sceneToSvg(scene);
    status.textContent = scene.banner ?? statusLine(state);
    ticker.textContent = describeAnimation(state);
    errorBox.textContent = state.error ?? "";
    errorBox.style.display = state.error === null ? "none" : "block";
    goal.textContent = state.snapshot?.toWin ?? "";
    scheduleAnimationDrain();
  }

  function scheduleAnimationDrain(): void {
    if (state.animations.length === 0 || animationTimer !== null) {
      return;
    }
    animationTimer = window.setTimeout(() => {
      animationTimer = null;
      state = shiftAnimation(state);
      render();
    }, ANIMATION_MS);
  }

  function update(next: ClientGameState): void {
    state = next;
    render();
  }

  async function refetch(): Promise<void> {
    if (state.snapshot === null) {
      return;
    }
    try {
      update(applySnapshot(state, await client.getState(state.snapshot.id)));
    } catch {
      /* keep the last consistent state */
    }
  }

  async function guarded(work: () => Promise<ClientGameState>): Promise<void> {
    const locked = beginRequest(state);
    if (locked === null) {
      return;
    }
    update(locked);
    try {
      update(await work());
    } catch (err) {
      const message =
        err instanceof ApiError ? `${err.code}: ${err.message}` : String(err);
      update(failRequest(state, message));
      await refetch();
    }
  }

  el<HTMLButtonElement>("new-game").addEventListener("click", () => {
    const L = Number(el<HTMLInputElement>("size").value) || 5;
    const side = el<HTMLSelectElement>("side").value === "II" ? "II" : "I";
    void guarded(async () =>
      applySnapshot(initialState(), await client.createGame({
        L,
        human_side: side,
      })),
    );
  });

  el<HTMLButtonElement>("heatmap").addEventListener("click", () => {
    const snap = state.snapshot;
    if (snap === null) {
      update(toggleHeatmap(state));
      return;
    }
    if (!state.heatmapVisible && state.heatmap === null) {
      void guarded(async () => {
        const response = await client.getHeatmap(snap.id);
        return toggleHeatmap(setHeatmap(state, response.values));
      });
    } else {
      update(toggleHeatmap(state));
    }
  });

  el<HTMLButtonElement>("resign").addEventListener("click", () => {
    const snap = state.snapshot;
    if (snap === null) {
      return;
    }
    void guarded(async () => applySnapshot(state, await client.resign(snap.id)));
  });

  board.addEventListener("click", (event) => {
    const snap = state.snapshot;
    if (snap === null) {
      return;
    }
    const svg = board.querySelector("svg");
    if (svg === null) {
      return;
    }
    const rect = svg.getBoundingClientRect();
    const scene = boardScene(state);
    const hit = hitTest(
      scene,
      ((event.clientX - rect.left) / rect.width) * scene.width,
      ((event.clientY - rect.top) / rect.height) * scene.height,
    );
    if (hit === null) {
      return;
    }
    const [row, col] = hit;
    if (!canPlay(state, row, col)) {
      return;
    }
    update(selectCell(state, hit));
    void guarded(async () =>
      applySnapshot(state, await client.postMove(snap.id, [row, col])),
    );
  });

  render();
}

main();

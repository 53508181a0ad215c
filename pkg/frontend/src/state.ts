/** Client game state and its pure transitions.
 *
 * Every server snapshot fully replaces the game fields; view fields
 * (selection, heatmap visibility, animation queue, in-flight lock) evolve
 * locally. All functions return fresh state objects, so render stays a
 * pure function of the latest state.
 */

import type { Side, Snapshot } from "./types.js";
import { moveCell } from "./types.js";

export interface TossEvent {
  kind: "toss";
  winner: Side;
}

export interface MoveEvent {
  kind: "move";
  side: Side;
  turn: number;
  cell: [number, number];
}

export type Animation = TossEvent | MoveEvent;

export interface ClientGameState {
  snapshot: Snapshot | null;
  selected: [number, number] | null;
  heatmap: number[] | null;
  heatmapVisible: boolean;
  requestInFlight: boolean;
  error: string | null;
  animations: Animation[];
}

export function initialState(): ClientGameState {
  return {
    snapshot: null,
    selected: null,
    heatmap: null,
    heatmapVisible: false,
    requestInFlight: false,
    error: null,
    animations: [],
  };
}

function animationsSince(previous: Snapshot | null, next: Snapshot): Animation[] {
  const seen = previous === null ? 0 : previous.moves.length;
  const fresh = next.moves.slice(seen);
  const tosses: Animation[] = next.lastTosses.map((winner) => ({
    kind: "toss",
    winner,
  }));
  const moves: Animation[] = fresh.map((m) => ({
    kind: "move",
    side: m.coin,
    turn: m.turn,
    cell: moveCell(m, next.board.cols),
  }));
  return [...tosses, ...moves];
}

/** Adopt a server snapshot: game fields replaced wholesale, stale heatmap
 * dropped when the position changed, errors cleared, recent tosses and
 * moves queued for animation. Releases the request lock. */
export function applySnapshot(
  state: ClientGameState,
  snapshot: Snapshot,
): ClientGameState {
  const positionChanged =
    state.snapshot === null ||
    state.snapshot.id !== snapshot.id ||
    state.snapshot.board.cells.join() !== snapshot.board.cells.join();
  return {
    ...state,
    snapshot,
    selected: null,
    heatmap: positionChanged ? null : state.heatmap,
    requestInFlight: false,
    error: null,
    animations: animationsSince(state.snapshot, snapshot),
  };
}

/** Take the in-flight lock; returns null when a request is already out,
 * which is what makes a double-click race post exactly one move. */
export function beginRequest(state: ClientGameState): ClientGameState | null {
  if (state.requestInFlight) {
    return null;
  }
  return { ...state, requestInFlight: true, error: null };
}

/** Release the lock and surface the error text inline; the snapshot is
 * untouched (the caller refetches to rule out divergence). */
export function failRequest(
  state: ClientGameState,
  message: string,
): ClientGameState {
  return { ...state, requestInFlight: false, error: message };
}

export function selectCell(
  state: ClientGameState,
  cell: [number, number] | null,
): ClientGameState {
  return { ...state, selected: cell };
}

export function toggleHeatmap(state: ClientGameState): ClientGameState {
  return { ...state, heatmapVisible: !state.heatmapVisible };
}

export function setHeatmap(
  state: ClientGameState,
  values: number[],
): ClientGameState {
  return { ...state, heatmap: values, requestInFlight: false };
}

export function shiftAnimation(state: ClientGameState): ClientGameState {
  return { ...state, animations: state.animations.slice(1) };
}

/** A cell is playable when it is the human's turn, nothing is in flight,
 * and the cell is undecided. */
export function canPlay(
  state: ClientGameState,
  row: number,
  col: number,
): boolean {
  const snap = state.snapshot;
  if (snap === null || snap.status !== "awaiting-human") {
    return false;
  }
  if (state.requestInFlight) {
    return false;
  }
  const index = row * snap.board.cols + col;
  return snap.board.cells[index] === 0;
}

import type { Snapshot } from "../src/types.js";

export function makeSnapshot(overrides: Partial<Snapshot> = {}): Snapshot {
  const L = overrides.board?.rows ?? 3;
  return {
    id: "g1-feed",
    game: "hex",
    board: { L, rows: L, cols: L, cells: new Array(L * L).fill(0) },
    toWin: "connect the black edges",
    p: 0.5,
    turn: 1,
    humanSide: "I",
    lastTosses: ["I"],
    moves: [],
    status: "awaiting-human",
    winner: null,
    ...overrides,
  };
}

export function boardOf(
  rows: number,
  cols: number,
  cells: number[],
): Snapshot["board"] {
  return { L: rows === cols ? rows : null, rows, cols, cells };
}

/** Wire types mirroring the service snapshot schema. */

export type Side = "I" | "II";

export type Status = "awaiting-human" | "engine-thinking" | "finished";

export interface SnapshotMove {
  turn: number;
  coin: Side;
  cell: [number, number] | number;
}

export interface BoardState {
  L: number | null;
  rows: number;
  cols: number;
  /** 1 for player I (black), -1 for player II (white), 0 undecided. */
  cells: number[];
}

export interface Snapshot {
  id: string;
  game: string;
  board: BoardState;
  toWin: string;
  p: number;
  turn: number;
  humanSide: Side;
  lastTosses: Side[];
  moves: SnapshotMove[];
  status: Status;
  winner: Side | null;
}

export interface HeatmapResponse {
  id: string;
  samples: number;
  values: number[];
}

export interface CreateGameOptions {
  game?: string;
  L?: number;
  p?: number;
  human_side?: Side;
  engine_samples?: number;
  seed?: number;
}

export function moveCell(move: SnapshotMove, cols: number): [number, number] {
  if (Array.isArray(move.cell)) {
    return [move.cell[0], move.cell[1]];
  }
  return [Math.floor(move.cell / cols), move.cell % cols];
}

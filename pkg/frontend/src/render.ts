/** Pure scene construction and SVG serialization for the lozenge board.
 *
 * boardScene builds a plain-data scene from ClientGameState; rendering the
 * same state twice yields identical scenes, and partial states (no
 * snapshot yet) render to an empty scene rather than throwing.
 */

import type { ClientGameState } from "./state.js";
import type { Side } from "./types.js";

export interface SceneCell {
  row: number;
  col: number;
  cx: number;
  cy: number;
  points: string;
  /** 1 black (player I), -1 white (player II), 0 undecided. */
  owner: number;
  /** Heatmap overlay opacity in [0, 1], or null when hidden. */
  heat: number | null;
  selected: boolean;
  onChain: boolean;
}

export interface SceneBorder {
  side: Side;
  edge: "top" | "bottom" | "left" | "right";
  points: string;
}

export interface Scene {
  width: number;
  height: number;
  size: number;
  rows: number;
  cols: number;
  cells: SceneCell[];
  borders: SceneBorder[];
  chain: Array<[number, number]> | null;
  banner: string | null;
}

const SQRT3 = Math.sqrt(3);

export function hexCenter(
  row: number,
  col: number,
  size: number,
): { x: number; y: number } {
  const w = SQRT3 * size;
  return { x: w * (col + row / 2) + w, y: 1.5 * size * row + 2 * size };
}

function hexPoints(cx: number, cy: number, size: number): string {
  const pts: string[] = [];
  for (let k = 0; k < 6; k += 1) {
    const angle = (Math.PI / 180) * (60 * k - 30);
    pts.push(
      `${(cx + size * Math.cos(angle)).toFixed(2)},` +
        `${(cy + size * Math.sin(angle)).toFixed(2)}`,
    );
  }
  return pts.join(" ");
}

const NEIGHBOR_OFFSETS: Array<[number, number]> = [
  [-1, 0],
  [1, 0],
  [0, -1],
  [0, 1],
  [1, -1],
  [-1, 1],
];

/** Breadth-first search for one winning crossing of the given side; black
 * joins the first and last rows, white the first and last columns.
 * Returns the path as [row, col] pairs, or null when there is none. */
export function winningChain(
  cells: number[],
  rows: number,
  cols: number,
  winner: Side,
): Array<[number, number]> | null {
  const color = winner === "I" ? 1 : -1;
  const isSource = (r: number, c: number) => (winner === "I" ? r === 0 : c === 0);
  const isTarget = (r: number, c: number) =>
    winner === "I" ? r === rows - 1 : c === cols - 1;

  const parent = new Map<number, number>();
  const queue: number[] = [];
  for (let r = 0; r < rows; r += 1) {
    for (let c = 0; c < cols; c += 1) {
      const id = r * cols + c;
      if (isSource(r, c) && cells[id] === color) {
        parent.set(id, -1);
        queue.push(id);
      }
    }
  }
  while (queue.length > 0) {
    const id = queue.shift()!;
    const r = Math.floor(id / cols);
    const c = id % cols;
    if (isTarget(r, c)) {
      const path: Array<[number, number]> = [];
      for (let at = id; at !== -1; at = parent.get(at)!) {
        path.push([Math.floor(at / cols), at % cols]);
      }
      return path.reverse();
    }
    for (const [dr, dc] of NEIGHBOR_OFFSETS) {
      const nr = r + dr;
      const nc = c + dc;
      if (nr < 0 || nr >= rows || nc < 0 || nc >= cols) {
        continue;
      }
      const nid = nr * cols + nc;
      if (!parent.has(nid) && cells[nid] === color) {
        parent.set(nid, id);
        queue.push(nid);
      }
    }
  }
  return null;
}

function borderSegments(rows: number, cols: number, size: number): SceneBorder[] {
  const first = hexCenter(0, 0, size);
  const topRight = hexCenter(0, cols - 1, size);
  const bottomLeft = hexCenter(rows - 1, 0, size);
  const last = hexCenter(rows - 1, cols - 1, size);
  const m = 1.25 * size;
  const seg = (a: { x: number; y: number }, b: { x: number; y: number }, dx: number, dy: number) =>
    `${(a.x + dx).toFixed(2)},${(a.y + dy).toFixed(2)} ` +
    `${(b.x + dx).toFixed(2)},${(b.y + dy).toFixed(2)}`;
  return [
    { side: "I", edge: "top", points: seg(first, topRight, 0, -m) },
    { side: "I", edge: "bottom", points: seg(bottomLeft, last, 0, m) },
    { side: "II", edge: "left", points: seg(first, bottomLeft, -m, 0) },
    { side: "II", edge: "right", points: seg(topRight, last, m, 0) },
  ];
}

export function boardScene(state: ClientGameState, size = 22): Scene {
  const snap = state.snapshot;
  if (snap === null) {
    return {
      width: 0,
      height: 0,
      size,
      rows: 0,
      cols: 0,
      cells: [],
      borders: [],
      chain: null,
      banner: null,
    };
  }
  const { rows, cols, cells } = snap.board;
  const heat = state.heatmapVisible ? state.heatmap : null;
  const top = heat === null ? 0 : Math.max(...heat, 0);
  const chain =
    snap.status === "finished" && snap.winner !== null
      ? winningChain(cells, rows, cols, snap.winner)
      : null;
  const onChain = new Set((chain ?? []).map(([r, c]) => r * cols + c));

  const sceneCells: SceneCell[] = [];
  for (let r = 0; r < rows; r += 1) {
    for (let c = 0; c < cols; c += 1) {
      const id = r * cols + c;
      const { x, y } = hexCenter(r, c, size);
      sceneCells.push({
        row: r,
        col: c,
        cx: x,
        cy: y,
        points: hexPoints(x, y, size),
        owner: cells[id] ?? 0,
        heat: heat === null || top === 0 ? null : (heat[id] ?? 0) / top,
        selected:
          state.selected !== null &&
          state.selected[0] === r &&
          state.selected[1] === c,
        onChain: onChain.has(id),
      });
    }
  }
  let banner: string | null = null;
  if (snap.status === "finished") {
    banner =
      snap.winner === snap.humanSide
        ? `You win (player ${snap.winner})`
        : `Engine wins (player ${snap.winner})`;
  }
  const w = SQRT3 * size;
  return {
    width: w * (cols + rows / 2) + 2 * w,
    height: 1.5 * size * rows + 4 * size,
    size,
    rows,
    cols,
    cells: sceneCells,
    borders: borderSegments(rows, cols, size),
    chain,
    banner,
  };
}

/** Map a pointer position to the nearest cell center within one hex
 * radius, or null when the click lands outside the board. */
export function hitTest(
  scene: Scene,
  x: number,
  y: number,
): [number, number] | null {
  let best: SceneCell | null = null;
  let bestDist = Infinity;
  for (const cell of scene.cells) {
    const d = (cell.cx - x) ** 2 + (cell.cy - y) ** 2;
    if (d < bestDist) {
      bestDist = d;
      best = cell;
    }
  }
  if (best === null || bestDist > scene.size ** 2) {
    return null;
  }
  return [best.row, best.col];
}

function fillFor(owner: number): string {
  if (owner === 1) {
    return "#24242c";
  }
  if (owner === -1) {
    return "#f4f1e8";
  }
  return "#d8cfa8";
}

export function sceneToSvg(scene: Scene): string {
  const parts: string[] = [];
  for (const border of scene.borders) {
    const color = border.side === "I" ? "#24242c" : "#b8b2a4";
    parts.push(
      `<polyline class="border border-${border.edge}" points="${border.points}" ` +
        `stroke="${color}" stroke-width="${scene.size / 2}" fill="none"/>`,
    );
  }
  for (const cell of scene.cells) {
    const stroke = cell.onChain ? "#d4a017" : cell.selected ? "#4a90d9" : "#555";
    const strokeWidth = cell.onChain || cell.selected ? 3 : 1;
    parts.push(
      `<polygon class="cell" data-row="${cell.row}" data-col="${cell.col}" ` +
        `points="${cell.points}" fill="${fillFor(cell.owner)}" ` +
        `stroke="${stroke}" stroke-width="${strokeWidth}"/>`,
    );
    if (cell.heat !== null && cell.heat > 0) {
      parts.push(
        `<polygon class="heat" points="${cell.points}" fill="#e0452b" ` +
          `fill-opacity="${(0.65 * cell.heat).toFixed(3)}" stroke="none"/>`,
      );
    }
  }
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${scene.width.toFixed(0)}" ` +
    `height="${scene.height.toFixed(0)}" viewBox="0 0 ${scene.width.toFixed(0)} ` +
    `${scene.height.toFixed(0)}">` +
    parts.join("") +
    "</svg>"
  );
}

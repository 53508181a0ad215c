"""Percolation machinery: completions, crossings, and pivotal sites.

A full configuration colors every item +1 (player I / black) or -1.  For hex
exactly one of the two crossings exists; for bridgit either Short's edges
join the terminals or the cut edges form a dual crossing.  A site is pivotal
when flipping it alone changes the winner.

The structured pivotality route uses planar duality: when black wins, a black
cell is pivotal iff, once flipped, it would join the white top side to the
white bottom side through its white neighbours, and symmetrically.  This is
one connectivity pass per configuration and must agree exactly with
pivotal_sites_oracle, which flips every cell and recomputes the winner.

Batched sampling over hex boards runs in a compiled kernel; everything else
is plain Python.
"""

from __future__ import annotations

from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .boards import BoardGraph
from .errors import UnsupportedGameError
from . import rng

try:
    from numba import njit

    NUMBA = True
except ImportError:  # pragma: no cover - sandbox always has numba
    NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(f):
            return f

        return wrap


@dataclass(frozen=True)
class CrossingResult:
    winner: str  # "I" or "II"
    shortest_length: int  # items in the winner's shortest crossing

    @property
    def black_crossing(self) -> bool:
        return self.winner == "I"

    @property
    def white_crossing(self) -> bool:
        return self.winner == "II"

    @property
    def shortest_black_crossing_length(self) -> int | None:
        return self.shortest_length if self.winner == "I" else None


def _colors_of(configuration) -> np.ndarray:
    return np.asarray(getattr(configuration, "colors", configuration))


# ---------------------------------------------------------------------------
# compiled hex kernels

_DI = np.array([1, -1, 0, 0, 1, -1], dtype=np.int64)
_DJ = np.array([0, 0, 1, -1, -1, 1], dtype=np.int64)


@njit(cache=True, nogil=True)
def _flood(col, rows, cols, want, side, reach, stack):
    """Mark cells of color `want` reachable from one side.  side: 0 row0,
    1 last row, 2 col0, 3 last col."""
    top = 0
    if side == 0:
        for j in range(cols):
            if col[j] == want:
                reach[j] = 1
                stack[top] = j
                top += 1
    elif side == 1:
        base = (rows - 1) * cols
        for j in range(cols):
            if col[base + j] == want:
                reach[base + j] = 1
                stack[top] = base + j
                top += 1
    elif side == 2:
        for i in range(rows):
            c = i * cols
            if col[c] == want:
                reach[c] = 1
                stack[top] = c
                top += 1
    else:
        for i in range(rows):
            c = i * cols + cols - 1
            if col[c] == want:
                reach[c] = 1
                stack[top] = c
                top += 1
    while top > 0:
        top -= 1
        c = stack[top]
        ci = c // cols
        cj = c % cols
        for k in range(6):
            ni = ci + _DI[k]
            nj = cj + _DJ[k]
            if 0 <= ni < rows and 0 <= nj < cols:
                nc = ni * cols + nj
                if col[nc] == want and reach[nc] == 0:
                    reach[nc] = 1
                    stack[top] = nc
                    top += 1


@njit(cache=True, nogil=True)
def _hex_batch(colors, rows, cols, counts, winners):
    """Per sample: record the winner and add its pivotal cells into counts."""
    N = colors.shape[0]
    n = rows * cols
    reach_a = np.zeros(n, dtype=np.uint8)
    reach_b = np.zeros(n, dtype=np.uint8)
    reach_c = np.zeros(n, dtype=np.uint8)
    stack = np.zeros(n, dtype=np.int64)
    for s in range(N):
        col = colors[s]
        for t in range(n):
            reach_a[t] = 0
        _flood(col, rows, cols, 1, 0, reach_a, stack)  # black from black-left
        black = False
        base = (rows - 1) * cols
        for j in range(cols):
            if reach_a[base + j] == 1:
                black = True
                break
        winners[s] = 1 if black else 0
        if black:
            for t in range(n):
                reach_b[t] = 0
                reach_c[t] = 0
            _flood(col, rows, cols, -1, 2, reach_b, stack)  # white from white-top
            _flood(col, rows, cols, -1, 3, reach_c, stack)  # white from white-bottom
            for c in range(n):
                if col[c] != 1:
                    continue
                ci = c // cols
                cj = c % cols
                ok_t = cj == 0
                ok_b = cj == cols - 1
                for k in range(6):
                    ni = ci + _DI[k]
                    nj = cj + _DJ[k]
                    if 0 <= ni < rows and 0 <= nj < cols:
                        nc = ni * cols + nj
                        if col[nc] == -1:
                            if reach_b[nc] == 1:
                                ok_t = True
                            if reach_c[nc] == 1:
                                ok_b = True
                if ok_t and ok_b:
                    counts[c] += 1
        else:
            for t in range(n):
                reach_b[t] = 0
            _flood(col, rows, cols, 1, 1, reach_b, stack)  # black from black-right
            for c in range(n):
                if col[c] != -1:
                    continue
                ci = c // cols
                cj = c % cols
                ok_l = ci == 0
                ok_r = ci == rows - 1
                for k in range(6):
                    ni = ci + _DI[k]
                    nj = cj + _DJ[k]
                    if 0 <= ni < rows and 0 <= nj < cols:
                        nc = ni * cols + nj
                        if col[nc] == 1:
                            if reach_a[nc] == 1:
                                ok_l = True
                            if reach_b[nc] == 1:
                                ok_r = True
                if ok_l and ok_r:
                    counts[c] += 1


@njit(cache=True, nogil=True)
def _hex_winners(colors, rows, cols, winners):
    N = colors.shape[0]
    n = rows * cols
    reach = np.zeros(n, dtype=np.uint8)
    stack = np.zeros(n, dtype=np.int64)
    for s in range(N):
        col = colors[s]
        for t in range(n):
            reach[t] = 0
        _flood(col, rows, cols, 1, 0, reach, stack)
        black = False
        base = (rows - 1) * cols
        for j in range(cols):
            if reach[base + j] == 1:
                black = True
                break
        winners[s] = 1 if black else 0


@njit(cache=True, nogil=True)
def _hex_shortest(colors, rows, cols, out):
    """Shortest black crossing in cells per sample, 0 when black does not cross."""
    N = colors.shape[0]
    n = rows * cols
    dist = np.zeros(n, dtype=np.int64)
    queue = np.zeros(n, dtype=np.int64)
    for s in range(N):
        col = colors[s]
        for t in range(n):
            dist[t] = 0
        head = 0
        tail = 0
        for j in range(cols):
            if col[j] == 1:
                dist[j] = 1
                queue[tail] = j
                tail += 1
        best = 0
        while head < tail:
            c = queue[head]
            head += 1
            ci = c // cols
            cj = c % cols
            if ci == rows - 1:
                best = dist[c]
                break
            for k in range(6):
                ni = ci + _DI[k]
                nj = cj + _DJ[k]
                if 0 <= ni < rows and 0 <= nj < cols:
                    nc = ni * cols + nj
                    if col[nc] == 1 and dist[nc] == 0:
                        dist[nc] = dist[c] + 1
                        queue[tail] = nc
                        tail += 1
        out[s] = best


# ---------------------------------------------------------------------------
# sampling

DEFAULT_CHUNK = 4096


def completion_colors(position, seed: int, index0: int, count: int) -> np.ndarray:
    """Colors of samples index0..index0+count-1, shape (count, n) int8.

    Row i reproduces games.sample_completion(position, seed, index0+i) exactly.
    """
    n = position.spec.n
    u = rng.uniform_matrix(seed, rng.STREAM_COMPLETION, index0, count, n)
    colors = np.where(u < float(position.p), 1, -1).astype(np.int8)
    if position.t1:
        colors[:, sorted(position.t1)] = 1
    if position.t2:
        colors[:, sorted(position.t2)] = -1
    return colors


def pivotal_counts_mc(position, seed: int, N: int, chunk: int = DEFAULT_CHUNK,
                      threads: int = 1):
    """Monte Carlo pivotality counts over N completions of a hex position.

    Returns (counts, black_wins): counts[c] = number of samples in which c was
    pivotal, black_wins = number of samples player I's crossing was present.
    Integer counts are summed per chunk, so the result is independent of both
    the chunk size and the thread count.
    """
    board = position.spec.board
    if board.kind != "hex":
        raise UnsupportedGameError("batched pivotality runs on hex boards only")
    n = board.n
    spans = []
    done = 0
    while done < N:
        take = min(chunk, N - done)
        spans.append((done, take))
        done += take

    def one_chunk(span):
        start, take = span
        colors = completion_colors(position, seed, start, take)
        local = np.zeros(n, dtype=np.int64)
        winners = np.zeros(take, dtype=np.int8)
        _hex_batch(colors, board.rows, board.cols, local, winners)
        return local, int(winners.sum())

    counts = np.zeros(n, dtype=np.int64)
    black = 0
    if threads <= 1 or len(spans) <= 1:
        results = map(one_chunk, spans)
    else:
        pool = ThreadPoolExecutor(max_workers=threads)
        results = pool.map(one_chunk, spans)
    for local, wins in results:
        counts += local
        black += wins
    if threads > 1 and len(spans) > 1:
        pool.shutdown()
    return counts, black


def crossing_probability_mc(board: BoardGraph, p, N: int, seed: int,
                            chunk: int = DEFAULT_CHUNK):
    """Estimate the probability of a player-I crossing with iid p-colors.

    Returns (estimate, stderr) with stderr = sqrt(est*(1-est)/N).
    """
    from .games import GameSpec, make_position

    if board.kind == "hex":
        spec = GameSpec(board, "hex-crossing", (), monotone=True, win_or_lose=True)
        position = make_position(spec, p=p)
        wins = 0
        done = 0
        while done < N:
            take = min(chunk, N - done)
            colors = completion_colors(position, seed, done, take)
            winners = np.zeros(take, dtype=np.int8)
            _hex_winners(colors, board.rows, board.cols, winners)
            wins += int(winners.sum())
            done += take
    elif board.kind == "bridgit":
        wins = 0
        for i in range(N):
            u = rng.uniform_block(seed, rng.STREAM_COMPLETION, i, board.n)
            edges = [e for e in range(board.n) if u[e] < float(p)]
            if _bridgit_connected(board, set(edges)):
                wins += 1
    else:
        raise UnsupportedGameError(f"no crossing defined for board kind {board.kind!r}")
    est = wins / N
    stderr = float(np.sqrt(est * (1.0 - est) / N))
    return est, stderr


def shortest_crossing_mc(board: BoardGraph, p, N: int, seed: int,
                         chunk: int = DEFAULT_CHUNK):
    """Mean shortest black-crossing length over samples where black crosses."""
    from .games import GameSpec, make_position

    if board.kind != "hex":
        raise UnsupportedGameError("shortest-crossing sampling runs on hex boards only")
    spec = GameSpec(board, "hex-crossing", (), monotone=True, win_or_lose=True)
    position = make_position(spec, p=p)
    total = 0
    crossed = 0
    done = 0
    while done < N:
        take = min(chunk, N - done)
        colors = completion_colors(position, seed, done, take)
        out = np.zeros(take, dtype=np.int64)
        _hex_shortest(colors, board.rows, board.cols, out)
        total += int(out.sum())
        crossed += int((out > 0).sum())
        done += take
    return (total / crossed if crossed else float("nan")), crossed


# ---------------------------------------------------------------------------
# single-configuration crossings and pivotal sites


def _hex_side_reach(board: BoardGraph, colors, want: int, group: str) -> set[int]:
    sources = [c for c in board.terminals[group] if colors[c] == want]
    seen = set(sources)
    queue = deque(sources)
    while queue:
        c = queue.popleft()
        for b in board.adjacency[c]:
            if b not in seen and colors[b] == want:
                seen.add(b)
                queue.append(b)
    return seen


def _hex_shortest_path_len(board: BoardGraph, colors, want: int,
                           from_group: str, to_group: str) -> int:
    targets = board.terminals[to_group]
    dist = {c: 1 for c in board.terminals[from_group] if colors[c] == want}
    queue = deque(dist)
    while queue:
        c = queue.popleft()
        if c in targets:
            return dist[c]
        for b in board.adjacency[c]:
            if b not in dist and colors[b] == want:
                dist[b] = dist[c] + 1
                queue.append(b)
    return 0


def _bridgit_connected(board: BoardGraph, edges: set[int]) -> bool:
    bond = board.bond
    parent = list(range(bond.num_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in edges:
        u, v = bond.edges[e]
        parent[find(u)] = find(v)
    return find(bond.vertex_left) == find(bond.vertex_right)


def _vertex_reach(num_vertices, edge_pairs, edges, start: int) -> set[int]:
    incident: dict[int, list[int]] = {}
    for e in edges:
        u, v = edge_pairs[e]
        incident.setdefault(u, []).append(v)
        incident.setdefault(v, []).append(u)
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for y in incident.get(x, ()):
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def _vertex_shortest(num_vertices, edge_pairs, edges, start: int, goal: int) -> int:
    incident: dict[int, list[int]] = {}
    for e in edges:
        u, v = edge_pairs[e]
        incident.setdefault(u, []).append(v)
        incident.setdefault(v, []).append(u)
    dist = {start: 0}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        if x == goal:
            return dist[x]
        for y in incident.get(x, ()):
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    return 0


def has_crossing(board: BoardGraph, configuration) -> CrossingResult:
    """Winner of a full configuration and the length of the winning crossing.

    Exactly one side crosses (hex determinacy / bridgit planar duality), so an
    absent black crossing means the white one is present, and vice versa.
    """
    colors = _colors_of(configuration)
    if board.kind == "hex":
        reach = _hex_side_reach(board, colors, 1, "black-left")
        if reach & board.terminals["black-right"]:
            return CrossingResult("I", _hex_shortest_path_len(
                board, colors, 1, "black-left", "black-right"))
        return CrossingResult("II", _hex_shortest_path_len(
            board, colors, -1, "white-top", "white-bottom"))
    if board.kind == "bridgit":
        bond = board.bond
        short_edges = [e for e in range(board.n) if colors[e] == 1]
        cut_edges = [e for e in range(board.n) if colors[e] == -1]
        if _bridgit_connected(board, set(short_edges)):
            return CrossingResult("I", _vertex_shortest(
                bond.num_vertices, bond.edges, short_edges,
                bond.vertex_left, bond.vertex_right))
        return CrossingResult("II", _vertex_shortest(
            bond.num_dual_vertices, bond.dual_edges, cut_edges,
            bond.dual_top, bond.dual_bottom))
    raise UnsupportedGameError(f"no crossing defined for board kind {board.kind!r}")


def pivotal_sites(board: BoardGraph, configuration) -> frozenset[int]:
    """Pivotal sites of a full configuration, by the duality characterization."""
    colors = _colors_of(configuration)
    if board.kind == "hex":
        rows, cols = board.rows, board.cols
        reach_l = _hex_side_reach(board, colors, 1, "black-left")
        if reach_l & board.terminals["black-right"]:
            wt = _hex_side_reach(board, colors, -1, "white-top")
            wb = _hex_side_reach(board, colors, -1, "white-bottom")
            out = set()
            for c in range(board.n):
                if colors[c] != 1:
                    continue
                ok_t = c % cols == 0 or any(b in wt for b in board.adjacency[c])
                ok_b = c % cols == cols - 1 or any(b in wb for b in board.adjacency[c])
                if ok_t and ok_b:
                    out.add(c)
            return frozenset(out)
        reach_r = _hex_side_reach(board, colors, 1, "black-right")
        out = set()
        for c in range(board.n):
            if colors[c] != -1:
                continue
            ok_l = c // cols == 0 or any(b in reach_l for b in board.adjacency[c])
            ok_r = c // cols == rows - 1 or any(b in reach_r for b in board.adjacency[c])
            if ok_l and ok_r:
                out.add(c)
        return frozenset(out)
    if board.kind == "bridgit":
        bond = board.bond
        short_edges = [e for e in range(board.n) if colors[e] == 1]
        cut_edges = [e for e in range(board.n) if colors[e] == -1]
        if _bridgit_connected(board, set(short_edges)):
            dt = _vertex_reach(bond.num_dual_vertices, bond.dual_edges, cut_edges,
                               bond.dual_top)
            db = _vertex_reach(bond.num_dual_vertices, bond.dual_edges, cut_edges,
                               bond.dual_bottom)
            out = set()
            for e in short_edges:
                a, b = bond.dual_edges[e]
                if (a in dt and b in db) or (b in dt and a in db):
                    out.add(e)
            return frozenset(out)
        pl = _vertex_reach(bond.num_vertices, bond.edges, short_edges, bond.vertex_left)
        pr = _vertex_reach(bond.num_vertices, bond.edges, short_edges, bond.vertex_right)
        out = set()
        for e in cut_edges:
            u, v = bond.edges[e]
            if (u in pl and v in pr) or (v in pl and u in pr):
                out.add(e)
        return frozenset(out)
    raise UnsupportedGameError(f"pivotal sites undefined for board kind {board.kind!r}")


def pivotal_sites_oracle(board: BoardGraph, configuration) -> frozenset[int]:
    """Flip every site in turn and recompute the winner.  Slow but unarguable."""
    colors = _colors_of(configuration)
    if board.kind == "hex":
        def wins(cols_arr):
            reach = _hex_side_reach(board, cols_arr, 1, "black-left")
            return bool(reach & board.terminals["black-right"])
    elif board.kind == "bridgit":
        def wins(cols_arr):
            return _bridgit_connected(
                board, {e for e in range(board.n) if cols_arr[e] == 1})
    else:
        raise UnsupportedGameError(
            f"pivotal sites undefined for board kind {board.kind!r}")
    base = wins(colors)
    out = set()
    for c in range(board.n):
        flipped = colors.copy()
        flipped[c] = -flipped[c]
        if wins(flipped) != base:
            out.add(c)
    return frozenset(out)

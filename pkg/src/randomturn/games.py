"""Game specifications, payoffs, and positions.

A selection game is a ground set of items plus a payoff function f on
subsets: player I collects s1, player II the rest, and I receives f(s1).
Payoffs here cover the crossing games (hex, bridgit), tree games (and-or,
recursive majority, switching), tic-tac-toe rows, arbitrary payoff tables,
and the surround scoring game.

Positions are immutable; apply_move returns a new position.  Precolored
cells are folded into t1/t2 at construction and every payoff call checks
consistency with the precoloring.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from .boards import BoardGraph, bridgit_board, generic_board, grid3x3_board, hex_board, tree_board
from .errors import CapacityError, GameOverError, IllegalMoveError, UnsupportedGameError
from . import rng

PLAYER_I = "I"
PLAYER_II = "II"
UNDETERMINED = "undetermined"

TTT_LINES = (
    (0, 1, 2), (3, 4, 5), (6, 7, 8),
    (0, 3, 6), (1, 4, 7), (2, 5, 8),
    (0, 4, 8), (2, 4, 6),
)

TABLE_LIMIT = 20


@dataclass(frozen=True, eq=False)
class GameSpec:
    board: BoardGraph
    payoff_kind: str
    precolored: tuple[tuple[int, str], ...] = ()
    monotone: bool = False
    win_or_lose: bool = False
    table: tuple | None = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return self.board.n

    def precolored_sets(self) -> tuple[frozenset[int], frozenset[int]]:
        one = frozenset(c for c, side in self.precolored if side == PLAYER_I)
        two = frozenset(c for c, side in self.precolored if side == PLAYER_II)
        return one, two

    def undecided(self, t1: frozenset[int], t2: frozenset[int]) -> frozenset[int]:
        return frozenset(range(self.n)) - t1 - t2


@dataclass(frozen=True)
class GamePosition:
    spec: GameSpec
    t1: frozenset[int]
    t2: frozenset[int]
    p: Fraction | float = Fraction(1, 2)
    turn_mode: str = "iid-coin"

    @property
    def undecided(self) -> frozenset[int]:
        return frozenset(range(self.spec.n)) - self.t1 - self.t2


@dataclass(frozen=True)
class Outcome:
    winner: str
    value: float | Fraction | int | None = None
    determined_at_turn: int | None = None


@dataclass
class Configuration:
    board: BoardGraph
    colors: np.ndarray  # int8, +1 for player I / black, -1 for player II / white

    def as_list(self) -> list[int]:
        return [int(c) for c in self.colors]


# ---------------------------------------------------------------------------
# spec factories


def hex_spec(L: int | None = None, r: float = 1, rows: int | None = None,
             cols: int | None = None, precolored=()) -> GameSpec:
    if L is not None:
        board = hex_board(L, int(round(r * L)))
    else:
        board = hex_board(rows, cols)
    return GameSpec(board, "hex-crossing", tuple(precolored), monotone=True, win_or_lose=True)


def bridgit_spec(L: int, precolored=()) -> GameSpec:
    return GameSpec(bridgit_board(L), "switching", tuple(precolored),
                    monotone=True, win_or_lose=True)


def switching_spec(b: int = 3, h: int = 1, profile=None, precolored=()) -> GameSpec:
    if profile is None:
        profile = [b] * h
    board = tree_board(profile, items="edges")
    return GameSpec(board, "switching", tuple(precolored), monotone=True, win_or_lose=True)


def andor_spec(h: int, precolored=()) -> GameSpec:
    board = tree_board([2] * h, items="leaves")
    return GameSpec(board, "andor", tuple(precolored), monotone=True, win_or_lose=True)


def recursive_majority_spec(h: int, precolored=()) -> GameSpec:
    board = tree_board([3] * h, items="leaves")
    return GameSpec(board, "recursive-majority", tuple(precolored),
                    monotone=True, win_or_lose=True)


def tictactoe_spec() -> GameSpec:
    return GameSpec(grid3x3_board(), "tictactoe-rows", (), monotone=False, win_or_lose=False)


def surround_spec(rows: int, cols: int | None = None) -> GameSpec:
    return GameSpec(hex_board(rows, cols), "surround", (), monotone=False, win_or_lose=False)


def team_captains_spec(table) -> GameSpec:
    table = tuple(table)
    n = len(table).bit_length() - 1
    if len(table) != 1 << n:
        raise ValueError(f"payoff table must have power-of-two length, got {len(table)}")
    if n > TABLE_LIMIT:
        raise CapacityError(f"team-captains table limited to n <= {TABLE_LIMIT}, got n={n}")
    return GameSpec(generic_board(n), "team-captains", (), monotone=False,
                    win_or_lose=False, table=table)


def random_team_captains_spec(n: int, seed: int) -> GameSpec:
    """Payoff table of random dyadic rationals: generic with probability one,
    and exact under Fraction arithmetic."""
    table = tuple(
        Fraction(rng.key(seed, rng.STREAM_TABLE, mask) >> 11, 1 << 53)
        for mask in range(1 << n)
    )
    return team_captains_spec(table)


def dictator_spec() -> GameSpec:
    return team_captains_spec((-1, 1))


# ---------------------------------------------------------------------------
# payoff evaluation


def _check_s1(spec: GameSpec, s1: frozenset[int]) -> None:
    for c in s1:
        if not (0 <= c < spec.n):
            raise ValueError(f"item {c} outside ground set of size {spec.n}")
    pre1, pre2 = spec.precolored_sets()
    if not pre1 <= s1 or s1 & pre2:
        raise ValueError("s1 contradicts the precoloring")


def _bfs_reach(adjacency, sources, allowed) -> set[int]:
    seen = set(s for s in sources if s in allowed)
    queue = deque(seen)
    while queue:
        c = queue.popleft()
        for b in adjacency[c]:
            if b in allowed and b not in seen:
                seen.add(b)
                queue.append(b)
    return seen


def has_black_crossing(board: BoardGraph, s1) -> bool:
    s1 = set(s1)
    reach = _bfs_reach(board.adjacency, board.terminals["black-left"], s1)
    return bool(reach & board.terminals["black-right"])


def _bond_connected(board: BoardGraph, edges) -> bool:
    """True when player I's edges join the two distinguished vertices (bridgit)."""
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


def _tree_short_connected(board: BoardGraph, edges) -> bool:
    """True when the shorted edges join the root to some leaf."""
    tree = board.tree
    edges = set(edges)
    leaf_set = set(tree.leaves)
    stack = [0]
    while stack:
        node = stack.pop()
        if node in leaf_set:
            return True
        for child in tree.children[node]:
            if child - 1 in edges:
                stack.append(child)
    return False


def _andor_eval(tree, leaf_values) -> int:
    """Evaluate alternating AND (even depth) / OR (odd depth) over +/-1 leaves."""
    values = [0] * tree.num_nodes
    for i, leaf in enumerate(tree.leaves):
        values[leaf] = leaf_values[i]
    for node in range(tree.num_nodes - 1, -1, -1):
        if tree.children[node]:
            kids = [values[c] for c in tree.children[node]]
            values[node] = min(kids) if tree.depth[node] % 2 == 0 else max(kids)
    return values[0]


def _majority_eval(tree, leaf_values) -> int:
    values = [0] * tree.num_nodes
    for i, leaf in enumerate(tree.leaves):
        values[leaf] = leaf_values[i]
    for node in range(tree.num_nodes - 1, -1, -1):
        if tree.children[node]:
            s = sum(values[c] for c in tree.children[node])
            values[node] = 1 if s > 0 else -1
    return values[0]


def payoff(spec: GameSpec, s1) -> float | Fraction | int:
    """f(s1): player I's payoff when she ends up with exactly the items s1."""
    s1 = frozenset(s1)
    _check_s1(spec, s1)
    kind = spec.payoff_kind
    if kind == "hex-crossing":
        return 1 if has_black_crossing(spec.board, s1) else -1
    if kind == "switching":
        if spec.board.kind == "bridgit":
            return 1 if _bond_connected(spec.board, s1) else -1
        return 1 if _tree_short_connected(spec.board, s1) else -1
    if kind == "andor":
        leaf_values = [1 if i in s1 else -1 for i in range(spec.n)]
        return _andor_eval(spec.board.tree, leaf_values)
    if kind == "recursive-majority":
        leaf_values = [1 if i in s1 else -1 for i in range(spec.n)]
        return _majority_eval(spec.board.tree, leaf_values)
    if kind == "tictactoe-rows":
        mine = sum(1 for line in TTT_LINES if all(c in s1 for c in line))
        theirs = sum(1 for line in TTT_LINES if all(c not in s1 for c in line))
        return mine - theirs
    if kind == "team-captains":
        mask = 0
        for c in s1:
            mask |= 1 << c
        return spec.table[mask]
    if kind == "surround":
        colors = np.full(spec.n, -1, dtype=np.int8)
        for c in s1:
            colors[c] = 1
        _, recolored = surround_recolor_arrays(spec.board, colors)
        return int(sum(recolored.values()))
    raise UnsupportedGameError(f"unknown payoff kind {spec.payoff_kind!r}")


# ---------------------------------------------------------------------------
# surround recoloring


def _boundary_cells(board: BoardGraph) -> list[int]:
    rows, cols = board.rows, board.cols
    return [
        c.id for c in board.cells
        if c.coords[0] in (0, rows - 1) or c.coords[1] in (0, cols - 1)
    ]


def surround_recolor_arrays(board: BoardGraph, colors: np.ndarray):
    """Recolor each cell to the outermost monochromatic cluster surrounding it.

    Returns (new_colors, recolored) where recolored maps cell id to the color
    it was changed to.  Cells that keep their color are not reported.
    """
    if board.kind != "hex":
        raise UnsupportedGameError(
            f"surround recoloring needs a hex lattice, got {board.kind!r}")
    n = board.n
    adjacency = board.adjacency
    cluster_of = [-1] * n
    clusters: list[list[int]] = []
    for start in range(n):
        if cluster_of[start] >= 0:
            continue
        cid = len(clusters)
        comp = [start]
        cluster_of[start] = cid
        queue = deque([start])
        col = colors[start]
        while queue:
            c = queue.popleft()
            for b in adjacency[c]:
                if cluster_of[b] < 0 and colors[b] == col:
                    cluster_of[b] = cid
                    comp.append(b)
                    queue.append(b)
        clusters.append(comp)

    boundary = _boundary_cells(board)
    # cells unreachable from the outside once cluster k is forbidden
    trapped_by: list[set[int]] = []
    for k, comp in enumerate(clusters):
        blocked = set(comp)
        seen = set(c for c in boundary if c not in blocked)
        queue = deque(seen)
        while queue:
            c = queue.popleft()
            for b in adjacency[c]:
                if b not in blocked and b not in seen:
                    seen.add(b)
                    queue.append(b)
        trapped_by.append(set(range(n)) - seen - blocked)

    new_colors = colors.copy()
    recolored: dict[int, int] = {}
    for z in range(n):
        surrounding = [k for k in range(len(clusters)) if z in trapped_by[k]]
        if not surrounding:
            continue
        outer = [
            k for k in surrounding
            if not any(clusters[k][0] in trapped_by[j] for j in surrounding if j != k)
        ]
        assert len(outer) == 1, "surrounding clusters must be nested"
        target = int(colors[clusters[outer[0]][0]])
        if target != colors[z]:
            new_colors[z] = target
            recolored[z] = target
    return new_colors, recolored


def surround_recolor(configuration: Configuration) -> Configuration:
    new_colors, _ = surround_recolor_arrays(configuration.board, configuration.colors)
    return Configuration(configuration.board, new_colors)


# ---------------------------------------------------------------------------
# positions and moves


def make_position(spec: GameSpec, t1=(), t2=(), p: Fraction | float = Fraction(1, 2),
                  turn_mode: str = "iid-coin") -> GamePosition:
    pre1, pre2 = spec.precolored_sets()
    t1 = frozenset(t1) | pre1
    t2 = frozenset(t2) | pre2
    if t1 & t2:
        raise ValueError(f"t1 and t2 overlap: {sorted(t1 & t2)}")
    for c in t1 | t2:
        if not (0 <= c < spec.n):
            raise ValueError(f"item {c} outside ground set of size {spec.n}")
    if turn_mode not in ("iid-coin", "balanced-deck"):
        raise ValueError(f"unknown turn mode {turn_mode!r}")
    if not (0 <= p <= 1):
        raise ValueError(f"coin bias must lie in [0, 1], got {p}")
    return GamePosition(spec, t1, t2, p, turn_mode)


def legal_moves(position: GamePosition) -> frozenset[int]:
    return position.undecided


def apply_move(position: GamePosition, cell: int, side: str) -> GamePosition:
    if side not in (PLAYER_I, PLAYER_II):
        raise ValueError(f"side must be 'I' or 'II', got {side!r}")
    if not (0 <= cell < position.spec.n):
        raise IllegalMoveError(f"cell {cell} outside ground set of size {position.spec.n}")
    if cell in position.t1 or cell in position.t2:
        raise IllegalMoveError(f"cell {cell} is already decided")
    if side == PLAYER_I:
        return replace(position, t1=position.t1 | {cell})
    return replace(position, t2=position.t2 | {cell})


def winner_determined(position: GamePosition) -> Outcome:
    """Early-stopping check for monotone win-or-lose games.

    Player I has won iff her current set already pays +1; player II has won
    iff I loses even after taking every undecided item.
    """
    spec = position.spec
    if not (spec.monotone and spec.win_or_lose):
        raise UnsupportedGameError(
            f"winner_determined needs a monotone win-or-lose payoff, not {spec.payoff_kind!r}")
    if payoff(spec, position.t1) == 1:
        return Outcome(PLAYER_I, value=1)
    if payoff(spec, position.t1 | position.undecided) == -1:
        return Outcome(PLAYER_II, value=-1)
    return Outcome(UNDETERMINED)


def sample_completion(position: GamePosition, seed: int, index: int) -> Configuration:
    """Completion of a position: undecided items fall to player I with probability p.

    Sample `index` is addressed directly by (seed, index); chunked batch code
    reproduces the same configuration bit for bit.
    """
    n = position.spec.n
    u = rng.uniform_block(seed, rng.STREAM_COMPLETION, index, n)
    colors = np.where(u < float(position.p), 1, -1).astype(np.int8)
    for c in position.t1:
        colors[c] = 1
    for c in position.t2:
        colors[c] = -1
    return Configuration(position.spec.board, colors)


def flip_pivotal_cells(spec: GameSpec, colors: np.ndarray) -> set[int]:
    """Items whose flip changes the winner, by direct re-evaluation.

    Works for any win-or-lose payoff; this is the slow reference route that
    the structured pivotality computations must agree with.
    """
    if not spec.win_or_lose:
        raise UnsupportedGameError("pivotality is defined for win-or-lose payoffs")
    s1 = frozenset(int(c) for c in np.flatnonzero(colors == 1))
    base = payoff(spec, s1)
    out = set()
    for c in range(spec.n):
        flipped = s1 - {c} if c in s1 else s1 | {c}
        if payoff(spec, flipped) != base:
            out.add(c)
    return out


# ---------------------------------------------------------------------------
# game records


@dataclass
class GameRecord:
    """Transcript of one self-play game: every coin toss, the jointly chosen
    item, the winner, and connectivity statistics of the played set."""

    kind: str
    params: dict
    p: float
    seed: int
    game_index: int
    moves: list
    winner: str
    length: int
    connected_throughout: bool
    disconnected_move_count: int

    def to_json_dict(self) -> dict:
        params = dict(self.params)
        if "L" in params:
            side = params["L"]
        elif params.get("rows") == params.get("cols") and "rows" in params:
            side = params["rows"]
        else:
            side = None
        return {
            "game": self.kind,
            **({"L": side} if side is not None else {}),
            "params": params,
            "p": self.p,
            "seed": self.seed,
            "index": self.game_index,
            "moves": [
                {"turn": t, "coin": coin, "cell": cell}
                for t, coin, cell in self.moves
            ],
            "winner": self.winner,
            "length": self.length,
            "connected_throughout": self.connected_throughout,
            "disconnected_moves": self.disconnected_move_count,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "GameRecord":
        return cls(
            kind=d["game"],
            params=dict(d["params"]),
            p=d["p"],
            seed=d["seed"],
            game_index=d["index"],
            moves=[(m["turn"], m["coin"], m["cell"]) for m in d["moves"]],
            winner=d["winner"],
            length=d["length"],
            connected_throughout=d["connected_throughout"],
            disconnected_move_count=d["disconnected_moves"],
        )


def connectivity_stats(board: BoardGraph, items_in_order) -> tuple[bool, int]:
    """Count moves played away from every previously played item.

    The played set stays connected through a move exactly when the move
    touches it, so zero such moves means connectivity after every turn.
    """
    played: set[int] = set()
    disconnected = 0
    for item in items_in_order:
        if played and not any(nb in played for nb in board.adjacency[item]):
            disconnected += 1
        played.add(item)
    return disconnected == 0, disconnected


def played_set_connected(board: BoardGraph, items) -> bool:
    """Direct connectivity check of an item set under board adjacency; the
    reference route for connectivity_stats."""
    items = set(items)
    if not items:
        return True
    start = next(iter(items))
    seen = {start}
    stack = [start]
    while stack:
        for nb in board.adjacency[stack.pop()]:
            if nb in items and nb not in seen:
                seen.add(nb)
                stack.append(nb)
    return seen == items


def make_record(spec: GameSpec, p, seed: int, game_index: int, moves,
                winner: str) -> GameRecord:
    moves = [(int(t), coin, int(cell)) for t, coin, cell in moves]
    connected, disconnected = connectivity_stats(
        spec.board, (cell for _, _, cell in moves))
    return GameRecord(
        kind=spec.board.kind,
        params=dict(spec.board.params),
        p=float(p),
        seed=seed,
        game_index=game_index,
        moves=moves,
        winner=winner,
        length=len(moves),
        connected_throughout=connected,
        disconnected_move_count=disconnected,
    )


def replay_winner(spec: GameSpec, record: GameRecord) -> str:
    """Re-apply a record's moves and re-derive the winner from scratch."""
    position = make_position(spec, p=Fraction(record.p) if record.p == 0.5 else record.p)
    for _, coin, cell in record.moves:
        position = apply_move(position, cell, coin)
    outcome = winner_determined(position)
    if outcome.winner != UNDETERMINED:
        return outcome.winner
    raise ValueError("record ends with the winner still undetermined")

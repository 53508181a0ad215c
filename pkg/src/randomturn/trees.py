"""Random-turn games on trees: closed forms and optimal-play simulators.

Covers the alternating AND-OR game on the complete binary tree, recursive
3-majority, and the Shannon switching game (Short vs Cut) on complete b-ary
and enhanced binary trees.  The recursions follow the level structure: an
AND-OR label at an even level is true when both children are true, at an odd
level when either is; a depth h+1 switching tree disconnects when each of
its b root branches is cut or disconnected.

The simulators play provably optimal strategies: the leftmost leaf that can
still be pivotal for AND-OR, and the frontier edge closest to the leaves for
switching.  Both players share these strategies, so each coin toss resolves
who claims the single jointly chosen item.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .boards import TreeStructure, build_tree
from .errors import BoardSizeError, UnsupportedGameError
from . import rng

PSTAR = (3 - math.sqrt(5)) / 2
PHI = (1 + math.sqrt(5)) / 2
Q_LIMIT = math.sqrt(5) - 2


# ---------------------------------------------------------------------------
# AND-OR closed forms


def andor_level_probabilities(h: int, p) -> list:
    """q_k = P(level-k label is true) for k = 0..h, with q_h = p at the leaves."""
    if h < 0:
        raise ValueError("depth must be nonnegative")
    qs = [0] * (h + 1)
    qs[h] = p
    for k in range(h - 1, -1, -1):
        q = qs[k + 1]
        qs[k] = q * q if k % 2 == 0 else 2 * q - q * q
    return qs


def andor_true_probability(h: int, p):
    return andor_level_probabilities(h, p)[0]


def andor_fixed_points() -> tuple[float, float, float]:
    """Fixed points of q -> (2q - q^2)^2 in [0, 1]: roots of q(q-1)(q^2-3q+1)."""
    return (0.0, PSTAR, 1.0)


def andor_expected_length(h: int) -> float:
    """Expected optimal game length at the critical bias: phi^h.  Even h only,
    since the critical bias is a fixed point of the two-level recursion."""
    if h % 2 != 0:
        raise ValueError(f"even depth required, got h={h}")
    return PHI**h


# ---------------------------------------------------------------------------
# recursive majority closed forms


def majority_level_probabilities(h: int, p) -> list:
    """P(node label is +1) per level for recursive 3-majority, root first."""
    qs = [0] * (h + 1)
    qs[h] = p
    for k in range(h - 1, -1, -1):
        q = qs[k + 1]
        qs[k] = q * q * q + 3 * q * q * (1 - q)
    return qs


# ---------------------------------------------------------------------------
# structured pivotality on full configurations


def andor_pivotal_leaves(tree: TreeStructure, leaf_colors) -> set[int]:
    """Leaves whose flip changes the root label.

    A node matters iff its parent matters and every sibling carries the
    non-absorbing value: true siblings under AND, false siblings under OR.
    """
    values = [0] * tree.num_nodes
    for i, leaf in enumerate(tree.leaves):
        values[leaf] = int(leaf_colors[i])
    for node in range(tree.num_nodes - 1, -1, -1):
        kids = tree.children[node]
        if kids:
            vals = [values[c] for c in kids]
            values[node] = min(vals) if tree.depth[node] % 2 == 0 else max(vals)
    matters = [False] * tree.num_nodes
    matters[0] = True
    for node in range(1, tree.num_nodes):
        parent = tree.parent[node]
        if not matters[parent]:
            continue
        need = 1 if tree.depth[parent] % 2 == 0 else -1
        matters[node] = all(
            values[s] == need for s in tree.children[parent] if s != node)
    return {i for i, leaf in enumerate(tree.leaves) if matters[leaf]}


def majority_pivotal_leaves(tree: TreeStructure, leaf_colors) -> set[int]:
    """Leaves whose flip changes the root majority: every ancestor's other
    two children must split one against one."""
    values = [0] * tree.num_nodes
    for i, leaf in enumerate(tree.leaves):
        values[leaf] = int(leaf_colors[i])
    for node in range(tree.num_nodes - 1, -1, -1):
        kids = tree.children[node]
        if kids:
            values[node] = 1 if sum(values[c] for c in kids) > 0 else -1
    matters = [False] * tree.num_nodes
    matters[0] = True
    for node in range(1, tree.num_nodes):
        parent = tree.parent[node]
        if matters[parent]:
            matters[node] = sum(
                values[s] for s in tree.children[parent] if s != node) == 0
    return {i for i, leaf in enumerate(tree.leaves) if matters[leaf]}


def switching_pivotal_edges(tree: TreeStructure, edge_colors) -> set[int]:
    """Edges whose flip changes whether the root reaches a leaf over open edges.

    Edge e = (x, child y) is pivotal iff y reaches a leaf below over open
    edges, the path from the root to x is fully open, and no branch hanging
    off that path (nor off x except through e) reaches a leaf.
    """
    num = tree.num_nodes
    down = [False] * num
    for node in range(num - 1, -1, -1):
        kids = tree.children[node]
        down[node] = (not kids) or any(
            edge_colors[c - 1] == 1 and down[c] for c in kids)
    top_ok = [False] * num
    top_ok[0] = True
    out: set[int] = set()
    for x in range(num):
        if not top_ok[x]:
            continue
        for c in tree.children[x]:
            sibling_escape = any(
                s != c and edge_colors[s - 1] == 1 and down[s]
                for s in tree.children[x])
            if down[c] and not sibling_escape:
                out.add(c - 1)
            if edge_colors[c - 1] == 1 and not sibling_escape:
                top_ok[c] = True
    return out


# ---------------------------------------------------------------------------
# optimal AND-OR play


class _AndOrState:
    """Labels plus can-still-be-true/false flags, updated along one root path
    per move."""

    def __init__(self, tree: TreeStructure):
        self.tree = tree
        n = tree.num_nodes
        self.value = [0] * n
        self.can_t = [True] * n
        self.can_f = [True] * n
        self.undecided = [0] * n
        for node in range(n - 1, -1, -1):
            kids = tree.children[node]
            self.undecided[node] = (
                1 if not kids else sum(self.undecided[c] for c in kids))
        self.leaf_index = {leaf: i for i, leaf in enumerate(tree.leaves)}

    def _refresh(self, node: int) -> None:
        kids = self.tree.children[node]
        is_and = self.tree.depth[node] % 2 == 0
        can = [(self.value[c] == 1 or (self.value[c] == 0 and self.can_t[c]),
                self.value[c] == -1 or (self.value[c] == 0 and self.can_f[c]))
               for c in kids]
        if is_and:
            self.can_t[node] = all(t for t, _ in can)
            self.can_f[node] = any(f for _, f in can)
            if all(self.value[c] == 1 for c in kids):
                self.value[node] = 1
            elif any(self.value[c] == -1 for c in kids):
                self.value[node] = -1
        else:
            self.can_t[node] = any(t for t, _ in can)
            self.can_f[node] = all(f for _, f in can)
            if any(self.value[c] == 1 for c in kids):
                self.value[node] = 1
            elif all(self.value[c] == -1 for c in kids):
                self.value[node] = -1

    def play(self, leaf_node: int, color: int) -> None:
        self.value[leaf_node] = color
        node = leaf_node
        while node >= 0:
            self.undecided[node] -= 1
            if self.tree.children[node]:
                self._refresh(node)
            node = self.tree.parent[node]

    def _can_be(self, node: int, want: int) -> bool:
        if self.value[node] != 0:
            return self.value[node] == want
        return self.can_t[node] if want == 1 else self.can_f[node]

    def leftmost_pivotal_possible(self, node: int = 0) -> int:
        """Leftmost undecided leaf with positive probability to be pivotal,
        or -1 when the subtree has none."""
        kids = self.tree.children[node]
        if not kids:
            return node if self.value[node] == 0 else -1
        need = 1 if self.tree.depth[node] % 2 == 0 else -1
        for c in kids:
            if self.undecided[c] == 0:
                continue
            if all(self._can_be(s, need) for s in kids if s != c):
                found = self.leftmost_pivotal_possible(c)
                if found >= 0:
                    return found
        return -1


def simulate_andor_game(tree: TreeStructure, p: float, seed: int, index: int):
    """One optimal-play AND-OR game.  Returns (moves, winner) where moves is
    a list of (turn, coin, leaf_item) and winner is "I" or "II"."""
    state = _AndOrState(tree)
    moves = []
    turn = 0
    while state.value[0] == 0:
        turn += 1
        coin_i = rng.uniform(seed, rng.STREAM_TREE, index, turn) < p
        leaf = state.leftmost_pivotal_possible()
        if leaf < 0:
            raise RuntimeError("undetermined root but no playable leaf")
        state.play(leaf, 1 if coin_i else -1)
        moves.append((turn, "I" if coin_i else "II", state.leaf_index[leaf]))
    return moves, ("I" if state.value[0] == 1 else "II")


def check_andor_locality(tree: TreeStructure, moves) -> int:
    """Count locality violations: once play enters the subtree below a node,
    every move up to the node's determination must stay inside that subtree."""
    leaf_of_item = {i: leaf for i, leaf in enumerate(tree.leaves)}
    values = [0] * tree.num_nodes
    determined_at: list[int | None] = [None] * tree.num_nodes
    below_times: list[list[int]] = [[] for _ in range(tree.num_nodes)]
    for t, (_, coin, item) in enumerate(moves, start=1):
        leaf = leaf_of_item[item]
        values[leaf] = 1 if coin == "I" else -1
        node = leaf
        while node >= 0:
            below_times[node].append(t)
            if determined_at[node] is None:
                kids = tree.children[node]
                if kids:
                    vals = [values[c] for c in kids]
                    agg = min(vals) if tree.depth[node] % 2 == 0 else max(vals)
                else:
                    agg = values[node]
                if agg != 0:
                    values[node] = agg
                    determined_at[node] = t
            node = tree.parent[node]
    violations = 0
    for node in range(tree.num_nodes):
        times = below_times[node]
        if not times:
            continue
        # play must stay below the node from first entry until the node is
        # determined; a game-ending move inside the subtree always determines
        # it, so an undetermined node binds until the final move
        t_end = determined_at[node] if determined_at[node] is not None else len(moves)
        violations += len(set(range(times[0], t_end + 1)) - set(times))
    return violations


# ---------------------------------------------------------------------------
# optimal switching play


def edge_depth_below(tree: TreeStructure) -> list[int]:
    """Edges from each edge's lower endpoint down to the nearest leaf."""
    depth = [0] * tree.num_edges
    for e in range(tree.num_edges - 1, -1, -1):
        child = e + 1
        kids = tree.children[child]
        depth[e] = 0 if not kids else 1 + min(depth[c - 1] for c in kids)
    return depth


def simulate_switching_game(tree: TreeStructure, p: float, seed: int, index: int,
                            depth_below: list[int] | None = None):
    """One optimal-play switching game.  Returns (moves, winner).

    The jointly optimal move is always a frontier edge (adjacent to the
    contracted root) whose subtree is closest to the leaves; a won toss
    shorts it and exposes its children, a lost toss cuts its whole branch.
    """
    if depth_below is None:
        depth_below = edge_depth_below(tree)
    frontier = [(depth_below[c - 1], c - 1) for c in tree.children[0]]
    heapq.heapify(frontier)
    moves = []
    turn = 0
    winner = None
    while winner is None:
        if not frontier:
            winner = "II"
            break
        _, e = heapq.heappop(frontier)
        turn += 1
        coin_i = rng.uniform(seed, rng.STREAM_TREE, index, turn) < p
        moves.append((turn, "I" if coin_i else "II", e))
        if coin_i:
            child = e + 1
            if not tree.children[child]:
                winner = "I"
            else:
                for c in tree.children[child]:
                    heapq.heappush(frontier, (depth_below[c - 1], c - 1))
    return moves, winner


def simulate_uniform_switching_game(profile, p: float, seed: int, index: int):
    """Optimal-play switching on the implicit uniform-depth tree where every
    depth-d node has profile[d] children, materializing only the explored
    frontier.  Depths far beyond the node cap stay cheap because the play
    touches O(moves) edges.

    All frontier edges of minimal distance to the leaves are interchangeable
    on a uniform tree, so breaking ties by creation order gives the same
    length and winner distribution as the materialized simulator.

    Returns (moves, winner) with moves carrying the played edge's depth in
    place of an edge id.
    """
    leaf_depth = len(profile)
    frontier = []
    created = itertools.count()
    for _ in range(profile[0] if leaf_depth else 0):
        heapq.heappush(frontier, (leaf_depth - 1, next(created), 1))
    moves = []
    turn = 0
    winner = None
    while winner is None:
        if not frontier:
            winner = "II"
            break
        _, _, depth = heapq.heappop(frontier)
        turn += 1
        coin_i = rng.uniform(seed, rng.STREAM_TREE, index, turn) < p
        moves.append((turn, "I" if coin_i else "II", depth))
        if coin_i:
            if depth == leaf_depth:
                winner = "I"
            else:
                for _ in range(profile[depth]):
                    heapq.heappush(
                        frontier, (leaf_depth - depth - 1, next(created), depth + 1))
    return moves, winner


def mean_uniform_switching_length(profile, p: float, seed: int, games: int):
    """Simulated mean optimal-play length on the implicit uniform-depth tree,
    with the same per-winner breakdown as mean_switching_length."""
    total = 0
    short_wins = 0
    short_len = 0
    cut_len = 0
    for g in range(games):
        moves, winner = simulate_uniform_switching_game(profile, p, seed, g)
        total += len(moves)
        if winner == "I":
            short_wins += 1
            short_len += len(moves)
        else:
            cut_len += len(moves)
    cut_games = games - short_wins
    return (
        total / games,
        short_wins / games,
        short_len / short_wins if short_wins else float("nan"),
        cut_len / cut_games if cut_games else float("nan"),
    )


def simulate_optimal_tree_game(spec, p: float, seed: int, index: int):
    """Optimal self-play on a tree game driven by the structure theorems,
    with no Monte Carlo.  Returns a GameRecord."""
    from . import games

    tree = spec.board.tree
    if spec.payoff_kind == "andor":
        moves, winner = simulate_andor_game(tree, p, seed, index)
    elif spec.payoff_kind == "switching":
        moves, winner = simulate_switching_game(tree, p, seed, index)
    else:
        raise UnsupportedGameError(
            "structure-theorem play covers andor and switching trees, "
            f"not {spec.payoff_kind!r}")
    return games.make_record(spec, p, seed, index, moves, winner)


def check_switching_structure(tree: TreeStructure, moves) -> int:
    """Count structure violations: every played edge must hang off the root
    or off an already shorted edge, so Short's set stays connected through
    the root and Cut only ever severs exposed branches."""
    shorted = set()
    violations = 0
    for _, coin, e in moves:
        parent = tree.edge_parent(e)
        if parent != 0 and (parent - 1) not in shorted:
            violations += 1
        if coin == "I":
            shorted.add(e)
    return violations


# ---------------------------------------------------------------------------
# switching series and win probabilities


@dataclass
class RecursionSeries:
    """Cut-win probabilities and conditional length series for b-ary trees.

    q, mu, nu are floats for every depth 0..h; the *_exact lists carry the
    same recursions in Fractions but stop early because the denominators
    cube at every level (q_20 alone would need billions of bits).
    """

    b: int
    q: list[float]
    mu: list[float] | None
    nu: list[float] | None
    q_exact: list[Fraction]
    mu_exact: list[Fraction] | None
    nu_exact: list[Fraction] | None

    @property
    def win_prob(self) -> list[float]:
        return [1 - qh for qh in self.q]

    @property
    def limit(self) -> float:
        return Q_LIMIT


def _series_step(b: int, q, mu, nu) -> None:
    qh = q[-1]
    one = qh * 0 + 1
    q.append(((one + qh) / 2) ** b)
    if b == 3:
        mu.append(3 * one + 3 * qh / (1 + qh) * mu[-1])
        nu.append(
            nu[-1]
            + (1 + qh + qh**2 - 3 * qh**3) / (1 - qh**3)
            + (qh + qh**2 - 2 * qh**3) / (1 - qh**3) * mu[-1])


def switching_series(b: int = 3, h: int = 20, exact_until: int = 10) -> RecursionSeries:
    """Cut-win probabilities q_0..q_h and, for the ternary tree, the printed
    conditional length series mu (Cut wins) and nu (Short wins)."""
    if h < 0:
        raise ValueError("depth must be nonnegative")
    q: list = [0.0]
    mu: list = [0.0]
    nu: list = [0.0]
    qx: list = [Fraction(0)]
    mux: list = [Fraction(0)]
    nux: list = [Fraction(0)]
    for k in range(h):
        _series_step(b, q, mu, nu)
        if k < exact_until:
            _series_step(b, qx, mux, nux)
    if b != 3:
        return RecursionSeries(b, q, None, None, qx, None, None)
    return RecursionSeries(b, q, mu, nu, qx, mux, nux)


def switching_win_probability(tree: TreeStructure, p=Fraction(1, 2)):
    """P(root connects to some leaf when each edge is open with probability p).

    Independent of the series recursion: a straight DP over the given tree,
    so it also covers enhanced and irregular shapes.
    """
    disconnect = [None] * tree.num_nodes
    for node in range(tree.num_nodes - 1, -1, -1):
        kids = tree.children[node]
        if not kids:
            disconnect[node] = 0 * p
        else:
            acc = 1 + 0 * p
            for c in kids:
                acc = acc * ((1 - p) + p * disconnect[c])
            disconnect[node] = acc
    return 1 - disconnect[0]


def switching_win_probability_profile(profile, p=Fraction(1, 2)):
    """Root-to-leaf connection probability for the uniform-depth tree with
    profile[d] children per depth-d node, one DP value per level, so depths
    far beyond any materializable tree stay exact."""
    disconnect = 0 * p
    for b in reversed(list(profile)):
        disconnect = ((1 - p) + p * disconnect) ** b
    return 1 - disconnect


def enhanced_binary_tree(h: int, log_base: float = math.e) -> TreeStructure:
    """Root with floor(h*log(2)/2) children, each a complete binary tree of
    depth h-1.  The log is natural by default; pass log_base=2 for the
    alternative reading."""
    k = math.floor(h * math.log(2, log_base) / 2)
    if k < 1:
        raise BoardSizeError(f"enhanced tree needs h >= 3, got h={h} (root degree {k})")
    return build_tree([k] + [2] * (h - 1))


def complete_tree(b: int, h: int) -> TreeStructure:
    return build_tree([b] * h)


def binary_switching_win_probability(h: int) -> float:
    """Short-win probability on the complete binary tree of depth h, via the
    level recursion alone so arbitrarily deep trees stay cheap."""
    return 1.0 - switching_series(2, h, exact_until=0).q[h]


def enhanced_binary_win_probability(h: int, log_base: float = math.e) -> float:
    """Short-win probability on the enhanced binary tree: the root's
    floor(h*log(2)/2) branches must all be cut or disconnected."""
    k = math.floor(h * math.log(2, log_base) / 2)
    if k < 1:
        raise BoardSizeError(f"enhanced tree needs h >= 3, got h={h} (root degree {k})")
    q_sub = switching_series(2, h - 1, exact_until=0).q[h - 1]
    return 1.0 - ((1 + q_sub) / 2) ** k


def mean_switching_length(tree: TreeStructure, p: float, seed: int, games: int):
    """Simulated mean optimal-play length with per-winner breakdown.

    Returns (mean, short_win_rate, mean_given_short, mean_given_cut).
    """
    depth_below = edge_depth_below(tree)
    total = 0
    short_wins = 0
    short_len = 0
    cut_len = 0
    for g in range(games):
        moves, winner = simulate_switching_game(tree, p, seed, g, depth_below)
        total += len(moves)
        if winner == "I":
            short_wins += 1
            short_len += len(moves)
        else:
            cut_len += len(moves)
    cut_games = games - short_wins
    return (
        total / games,
        short_wins / games,
        short_len / short_wins if short_wins else float("nan"),
        cut_len / cut_games if cut_games else float("nan"),
    )

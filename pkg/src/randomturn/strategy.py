"""Monte-Carlo pivotality strategy and self-play orchestration.

A move is chosen by sampling N completions of the current position and
playing the undecided item most often pivotal, ties to the lowest id.  The
sample budget follows the L^4 eps^-2 log(L^4/eps) bound with the O-constant
fixed to 1 and exposed.  Self-play tosses an index-addressed coin each turn,
asks the winner's strategy for a move, and returns a full GameRecord.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import percolation, rng, trees
from .errors import GameOverError, StrategyFaultError, UnsupportedGameError
from .games import (
    PLAYER_I,
    PLAYER_II,
    UNDETERMINED,
    Configuration,
    GamePosition,
    GameSpec,
    apply_move,
    flip_pivotal_cells,
    make_position,
    make_record,
    payoff,
    winner_determined,
)
from .solver import ValueTable, lowest_id, optimal_moves


def sample_size_for(L: int, epsilon: float, constant: float = 1.0) -> int:
    """Samples per move for an L x L board at accuracy epsilon:
    ceil(constant * L^4 * eps^-2 * ln(L^4/eps)), at least 1."""
    if L < 1:
        raise ValueError(f"board side must be >= 1, got {L}")
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon must lie in (0,1), got {epsilon}")
    raw = constant * L**4 * epsilon**-2 * math.log(L**4 / epsilon)
    return max(1, math.ceil(raw))


@dataclass
class StrategyConfig:
    samples: int | None = None
    epsilon: float | None = None
    p: float = 0.5
    tie_rule: object = field(default=lowest_id, repr=False)
    seed: int = 0
    constant: float = 1.0
    chunk: int = percolation.DEFAULT_CHUNK
    threads: int = 1

    def __post_init__(self):
        if self.samples is None and self.epsilon is None:
            raise ValueError("give either samples or epsilon")
        if self.samples is not None and self.samples < 1:
            raise ValueError(f"samples must be >= 1, got {self.samples}")
        if self.epsilon is not None and not 0 < self.epsilon < 1:
            raise ValueError(f"epsilon must lie in (0,1), got {self.epsilon}")

    def resolve_samples(self, board) -> int:
        if self.samples is not None:
            return self.samples
        if board.kind == "hex":
            side = max(board.rows, board.cols)
            return sample_size_for(side, self.epsilon, self.constant)
        raw = (self.constant * board.n**2 * self.epsilon**-2
               * math.log(board.n**2 / self.epsilon))
        return max(1, math.ceil(raw))


@dataclass
class PivotalEstimate:
    counts: np.ndarray
    samples: int
    cell: int

    def probability(self, cell: int | None = None) -> float:
        return int(self.counts[self.cell if cell is None else cell]) / self.samples


def _pivotal_set_of_sample(spec: GameSpec, colors) -> set[int]:
    kind = spec.payoff_kind
    board = spec.board
    if kind == "switching" and board.kind == "bridgit":
        return set(percolation.pivotal_sites(board, Configuration(board, colors)))
    if kind == "switching":
        return trees.switching_pivotal_edges(board.tree, colors)
    if kind == "andor":
        return trees.andor_pivotal_leaves(board.tree, colors)
    if kind == "recursive-majority":
        return trees.majority_pivotal_leaves(board.tree, colors)
    if spec.monotone and spec.win_or_lose:
        return flip_pivotal_cells(spec, np.asarray(colors))
    raise UnsupportedGameError(
        f"no pivotality route for payoff kind {kind!r}")


def choose_move_mc(position: GamePosition, config: StrategyConfig):
    """Sample completions, count pivotality per cell in one pass per sample,
    and return (argmax undecided cell, PivotalEstimate).  Deterministic given
    (position, config)."""
    undecided = position.undecided
    if not undecided:
        raise GameOverError("no undecided cells to choose from")
    spec = position.spec
    n = spec.n
    samples = config.resolve_samples(spec.board)
    if spec.payoff_kind == "hex-crossing":
        counts, _ = percolation.pivotal_counts_mc(
            position, config.seed, samples, chunk=config.chunk,
            threads=config.threads)
    else:
        counts = np.zeros(n, dtype=np.int64)
        done = 0
        while done < samples:
            take = min(config.chunk, samples - done)
            colors = percolation.completion_colors(position, config.seed, done, take)
            for row in colors:
                for c in _pivotal_set_of_sample(spec, row):
                    counts[c] += 1
            done += take
    best = max(int(counts[c]) for c in undecided)
    ties = [c for c in sorted(undecided) if int(counts[c]) == best]
    cell = config.tie_rule(ties)
    return cell, PivotalEstimate(counts, samples, cell)


def mc_strategy(config: StrategyConfig):
    """Strategy callable (position, move_seed) -> cell around choose_move_mc."""

    def strat(position: GamePosition, move_seed: int) -> int:
        return choose_move_mc(position, replace(config, seed=move_seed))[0]

    return strat


def exact_strategy(tie_rule=lowest_id):
    """Strategy callable playing solver-optimal moves, value tables cached
    per (spec, p).  Ignores the move seed."""
    tables: dict = {}

    def strat(position: GamePosition, move_seed: int) -> int:
        key = (id(position.spec), position.p)
        table = tables.get(key)
        if table is None:
            table = tables[key] = ValueTable(position.spec, position.p)
        moves = optimal_moves(position.spec, position, position.p, table=table)
        return tie_rule(moves.cells)

    return strat


def selfplay(spec: GameSpec, strategy_i, strategy_ii, p=0.5, seed: int = 0,
             stop_early: bool = True, game_index: int = 0):
    """Play one full game and return its GameRecord.

    Each turn's coin is addressed by (seed, game_index, turn); the mover's
    strategy receives a per-move seed derived the same way, so whole
    tournaments are reproducible from one base seed.
    """
    position = make_position(spec, p=p)
    moves = []
    turn = 0
    winner = None
    while True:
        outcome = winner_determined(position)
        if stop_early and outcome.winner != UNDETERMINED:
            winner = outcome.winner
            break
        if not position.undecided:
            winner = PLAYER_I if payoff(spec, position.t1) == 1 else PLAYER_II
            break
        turn += 1
        coin_i = rng.uniform(seed, rng.STREAM_TOSS, game_index, turn) < float(p)
        side = PLAYER_I if coin_i else PLAYER_II
        strat = strategy_i if coin_i else strategy_ii
        move_seed = rng.key(seed, rng.STREAM_PROBE, game_index, turn)
        cell = strat(position, move_seed)
        if cell not in position.undecided:
            raise StrategyFaultError(
                side, f"player {side} returned illegal move {cell!r} at turn {turn}")
        position = apply_move(position, cell, side)
        moves.append((turn, side, cell))
    return make_record(spec, p, seed, game_index, moves, winner)


def selfplay_many(spec: GameSpec, strategy_i, strategy_ii, games: int, p=0.5,
                  seed: int = 0, stop_early: bool = True) -> list:
    return [
        selfplay(spec, strategy_i, strategy_ii, p=p, seed=seed,
                 stop_early=stop_early, game_index=g)
        for g in range(games)
    ]

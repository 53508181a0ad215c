"""Random-turn selection games: exact values, Monte-Carlo strategies, tree
recursions, influence bounds, and a small game server."""

__version__ = "0.1.0"

from .boards import BoardGraph, build_board, bridgit_board, build_tree, hex_board
from .errors import (
    BoardSizeError,
    CapacityError,
    DegenerateFunctionError,
    GameOverError,
    GenericityError,
    IllegalMoveError,
    StrategyFaultError,
    UnsupportedGameError,
)
from .games import (
    Configuration,
    GamePosition,
    GameRecord,
    GameSpec,
    Outcome,
    andor_spec,
    apply_move,
    bridgit_spec,
    dictator_spec,
    hex_spec,
    legal_moves,
    make_position,
    payoff,
    random_team_captains_spec,
    recursive_majority_spec,
    sample_completion,
    surround_spec,
    switching_spec,
    team_captains_spec,
    tictactoe_spec,
    winner_determined,
)
from .solver import (
    MoveSet,
    ValueTable,
    exact_pivotal_probability,
    exact_value,
    exact_value_balanced,
    expected_game_length_exact,
    final_set_distribution,
    optimal_moves,
)
from .strategy import StrategyConfig, choose_move_mc, sample_size_for, selfplay

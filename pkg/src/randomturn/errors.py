"""Exception types shared across the package."""


class BoardSizeError(ValueError):
    """Raised when a board is requested with nonpositive or absurd dimensions."""


class UnsupportedGameError(ValueError):
    """Raised when an operation does not apply to the given payoff kind."""


class IllegalMoveError(ValueError):
    """Raised when a move targets a cell that is already decided or absent."""


class CapacityError(ValueError):
    """Raised when an exact computation would exceed its configured state limit.

    The message always names the limit so callers can tell a capacity refusal
    from a genuine domain error.
    """


class GenericityError(ValueError):
    """Raised when a payoff claimed to be generic produces a tied comparison."""


class StrategyFaultError(RuntimeError):
    """Raised when a strategy callback returns an illegal move.

    Carries the side ("I" or "II") whose strategy faulted.
    """

    def __init__(self, side: str, message: str):
        super().__init__(f"strategy for player {side} faulted: {message}")
        self.side = side


class GameOverError(ValueError):
    """Raised when a move is submitted to a finished game."""


class DegenerateFunctionError(ValueError):
    """Raised when every item has zero influence, so influence-based length
    bounds are undefined."""

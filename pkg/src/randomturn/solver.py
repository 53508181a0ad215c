"""Exact backward induction over selection-game positions.

The value of a position satisfies

    E(t1, t2) = p * max_s E(t1 + s, t2) + (1 - p) * min_s E(t1, t2 + s)

with base case f(t1) once every item is decided.  With rational p and a
rational-valued payoff everything stays in exact Fractions, which is what the
Theorem 1 identities are tested against with zero tolerance.  State space is
3^undecided, so capacities are deliberately small; nothing here quotients
board symmetries.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .errors import CapacityError, GenericityError
from .games import (
    GamePosition,
    GameSpec,
    make_position,
    payoff,
    winner_determined,
    UNDETERMINED,
)

VALUE_LIMIT = 13
PIVOTAL_LIMIT = 25
DISTRIBUTION_LIMIT = 13
BALANCED_LIMIT = 12

HALF = Fraction(1, 2)


def lowest_id(cells):
    return min(cells)


@dataclass
class MoveSet:
    cells: frozenset[int]
    shared: bool


@dataclass
class ValueTable:
    """Memoized position values for one (spec, p) pair."""

    spec: GameSpec
    p: Fraction | float = HALF
    memo: dict = field(default_factory=dict)

    def _key(self, t1: frozenset[int], t2: frozenset[int]) -> int:
        key = 0
        for c in t1:
            key += 3**c
        for c in t2:
            key += 2 * 3**c
        return key

    def value(self, t1: frozenset[int], t2: frozenset[int]):
        key = self._key(t1, t2)
        found = self.memo.get(key)
        if found is not None:
            return found
        undecided = self.spec.undecided(t1, t2)
        if not undecided:
            result = payoff(self.spec, t1)
        elif self.spec.monotone and self.spec.win_or_lose and payoff(self.spec, t1) == 1:
            result = 1
        elif (self.spec.monotone and self.spec.win_or_lose
              and payoff(self.spec, t1 | undecided) == -1):
            result = -1
        else:
            best_i = max(self.value(t1 | {s}, t2) for s in undecided)
            best_ii = min(self.value(t1, t2 | {s}) for s in undecided)
            result = self.p * best_i + (1 - self.p) * best_ii
        self.memo[key] = result
        return result


def _check_capacity(position: GamePosition, limit: int, what: str) -> None:
    k = len(position.undecided)
    if k > limit:
        raise CapacityError(
            f"{what} handles at most {limit} undecided items, got {k}")


def exact_value(spec: GameSpec, position: GamePosition | None = None,
                p: Fraction | float = HALF):
    if position is None:
        position = make_position(spec, p=p)
    _check_capacity(position, VALUE_LIMIT, "exact_value")
    return ValueTable(spec, p).value(position.t1, position.t2)


def optimal_moves(spec: GameSpec, position: GamePosition | None = None,
                  p: Fraction | float = HALF,
                  table: ValueTable | None = None) -> MoveSet:
    """Argmax set of E(t1 + s, t2) over undecided s; Theorem 1 says the same
    set is argmin for player II whenever the payoff is monotone win-or-lose,
    and that is checked rather than assumed."""
    if position is None:
        position = make_position(spec, p=p)
    _check_capacity(position, VALUE_LIMIT, "optimal_moves")
    if table is None:
        table = ValueTable(spec, p)
    undecided = sorted(position.undecided)
    gains = {s: table.value(position.t1 | {s}, position.t2) for s in undecided}
    losses = {s: table.value(position.t1, position.t2 | {s}) for s in undecided}
    best_gain = max(gains.values())
    best_loss = min(losses.values())
    argmax = frozenset(s for s in undecided if gains[s] == best_gain)
    argmin = frozenset(s for s in undecided if losses[s] == best_loss)
    shared = argmax == argmin
    if spec.monotone and spec.win_or_lose:
        assert shared, (
            f"Theorem 1 violated: argmax {sorted(argmax)} != argmin {sorted(argmin)}")
    return MoveSet(argmax, shared)


def exact_pivotal_probability(spec: GameSpec, position: GamePosition | None,
                              cell: int, p: Fraction | float = HALF):
    """P(cell is pivotal for t1 + T) with T a p-biased subset of the other
    undecided cells, by full enumeration."""
    if position is None:
        position = make_position(spec, p=p)
    if cell not in position.undecided:
        raise ValueError(f"cell {cell} is not undecided")
    _check_capacity(position, PIVOTAL_LIMIT, "exact_pivotal_probability")
    others = sorted(position.undecided - {cell})
    total = 0 * p
    for k in range(len(others) + 1):
        weight = p**k * (1 - p) ** (len(others) - k)
        for chosen in combinations(others, k):
            s1 = position.t1 | frozenset(chosen)
            if payoff(spec, s1 | {cell}) != payoff(spec, s1):
                total += weight
    return total


def expected_game_length_exact(spec: GameSpec, p: Fraction | float = HALF,
                               tie_rule=lowest_id):
    """Expected turns until winner_determined under shared optimal play with
    deterministic tie-breaking."""
    position = make_position(spec, p=p)
    _check_capacity(position, VALUE_LIMIT, "expected_game_length_exact")
    table = ValueTable(spec, p)
    memo: dict = {}

    def length(t1: frozenset[int], t2: frozenset[int]):
        key = table._key(t1, t2)
        found = memo.get(key)
        if found is not None:
            return found
        pos = GamePosition(spec, t1, t2, p=p)
        if winner_determined(pos).winner != UNDETERMINED:
            result = 0 * p
        else:
            moves = optimal_moves(spec, pos, p, table=table)
            move = tie_rule(moves.cells)
            result = 1 + p * length(t1 | {move}, t2) + (1 - p) * length(t1, t2 | {move})
        memo[key] = result
        return result

    return length(position.t1, position.t2)


def final_set_distribution(spec: GameSpec, tie_rule=None) -> dict:
    """Distribution of the final t1 over the 2^n fair coin sequences under
    optimal play with no early stopping.

    With tie_rule=None the payoff is required to be generic: any tie in the
    argmax or argmin raises GenericityError.  For generic f the result is
    uniform, the coin-sequence bijection of the uniform-final-set theorem.
    """
    n = spec.n
    if n > DISTRIBUTION_LIMIT:
        raise CapacityError(
            f"final_set_distribution handles at most {DISTRIBUTION_LIMIT} items, got {n}")
    table = ValueTable(spec, HALF)
    out: dict = {}

    def pick(cells: frozenset[int], side: str) -> int:
        if tie_rule is not None:
            return tie_rule(cells)
        if len(cells) != 1:
            raise GenericityError(
                f"payoff is not generic: player {side} has optimal moves {sorted(cells)}")
        return next(iter(cells))

    def walk(t1: frozenset[int], t2: frozenset[int], prob: Fraction) -> None:
        undecided = spec.undecided(t1, t2)
        if not undecided:
            out[t1] = out.get(t1, Fraction(0)) + prob
            return
        gains = {s: table.value(t1 | {s}, t2) for s in undecided}
        losses = {s: table.value(t1, t2 | {s}) for s in undecided}
        best_gain = max(gains.values())
        best_loss = min(losses.values())
        move_i = pick(frozenset(s for s in undecided if gains[s] == best_gain), "I")
        move_ii = pick(frozenset(s for s in undecided if losses[s] == best_loss), "II")
        walk(t1 | {move_i}, t2, prob * HALF)
        walk(t1, t2 | {move_ii}, prob * HALF)

    position = make_position(spec)
    walk(position.t1, position.t2, Fraction(1))
    return out


def exact_value_balanced(spec: GameSpec):
    """Value under the balanced card-deck turn order: a shuffled deck of
    n/2 player-I cards and n/2 player-II cards decides who moves, so the
    final t1 is always an n/2-subset."""
    n = spec.n
    if n % 2 != 0:
        raise ValueError(f"balanced play needs an even ground set, got n={n}")
    if n > BALANCED_LIMIT:
        raise CapacityError(
            f"exact_value_balanced handles at most {BALANCED_LIMIT} items, got n={n}")
    if spec.precolored:
        raise ValueError("balanced play starts from the empty position")
    memo: dict = {}

    def value(t1: frozenset[int], t2: frozenset[int]):
        a = n // 2 - len(t1)
        b = n // 2 - len(t2)
        if a + b == 0:
            return payoff(spec, t1)
        key = 0
        for c in t1:
            key += 3**c
        for c in t2:
            key += 2 * 3**c
        found = memo.get(key)
        if found is not None:
            return found
        undecided = spec.undecided(t1, t2)
        result = 0
        if a:
            result += Fraction(a, a + b) * max(value(t1 | {s}, t2) for s in undecided)
        if b:
            result += Fraction(b, a + b) * min(value(t1, t2 | {s}) for s in undecided)
        memo[key] = result
        return result

    return value(frozenset(), frozenset())


def subset_mean_payoff(spec: GameSpec):
    """Arithmetic mean of f over all 2^n subsets, enumerated directly: the
    independent oracle for the fair-coin Theorem 1 identity."""
    n = spec.n
    if n > PIVOTAL_LIMIT:
        raise CapacityError(f"subset enumeration limited to n <= {PIVOTAL_LIMIT}")
    items = list(range(n))
    total = 0
    for k in range(n + 1):
        for chosen in combinations(items, k):
            total += payoff(spec, frozenset(chosen))
    return Fraction(total, 1 << n) if not isinstance(total, float) else total / (1 << n)


def biased_subset_mean_payoff(spec: GameSpec, p):
    """Sum over subsets of p^|T| (1-p)^(n-|T|) f(T): the biased Theorem 1
    oracle."""
    n = spec.n
    if n > PIVOTAL_LIMIT:
        raise CapacityError(f"subset enumeration limited to n <= {PIVOTAL_LIMIT}")
    items = list(range(n))
    total = 0 * p
    for k in range(n + 1):
        weight = p**k * (1 - p) ** (n - k)
        for chosen in combinations(items, k):
            total += weight * payoff(spec, frozenset(chosen))
    return total

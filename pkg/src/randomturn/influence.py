"""Item influences and the two expected-length lower bounds.

The influence of item i is the probability that flipping x_i changes f when
the items are drawn from the p-biased product measure.  Two routes exist:
full enumeration over 2^n assignments (small n only), and closed-form level
recursions for the tree games at any depth.  The bounds derived from
influences read

    E[turns] >= (sum_i I_i)^2                       (examined-bits chain)
    E[turns] >= Var[f] / max_i (4 p (1-p) I_i)      (query-variance chain)

The 4p(1-p) factor converts a flip probability into the conditional variance
a query of that bit resolves for a +-1-valued f; it is 1 at p = 1/2, where
the second bound is the familiar Var/max I, and it is what makes the bound
exactly phi^h on AND-OR trees at the critical bias.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from . import percolation, rng, trees
from .errors import CapacityError, DegenerateFunctionError
from .games import GameSpec, make_position, payoff
from .solver import PIVOTAL_LIMIT

ENUMERATION_LIMIT = 25
VARIANCE_LIMIT = 13

TREE_KINDS = ("andor", "recursive-majority", "switching")


@dataclass
class InfluenceVector:
    values: list
    p: object
    method: str
    stderr: list | None = None

    @property
    def total(self):
        return sum(self.values)

    @property
    def maximum(self):
        return max(self.values)

    def to_csv_rows(self):
        rows = [("item", "influence", "stderr")]
        for i, v in enumerate(self.values):
            err = "" if self.stderr is None else repr(float(self.stderr[i]))
            rows.append((str(i), repr(float(v)), err))
        return rows


# ---------------------------------------------------------------------------
# exact routes


def influence_enumerated(spec: GameSpec, p=Fraction(1, 2)) -> InfluenceVector:
    """I_i by direct enumeration of all 2^n assignments; exact rationals
    whenever p and the payoff are rational."""
    n = spec.n
    if n > ENUMERATION_LIMIT:
        raise CapacityError(
            f"influence enumeration limited to n <= {ENUMERATION_LIMIT}, got n={n}")
    values = []
    items = list(range(n))
    for i in items:
        others = [j for j in items if j != i]
        acc = 0 * p
        for k in range(len(others) + 1):
            weight = p**k * (1 - p) ** (len(others) - k)
            for chosen in combinations(others, k):
                s1 = frozenset(chosen)
                if payoff(spec, s1 | {i}) != payoff(spec, s1):
                    acc += weight
        values.append(acc)
    return InfluenceVector(values, p, "exact-enumeration")


def _andor_leaf_influence(h: int, p):
    """Flip at a leaf propagates iff every ancestor's sibling subtree carries
    the non-absorbing label: true under AND, false under OR."""
    qs = trees.andor_level_probabilities(h, p)
    acc = 0 * p + 1
    for k in range(h):
        acc *= qs[k + 1] if k % 2 == 0 else 1 - qs[k + 1]
    return acc


def _majority_leaf_influence(h: int, p):
    qs = trees.majority_level_probabilities(h, p)
    acc = 0 * p + 1
    for k in range(h):
        q = qs[k + 1]
        acc *= 2 * q * (1 - q)
    return acc


def _switching_reach_series(b: int, h: int, p) -> list:
    """r_k = P(a height-k subtree root reaches a leaf over open edges)."""
    r = [0 * p + 1]
    for _ in range(h):
        r.append(1 - (1 - p * r[-1]) ** b)
    return r


def _switching_edge_influences(spec: GameSpec, p) -> list:
    tree = spec.board.tree
    h = max(tree.depth)
    bs = {len(tree.children[v]) for v in range(tree.num_nodes) if tree.children[v]}
    if len(bs) != 1:
        raise CapacityError("closed-form switching influence needs a uniform arity")
    b = bs.pop()
    r = _switching_reach_series(b, h, p)
    values = []
    for e in range(tree.num_edges):
        d = tree.depth[e + 1]
        acc = p ** (d - 1) * r[h - d]
        for j in range(1, d + 1):
            acc *= (1 - p * r[h - j]) ** (b - 1)
        values.append(acc)
    return values


def influence_exact(spec: GameSpec, p=Fraction(1, 2)) -> InfluenceVector:
    """Exact influences: level recursions for the tree games at any depth,
    enumeration otherwise."""
    kind = spec.payoff_kind
    if kind in TREE_KINDS and not spec.precolored:
        tree = spec.board.tree
        h = max(tree.depth) if tree.num_nodes > 1 else 0
        if kind == "andor":
            v = _andor_leaf_influence(h, p)
            return InfluenceVector([v] * len(tree.leaves), p, "tree-closed-form")
        if kind == "recursive-majority":
            v = _majority_leaf_influence(h, p)
            return InfluenceVector([v] * len(tree.leaves), p, "tree-closed-form")
        return InfluenceVector(_switching_edge_influences(spec, p), p,
                               "tree-closed-form")
    return influence_enumerated(spec, p)


# ---------------------------------------------------------------------------
# sampled route


def _changed_items(spec: GameSpec, colors) -> set[int]:
    s1 = frozenset(int(c) for c in np.flatnonzero(colors == 1))
    base = payoff(spec, s1)
    out = set()
    for c in range(spec.n):
        flipped = s1 - {c} if c in s1 else s1 | {c}
        if payoff(spec, flipped) != base:
            out.add(c)
    return out


def influence_mc(spec: GameSpec, p, N: int, seed: int) -> InfluenceVector:
    """Flip-test frequencies over N index-addressed p-biased samples."""
    if N < 1:
        raise ValueError(f"need at least one sample, got {N}")
    n = spec.n
    if spec.payoff_kind == "hex-crossing":
        position = make_position(spec, p=p)
        counts, _ = percolation.pivotal_counts_mc(position, seed, N)
    else:
        counts = np.zeros(n, dtype=np.int64)
        for i in range(N):
            u = rng.uniform_block(seed, rng.STREAM_PROBE, i, n)
            colors = np.where(u < float(p), 1, -1).astype(np.int8)
            if spec.payoff_kind == "andor":
                hit = trees.andor_pivotal_leaves(spec.board.tree, colors)
            elif spec.payoff_kind == "recursive-majority":
                hit = trees.majority_pivotal_leaves(spec.board.tree, colors)
            elif spec.payoff_kind == "switching" and spec.board.kind == "tree":
                hit = trees.switching_pivotal_edges(spec.board.tree, colors)
            else:
                hit = _changed_items(spec, colors)
            for c in hit:
                counts[c] += 1
    values = [int(c) / N for c in counts]
    stderr = [math.sqrt(v * (1 - v) / N) for v in values]
    return InfluenceVector(values, p, f"monte-carlo(N={N}, seed={seed})", stderr)


# ---------------------------------------------------------------------------
# moments and bounds


def payoff_mean(spec: GameSpec, p=Fraction(1, 2)):
    """E[f] under the p-biased measure; closed form for trees, enumeration
    otherwise."""
    kind = spec.payoff_kind
    if kind in TREE_KINDS and not spec.precolored:
        tree = spec.board.tree
        h = max(tree.depth) if tree.num_nodes > 1 else 0
        if kind == "andor":
            q = trees.andor_level_probabilities(h, p)[0]
        elif kind == "recursive-majority":
            q = trees.majority_level_probabilities(h, p)[0]
        else:
            q = trees.switching_win_probability(tree, p)
        return 2 * q - 1
    from .solver import biased_subset_mean_payoff

    return biased_subset_mean_payoff(spec, p)


def payoff_variance(spec: GameSpec, p=Fraction(1, 2)):
    """Var[f] under the p-biased measure.  Win-or-lose payoffs use
    1 - (E f)^2; general payoffs are enumerated (n <= 13)."""
    if spec.win_or_lose:
        m = payoff_mean(spec, p)
        return 1 - m * m
    n = spec.n
    if n > VARIANCE_LIMIT:
        raise CapacityError(
            f"exact variance enumeration limited to n <= {VARIANCE_LIMIT}, got n={n}")
    mean = 0 * p
    second = 0 * p
    for k in range(n + 1):
        weight = p**k * (1 - p) ** (n - k)
        for chosen in combinations(range(n), k):
            f = payoff(spec, frozenset(chosen))
            mean += weight * f
            second += weight * f * f
    return second - mean * mean


def os_lower_bound(influences: InfluenceVector):
    """(sum_i I_i)^2, the examined-bits bound."""
    total = influences.total
    return total * total


def osss_lower_bound(spec: GameSpec, influences: InfluenceVector,
                     variance=None):
    """Var[f] over the largest conditional-variance influence 4p(1-p) I_i."""
    if variance is None:
        variance = payoff_variance(spec, influences.p)
    top = influences.maximum
    if top == 0:
        raise DegenerateFunctionError(
            "every item has zero influence; the bound is undefined")
    p = influences.p
    return variance / (4 * p * (1 - p) * top)

"""Crossing detection, pivotality, and the MC estimators, checked against
exhaustive enumeration and the literal flip oracle."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from randomturn import boards, games, percolation, rng
from randomturn.errors import UnsupportedGameError


def _hex_configs(L):
    n = L * L
    for mask in range(2**n):
        yield np.array([1 if mask >> c & 1 else -1 for c in range(n)],
                       dtype=np.int8)


def test_has_crossing_hex2_all_black():
    b = boards.hex_board(2)
    res = percolation.has_crossing(b, np.ones(4, dtype=np.int8))
    assert res.black_crossing and not res.white_crossing
    assert res.shortest_black_crossing_length == 2


def test_hex_determinacy_exhaustive():
    # exactly one of {black row-crossing, white column-crossing} in every
    # configuration, for every board up to 3×3
    for L in (1, 2, 3):
        b = boards.hex_board(L)
        for colors in _hex_configs(L):
            res = percolation.has_crossing(b, colors)
            assert res.black_crossing != res.white_crossing


def test_crossing_matches_payoff_sign():
    spec = games.hex_spec(3)
    for colors in itertools.islice(_hex_configs(3), 0, 512, 7):
        s1 = frozenset(int(c) for c in range(9) if colors[c] == 1)
        res = percolation.has_crossing(spec.board, colors)
        assert (games.payoff(spec, s1) == 1) == res.black_crossing


def test_shortest_crossing_at_least_L():
    b = boards.hex_board(3)
    for colors in _hex_configs(3):
        res = percolation.has_crossing(b, colors)
        if res.black_crossing:
            assert res.shortest_black_crossing_length >= 3


def test_bridgit_l1_single_edge_decides():
    b = boards.bridgit_board(1)
    present = percolation.has_crossing(b, np.array([1], dtype=np.int8))
    absent = percolation.has_crossing(b, np.array([-1], dtype=np.int8))
    assert present.black_crossing and not absent.black_crossing


def test_bridgit_short_win_xor_dual_crossing():
    # planar duality oracle: Short connects the merged sides iff Cut's edges
    # do NOT form a top-bottom path in the dual grid
    for L in (1, 2):
        board = boards.bridgit_board(L)
        bond = board.bond
        for mask in range(2**board.n):
            edges = {e for e in range(board.n) if mask >> e & 1}
            colors = np.array([1 if e in edges else -1 for e in range(board.n)],
                              dtype=np.int8)
            res = percolation.has_crossing(board, colors)
            dual_edges = set(range(board.n)) - edges
            dual_adj = {}
            for e in dual_edges:
                u, v = bond.dual_edges[e]
                dual_adj.setdefault(u, []).append(v)
                dual_adj.setdefault(v, []).append(u)
            seen = {bond.dual_top}
            stack = [bond.dual_top]
            while stack:
                for nb in dual_adj.get(stack.pop(), ()):
                    if nb not in seen:
                        seen.add(nb)
                        stack.append(nb)
            cut_crosses = bond.dual_bottom in seen
            assert res.black_crossing != cut_crosses


def test_pivotal_sites_hex1():
    b = boards.hex_board(1)
    for v in (1, -1):
        assert percolation.pivotal_sites(b, np.array([v], dtype=np.int8)) == {0}


def test_pivotal_sites_match_oracle_exhaustive():
    for L in (1, 2, 3):
        b = boards.hex_board(L)
        for colors in _hex_configs(L):
            assert (percolation.pivotal_sites(b, colors)
                    == percolation.pivotal_sites_oracle(b, colors))


def test_pivotal_sites_match_oracle_random_l8():
    b = boards.hex_board(8)
    for i in range(200):
        u = rng.uniform_block(77, rng.STREAM_PROBE, i, 64)
        colors = np.where(u < 0.5, 1, -1).astype(np.int8)
        assert (percolation.pivotal_sites(b, colors)
                == percolation.pivotal_sites_oracle(b, colors))


def test_pivotality_duality():
    # a cell is pivotal iff it is pivotal after swapping colors and
    # transposing the board (black/white exchange under the lozenge symmetry)
    L = 5
    b = boards.hex_board(L)
    for i in range(150):
        u = rng.uniform_block(31, rng.STREAM_PROBE, i, L * L)
        colors = np.where(u < 0.5, 1, -1).astype(np.int8)
        swapped = -colors.reshape(L, L).T.reshape(-1)
        piv = percolation.pivotal_sites(b, colors)
        piv_dual = percolation.pivotal_sites(b, swapped.copy())
        mapped = frozenset(r * L + c for c, r in
                           ((cell // L, cell % L) for cell in piv))
        assert mapped == frozenset(
            (cell % L) * L + cell // L for cell in piv)  # self-check of map
        transposed = frozenset((cell % L) * L + cell // L for cell in piv)
        assert transposed == piv_dual


def test_completion_colors_reproduce_scalar_samples():
    spec = games.hex_spec(3)
    pos = games.make_position(spec, t1={2}, t2={5})
    mat = percolation.completion_colors(pos, seed=13, index0=7, count=6)
    for i in range(6):
        cfg = games.sample_completion(pos, seed=13, index=7 + i)
        np.testing.assert_array_equal(mat[i], cfg.colors)


def test_pivotal_counts_chunk_and_thread_invariance():
    spec = games.hex_spec(5)
    pos = games.make_position(spec)
    base = percolation.pivotal_counts_mc(pos, seed=3, N=5000)
    for chunk, threads in ((128, 1), (999, 2), (5000, 4), (64, 3)):
        counts, black = percolation.pivotal_counts_mc(
            pos, seed=3, N=5000, chunk=chunk, threads=threads)
        np.testing.assert_array_equal(counts, base[0])
        assert black == base[1]


def test_pivotal_counts_match_flip_oracle_counts():
    # same samples, python flip oracle per sample: counts must agree exactly
    spec = games.hex_spec(3)
    pos = games.make_position(spec)
    N = 400
    counts, black = percolation.pivotal_counts_mc(pos, seed=21, N=N)
    expect = np.zeros(9, dtype=np.int64)
    black_expect = 0
    for i in range(N):
        colors = percolation.completion_colors(pos, 21, i, 1)[0]
        res = percolation.has_crossing(spec.board, colors)
        black_expect += int(res.black_crossing)
        for c in percolation.pivotal_sites_oracle(spec.board, colors):
            expect[c] += 1
    np.testing.assert_array_equal(counts, expect)
    assert black == black_expect


def test_crossing_probability_trivial_bias():
    b = boards.hex_board(4)
    est, _ = percolation.crossing_probability_mc(b, 1.0, 500, seed=1)
    assert est == 1.0
    est0, _ = percolation.crossing_probability_mc(b, 0.0, 500, seed=1)
    assert est0 == 0.0


def test_crossing_probability_hex2_vs_enumeration():
    # oracle: exact crossing probability over all 16 configurations
    b = boards.hex_board(2)
    exact = sum(
        percolation.has_crossing(b, colors).black_crossing
        for colors in _hex_configs(2)) / 16
    est, stderr = percolation.crossing_probability_mc(b, 0.5, 100_000, seed=5)
    assert abs(est - exact) < 3 * stderr


def test_crossing_probability_biased_vs_enumeration():
    b = boards.hex_board(2)
    p = 0.3
    exact = 0.0
    for colors in _hex_configs(2):
        k = int((colors == 1).sum())
        if percolation.has_crossing(b, colors).black_crossing:
            exact += p**k * (1 - p) ** (4 - k)
    est, stderr = percolation.crossing_probability_mc(b, p, 100_000, seed=6)
    assert abs(est - exact) < 3 * max(stderr, 1e-9)


def test_shortest_crossing_mc_against_bfs():
    b = boards.hex_board(4)
    mean, crossed = percolation.shortest_crossing_mc(b, 0.5, 300, seed=9)
    total = 0
    crossed_py = 0
    spec = games.GameSpec(b, "hex-crossing", (), monotone=True, win_or_lose=True)
    pos = games.make_position(spec)
    for i in range(300):
        colors = percolation.completion_colors(pos, 9, i, 1)[0]
        res = percolation.has_crossing(b, colors)
        if res.black_crossing:
            crossed_py += 1
            total += res.shortest_black_crossing_length
    assert crossed == crossed_py
    assert mean == pytest.approx(total / crossed_py)


def test_non_crossing_boards_rejected():
    with pytest.raises(UnsupportedGameError):
        percolation.crossing_probability_mc(boards.generic_board(3), 0.5, 10, 0)
    spec = games.bridgit_spec(2)
    pos = games.make_position(spec)
    with pytest.raises(UnsupportedGameError):
        percolation.pivotal_counts_mc(pos, seed=0, N=10)


@given(st.integers(0, 2**9 - 1))
@settings(max_examples=120, deadline=None)
def test_pivotal_flip_changes_winner(mask):
    # definition check on top of oracle equality: flipping a reported pivotal
    # cell flips the crossing winner; flipping a non-pivotal one does not
    b = boards.hex_board(3)
    colors = np.array([1 if mask >> c & 1 else -1 for c in range(9)],
                      dtype=np.int8)
    before = percolation.has_crossing(b, colors).black_crossing
    piv = percolation.pivotal_sites(b, colors)
    for c in range(9):
        flipped = colors.copy()
        flipped[c] = -flipped[c]
        after = percolation.has_crossing(b, flipped).black_crossing
        assert (after != before) == (c in piv)

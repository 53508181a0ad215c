"""Acceptance suite: one test per primary criterion, each emitting a single
pass/fail line with the measured quantity.

Criteria that are attainable at desk scale run at their stated tolerance.
The q_20 tolerance is provably out of reach for the printed recursion (the
per-level contraction is 0.573, so 10^-6 is first met at h=22); that clause
is a strict expected failure reporting the honest gap.
"""

import math
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from randomturn import cli, games, influence, percolation, rng, solver, trees
from randomturn.boards import build_tree, hex_board
from randomturn.games import (
    andor_spec,
    hex_spec,
    payoff,
    random_team_captains_spec,
    recursive_majority_spec,
    switching_spec,
    tictactoe_spec,
)
from randomturn.trees import PHI, PSTAR

HALF = Fraction(1, 2)
SQRT5 = math.sqrt(5)


def criterion(name, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}"
    print(line)
    assert ok, line


def mean_of_f(spec, p):
    n = spec.n
    total = 0 * p
    for k in range(n + 1):
        w = p**k * (1 - p) ** (n - k)
        for chosen in combinations(range(n), k):
            total += w * payoff(spec, frozenset(chosen))
    return total


def theorem1_specs():
    specs = [hex_spec(L) for L in (1, 2, 3)]
    specs.append(tictactoe_spec())
    specs.append(recursive_majority_spec(1))
    specs += [random_team_captains_spec(k % 8 + 3, seed=k) for k in range(10)]
    return specs


def test_a01_theorem1_exactness():
    specs = theorem1_specs()
    for spec in specs:
        assert solver.exact_value(spec) == mean_of_f(spec, HALF), spec.payoff_kind
    criterion("theorem-1 exactness",  True,
              f"exact_value == mean of f for all {len(specs)} specs, "
              "rational arithmetic, zero tolerance")


def test_a02_biased_value():
    specs = theorem1_specs()
    biases = (Fraction(1, 4), Fraction(1, 3), Fraction(3, 4))
    for p in biases:
        for spec in specs:
            assert solver.exact_value(spec, p=p) == mean_of_f(spec, p), \
                (spec.payoff_kind, p)
    criterion("biased value", True,
              f"exact_value == p-biased mean for {len(specs)} specs at "
              "p in {1/4, 1/3, 3/4}, zero tolerance")


def test_a03_lemma_agreement():
    cases = [
        ("hex L=3", hex_spec(3)),
        ("recursive-majority h=1", recursive_majority_spec(1)),
        ("andor h=2", andor_spec(2)),
        ("ternary switching h=1", switching_spec(3, 1)),
    ]
    for name, spec in cases:
        moves = solver.optimal_moves(spec)
        probs = {c: solver.exact_pivotal_probability(spec, None, c)
                 for c in range(spec.n)}
        top = max(probs.values())
        argmax = {c for c, v in probs.items() if v == top}
        assert moves.cells == argmax, (name, moves.cells, argmax)
    criterion("lemma agreement", True,
              "optimal_moves == argmax exact pivotal probability on all "
              "4 specs, zero tolerance")


def test_a04_genericity_uniformity():
    for k in range(20):
        n = k % 6 + 3
        spec = random_team_captains_spec(n, seed=1000 + k)
        dist = solver.final_set_distribution(spec)
        assert len(dist) == 2**n
        assert set(dist) == {frozenset(c)
                             for m in range(n + 1)
                             for c in combinations(range(n), m)}
        assert all(v == Fraction(1, 2**n) for v in dist.values())
    criterion("genericity/uniformity", True,
              "final_set_distribution uniform over 2^n subsets for 20 "
              "random tables, n in 3..8, exact bijection")


def test_a05_pivotal_oracle_equivalence():
    checked = 0
    for L in (1, 2, 3):
        board = hex_board(L)
        n = board.n
        for mask in range(1 << n):
            colors = np.fromiter(
                ((1 if mask >> c & 1 else -1) for c in range(n)),
                dtype=np.int8, count=n)
            assert (percolation.pivotal_sites(board, colors)
                    == percolation.pivotal_sites_oracle(board, colors))
            checked += 1
    board = hex_board(8)
    for k in range(1000):
        u = rng.uniform_block(99, rng.STREAM_TABLE, k, board.n)
        colors = np.where(u < 0.5, 1, -1).astype(np.int8)
        assert (percolation.pivotal_sites(board, colors)
                == percolation.pivotal_sites_oracle(board, colors))
        checked += 1
    criterion("pivotal oracle equivalence", True,
              f"duality route == flip oracle on {checked} configurations "
              "(exhaustive L<=3 plus 1000 random at L=8), set equality")


def test_a06_self_duality():
    est, stderr = percolation.crossing_probability_mc(hex_board(11), 0.5,
                                                      100_000, seed=6)
    ok = abs(est - 0.5) <= 3 * stderr
    criterion("self-duality", ok,
              f"hex 11x11 crossing estimate {est:.5f} within 3*stderr "
              f"({3 * stderr:.5f}) of 1/2")


def test_a07_andor_numbers():
    assert trees.andor_true_probability(2, HALF) == Fraction(9, 16)
    fp = trees.andor_fixed_points()[1]
    assert abs(fp - (3 - SQRT5) / 2) < 1e-9
    length = trees.andor_expected_length(2)
    assert abs(length - PHI**2) < 1e-9
    dp = solver.expected_game_length_exact(andor_spec(2), p=PSTAR)
    assert abs(dp - PHI**2) < 1e-9

    tree = trees.complete_tree(2, 2)
    N = 100_000
    lengths = np.empty(N)
    for g in range(N):
        moves, _ = trees.simulate_andor_game(tree, PSTAR, 77, g)
        lengths[g] = len(moves)
    mean = lengths.mean()
    sigma = lengths.std(ddof=1) / math.sqrt(N)
    ok = abs(mean - PHI**2) <= 3 * sigma
    criterion("andor numbers", ok,
              f"9/16 exact, fixed point and phi^2 length to 1e-9, DP route "
              f"to 1e-9, {N}-game mean {mean:.4f} within 3 sigma "
              f"({3 * sigma:.4f}) of {PHI**2:.4f}")


def test_a08_locality_and_structure():
    andor_tree = build_tree([2] * 6)
    violations = 0
    for g in range(10_000):
        moves, _ = trees.simulate_andor_game(andor_tree, 0.5, 31, g)
        violations += trees.check_andor_locality(andor_tree, moves)
    assert violations == 0

    switch_tree = build_tree([3] * 4)
    structure = 0
    for g in range(10_000):
        moves, _ = trees.simulate_switching_game(switch_tree, 0.5, 32, g)
        structure += trees.check_switching_structure(switch_tree, moves)
    assert structure == 0
    criterion("locality and structure", True,
              "zero violations in 10^4 andor h=6 games and 10^4 ternary "
              "switching h=4 games")


def enumerate_disconnect_probability(h):
    spec = switching_spec(3, h)
    n = spec.n
    cut_wins = 0
    for mask in range(1 << n):
        s1 = frozenset(c for c in range(n) if mask >> c & 1)
        if payoff(spec, s1) < 0:
            cut_wins += 1
    return Fraction(cut_wins, 1 << n)


def test_a09_switching_series():
    series = trees.switching_series(3, 60, exact_until=3)
    assert series.q_exact[1] == Fraction(1, 8) == enumerate_disconnect_probability(1)
    assert (series.q_exact[2] == Fraction(729, 4096)
            == enumerate_disconnect_probability(2))
    win_gap = abs((1 - series.q[60]) - (3 - SQRT5))
    ok = win_gap < 1e-6
    criterion("switching series", ok,
              "q1=1/8 and q2=729/4096 match exhaustive enumeration (2^3 and "
              f"2^12 configs); Short-win at h=60 within {win_gap:.2e} of "
              "3-sqrt5")


@pytest.mark.xfail(
    strict=True,
    reason="the recursion contracts by 0.573 per level, so |q_h - (sqrt5-2)| "
           "first drops below 1e-6 at h=22; at h=20 the true gap is 2.31e-6 "
           "and no correct implementation can pass the stated tolerance")
def test_a09_q20_tolerance():
    series = trees.switching_series(3, 20)
    gap = abs(series.q[20] - (SQRT5 - 2))
    criterion("switching series q20 tolerance", gap < 1e-6,
              f"|q20 - (sqrt5-2)| = {gap:.3e} vs stated 1e-6 "
              "(first met at h=22)")


def test_a10_length_growth_shape():
    tern_h = (4, 8, 16)
    tern_means = [trees.mean_uniform_switching_length([3] * h, 0.5, 41, 600)[0]
                  for h in tern_h]
    tern_slope, _, _ = cli.fit_power_law(tern_h, tern_means)

    enh_h = (8, 16, 32)
    enh_means = []
    for h in enh_h:
        k = max(1, int(h * math.log(2) / 2))
        profile = [k] + [2] * (h - 1)
        enh_means.append(
            trees.mean_uniform_switching_length(profile, 0.5, 42, 400)[0])
    enh_slope, _, _ = cli.fit_power_law(enh_h, enh_means)

    ok = abs(tern_slope - 1.0) <= 0.5 and abs(enh_slope - 2.0) <= 0.6
    criterion("length-growth shape", ok,
              f"ternary slope {tern_slope:.3f} in 1.0 +- 0.5, enhanced "
              f"binary slope {enh_slope:.3f} in 2.0 +- 0.6")


def test_a11_influence_and_bounds():
    for h in (2, 4):
        spec = andor_spec(h)
        vec = influence.influence_exact(spec, p=PSTAR)
        target = ((SQRT5 - 1) / 2) ** h
        assert all(abs(v - target) < 1e-12 for v in vec.values), h

        length = float(trees.andor_expected_length(h))
        osss = influence.osss_lower_bound(spec, vec)
        assert abs(osss - PHI**h) < 1e-9
        assert abs(osss - length) < 1e-9

        os_b = influence.os_lower_bound(vec)
        assert abs(os_b - (SQRT5 - 1) ** (2 * h)) < 1e-9
        assert os_b <= length + 1e-9

    maj = recursive_majority_spec(1)
    maj_vec = influence.influence_exact(maj, p=HALF)
    maj_bound = influence.osss_lower_bound(maj, maj_vec)
    maj_len = solver.expected_game_length_exact(maj)
    assert maj_bound == 2 and maj_len == Fraction(5, 2)
    criterion("influence and bounds", True,
              "leaf influence ((sqrt5-1)/2)^h to 1e-12 for h in {2,4}; OSSS "
              "bound == phi^h == exact length to 1e-9; O-S bound "
              "(sqrt5-1)^{2h} <= length; majority-3 bound 2 <= 5/2")


def test_a12_hex_length_scaling(capsys):
    import json

    rc = cli.main(["--json", "--seed", "17", "scaling",
                   "--sizes", "5,7,9,11,13", "--games", "48",
                   "--samples-cap", "1500"])
    assert rc == 0
    report = json.loads(capsys.readouterr().out)
    exponent = report["exponent"]
    mean_13 = report["mean_lengths"][-1]
    shortest_mean, crossed = percolation.shortest_crossing_mc(
        hex_board(13), 0.5, 2000, seed=5)
    ok = 1.2 <= exponent <= 1.9 and mean_13 > shortest_mean
    criterion("hex length scaling", ok,
              f"fitted exponent {exponent:.3f} in [1.2, 1.9] over L in "
              f"{{5,7,9,11,13}}; L=13 mean length {mean_13:.1f} > shortest "
              f"crossing mean {shortest_mean:.1f} ({crossed} crossings)")


def test_a13_heatmap_argmax():
    spec3 = hex_spec(3)
    values = cli.heatmap_values(spec3, HALF, 100_000, seed=9)
    probs = {c: solver.exact_pivotal_probability(spec3, None, c)
             for c in range(9)}
    top = max(probs.values())
    exact_argmax = {c for c, v in probs.items() if v == top}
    mc_argmax = max(range(9), key=lambda c: values[c])
    assert mc_argmax in exact_argmax

    values11 = cli.heatmap_values(hex_spec(11), HALF, 100_000, seed=9)
    best = max(range(121), key=lambda c: values11[c])
    row, col = divmod(best, 11)
    ok = 4 <= row <= 6 and 4 <= col <= 6
    criterion("heatmap argmax", ok,
              f"L=3 sampled argmax {mc_argmax} == exact argmax "
              f"{sorted(exact_argmax)}; L=11 argmax ({row}, {col}) lies in "
              "the central 3x3")


def test_a14_determinism(tmp_path, monkeypatch, capsys):
    commands = [
        (["--seed", "3", "--out", "out", "--json", "heatmap", "--game",
          "hex", "--L", "3", "--samples", "20000"],
         ["report.json", "heatmap.csv", "heatmap.svg"]),
        (["--seed", "4", "--out", "out", "tree", "--b", "3", "--h", "20"],
         ["report.json", "tree_series.csv"]),
        (["--seed", "5", "--out", "out", "selfplay", "--game", "hex", "--L",
          "3", "--games", "10", "--strategy", "mc", "--samples", "300"],
         ["report.json", "records.jsonl"]),
    ]
    compared = 0
    for idx, (argv, artifacts) in enumerate(commands):
        outs = []
        for run in ("a", "b"):
            workdir = tmp_path / f"{idx}{run}"
            workdir.mkdir()
            monkeypatch.chdir(workdir)
            assert cli.main(argv) == 0
            outs.append(capsys.readouterr().out)
        assert outs[0] == outs[1], argv
        for artifact in artifacts:
            first = (tmp_path / f"{idx}a" / "out" / artifact).read_bytes()
            second = (tmp_path / f"{idx}b" / "out" / artifact).read_bytes()
            assert first == second, (argv, artifact)
            compared += 1
    criterion("determinism", True,
              f"heatmap, tree, and selfplay commands repeated with fixed "
              f"seeds: stdout and {compared} artifacts byte-identical")

"""Command-line harness: exact solves, self-play experiments, scaling fits,
heatmaps, tree series, influence reports, and the game server.

Every command is reproducible: identical flags and seed give byte-identical
CSV/JSON outputs.  Reports embed the invocation, the seed, and the package
version, and never a wall clock.  Exit codes: 0 success, 2 capacity
exceeded, 3 bad arguments.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__, games, influence, percolation, solver, strategy, trees
from .errors import CapacityError

EXIT_OK = 0
EXIT_CAPACITY = 2
EXIT_BADARGS = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(EXIT_BADARGS, f"{self.prog}: error: {message}\n")


def parse_bias(text: str):
    """Coin bias from the command line: '1/2' stays an exact Fraction,
    decimals become floats."""
    value = Fraction(text) if "/" in text else float(text)
    if not 0 < value < 1:
        raise ValueError(f"bias must lie strictly between 0 and 1, got {text}")
    return value


def spec_from_args(args) -> games.GameSpec:
    game = args.game
    if game == "hex":
        return games.hex_spec(args.L, r=args.r)
    if game == "bridgit":
        return games.bridgit_spec(args.L)
    if game == "andor":
        return games.andor_spec(args.h)
    if game == "recursive-majority":
        return games.recursive_majority_spec(args.h)
    if game == "switching":
        return games.switching_spec(args.b, args.h)
    if game == "tictactoe":
        return games.tictactoe_spec()
    if game == "surround":
        return games.surround_spec(args.L)
    if game == "team-captains":
        return games.random_team_captains_spec(args.n, args.table_seed)
    raise ValueError(f"unknown game {game!r}")


def _add_spec_args(sub):
    sub.add_argument("--game", required=True,
                     choices=["hex", "bridgit", "andor", "recursive-majority",
                              "switching", "tictactoe", "surround", "team-captains"])
    sub.add_argument("--L", type=int, default=3, help="board side")
    sub.add_argument("--r", type=float, default=1.0, help="hex aspect ratio cols/rows")
    sub.add_argument("--h", type=int, default=2, help="tree depth")
    sub.add_argument("--b", type=int, default=3, help="tree arity")
    sub.add_argument("--n", type=int, default=3, help="team-captains ground set")
    sub.add_argument("--table-seed", type=int, default=0)
    sub.add_argument("--p", type=parse_bias, default=Fraction(1, 2))


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, frozenset):
        return sorted(x)
    return str(x)


def emit(report: dict, lines: list[str], args) -> None:
    report = {"invocation": getattr(args, "invocation", sys.argv[1:]),
              "seed": args.seed, "version": __version__, **report}
    if args.json:
        print(json.dumps(report, sort_keys=True, default=_jsonable))
    else:
        for line in lines:
            print(line)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(
            json.dumps(report, sort_keys=True, indent=2, default=_jsonable) + "\n")


def write_csv(path: Path, rows) -> None:
    path.write_text("\n".join(",".join(str(v) for v in row) for row in rows) + "\n")


# ---------------------------------------------------------------------------
# solve


def cmd_solve(args) -> int:
    spec = spec_from_args(args)
    value = solver.exact_value(spec, p=args.p)
    moves = solver.optimal_moves(spec, p=args.p)
    mean = solver.biased_subset_mean_payoff(spec, args.p)
    check = "PASS" if value == mean or abs(float(value) - float(mean)) < 1e-12 else "FAIL"
    report = {
        "game": args.game, "p": args.p, "value": value,
        "optimal_moves": sorted(moves.cells), "shared": moves.shared,
        "theorem1_mean": mean, "theorem1_check": check,
    }
    lines = [
        f"game {args.game} (n={spec.n}) at p={args.p}",
        f"exact value: {value}",
        f"optimal first moves: {sorted(moves.cells)} (shared: {moves.shared})",
        f"theorem-1 mean-of-f check: {check} (mean {mean})",
    ]
    if spec.monotone and spec.win_or_lose:
        length = solver.expected_game_length_exact(spec, p=args.p)
        report["expected_length"] = length
        lines.insert(3, f"expected length: {float(length):.6f}")
    emit(report, lines, args)
    return EXIT_OK


# ---------------------------------------------------------------------------
# selfplay


def _build_strategy(args, spec):
    if args.strategy == "exact":
        return strategy.exact_strategy()
    cfg = strategy.StrategyConfig(
        samples=args.samples, epsilon=args.epsilon, p=float(args.p),
        threads=args.threads)
    return strategy.mc_strategy(cfg)


def run_selfplay(spec, strat, games_count, p, seed, stop_early, records_path=None):
    records = []
    sink = open(records_path, "w") if records_path else None
    try:
        for g in range(games_count):
            rec = strategy.selfplay(spec, strat, strat, p=p, seed=seed,
                                    stop_early=stop_early, game_index=g)
            records.append(rec)
            if sink:
                sink.write(json.dumps(rec.to_json_dict(), sort_keys=True) + "\n")
    except KeyboardInterrupt:
        if sink:
            sink.write(json.dumps({"truncated": True, "completed": len(records)}) + "\n")
        raise
    finally:
        if sink:
            sink.close()
    return records


def summarize_records(records) -> dict:
    lengths = [r.length for r in records]
    wins = sum(1 for r in records if r.winner == "I")
    disconnected = sum(1 for r in records if r.disconnected_move_count > 0)
    return {
        "games": len(records),
        "mean_length": sum(lengths) / len(records),
        "win_rate_I": wins / len(records),
        "disconnected_fraction": disconnected / len(records),
        "connected_fraction": 1 - disconnected / len(records),
    }


def cmd_selfplay(args) -> int:
    spec = spec_from_args(args)
    strat = _build_strategy(args, spec)
    records_path = Path(args.out) / "records.jsonl" if args.out else None
    if records_path:
        records_path.parent.mkdir(parents=True, exist_ok=True)
    records = run_selfplay(spec, strat, args.games, args.p, args.seed,
                           not args.no_stop_early, records_path)
    agg = summarize_records(records)
    lines = [
        f"{args.games} games of {args.game} at p={args.p} ({args.strategy} strategy)",
        f"mean length: {agg['mean_length']:.4f}",
        f"player-I win rate: {agg['win_rate_I']:.4f}",
        f"games with any disconnected move: {agg['disconnected_fraction']:.4f}",
    ]
    emit({"aggregates": agg, "game": args.game}, lines, args)
    return EXIT_OK


# ---------------------------------------------------------------------------
# scaling


def fit_power_law(sizes, lengths):
    """Least-squares slope of log(length) against log(size) with its
    standard error; needs >= 3 points and nondegenerate spread."""
    if len(sizes) < 3 or len(sizes) != len(lengths):
        raise ValueError("power-law fit needs at least 3 (size, length) pairs")
    x = np.log(np.asarray(sizes, dtype=float))
    y = np.log(np.asarray(lengths, dtype=float))
    vx = x - x.mean()
    denom = float(vx @ vx)
    if denom == 0:
        raise ValueError("degenerate fit: all sizes equal")
    slope = float(vx @ (y - y.mean())) / denom
    intercept = float(y.mean() - slope * x.mean())
    resid = y - (intercept + slope * x)
    dof = len(x) - 2
    stderr = math.sqrt(float(resid @ resid) / dof / denom) if dof else float("nan")
    return slope, intercept, stderr


def cmd_scaling(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",")]
    if args.synthetic:
        pairs = [tuple(float(v) for v in item.split("="))
                 for item in args.synthetic.split(",")]
        sizes = [int(a) for a, _ in pairs]
        means = [b for _, b in pairs]
    else:
        means = []
        for L in sizes:
            spec = games.hex_spec(L)
            n_samples = min(args.samples_cap,
                            strategy.sample_size_for(L, args.epsilon or 0.1))
            cfg = strategy.StrategyConfig(samples=n_samples, p=float(args.p),
                                          threads=args.threads)
            strat = strategy.mc_strategy(cfg)
            records = run_selfplay(spec, strat, args.games, args.p, args.seed, True)
            means.append(summarize_records(records)["mean_length"])
    slope, intercept, stderr = fit_power_law(sizes, means)
    rows = [("L", "mean_length")] + list(zip(sizes, means))
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        write_csv(out / "scaling.csv", rows)
    lines = [f"L={L}: mean length {m:.4f}" for L, m in zip(sizes, means)]
    lines.append(f"fitted exponent: {slope:.4f} +- {stderr:.4f}")
    emit({"sizes": sizes, "mean_lengths": means, "exponent": slope,
          "stderr": stderr, "intercept": intercept}, lines, args)
    return EXIT_OK


# ---------------------------------------------------------------------------
# heatmap


def svg_heatmap(rows: int, cols: int, values, cell_size: float = 18.0) -> str:
    """Standalone SVG of the lozenge with cells shaded by value in [0, 1]."""
    s = cell_size
    w = math.sqrt(3) * s
    top = max(values) or 1.0
    parts = []
    for i in range(rows):
        for j in range(cols):
            cx = w * (j + i / 2) + w
            cy = 1.5 * s * i + 2 * s
            pts = []
            for k in range(6):
                ang = math.pi / 180 * (60 * k - 30)
                pts.append(f"{cx + s * math.cos(ang):.2f},{cy + s * math.sin(ang):.2f}")
            t = values[i * cols + j] / top
            shade = int(round(255 * (1 - t)))
            parts.append(
                f'<polygon points="{" ".join(pts)}" '
                f'fill="rgb(255,{shade},{shade})" stroke="#444" stroke-width="1"/>')
    width = w * (cols + rows / 2) + 2 * w
    height = 1.5 * s * rows + 4 * s
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" '
        f'height="{height:.0f}" viewBox="0 0 {width:.0f} {height:.0f}">'
        + "".join(parts) + "</svg>"
    )


def heatmap_values(spec, p, samples, seed, threads=1):
    position = games.make_position(spec, p=p)
    counts, _ = percolation.pivotal_counts_mc(position, seed, samples,
                                              threads=threads)
    return [int(c) / samples for c in counts]


def cmd_heatmap(args) -> int:
    spec = spec_from_args(args)
    if spec.board.kind != "hex":
        raise ValueError("heatmaps are drawn for hex boards")
    values = heatmap_values(spec, args.p, args.samples, args.seed, args.threads)
    board = spec.board
    rows = [("row", "col", "value")]
    for i in range(board.rows):
        for j in range(board.cols):
            rows.append((i, j, repr(values[i * board.cols + j])))
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        write_csv(out / "heatmap.csv", rows)
        (out / "heatmap.svg").write_text(svg_heatmap(board.rows, board.cols, values))
    best = max(range(len(values)), key=lambda c: (values[c], -c))
    lines = [
        f"heatmap {board.rows}x{board.cols}, N={args.samples}, seed={args.seed}",
        f"argmax cell: ({best // board.cols}, {best % board.cols}) "
        f"value {values[best]:.4f}",
    ]
    emit({"rows": board.rows, "cols": board.cols, "samples": args.samples,
          "values": values, "argmax": best}, lines, args)
    return EXIT_OK


# ---------------------------------------------------------------------------
# tree


def cmd_tree(args) -> int:
    series = trees.switching_series(args.b, args.h)
    rows = [("h", "q", "short_win", "mu", "nu")]
    for k in range(args.h + 1):
        mu = series.mu[k] if series.mu else ""
        nu = series.nu[k] if series.nu else ""
        rows.append((k, repr(series.q[k]), repr(1 - series.q[k]),
                     repr(mu) if mu != "" else "", repr(nu) if nu != "" else ""))
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        write_csv(out / "tree_series.csv", rows)
    lines = [
        f"switching series b={args.b} up to h={args.h}",
        f"q_{args.h} = {series.q[args.h]:.9f} (limit sqrt5-2 = {series.limit:.9f})",
        f"andor fixed points: {trees.andor_fixed_points()}",
    ]
    report = {"b": args.b, "h": args.h, "q_final": series.q[args.h],
              "limit": series.limit,
              "andor_fixed_points": list(trees.andor_fixed_points())}
    if args.simulate_games:
        sim_h = args.simulate_depth
        tree = trees.complete_tree(2, sim_h)
        total = 0
        for g in range(args.simulate_games):
            moves, _ = trees.simulate_andor_game(tree, trees.PSTAR, args.seed, g)
            total += len(moves)
        mean = total / args.simulate_games
        target = trees.andor_expected_length(sim_h)
        lines.append(
            f"simulated andor h={sim_h} mean length {mean:.4f} vs phi^h {target:.4f}")
        report["andor_sim_mean"] = mean
        report["andor_len_target"] = target
    emit(report, lines, args)
    return EXIT_OK


# ---------------------------------------------------------------------------
# influence


def cmd_influence(args) -> int:
    spec = spec_from_args(args)
    vec = influence.influence_exact(spec, args.p)
    os_b = influence.os_lower_bound(vec)
    osss_b = influence.osss_lower_bound(spec, vec)
    report = {
        "game": args.game, "p": args.p, "method": vec.method,
        "influences": [float(v) for v in vec.values],
        "sum": float(vec.total), "max": float(vec.maximum),
        "os_bound": float(os_b), "osss_bound": float(osss_b),
    }
    lines = [
        f"influences for {args.game} at p={args.p} ({vec.method})",
        f"sum I = {float(vec.total):.6f}, max I = {float(vec.maximum):.6f}",
        f"examined-bits bound (sum I)^2 = {float(os_b):.6f}",
        f"query-variance bound = {float(osss_b):.6f}",
    ]
    if args.mc:
        mc = influence.influence_mc(spec, args.p, args.mc, args.seed)
        report["mc_influences"] = mc.values
        report["mc_stderr"] = mc.stderr
        worst = max(abs(float(a) - b) for a, b in zip(vec.values, mc.values))
        lines.append(f"MC at N={args.mc}: max |exact - estimate| = {worst:.5f}")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        write_csv(out / "influence.csv", vec.to_csv_rows())
    emit(report, lines, args)
    return EXIT_OK


# ---------------------------------------------------------------------------
# serve


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(static_dir=args.static, log_path=args.game_log)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> _Parser:
    parser = _Parser(prog="randomturn", description=__doc__)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--out", type=str, default=None, help="output directory")
    parser.add_argument("--json", action="store_true", help="machine-readable report")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="exact value, moves, length")
    _add_spec_args(p_solve)
    p_solve.set_defaults(func=cmd_solve)

    p_play = sub.add_parser("selfplay", help="batch self-play with records")
    _add_spec_args(p_play)
    p_play.add_argument("--games", type=int, default=100)
    p_play.add_argument("--strategy", choices=["mc", "exact"], default="mc")
    p_play.add_argument("--samples", type=int, default=None)
    p_play.add_argument("--epsilon", type=float, default=None)
    p_play.add_argument("--no-stop-early", action="store_true")
    p_play.set_defaults(func=cmd_selfplay)

    p_scale = sub.add_parser("scaling", help="length exponent across sizes")
    p_scale.add_argument("--sizes", type=str, default="5,7,9,11,13")
    p_scale.add_argument("--games", type=int, default=50)
    p_scale.add_argument("--samples-cap", type=int, default=1500)
    p_scale.add_argument("--epsilon", type=float, default=0.1)
    p_scale.add_argument("--p", type=parse_bias, default=Fraction(1, 2))
    p_scale.add_argument("--synthetic", type=str, default=None,
                         help="size=length,... pairs for fit verification")
    p_scale.set_defaults(func=cmd_scaling)

    p_heat = sub.add_parser("heatmap", help="first-move pivotality map")
    _add_spec_args(p_heat)
    p_heat.add_argument("--samples", type=int, default=100_000)
    p_heat.set_defaults(func=cmd_heatmap)

    p_tree = sub.add_parser("tree", help="switching series and andor checks")
    p_tree.add_argument("--b", type=int, default=3)
    p_tree.add_argument("--h", type=int, default=20)
    p_tree.add_argument("--simulate-depth", type=int, default=2)
    p_tree.add_argument("--simulate-games", type=int, default=0)
    p_tree.set_defaults(func=cmd_tree)

    p_inf = sub.add_parser("influence", help="influences and length bounds")
    _add_spec_args(p_inf)
    p_inf.add_argument("--mc", type=int, default=0, help="extra MC estimate at N")
    p_inf.set_defaults(func=cmd_influence)

    p_serve = sub.add_parser("serve", help="run the HTTP game service")
    p_serve.add_argument("--host", type=str, default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--static", type=str, default=None)
    p_serve.add_argument("--game-log", type=str, default=None)
    p_serve.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.invocation = [str(a) for a in argv] if argv is not None else sys.argv[1:]
    try:
        return args.func(args)
    except CapacityError as exc:
        print(f"capacity exceeded: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except ValueError as exc:
        print(f"bad arguments: {exc}", file=sys.stderr)
        return EXIT_BADARGS


if __name__ == "__main__":
    sys.exit(main())

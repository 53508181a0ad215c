"""Hex length-scaling experiment with per-size error bars.

Plays MC-strategy self-play across a ladder of board sizes, reports the
mean length and its standard error at each L, and fits the log-log slope.
The CLI's `scaling` verb prints the same fit; this driver additionally
keeps per-size spread so error bars can be drawn downstream.
"""

import argparse
import math
from dataclasses import dataclass
from pathlib import Path

from randomturn import cli, games, strategy


@dataclass
class ScalingConfig:
    sizes: tuple = (5, 7, 9, 11, 13)
    games: int = 48
    samples_cap: int = 1500
    epsilon: float = 0.1
    seed: int = 17
    out: str | None = None


def measure(config: ScalingConfig):
    rows = []
    for L in config.sizes:
        spec = games.hex_spec(L)
        samples = min(config.samples_cap,
                      strategy.sample_size_for(L, config.epsilon))
        strat = strategy.mc_strategy(strategy.StrategyConfig(samples=samples))
        records = strategy.selfplay_many(spec, strat, strat,
                                         games=config.games, seed=config.seed)
        lengths = [r.length for r in records]
        mean = sum(lengths) / len(lengths)
        var = sum((x - mean) ** 2 for x in lengths) / (len(lengths) - 1)
        rows.append((L, mean, math.sqrt(var / len(lengths)), samples))
    return rows


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="5,7,9,11,13")
    parser.add_argument("--games", type=int, default=48)
    parser.add_argument("--samples-cap", type=int, default=1500)
    parser.add_argument("--seed", type=int, default=17)
    parser.add_argument("--out", default=None)
    args = parser.parse_args(argv)

    config = ScalingConfig(sizes=tuple(int(s) for s in args.sizes.split(",")),
                           games=args.games, samples_cap=args.samples_cap,
                           seed=args.seed, out=args.out)
    rows = measure(config)
    for L, mean, stderr, samples in rows:
        print(f"L={L:3d}  mean length {mean:8.3f} +- {stderr:.3f}  "
              f"({samples} samples/move)")
    slope, _, fit_err = cli.fit_power_law([r[0] for r in rows],
                                          [r[1] for r in rows])
    print(f"fitted exponent: {slope:.4f} +- {fit_err:.4f}")
    if config.out:
        out = Path(config.out)
        out.mkdir(parents=True, exist_ok=True)
        cli.write_csv(out / "scaling_errbars.csv",
                      [("L", "mean_length", "stderr", "samples")] + rows)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

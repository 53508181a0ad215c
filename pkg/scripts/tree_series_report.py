"""Tree-game report: switching series table, AND-OR fixed points, and
simulated length growth for ternary and enhanced-binary profiles.

The growth section uses the lazy uniform-tree simulator, so depths well
past the materialization limit are cheap.
"""

import argparse
import math

from randomturn import cli, trees


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--h", type=int, default=20)
    parser.add_argument("--games", type=int, default=600)
    parser.add_argument("--seed", type=int, default=41)
    args = parser.parse_args(argv)

    series = trees.switching_series(3, args.h)
    print("h   q_h          Short win    mu_h")
    for k in range(args.h + 1):
        mu = f"{series.mu[k]:.4f}" if k < len(series.mu) else ""
        print(f"{k:<3d} {series.q[k]:<12.9f} {1 - series.q[k]:<12.9f} {mu}")
    print(f"limit sqrt5-2 = {series.limit:.9f}")
    print(f"andor fixed points: {trees.andor_fixed_points()}")
    print(f"andor critical length base phi = {trees.PHI:.9f}")

    print("\nternary switching, mean length by depth")
    tern = []
    for h in (4, 8, 16):
        mean, short_rate, _, _ = trees.mean_uniform_switching_length(
            [3] * h, 0.5, args.seed, args.games)
        tern.append((h, mean))
        print(f"h={h:<3d} mean {mean:8.3f}  Short wins {short_rate:.3f}")
    slope, _, _ = cli.fit_power_law(*zip(*tern))
    print(f"log-log slope: {slope:.3f} (linear growth target 1.0)")

    print("\nenhanced binary, mean length by depth")
    enh = []
    for h in (8, 16, 32):
        k = max(1, int(h * math.log(2) / 2))
        mean, short_rate, _, _ = trees.mean_uniform_switching_length(
            [k] + [2] * (h - 1), 0.5, args.seed + 1, args.games)
        enh.append((h, mean))
        print(f"h={h:<3d} (root degree {k:2d}) mean {mean:8.3f}  "
              f"Short wins {short_rate:.3f}")
    slope, _, _ = cli.fit_power_law(*zip(*enh))
    print(f"log-log slope: {slope:.3f} (quadratic growth target 2.0)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

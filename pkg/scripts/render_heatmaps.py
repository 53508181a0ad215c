"""Render first-move pivotality heatmaps for a ladder of board sizes.

Writes one SVG per size plus a CSV of raw values, and prints each argmax
so drift away from the center is easy to spot across sizes.
"""

import argparse
from pathlib import Path

from randomturn import cli, games


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="3,5,7,11")
    parser.add_argument("--samples", type=int, default=50_000)
    parser.add_argument("--seed", type=int, default=9)
    parser.add_argument("--out", default="heatmaps")
    args = parser.parse_args(argv)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for L in (int(s) for s in args.sizes.split(",")):
        spec = games.hex_spec(L)
        values = cli.heatmap_values(spec, 0.5, args.samples, args.seed)
        best = max(range(L * L), key=lambda c: values[c])
        print(f"L={L:3d}  argmax ({best // L}, {best % L})  "
              f"peak {values[best]:.4f}")
        (out / f"heatmap_L{L}.svg").write_text(cli.svg_heatmap(L, L, values))
        rows = [("row", "col", "value")] + [
            (c // L, c % L, repr(v)) for c, v in enumerate(values)]
        cli.write_csv(out / f"heatmap_L{L}.csv", rows)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

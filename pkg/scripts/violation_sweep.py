"""Maximal CHSH value against eps, with the closed-form conjecture overlaid.

Writes a CSV per convention and one SVG with all curves into --outdir.
"""

import argparse
from pathlib import Path

from nonlocal_lab import chsh, output
from nonlocal_lab.born import Convention
from nonlocal_lab.cli import eps_range, sweep_rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--start", type=float, default=-0.9)
    ap.add_argument("--stop", type=float, default=10.0)
    ap.add_argument("--step", type=float, default=0.1)
    ap.add_argument("--grid-n", type=int, default=24)
    ap.add_argument("--multistart", type=int, default=4)
    ap.add_argument("--conventions", default=",".join(c.value for c in Convention))
    ap.add_argument("--outdir", default="results/violation")
    args = ap.parse_args()

    outdir = Path(args.outdir)
    grid = eps_range(args.start, args.stop, args.step)
    cfg = chsh.SearchConfig(grid_n=args.grid_n, multistart=args.multistart)
    series = []
    for name in args.conventions.split(","):
        conv = Convention.parse(name)
        records = chsh.sweep(grid, conv, cfg)
        output.write_atomic(outdir / f"sweep_{conv.value}.csv",
                            output.to_csv(["epsilon", "max_bell", "conjecture", "rel_dev",
                                           "converged"], sweep_rows(records)))
        series.append((conv.value, grid, [r.max_bell for r in records]))
        worst = max(records, key=lambda r: r.relative_deviation)
        print(f"{conv.value:20s} max rel dev {worst.relative_deviation:.3f} at eps={worst.epsilon:g}")
    series.append(("4/2^((1+e)/(2+e))", grid, [chsh.conjecture_bound(e) for e in grid]))
    output.write_atomic(outdir / "violation.svg",
                        output.line_chart_svg(series, "epsilon", "max B", "CHSH maximum"))
    print(f"wrote {outdir}")


if __name__ == "__main__":
    main()

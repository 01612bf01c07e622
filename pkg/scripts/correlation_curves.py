"""E_eps(theta) over half a period for several eps, one SVG per convention.

The horizontal axis is 2 theta / pi_{2,2+eps}, so every curve spans [0, 1]
and -1 -> +1 over its first half.  Also prints two shape metrics for each
curve: largest slope and largest distance from the straight chord.
"""

import argparse
from pathlib import Path

import numpy as np

from nonlocal_lab import born, chsh, output
from nonlocal_lab.born import Convention


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--eps", default="-0.9,-0.5,0,2,10")
    ap.add_argument("--points", type=int, default=801)
    ap.add_argument("--outdir", default="results/correlation")
    args = ap.parse_args()

    eps_list = [float(e) for e in args.eps.split(",")]
    outdir = Path(args.outdir)
    for conv in Convention:
        series = []
        for eps in eps_list:
            half = chsh.pi_eps(eps)
            th = np.linspace(0.0, half, args.points)
            x = 2.0 * th / half
            e = born.correlation(eps, th, conv)
            series.append((f"eps={eps:g}", x, e))
            q = x <= 1.0
            slope = np.max(np.gradient(e[q], x[q]))
            chord = np.max(np.abs(e[q] - (2 * x[q] - 1)))
            print(f"{conv.value:20s} eps={eps:6g} max slope {slope:7.3f} chord dev {chord:.3f}")
        output.write_atomic(outdir / f"correlation_{conv.value}.svg",
                            output.line_chart_svg(series, "2 theta / pi_eps", "E",
                                                  f"correlation ({conv.value})"))
    print(f"wrote {outdir}")


if __name__ == "__main__":
    main()

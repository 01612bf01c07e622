"""Grid-doubling study of the eigenfunction residual.

For each (n, eps) prints L-inf and L2 residual norms, their observed orders,
and the same with the coupling scaled by --perturb.  Results go to a CSV.
"""

import argparse
from pathlib import Path

from nonlocal_lab import ode_check, output


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--modes", default="1,2")
    ap.add_argument("--eps", default="0,0.25,0.5,1,2")
    ap.add_argument("--sizes", default="256,512,1024,2048")
    ap.add_argument("--perturb", type=float, default=1.1)
    ap.add_argument("--out", default="results/ode_convergence.csv")
    args = ap.parse_args()

    sizes = [int(m) for m in args.sizes.split(",")]
    rows = []
    for n in (int(v) for v in args.modes.split(",")):
        for eps in (float(v) for v in args.eps.split(",")):
            for scale in (1.0, args.perturb):
                reps = ode_check.doubling_study(n, eps, sizes=sizes, coupling_scale=scale)
                linf = [r.l_inf for r in reps]
                l2 = [r.l2 for r in reps]
                o_inf = ode_check.convergence_orders(linf)
                o_2 = ode_check.convergence_orders(l2)
                print(f"n={n} eps={eps:<5g} scale={scale:<4g} "
                      f"Linf orders {' '.join(f'{o:5.2f}' for o in o_inf)}  "
                      f"L2 orders {' '.join(f'{o:5.2f}' for o in o_2)}")
                for m, a, b in zip(sizes, linf, l2):
                    rows.append([n, eps, scale, m, a, b])
    output.write_atomic(Path(args.out), output.to_csv(
        ["n", "epsilon", "coupling_scale", "M", "l_inf", "l2"], rows))
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()

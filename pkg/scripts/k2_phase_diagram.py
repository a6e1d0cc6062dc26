"""Sweep the regularization strength on a single weighted edge.

Prints, per gamma, the converged state from a central start and from a
light-biased start, the simplex coordinate of fractional limits against
the closed-form energy apex, and the measured transition points against
1/sqrt(w0) and sqrt(w0).

Usage:
    python scripts/k2_phase_diagram.py [--w0 4.0] [--grid 0.01]
"""

import argparse
import math

import numpy as np

from graphnorm import GammaSchedule, build_graph, round_to_mis, run_wrgn, simplex_state


def limit(g, x0, gamma):
    x, _ = run_wrgn(
        g, np.asarray(x0, float), GammaSchedule.constant(gamma, 200_000), early_exit=True
    )
    return x


def simplex_start(g, p):
    x = np.asarray(p, float) / g.w
    return x / x.max()


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--w0", type=float, default=4.0, help="weight of the heavy endpoint")
    ap.add_argument("--grid", type=float, default=0.01)
    ap.add_argument("--verbose", action="store_true", help="print every grid row")
    args = ap.parse_args()

    w0 = args.w0
    g = build_graph(2, [(0, 1)], [w0, 1.0])
    gamma_b, gamma_d = 1.0 / math.sqrt(w0), math.sqrt(w0)
    grid = np.round(np.arange(args.grid, gamma_d + 0.3, args.grid), 6)

    first_binary = first_light = None
    for gamma in grid:
        x_mid = limit(g, simplex_start(g, [0.5, 0.5]), float(gamma))
        x_light = limit(g, simplex_start(g, [0.01, 0.99]), float(gamma))
        binary = float(np.max(np.minimum(x_mid, 1 - x_mid))) < 1e-3
        light = round_to_mis(g, x_light).members == (1,)
        if binary and first_binary is None:
            first_binary = gamma
        if light and first_light is None:
            first_light = gamma
        if args.verbose:
            if binary:
                desc = f"binary -> {round_to_mis(g, x_mid).members}"
            else:
                p1 = simplex_state(g, x_mid)[1]
                apex = (1 - gamma * math.sqrt(w0)) / (1 + w0 - 2 * gamma * math.sqrt(w0))
                desc = f"fractional p1={p1:.6f} apex={apex:.6f}"
            print(f"gamma={gamma:5.2f}  {desc}  light-start->{round_to_mis(g, x_light).members}")

    print(f"w0 = {w0}")
    print(f"binarization onset : {first_binary}  (1/sqrt(w0) = {gamma_b:.4f})")
    print(f"light MIS onset    : {first_light}  (sqrt(w0)   = {gamma_d:.4f})")


if __name__ == "__main__":
    main()

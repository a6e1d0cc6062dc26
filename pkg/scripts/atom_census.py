"""Print the atomic-census table for all built-in orders.

Usage:
    python scripts/atom_census.py [--max-n 7]
"""

import argparse
import time

from graphnorm.enumeration import census, format_census_table


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-n", type=int, default=7)
    args = ap.parse_args()
    t0 = time.perf_counter()
    rows = [census(n) for n in range(1, args.max_n + 1)]
    print(format_census_table(rows))
    print(f"({time.perf_counter() - t0:.1f}s)")


if __name__ == "__main__":
    main()

"""Run the verification grid for d = 1, 2 (theorem) and d = 3 (conditional), then the Omega tables.

    python3 scripts/run_grid.py [--out reports] [--jobs 4] [--cache .dtcache]
"""
import argparse
import sys

from dtflop import cli

GRID = "(0,1),(1,0),(0,2),(2,0),(1,1),(1,2),(2,1),(2,2)"
RUNS = [(1, "5,13"), (2, "13"), (3, "5,13")]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="reports")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--cache")
    a = ap.parse_args()
    extra = ["--out", a.out, "--jobs", str(a.jobs)] + (["--cache", a.cache] if a.cache else [])
    worst = 0
    for d, primes in RUNS:
        worst = max(worst, cli.main(["verify", "--d", str(d), "--sector", "all", "--primes", primes,
                                     "--dims", GRID] + extra))
        worst = max(worst, cli.main(["verify", "--d", str(d), "--sector", "nilpotent",
                                     "--primes", primes.split(",")[-1],
                                     "--dims", "(0,1),(0,2),(0,3),(1,0),(2,0),(3,0)"] + extra))
        worst = max(worst, cli.main(["table", "--d", str(d), "--dmax", "6", "--out", a.out]))
    return worst


if __name__ == "__main__":
    sys.exit(main())

"""Compare the compiled and numpy countermodel scans.

    python benchmarks/bench_oracle.py [--max-worlds 5] [--repeat 3]

Valid formulas force a full scan of every frame and valuation, which is the
expensive case.
"""

import argparse
import time

from glcirc import kernel
from glcirc.formula import parse
from glcirc.oracle import _tables, find_countermodel

FORMULAS = [
    "<>([]p & ~p) | []p",
    "[](p -> q) -> ([]p -> []q)",
    "[]([]p -> p) -> []p",
    "[]p -> [][]p",
    "<>(p & q) | [](~p | ~q)",
    "[](p & q) -> []p & <>T | []F",
]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-worlds", type=int, default=5)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    for n in range(1, args.max_worlds + 1):
        _tables(n)
    print(f"selected backend: {kernel.BACKEND}")
    for name in kernel.IMPLEMENTATIONS:
        best = float("inf")
        for _ in range(args.repeat):
            t0 = time.perf_counter()
            for text in FORMULAS:
                find_countermodel(parse(text), args.max_worlds, backend=name)
            best = min(best, time.perf_counter() - t0)
        print(f"{name:>9}: {best * 1000:8.1f} ms for {len(FORMULAS)} formulas "
              f"(best of {args.repeat}, up to {args.max_worlds} worlds)")


if __name__ == "__main__":
    main()

"""Count s-torsion pairs and silting complexes for small (n, m) and compare."""
import argparse
import time
from math import comb

from extrifact.excat import build_extended_category
from extrifact.silting import enumerate_silting
from extrifact.torsion import enumerate_s_torsion


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-size", type=int, default=16, help="skip categories with more indecomposables")
    ap.add_argument("--jobs", type=int, default=1)
    a = ap.parse_args()
    print(f"{'n':>2} {'m':>2} {'objects':>7} {'pairs':>6} {'silting':>7} {'formula':>7} {'secs':>6}")
    for n in range(1, 5):
        for m in range(1, 4):
            size = m * n * (n + 1) // 2
            if size > a.max_size:
                continue
            t0 = time.perf_counter()
            pairs = len(enumerate_s_torsion(build_extended_category(n, m), jobs=a.jobs))
            dt = time.perf_counter() - t0
            silt = len(enumerate_silting(n, m))
            formula = comb((m + 1) * (n + 1), n) // (n + 1)
            flag = "" if pairs == silt == formula else "  MISMATCH"
            print(f"{n:>2} {m:>2} {size:>7} {pairs:>6} {silt:>7} {formula:>7} {dt:>6.2f}{flag}")


if __name__ == "__main__":
    main()

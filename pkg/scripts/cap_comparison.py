"""How many pairs a dimension-capped T*F search finds, against the exact search."""
import argparse

from extrifact.excat import build_extended_category
from extrifact.torsion import enumerate_s_torsion


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--m", type=int, default=2)
    ap.add_argument("--extra", type=int, nargs="*", default=[0, 1, 2, 3])
    a = ap.parse_args()
    p = build_extended_category(a.n, a.m)
    exact = set(enumerate_s_torsion(p))
    print(f"exact search: {len(exact)} pairs")
    for k in a.extra:
        capped = set(enumerate_s_torsion(p, mode="cap", cap_extra=k))
        print(f"cap dim(x)+{k}: {len(capped)} pairs, subset of exact: {capped <= exact}")


if __name__ == "__main__":
    main()

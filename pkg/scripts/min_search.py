"""Smallest |lambda_0 + lambda_1 e + ... + lambda_m e^m| for growing boxes."""
import argparse

from emeasure.balls import fmt
from emeasure.certify import empirical_min_search


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m", type=int, default=2)
    ap.add_argument("--max-box", type=int, default=30)
    args = ap.parse_args()
    print("box,lambda,value")
    for box in range(1, args.max_box + 1):
        r = empirical_min_search(args.m, box)
        print(box, " ".join(map(str, r.form.coeffs)), fmt(r.value, 10), sep=",")


if __name__ == "__main__":
    main()

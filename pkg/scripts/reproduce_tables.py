"""Recompute the kappa_m table, the f(m) table and the limit constant."""
import argparse
import csv
import sys

from emeasure.balls import ball, fmt, lower_str
from emeasure.factor import PAPER_KAPPA_TABLE, check_kappa_half, kappa_limit, kappa_m
from emeasure.measure import fm_table


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--bits", type=int, default=128)
    ap.add_argument("--half-range", type=int, default=1000,
                    help="check kappa_m >= 1/2 for 13 <= m <= this")
    args = ap.parse_args()
    out = csv.writer(sys.stdout)

    out.writerow(["m", "kappa_lower", "reference", "margin"])
    for m in range(2, 15):
        v = kappa_m(m, args.bits).value
        out.writerow([m, lower_str(v, 10), PAPER_KAPPA_TABLE[m],
                      lower_str(v - ball(PAPER_KAPPA_TABLE[m]), 4)])

    print()
    out.writerow(["m", "f", "product", "reference_f", "reference_product"])
    for r in fm_table(bits=args.bits):
        out.writerow([r.m, fmt(r.f, 8), fmt(r.product, 8), r.paper_f, r.paper_product])

    print()
    half = check_kappa_half(13, args.half_range, args.bits)
    print(f"kappa_m >= 1/2 on [13, {args.half_range}]: {half.passed}, minimum {fmt(half.minimum, 8)}")
    print(f"kappa limit: {fmt(kappa_limit('1e-30'), 32)}")


if __name__ == "__main__":
    main()

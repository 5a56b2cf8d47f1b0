"""Sweep the size estimates at t = 1 and print log(value/bound) per l.

Negative numbers mean the estimate holds; the second column of each pair
divides only by the guaranteed factor instead of the exact content.
"""
import argparse

from emeasure.certify import QR_THRESHOLD, check_Q_bound, check_R_bound


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m", type=int, choices=(2, 3), default=2)
    ap.add_argument("--l-max", type=int, default=60)
    args = ap.parse_args()
    print("l,logQ_ratio,logQ_ratio_lower_div,logR_ratio,logR_ratio_lower_div,R_bits")
    for l in range(QR_THRESHOLD[args.m], args.l_max + 1):
        q = check_Q_bound(args.m, l)
        r = check_R_bound(args.m, l)
        cells = [q.max_log_ratio, q.max_log_ratio_lower_div, r.max_log_ratio, r.max_log_ratio_lower_div]
        print(l, *(f"{float(c.upper()):.4f}" for c in cells), r.bits, sep=",")


if __name__ == "__main__":
    main()

"""Compare the omega bound with the excess implied by the generic bound."""
import argparse

from emeasure.balls import ball, fmt, workprec
from emeasure.measure import (
    implied_omega_excess, omega_coefficient, theorem_threshold_loglog,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--steps", type=int, default=12)
    args = ap.parse_args()
    print("m,loglogH,implied_excess,omega_excess,dominated")
    with workprec(128):
        for m in (2, 3, 4, 5, 8, 14):
            base = theorem_threshold_loglog(m)
            for i in range(args.steps):
                ll = base + ball(str(2 ** i - 1))
                y = implied_omega_excess(m, ll)
                c = omega_coefficient(m) / ll
                print(m, fmt(ll, 8), fmt(y, 8), fmt(c, 8), bool(y <= c), sep=",")


if __name__ == "__main__":
    main()

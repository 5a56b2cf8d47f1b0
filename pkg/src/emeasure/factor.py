"""Common factors of the integer system and the constant kappa_m.

kappa_m measures, per unit of ``m*l``, the logarithmic size of the factor
that provably divides every coefficient of every B*_{k,j}:

    kappa_m = (1/m) sum_{p <= (m+1)/2} min_j(floor(j/p) + floor((m-j)/p))
              * log p/(p-1) * w_p(s e^s)

with ``w_n(x) = 1 - n/x - (n-1)/log n * log x / x`` and ``s = s(m)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from flint import arb, arb_series

from .balls import DEFAULT_BITS, workprec
from .errors import PreconditionError, TheoremViolation
from .hermite_pade import ApproxSystem
from .numtheory import mobius, primes_upto, vp, vp_factorial

# Lower bounds for kappa_m printed in the source table (m = 2..14).
PAPER_KAPPA_TABLE = {
    2: "0",
    3: "0.215544",
    4: "0.173121",
    5: "0.387118",
    6: "0.322600",
    7: "0.375535",
    8: "0.397256",
    9: "0.474840",
    10: "0.427356",
    11: "0.501455",
    12: "0.459667",
    13: "0.502575",
    14: "0.534653",
}
KAPPA_LIMIT_DECIMAL = "0.75536661083"


def s_of_m(m: int) -> arb:
    """s(2) = e and s(m) = m (log m)^2 for m >= 3."""
    if m == 2:
        return arb.const_e()
    if m < 2:
        raise PreconditionError("s(m) is defined for m >= 2")
    return m * arb(m).log() ** 2


def w(n, x: arb) -> arb:
    """w_n(x) = 1 - n/x - (n-1)/log n * log x / x; ``n`` may be a ball."""
    n = arb(n) if not isinstance(n, arb) else n
    return 1 - n / x - (n - 1) / n.log() * x.log() / x


def _threshold(s: arb) -> arb:
    return s * s.exp()


def min_floor_sum(m: int, p: int) -> int:
    return min(j // p + (m - j) // p for j in range(m + 1))


def admissible_primes(m: int) -> Tuple[int, ...]:
    """Primes p with p <= (m+1)/2."""
    return primes_upto((m + 1) // 2).primes


def nu_lower_exponent(m: int, p: int, l: int) -> int:
    if 2 * p > m + 1:
        raise PreconditionError(f"p = {p} exceeds (m+1)/2 for m = {m}")
    if l < 2:
        raise PreconditionError("l must be >= 2")
    return min_floor_sum(m, p) * vp_factorial(l - 1, p)


def j0_factor_exponent(m: int, p: int, l: int) -> int:
    """floor(m/p) v_p(l!) - v_p(l); valid for the j = 0 column only."""
    if p > m:
        raise PreconditionError(f"p = {p} exceeds m = {m}")
    return (m // p) * vp_factorial(l, p) - vp(l, p)


def d_lower(m: int, l: int) -> int:
    d = 1
    for p in admissible_primes(m):
        d *= p ** nu_lower_exponent(m, p, l)
    return d


@dataclass(frozen=True)
class CommonFactorReport:
    m: int
    l: int
    nu_exact: Dict[int, int]
    nu_lower: Dict[int, int]
    d_exact: int
    d_lower: int
    content: int
    reduced: ApproxSystem = field(repr=False)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "l": self.l,
            "nu_exact": {str(p): v for p, v in self.nu_exact.items()},
            "nu_lower": {str(p): v for p, v in self.nu_lower.items()},
            "d_exact": str(self.d_exact),
            "d_lower": str(self.d_lower),
            "content": str(self.content),
        }


def system_content(system: ApproxSystem) -> int:
    g = 0
    for row in system.polys:
        for poly in row:
            g = math.gcd(g, poly.content())
    return g


def extract_common_factor(system: ApproxSystem) -> CommonFactorReport:
    """Divide the whole system by the small-prime part of its content.

    Only primes up to (m+1)/2 are extracted, matching the guaranteed factor;
    other primes that happen to divide the content are left in place.
    """
    if system.l < 2:
        raise PreconditionError("system must have l >= 2")
    m, l = system.m, system.l
    g = system_content(system)
    nu_exact, nu_low = {}, {}
    d_exact = d_low = 1
    for p in admissible_primes(m):
        nu_exact[p] = vp(g, p)
        nu_low[p] = nu_lower_exponent(m, p, l)
        if nu_exact[p] < nu_low[p]:
            raise TheoremViolation(
                f"content valuation {nu_exact[p]} at p={p} is below the guaranteed {nu_low[p]}"
            )
        d_exact *= p ** nu_exact[p]
        d_low *= p ** nu_low[p]
    return CommonFactorReport(m, l, nu_exact, nu_low, d_exact, d_low, g, system.divided(d_exact))


@dataclass(frozen=True)
class KappaValue:
    m: int
    value: arb
    terms: Tuple[Tuple[int, int, arb], ...]  # (p, min floor sum, w_p)


def kappa_m(m: int, bits: int = DEFAULT_BITS) -> KappaValue:
    if m < 2:
        raise PreconditionError("kappa_m needs m >= 2")
    with workprec(bits):
        s = s_of_m(m)
        x = _threshold(s)
        total = arb(0)
        terms = []
        for p in admissible_primes(m):
            mf = min_floor_sum(m, p)
            wp = w(p, x)
            terms.append((p, mf, wp))
            total += mf * arb(p).log() / (p - 1) * wp
        value = total / m
    if not (value >= 0 and value < 1):
        raise TheoremViolation(f"kappa_{m} enclosure {value} outside [0, 1)")
    return KappaValue(m, value, tuple(terms))


def kappa_simplified_lower(m: int, bits: int = DEFAULT_BITS) -> arb:
    """w_{(m+1)/2}(s e^s) (1/m) sum_p (floor((m+1)/p) - 1) log p/(p-1)."""
    if m < 2:
        raise PreconditionError("needs m >= 2")
    with workprec(bits):
        primes = admissible_primes(m)
        if not primes:
            return arb(0)
        total = sum(((m + 1) // p - 1) * arb(p).log() / (p - 1) for p in primes)
        return w(arb(m + 1) / 2, _threshold(s_of_m(m))) * total / m


def kappa_half_closed_form(m: int, bits: int = DEFAULT_BITS) -> arb:
    """0.9 w_{(m+1)/2}(s e^s) sum_{p <= m/20 + 1} log p/(p(p-1)); used for m >= 80."""
    with workprec(bits):
        cutoff = m // 20 + 1
        total = sum(arb(p).log() / (p * (p - 1)) for p in primes_upto(cutoff))
        return arb(9) / 10 * w(arb(m + 1) / 2, _threshold(s_of_m(m))) * total


@dataclass(frozen=True)
class KappaHalfReport:
    lo: int
    hi: int
    passed: bool
    first_failure: Optional[int]
    minimum: Optional[arb]
    rows: List[Tuple[int, str, arb]]


def check_kappa_half(lo: int, hi: int, bits: int = DEFAULT_BITS) -> KappaHalfReport:
    """kappa_m >= 1/2 on [lo, hi]: table route below 80, closed form from 80 on."""
    if lo < 13 or hi > 10 ** 4 or lo > hi:
        raise PreconditionError("range must lie within [13, 10^4]")
    rows, first_fail, minimum = [], None, None
    half = arb(1) / 2
    for m in range(lo, hi + 1):
        if m <= 79:
            route, val = "simplified", kappa_simplified_lower(m, bits)
        else:
            route, val = "closed_form", kappa_half_closed_form(m, bits)
        rows.append((m, route, val))
        minimum = val if minimum is None else minimum.min(val)
        if first_fail is None and not (val >= half):
            first_fail = m
    return KappaHalfReport(lo, hi, first_fail is None, first_fail, minimum, rows)


def kappa_partial_sum(cutoff: int, bits: int = DEFAULT_BITS) -> arb:
    """sum_{p <= cutoff} log p/(p(p-1))."""
    with workprec(bits):
        return sum((arb(p).log() / (p * (p - 1)) for p in primes_upto(cutoff)), arb(0))


def integer_tail_bound(N: int) -> arb:
    """Upper bound for sum_{n > N} log n/(n(n-1)), N >= 3.

    The summand decreases for n >= 3, so the sum is below the integral from
    N; with 1/(x(x-1)) <= 1/(x-1)^2 and log(y+1) <= log y + 1/y the integral
    is at most (1 + log N)/(N-1) + log N/(N-1)^2.
    """
    if N < 3:
        raise PreconditionError("N must be >= 3")
    lN = arb(N).log()
    return (1 + lN) / (N - 1) + lN / (N - 1) ** 2


def kappa_limit_elementary(N: int, bits: int = DEFAULT_BITS) -> arb:
    """Enclosure from primes up to N plus the all-integer tail bound.

    The radius is about log N / N, so this is only a coarse cross-check.
    """
    with workprec(bits):
        partial = kappa_partial_sum(N, bits)
        tail = integer_tail_bound(N)
        return partial.union(partial + tail)


def _log_derivative_zeta(n: int) -> arb:
    """-zeta'(n)/zeta(n) for an integer n >= 2."""
    ser = arb_series.zeta(arb_series([n, 1], prec=2))
    z0, z1 = ser.coeffs()[0], ser.coeffs()[1]
    return -z1 / z0


def _prime_tail_power_bound(N: int, n: int) -> arb:
    """Upper bound for sum_{p > N} log p/(p^n - 1), n >= 2, N >= 3."""
    lN = arb(N).log()
    integral = arb(N) ** (1 - n) * (lN / (n - 1) + arb(1) / (n - 1) ** 2)
    # 1/(k^n - 1) <= 2/k^n, and log x x^-n decreases for x >= 3
    return 2 * integral


def kappa_limit(tolerance, cutoff: int = 1000) -> arb:
    """Certified enclosure of sum_p log p/(p(p-1)) with radius <= tolerance.

    Primes up to ``cutoff`` are summed directly.  The remaining primes are
    handled through the identity

        sum_{p > N} log p/(p(p-1)) = -sum_{n >= 2} mu(n) G_N(n),
        G_N(n) = sum_{p > N} log p/(p^n - 1)
               = -zeta'(n)/zeta(n) - sum_{p <= N} log p/(p^n - 1),

    truncated once the next G_N terms are provably below the budget.
    """
    tol = arb(tolerance) if not isinstance(tolerance, arb) else tolerance
    if not tol > 0:
        raise PreconditionError("tolerance must be positive")
    if cutoff < 3:
        raise PreconditionError("cutoff must be >= 3")
    bits = max(DEFAULT_BITS, int(-float(tol.log().mid()) / math.log(2)) + 64) if tol < 1 else DEFAULT_BITS
    with workprec(bits):
        primes = primes_upto(cutoff).primes
        logs = {p: arb(p).log() for p in primes}
        partial = sum((logs[p] / (p * (p - 1)) for p in primes), arb(0))
        tail = arb(0)
        n = 2
        budget = tol / 4
        while True:
            rest = _prime_tail_power_bound(cutoff, n + 1) * cutoff / (cutoff - 1)
            mu = mobius(n)
            if mu:
                g = _log_derivative_zeta(n) - sum(
                    (logs[p] / (arb(p) ** n - 1) for p in primes), arb(0)
                )
                tail -= mu * g
            if rest < budget:
                break
            n += 1
            if n > 4096:
                raise TheoremViolation("prime tail did not converge")
        value = partial + tail + arb(0, rest.upper())
        if not (value.rad() <= tol):
            raise PreconditionError(f"tolerance {tolerance} not reached (radius {value.rad()})")
        return value

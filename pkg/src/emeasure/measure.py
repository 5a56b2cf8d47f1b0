"""Explicit transcendence-measure bounds for e, sparse polynomials and e^d.

Everything that depends on the height H takes ``log H`` or ``log log H`` as
a ball.  Valid heights start around e^41 for m = 2 and are astronomically
larger for m >= 5, so H itself is never formed.

The linear-form criterion works with estimates

    |B_{k,0}(n)| <= exp(a n log n + b n),
    sum_j |L_{k,j}(n)| <= exp(-c n log n + d n),

and derived constants B = b + a d/c, C = a, D = a + b + a e^{-s},
F = 1/(2 e^D), v = c - d/s, u = 1 + log(s)/s.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List

from flint import arb, ctx

from .balls import DEFAULT_BITS, ball, fmt, workprec
from .errors import IndeterminateError, PreconditionError, TheoremViolation
from .factor import kappa_m, s_of_m

DELTA = "0.0000525"
# The same constant appears as 0.0000535 inside the proof of the m >= 15 case.
DELTA_PROOF_VARIANT = "0.0000535"
D_SHIFT = "0.02394"

# (b, d) for m = 2, 3, 4 and the derived (B, D) quoted alongside them.
SMALL_M_BD = {
    2: ("1.6791", "0.3654"),
    3: ("2.1016", "0.5139"),
    4: ("3.3612", "1.6016"),
}
SMALL_M_DERIVED = {
    2: ("2.4099", "3.8111"),
    3: ("3.6433", "5.1819"),
    4: ("9.7676", "7.3631"),
}
OMEGA_SMALL_COEFF = {2: "4.93", 3: "6.49", 4: "15.7"}

# f(m) table: (m, f(m), product) truncated to four decimals.
PAPER_FM_TABLE = [
    (5, "0.4638", "0.5324"),
    (6, "0.6159", "0.6551"),
    (7, "0.6032", "0.6469"),
    (8, "0.6158", "0.6603"),
    (9, "0.5768", "0.6296"),
    (10, "0.6366", "0.6831"),
    (11, "0.5995", "0.6529"),
    (12, "0.6444", "0.6936"),
    (13, "0.6286", "0.6812"),
    (14, "0.6203", "0.6749"),
]
FM_SLACK = "0.000001"
FM_SLACK_M5 = "0.0002069"

RHO_SMALL = "12.88"
RHO_LARGE = "2"


# ---------------------------------------------------------------------------
# inverse of y = z log z
# ---------------------------------------------------------------------------

def z_iterates(y: arb, count: int) -> List[arb]:
    """z_0 = y, z_n = y / log z_{n-1}."""
    zs = [y]
    for _ in range(count):
        zs.append(y / zs[-1].log())
    return zs


def z_inverse(y, tolerance=None, max_iter: int = 200) -> arb:
    """Enclosure of the z >= 1/e with z log z = y, for y > e.

    Odd nested-log iterates approach z from below and even ones from above;
    once they stop tightening quickly the bracket is finished by bisection
    on z log z - y.  When the sign at the bisection point can no longer be
    resolved, the mean value theorem (the derivative log z + 1 is >= 2 on
    the bracket) gives the final enclosure.
    """
    y = ball(y)
    if not y > arb.const_e():
        raise PreconditionError("z_inverse needs y > e")
    if tolerance is None:
        # what the working precision and the input's own radius allow
        tol = abs(y).max(arb(1)) * arb(2) ** (10 - ctx.prec) + 4 * y.rad()
    else:
        tol = ball(tolerance)
    if not tol > 0:
        raise PreconditionError("tolerance must be positive")
    lo, hi = y / y.log(), y  # z_1 and z_0
    prev = y
    for n in range(1, max_iter + 1):
        z = y / prev.log()
        if n % 2:
            lo = lo.max(z.lower()) if n > 1 else z.lower()
        else:
            hi = hi.min(z.upper())
        prev = z
        if (hi - lo) < tol:
            return lo.union(hi)
        # contraction factor is about 1/log z; hand over to bisection when slow
        if n >= 8 and z.log() < 4:
            break
    lo, hi = lo.lower(), hi.upper()
    for _ in range(4 * ctx.prec + 64):
        if (hi - lo) < tol:
            return lo.union(hi)
        mid = ((lo + hi) / 2).mid()
        f = mid * mid.log() - y
        if f > 0:
            hi = mid
        elif f < 0:
            lo = mid
        else:
            # derivative log z + 1 >= 1 + log(lo) on the bracket
            slope = 1 + lo.log()
            reach = abs(f).upper() / slope.lower()
            enclosure = arb(mid, 0) + arb(0, reach.upper())
            enclosure = enclosure.intersection(lo.union(hi))
            if not (2 * enclosure.rad() <= tol):
                raise IndeterminateError(
                    "z_inverse cannot reach the tolerance at this precision"
                )
            return enclosure
    raise IndeterminateError("z_inverse bisection did not converge")


def z_upper_bound(y, s) -> arb:
    """(1 + log s / s) y / log y, valid for y >= s e^s and s >= e."""
    y, s = ball(y), ball(s)
    if s < arb.const_e():
        raise PreconditionError("z_upper_bound needs s >= e")
    if y < s * s.exp():
        raise PreconditionError("z_upper_bound needs y >= s e^s")
    return (1 + s.log() / s) * y / y.log()


# ---------------------------------------------------------------------------
# parameters
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MeasureParams:
    m: int
    a: arb
    b: arb
    c: arb
    d: arb
    s: arb
    kappa: arb
    B: arb
    C: arb
    D: arb
    F: arb
    v: arb
    u: arb
    n1: arb
    label: str = "e"

    def to_json(self) -> dict:
        return {k: (fmt(v, 15) if isinstance(v, arb) else v) for k, v in self.__dict__.items()}


def derive(m: int, a, b, c, d, s: arb, kappa: arb, label: str = "e") -> MeasureParams:
    a, b, c, d = (ball(x) for x in (a, b, c, d))
    B = b + a * d / c
    D = a + b + a * (-s).exp()
    F = 1 / (2 * D.exp())
    v = c - d / s
    u = 1 + s.log() / s
    # n_0 is taken as ceil(e^s), which makes n_1 = max(n_0, e, e^s) = n_0
    es = s.exp()
    n0 = es.ceil() if es.is_finite() else es
    if not n0.is_exact():
        n0 = arb(n0.upper().ceil().mid())
    n1 = n0.max(arb.const_e())
    return MeasureParams(m, a, b, c, d, s, kappa, B, a, D, F, v, u, n1, label)


def params_for_e(m: int, delta: str = DELTA, bits: int = DEFAULT_BITS) -> MeasureParams:
    if m < 2:
        raise PreconditionError("params_for_e needs m >= 2")
    with workprec(bits):
        s = s_of_m(m)
        kappa = kappa_m(m, bits).value
        if m in SMALL_M_BD:
            b, d = SMALL_M_BD[m]
        else:
            lm = arb(m).log()
            b = (m + 1) * arb(m + 1).log() - (1 + kappa) * m + ball(delta)
            d = (arb(2 * m + 1) / 2) * lm - (1 + kappa) * m - ball(D_SHIFT)
        return derive(m, m, b, 1, d, s, kappa)


def sparse_params(m1: int, m2: int, bits: int = DEFAULT_BITS) -> MeasureParams:
    """a = m1, b = (m1+2) log(m1+1) - m1, c = 1, d = (m1+2) log m2, s = s(m2)."""
    _check_sparse_shape(m1, m2)
    with workprec(bits):
        s = s_of_m(m2)
        b = (m1 + 2) * arb(m1 + 1).log() - m1
        d = (m1 + 2) * arb(m2).log()
        return derive(m1, m1, b, 1, d, s, arb(0), label=f"sparse({m1},{m2})")


def _check_sparse_shape(m1: int, m2: int) -> None:
    if m1 < 1:
        raise PreconditionError("m1 must be >= 1")
    if m2 < 4:
        raise PreconditionError("the sparse bound needs degree m2 >= 4")
    if m2 < m1 + 1:
        raise PreconditionError("the sparse bound needs m2 >= m1 + 1")


# ---------------------------------------------------------------------------
# bounds
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LowerBound:
    """|Lambda| > prefactor * (2H)^-(a/c + excess), all in log space."""

    excess: arb
    prefactor: arb
    log2H: arb
    leading: arb  # a/c

    @property
    def exponent(self) -> arb:
        return self.leading + self.excess

    @property
    def log_bound(self) -> arb:
        return self.prefactor.log() - self.exponent * self.log2H

    def omega_excess(self, logH: arb) -> arb:
        """Y with |Lambda| > H^-(a/c + Y)."""
        return (-self.log_bound) / logH - self.leading

    def __iter__(self):
        # unpacks as (exponent excess, prefactor)
        return iter((self.excess, self.prefactor))


def _log2H(logH) -> arb:
    return ball(logH) + arb(2).log()


def lemma_threshold(params: MeasureParams) -> arb:
    """v n_1 log n_1, the smallest admissible log(2H)."""
    return params.v * params.n1 * params.n1.log()


def generic_lower_bound(params: MeasureParams, logH) -> LowerBound:
    """F (2H)^-(a/c + eps) with eps log 2H = B z(log 2H / v) + C log z(log 2H / v)."""
    log2H = _log2H(logH)
    if not params.v > 0:
        raise PreconditionError("v = c - d/s must be positive")
    if log2H < lemma_threshold(params):
        raise PreconditionError(
            f"log(2H) = {log2H} is below v n1 log n1 = {lemma_threshold(params)}"
        )
    z = z_inverse(log2H / params.v)
    eps = (params.B * z + params.C * z.log()) / log2H
    return LowerBound(eps, params.F, log2H, params.a / params.c)


def corollary_bound(params: MeasureParams, logH) -> LowerBound:
    """v^C/(2 e^D u^C) (loglog 2H / log 2H)^C (2H)^-(a/c + B u/(v loglog 2H))."""
    log2H = _log2H(logH)
    if params.c > 1 + params.d / params.s:
        raise PreconditionError("corollary needs c <= 1 + d/s")
    if log2H < lemma_threshold(params):
        raise PreconditionError("log(2H) below v n1 log n1")
    ll = log2H.log()
    C, u, v = params.C, params.u, params.v
    pref = v ** C / (2 * params.D.exp() * u ** C) * (ll / log2H) ** C
    eps = params.B * u / (v * ll)
    return LowerBound(eps, pref, log2H, params.a / params.c)


def b_hat(params: MeasureParams) -> arb:
    return params.u / params.v * params.B


def theorem_threshold_loglog(m: int) -> arb:
    """log(s e^s) = log s + s, the least admissible log log H."""
    s = s_of_m(m)
    return s.log() + s


def _check_loglog(loglogH: arb, need: arb, what: str) -> None:
    # thresholds are checked one-sidedly: only inputs certainly below are
    # rejected, so a threshold recomputed from the same formula is accepted
    if loglogH < need:
        raise PreconditionError(f"log log H must be >= {need} for {what}")


def omega_coefficient(m: int, bits: int = DEFAULT_BITS) -> arb:
    """The numerator c_m in omega(m, H) <= m + c_m / log log H."""
    if m in OMEGA_SMALL_COEFF:
        return ball(OMEGA_SMALL_COEFF[m])
    with workprec(bits):
        k = kappa_m(m, bits).value
        lm = arb(m).log()
        first = 1 - 2 * k / lm ** 2 if m <= 14 else 1 - (1 + k) / lm ** 2
        return first * (1 - k / lm) * m * m * lm


def omega_upper(m: int, loglogH, bits: int = DEFAULT_BITS) -> arb:
    if m < 2:
        raise PreconditionError("m must be >= 2")
    with workprec(bits):
        ll = ball(loglogH)
        _check_loglog(ll, theorem_threshold_loglog(m), f"m = {m}")
        return m + omega_coefficient(m, bits) / ll


def implied_omega_excess(m: int, loglogH, bits: int = DEFAULT_BITS) -> arb:
    """Y from the generic bound: |Lambda| > H^-(m + Y) with the prefactor folded in."""
    with workprec(bits):
        logH = ball(loglogH).exp()
        lb = generic_lower_bound(params_for_e(m, bits=bits), logH)
        return lb.omega_excess(logH)


@dataclass(frozen=True)
class FmRow:
    m: int
    f: arb
    product: arb
    paper_f: str
    paper_product: str

    @property
    def dominated(self) -> bool:
        return bool(self.f < self.product)


def _f_parts(m: int, bits: int):
    p = params_for_e(m, bits=bits)
    slack = ball(FM_SLACK_M5 if m == 5 else FM_SLACK)
    return p, slack, m * m * arb(m).log()


def f_of_m(m: int, bits: int = DEFAULT_BITS) -> arb:
    """u (B + slack)/(v' m^2 log m), the quantity tabulated for 5 <= m <= 14.

    v' is v with its term 0.02394/(m (log m)^2) dropped, as in the expanded
    closed form of f; v' < v, so this overestimates :func:`f_of_m_exact`.
    The slack is 10^-6, or 0.0002069 when m = 5.
    """
    if m < 5:
        raise PreconditionError("f(m) is defined for m >= 5")
    with workprec(bits):
        p, slack, scale = _f_parts(m, bits)
        v_expanded = p.v - ball(D_SHIFT) / (m * arb(m).log() ** 2)
        return p.u * (p.B + slack) / (v_expanded * scale)


def f_of_m_exact(m: int, bits: int = DEFAULT_BITS) -> arb:
    """u (B + slack)/(v m^2 log m) with v = 1 - d/s exactly."""
    if m < 5:
        raise PreconditionError("f(m) is defined for m >= 5")
    with workprec(bits):
        p, slack, scale = _f_parts(m, bits)
        return p.u * (p.B + slack) / (p.v * scale)


def fm_product(m: int, bits: int = DEFAULT_BITS) -> arb:
    with workprec(bits):
        k = kappa_m(m, bits).value
        lm = arb(m).log()
        return (1 - k / lm) * (1 - 2 * k / lm ** 2)


def fm_table(lo: int = 5, hi: int = 14, bits: int = DEFAULT_BITS) -> List[FmRow]:
    if lo < 5 or hi > 14:
        raise PreconditionError("the f(m) comparison covers 5 <= m <= 14")
    paper = {m: (f, pr) for m, f, pr in PAPER_FM_TABLE}
    rows = []
    for m in range(lo, hi + 1):
        row = FmRow(m, f_of_m(m, bits), fm_product(m, bits), *paper[m])
        if not row.dominated:
            raise TheoremViolation(f"f({m}) is not below the product")
        rows.append(row)
    return rows


def rho_value(m1: int, m2: int, logH, bits: int = DEFAULT_BITS) -> arb:
    """(1 + log 2/log H) u/v for the sparse parameters."""
    with workprec(bits):
        p = sparse_params(m1, m2, bits)
        return (1 + arb(2).log() / ball(logH)) * p.u / p.v


def rho_constant(m2: int) -> arb:
    return ball(RHO_LARGE if m2 >= 11 else RHO_SMALL)


def sparse_bound(m1: int, m2: int, loglogH, bits: int = DEFAULT_BITS) -> arb:
    """Exponent m1 + rho (m1^2 + 3 m1 + 2) log m2 / log log H."""
    _check_sparse_shape(m1, m2)
    with workprec(bits):
        ll = ball(loglogH)
        _check_loglog(ll, theorem_threshold_loglog(m2), f"m2 = {m2}")
        return m1 + rho_constant(m2) * (m1 * m1 + 3 * m1 + 2) * arb(m2).log() / ll


def sparse_generic_bound(m1: int, m2: int, logH, bits: int = DEFAULT_BITS) -> LowerBound:
    with workprec(bits):
        return generic_lower_bound(sparse_params(m1, m2, bits), logH)


def power_measure(dexp: int, m: int, loglogH, bits: int = DEFAULT_BITS) -> arb:
    """omega bound for lambda_0 + lambda_1 e^d + ... + lambda_m e^(m d)."""
    if dexp < 2:
        raise PreconditionError("d must be >= 2")
    if m < 1:
        raise PreconditionError("m must be >= 1")
    return sparse_bound(m, dexp * m, loglogH, bits)

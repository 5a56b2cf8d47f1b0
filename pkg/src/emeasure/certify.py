"""Certified evaluation of linear forms in powers of e and of the small-m
size estimates for the integer approximation system at t = 1.

e^j is enclosed from its Taylor series with integer fixed-point terms and an
explicit remainder, so every ball produced here rests on exact integer
arithmetic plus one bounded truncation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from flint import arb

from .balls import DEFAULT_BITS, MAX_BITS, ball, lower_str, upper_str, workprec
from .errors import IndeterminateError, PreconditionError, ResourceLimitError, TheoremViolation
from .factor import extract_common_factor, s_of_m
from .hermite_pade import ApproxSystem, IntPolynomial, build_system
from .measure import SMALL_M_BD, generic_lower_bound, params_for_e

MAX_EXP_ARG = 64
SEARCH_BUDGET = 10 ** 8
# l >= ceil(e^{s(m)}) for the small-m estimates
QR_THRESHOLD = {2: 16, 3: 38, 4: 2181}


# ---------------------------------------------------------------------------
# e^j
# ---------------------------------------------------------------------------

def _exp_fixed_point(j: int, bits: int) -> Tuple[int, int]:
    """(S, err) with |S - 2^bits e^j| <= err, from sum_n j^n/n!.

    Terms are floor(t_{n-1} j / n), so the error of term n obeys
    e_n <= e_{n-1} j/n + 1; it is carried along as an integer.  The loop
    stops at a zero term with j/(n+1) <= 1/2, where the omitted tail is at
    most the true size of term n, i.e. at most e_n.
    """
    one = 1 << bits
    term, total = one, one
    e_term, e_total = 0, 0
    n = 0
    while True:
        n += 1
        term = term * j // n
        e_term = -(-e_term * j // n) + 1
        total += term
        e_total += e_term
        if term == 0 and n >= 2 * j:
            break
    return total, e_total + e_term


def exp_enclosure(j: int, bits: int = DEFAULT_BITS) -> arb:
    """Ball for e^j with radius at most 2^(4 - bits) e^j."""
    if not 0 <= j <= MAX_EXP_ARG:
        raise PreconditionError(f"exp_enclosure needs 0 <= j <= {MAX_EXP_ARG}")
    if bits > MAX_BITS * 64:
        raise ResourceLimitError(f"{bits} bits exceeds the precision cap")
    if j == 0:
        return arb(1)
    # guard bits cover the accumulated floor errors and the scaling
    guard = bits + 16 + (2 * j).bit_length()
    total, err = _exp_fixed_point(j, guard)
    with workprec(guard + total.bit_length() + 8):
        mid = arb(total)
        value = (mid + arb(0, err)) * arb(2) ** (-guard)
    return value


# ---------------------------------------------------------------------------
# linear forms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LinearForm:
    """lambda_0 + lambda_1 e + ... + lambda_m e^m."""

    coeffs: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        if len(self.coeffs) < 1:
            raise PreconditionError("a linear form needs at least one coefficient")

    @property
    def m(self) -> int:
        return len(self.coeffs) - 1

    @property
    def height(self) -> int:
        return max(abs(c) for c in self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def scaled(self, c: int) -> "LinearForm":
        return LinearForm(tuple(c * x for x in self.coeffs))


def _form_at(form: LinearForm, bits: int) -> arb:
    with workprec(bits):
        total = arb(form.coeffs[0])
        for j, c in enumerate(form.coeffs[1:], start=1):
            if c:
                total += c * exp_enclosure(j, bits)
        return total


def eval_linear_form(form: LinearForm, target_bits: int = 64, cap: int = MAX_BITS) -> arb:
    """Enclosure of |Lambda| to relative accuracy 2^-target_bits.

    Precision doubles until the relative width is small enough or the
    absolute width drops below 2^-cap.  A result that still contains zero
    at the cap is reported rather than guessed.
    """
    if form.is_zero():
        raise PreconditionError("the zero form has no certified size")
    bits = max(64, form.height.bit_length() + target_bits + 32)
    while True:
        val = _form_at(form, bits)
        with workprec(bits):
            val = abs(val)
            rel_ok = val > 0 and val.rad() <= val.lower() * arb(2) ** (-target_bits)
            abs_ok = val.rad() * 2 <= arb(2) ** (-cap)
        if rel_ok:
            return val
        if abs_ok and val > 0:
            return val
        if bits >= cap:
            if val > 0:
                return val
            raise IndeterminateError(
                f"|Lambda| enclosure {val} still contains 0 at {bits} bits"
            )
        bits = min(2 * bits, cap)


@dataclass(frozen=True)
class FormCertificate:
    form: LinearForm
    logH: arb
    value: arb
    log_bound: arb
    passed: bool
    bits: int

    def to_json(self) -> dict:
        bound = self.log_bound.exp()
        return {
            "lambda": [str(c) for c in self.form.coeffs],
            "m": self.form.m,
            "logH": upper_str(self.logH, 20) if self.logH.rad() else self.logH.str(20),
            "value_lo": lower_str(self.value, 20),
            "value_hi": upper_str(self.value, 20),
            "bound_hi": upper_str(bound, 20),
            "passed": self.passed,
            "bits": self.bits,
        }


def verify_measure(form: LinearForm, logH, bits: int = DEFAULT_BITS) -> FormCertificate:
    """Compare |Lambda| with F (2H)^-(m + eps(H)) in log space."""
    m = form.m
    if m < 2:
        raise PreconditionError("the measure for e needs m >= 2")
    if form.is_zero():
        raise PreconditionError("lambda must be non-zero")
    with workprec(bits):
        logH = ball(logH)
        s = s_of_m(m)
        if logH < s * s.exp():
            raise PreconditionError(f"log H must be >= s(m) e^s(m) for m = {m}")
        if not arb(form.height).log() <= logH:
            raise PreconditionError("max |lambda_j| exceeds H")
        bound = generic_lower_bound(params_for_e(m, bits=bits), logH)
        log_bound = bound.log_bound
    cap = MAX_BITS
    target = 32
    while True:
        value = eval_linear_form(form, target_bits=target, cap=cap)
        with workprec(bits):
            passed = bool(value.log() > log_bound)
            decided = passed or bool(value.log() <= log_bound)
        if decided or target >= cap:
            break
        target *= 2
    if not decided:
        raise IndeterminateError("comparison with the bound is undecided at the cap")
    used = max(64, form.height.bit_length() + target + 32)
    if not passed:
        raise TheoremViolation(f"|Lambda| = {value} is below the lower bound for {form.coeffs}")
    return FormCertificate(form, logH, value, log_bound, passed, used)


# ---------------------------------------------------------------------------
# exhaustive small search
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SearchResult:
    m: int
    box: int
    form: LinearForm
    value: arb
    runner_up: arb

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "box": self.box,
            "lambda": [str(c) for c in self.form.coeffs],
            "value_lo": lower_str(self.value, 15),
            "value_hi": upper_str(self.value, 15),
            "runner_up_lo": lower_str(self.runner_up, 15),
        }


def _canonical_tails(m: int, box: int):
    """(lambda_1..lambda_m) up to sign: last non-zero entry positive."""
    if m == 0:
        return
    for last in range(m, 0, -1):
        # entries after `last` are zero, entry `last` is in 1..box
        for top in range(1, box + 1):
            yield from _fill(last - 1, box, (top,) + (0,) * (m - last))


def _fill(count: int, box: int, suffix: Tuple[int, ...]):
    if count == 0:
        yield suffix
        return
    for c in range(-box, box + 1):
        yield from _fill(count - 1, box, (c,) + suffix)


def empirical_min_search(m: int, box: int, precision: int = 128) -> SearchResult:
    """Minimum of |Lambda| with lambda_1..lambda_m in [-box, box], not all zero.

    lambda_0 is unrestricted: for fixed (lambda_1..lambda_m) the best choice
    is the integer nearest to -(lambda_1 e + ... + lambda_m e^m), so the
    search visits (2 box + 1)^m tails, each up to sign.  Values use
    fixed-point integers with a tracked error, and the winner must beat the
    runner-up by more than the error or the precision is raised.  The
    reported lambda has its last non-zero entry positive.
    """
    if not 1 <= m <= 3:
        raise PreconditionError("search supports 1 <= m <= 3")
    if not 1 <= box <= 50:
        raise PreconditionError("box must be in 1..50")
    if (2 * box + 1) ** (m + 1) > SEARCH_BUDGET:
        raise ResourceLimitError("(2 box + 1)^(m+1) exceeds the search budget")
    while True:
        P = precision
        E = []
        for j in range(1, m + 1):
            total, err = _exp_fixed_point(j, P)
            E.append((total, err))
        one = 1 << P
        best = None  # (value_scaled, err, lam)
        second = None
        for tail in _canonical_tails(m, box):
            s = 0
            err = 0
            for c, (ej, ee) in zip(tail, E):
                s += c * ej
                err += abs(c) * ee
            lam0 = -((s + one // 2) // one)
            val = abs(lam0 * one + s)
            cand = (val, err, (lam0,) + tail)
            if best is None or val < best[0]:
                second, best = best, cand
            elif second is None or val < second[0]:
                second = cand
        # the all-zero tail is skipped above; its best form is lambda_0 = 1
        unit = (one, 0, (1,) + (0,) * m)
        if unit[0] < best[0]:
            second, best = best, unit
        elif second is None or unit[0] < second[0]:
            second = unit
        if best[0] + best[1] < second[0] - second[1]:
            break
        precision *= 2
        if precision > MAX_BITS:
            raise IndeterminateError("two candidates could not be separated")
    with workprec(P + 16):
        scale = arb(2) ** (-P)
        value = (arb(best[0]) + arb(0, best[1])) * scale
        runner = (arb(second[0]) + arb(0, second[1])) * scale
    return SearchResult(m, box, LinearForm(best[2]), value, runner)


# ---------------------------------------------------------------------------
# size estimates for the integer system at t = 1
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QRRow:
    k: int
    log_value: arb       # log of the checked quantity after exact division
    log_bound: arb       # log Q(l) or log R(l)
    log_value_lower_div: arb  # same quantity divided only by D_lower

    @property
    def log_ratio(self) -> arb:
        return self.log_value - self.log_bound


@dataclass(frozen=True)
class QRReport:
    kind: str
    m: int
    l: int
    divisor: int
    divisor_lower: int
    rows: Tuple[QRRow, ...]
    passed: bool
    bits: int

    @property
    def max_log_ratio(self) -> arb:
        out = self.rows[0].log_ratio
        for r in self.rows[1:]:
            out = out.max(r.log_ratio)
        return out

    @property
    def max_log_ratio_lower_div(self) -> arb:
        out = None
        for r in self.rows:
            v = r.log_value_lower_div - r.log_bound
            out = v if out is None else out.max(v)
        return out

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "m": self.m,
            "l": self.l,
            "divisor_log2": math.log2(self.divisor) if self.divisor > 1 else 0.0,
            "divisor_lower_log2": math.log2(self.divisor_lower) if self.divisor_lower > 1 else 0.0,
            "max_log_ratio_hi": upper_str(self.max_log_ratio, 12),
            "max_log_ratio_lower_div_hi": upper_str(self.max_log_ratio_lower_div, 12),
            "passed": self.passed,
            "bits": self.bits,
        }


def _check_qr_args(m: int, l: int, opt_in_heavy: bool) -> None:
    if m not in QR_THRESHOLD:
        raise PreconditionError("the small-m estimates cover m = 2, 3, 4")
    if l < QR_THRESHOLD[m]:
        raise PreconditionError(f"l must be >= {QR_THRESHOLD[m]} for m = {m}")
    if m == 4 and not opt_in_heavy:
        raise ResourceLimitError("m = 4 needs l >= 2181; pass opt_in_heavy to run it")


def _reduced_system(m: int, l: int, opt_in_heavy: bool):
    system = build_system(m, l, allow_heavy=opt_in_heavy)
    if m == 2:
        # no prime p <= 3/2, so there is nothing to divide
        return system, 1, 1
    report = extract_common_factor(system)
    return report.reduced, report.d_exact, report.d_lower


def _log_int(n: int) -> arb:
    return arb(abs(n)).log()


def log_Q(m: int, l: int) -> arb:
    b = ball(SMALL_M_BD[m][0])
    return m * l * arb(l).log() + b * l


def log_R(m: int, l: int) -> arb:
    d = ball(SMALL_M_BD[m][1])
    return -l * arb(l).log() + d * l


def check_Q_bound(m: int, l: int, opt_in_heavy: bool = False, bits: int = DEFAULT_BITS) -> QRReport:
    """|B_{k,0}(1)| <= exp(m l log l + b l) for every k."""
    _check_qr_args(m, l, opt_in_heavy)
    system, dex, dlo = _reduced_system(m, l, opt_in_heavy)
    ratio = dex // dlo
    rows = []
    passed = True
    with workprec(bits):
        bound = log_Q(m, l)
        for k in range(m + 1):
            v = system[k, 0](1)
            if v == 0:
                raise TheoremViolation(f"B_{k},0(1) vanished")
            lv = _log_int(v)
            rows.append(QRRow(k, lv, bound, lv + _log_int(ratio)))
            if not lv <= bound:
                passed = False
    if not passed:
        raise TheoremViolation(f"|B_k,0(1)| exceeds Q(l) for m={m}, l={l}")
    return QRReport("Q", m, l, dex, dlo, tuple(rows), passed, bits)


def presized_bits(system: ApproxSystem) -> int:
    """ceil(log2 |B_{k,0}(1)|) + ceil(l log2 l) + 64, maximised over k."""
    top = max(abs(system[k, 0](1)).bit_length() for k in range(system.m + 1))
    l = system.l
    return top + math.ceil(l * math.log2(l)) + 64


def linear_form_values(system: ApproxSystem, k: int, bits: int) -> List[arb]:
    """Enclosures of B_{k,0}(1) e^j + B_{k,j}(1) for j = 1..m."""
    b0 = system[k, 0](1)
    out = []
    with workprec(bits):
        for j in range(1, system.m + 1):
            out.append(b0 * exp_enclosure(system.alpha[j], bits) + system[k, j](1))
    return out


def check_R_bound(m: int, l: int, opt_in_heavy: bool = False, bits: Optional[int] = None) -> QRReport:
    """sum_j |B_{k,0}(1) e^j + B_{k,j}(1)| <= exp(-l log l + d l) for every k."""
    _check_qr_args(m, l, opt_in_heavy)
    system, dex, dlo = _reduced_system(m, l, opt_in_heavy)
    ratio = dex // dlo
    start = presized_bits(system) if bits is None else bits
    # the cap bounds adaptive doubling beyond the pre-sized precision
    cap = max(MAX_BITS, 4 * start)
    prec = start
    while True:
        rows, passed, undecided = [], True, False
        with workprec(prec):
            bound = log_R(m, l)
            for k in range(m + 1):
                total = sum((abs(x) for x in linear_form_values(system, k, prec)), arb(0))
                if not total > 0:
                    undecided = True
                    break
                lv = total.log()
                rows.append(QRRow(k, lv, bound, lv + _log_int(ratio)))
                if not lv <= bound:
                    if lv > bound:
                        raise TheoremViolation(
                            f"sum |L_k,j| exceeds R(l) for m={m}, l={l}, k={k}"
                        )
                    undecided = True
                    break
        if not undecided:
            return QRReport("R", m, l, dex, dlo, tuple(rows), passed, prec)
        if prec >= cap:
            raise IndeterminateError(f"R check undecided at {prec} bits")
        prec = min(2 * prec, cap)


# ---------------------------------------------------------------------------
# remainder series at t = 1
# ---------------------------------------------------------------------------

def remainder_tail_bound(b0: IntPolynomial, j: int, order: int) -> Fraction:
    """Bound for sum_{N > order} |[t^N] e^(j t) b0(t)| (j >= 0).

    Coefficient N is sum_i b_i j^(N-i)/(N-i)!; summing over N > order gives
    for each i a tail of the exponential series starting at n0 = order-i+1,
    bounded by j^n0/n0! / (1 - j/(n0+1)) when n0 + 1 > j.
    """
    if order < b0.degree + j:
        raise PreconditionError("order must be at least deg + j")
    total = Fraction(0)
    for i, b in enumerate(b0.coeffs):
        if not b:
            continue
        n0 = order - i + 1
        lead = Fraction(j ** n0, math.factorial(n0))
        total += abs(b) * lead / (1 - Fraction(j, n0 + 1))
    return total


def identity_residual(system: ApproxSystem, k: int, j: int, order: int, bits: int = 256) -> Tuple[arb, arb]:
    """(direct value, series partial sum with tail) for one (k, j) at t = 1."""
    series = system.remainder_series(k, j, order)
    tail = remainder_tail_bound(system[k, 0], system.alpha[j], order)
    with workprec(bits):
        direct = system[k, 0](1) * exp_enclosure(system.alpha[j], bits) + system[k, j](1)
        ps = series.partial_sum(Fraction(1))
        via_series = ball(ps) + arb(0, ball(tail).upper())
    return direct, via_series

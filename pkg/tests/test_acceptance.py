"""Acceptance gate: one test per criterion, each reporting PASS or FAIL."""
import functools
import math
import random
import time
from fractions import Fraction

from flint import arb

from conftest import CRITERIA_RESULTS
from emeasure.balls import ball, workprec
from emeasure.certify import (
    LinearForm, check_Q_bound, check_R_bound, empirical_min_search, verify_measure,
)
from emeasure.factor import (
    KAPPA_LIMIT_DECIMAL, PAPER_KAPPA_TABLE, d_lower, extract_common_factor, kappa_limit,
    kappa_m, s_of_m,
)
from emeasure.hermite_pade import (
    _laplace_coeffs, build_system, determinant_shape, omega_poly,
)
from emeasure.measure import (
    PAPER_FM_TABLE, fm_table, implied_omega_excess, omega_upper, theorem_threshold_loglog,
    z_inverse, z_iterates, z_upper_bound,
)
from emeasure.numtheory import primes_upto, vp, vp_factorial, vp_factorial_bounds


def criterion(number, title, budget_s):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            start = time.perf_counter()
            ok = False
            try:
                fn(*args, **kwargs)
                elapsed = time.perf_counter() - start
                assert elapsed < budget_s, f"took {elapsed:.2f}s, budget {budget_s}s"
                ok = True
            finally:
                elapsed = time.perf_counter() - start
                status = "PASS" if ok else "FAIL"
                CRITERIA_RESULTS.append(
                    (number, f"[{status}] {number:2d}. {title} ({elapsed:.2f}s / {budget_s}s)")
                )
                print(CRITERIA_RESULTS[-1][1])
        return run
    return wrap


@criterion(1, "kappa_m table for m = 2..14", 1)
def test_c01_kappa_table():
    for m in range(2, 15):
        value = kappa_m(m).value
        assert value.lower() >= ball(PAPER_KAPPA_TABLE[m]) - ball("0.000001"), m


@criterion(2, "kappa limit enclosure at tolerance 1e-9", 30)
def test_c02_kappa_limit():
    v = kappa_limit("1e-9")
    assert 2 * v.rad() <= ball("1e-9")
    assert v.contains(ball(KAPPA_LIMIT_DECIMAL))


def _first4(x):
    lo, hi = (int(float((y * 10000).floor())) for y in (x.lower(), x.upper()))
    assert lo == hi
    return f"0.{lo:04d}"


@criterion(3, "f(m) table for m = 5..14", 1)
def test_c03_fm_table():
    ref = {m: (f, p) for m, f, p in PAPER_FM_TABLE}
    rows = fm_table()
    assert [r.m for r in rows] == list(range(5, 15))
    for r in rows:
        assert _first4(r.f) == ref[r.m][0], r.m
        assert _first4(r.product) == ref[r.m][1], r.m
        assert r.f < r.product


@criterion(4, "remainder order and exact degrees, m <= 3, l = 2..8", 30)
def test_c04_pade_identities():
    for m in range(1, 4):
        for l in range(2, 9):
            s = build_system(m, l)
            zeros = (m + 1) * l
            for k in range(m + 1):
                lbar = s.lbar(k)
                for j in range(m + 1):
                    assert s[k, j].degree == lbar.L - lbar[j]
                for j in range(1, m + 1):
                    rs = s.remainder_series(k, j, zeros + 2)
                    assert all(c == 0 for c in rs.coefficients[:zeros])
                    assert any(c != 0 for c in rs.coefficients[zeros:])


@criterion(5, "integrality and guaranteed common factor; m=3, l=38 spot check", 120)
def test_c05_integrality_divisibility():
    for m in range(1, 4):
        for l in range(2, 9):
            s = build_system(m, l)
            D = d_lower(m, l)
            for k in range(m + 1):
                lbar = s.lbar(k)
                for j in range(m + 1):
                    # rebuild A_j over Q and divide by (l-1)! without shortcuts
                    shifted = [a - j for a in range(m + 1)]
                    raw = _laplace_coeffs(omega_poly(lbar, shifted), lbar.L, 0)
                    sign = 1 if j == 0 else -1
                    q = [Fraction(sign * c, math.factorial(l - 1)) for c in raw.coeffs]
                    assert all(x.denominator == 1 for x in q)
                    assert [int(x) for x in q] == list(s[k, j].coeffs)
                    assert all(c % D == 0 for c in s[k, j].coeffs)
    r = extract_common_factor(build_system(3, 38))
    assert r.nu_exact[2] >= 34


@criterion(6, "determinant is c t^(m(m+1)l) with c != 0", 60)
def test_c06_determinant():
    for m, l in [(1, 2), (1, 3), (2, 2), (2, 3), (3, 2)]:
        c, e = determinant_shape(m, l)
        assert c != 0 and e == m * (m + 1) * l


@criterion(7, "Q(l) and R(l) estimates, m=2 l=16..40 and m=3 l=38..50", 300)
def test_c07_qr_bounds():
    for m, ls in [(2, range(16, 41)), (3, range(38, 51))]:
        for l in ls:
            assert check_Q_bound(m, l).passed
            assert check_R_bound(m, l).passed


@criterion(8, "z(y): inversion, bracketing and upper bound", 1)
def test_c08_z_machinery():
    with workprec(128):
        tol = ball("1e-20")
        for k in range(1, 7):
            y = arb(10) ** k
            z = z_inverse(y, tol)
            # |z log z - y| is at most tol * max slope (log z + 1) plus rounding
            assert abs(z * z.log() - y) <= tol * (z.upper().log() + 1) + ball("1e-25")
        rng = random.Random(20241017)
        for _ in range(50):
            y = arb.const_e() + ball("0.1") + ball(Fraction(rng.randrange(10 ** 12), 10 ** 6))
            zs = z_iterates(y, 3)
            z = z_inverse(y)
            assert zs[1] < zs[3] < zs[2] < zs[0]
            assert zs[1] < z < zs[2]
        count = 0
        for m in (2, 3, 4, 5):
            s = s_of_m(m)
            for k in range(1, 6):
                y = s * s.exp() * (1 + arb(k) / 2) ** k
                assert z_upper_bound(y, s) >= z_inverse(y)
                count += 1
        assert count == 20


@criterion(9, "omega bound for m = 2, 3, 4 dominates the generic bound", 10)
def test_c09_dominance():
    with workprec(128):
        for m in (2, 3, 4):
            base = theorem_threshold_loglog(m)
            for step in (0, ball("0.5"), 1, 2, 5, 10, 25, 60, 150, 400):
                ll = base + step
                excess = implied_omega_excess(m, ll)
                assert omega_upper(m, ll) >= m + excess


def _floor_int(x):
    """Exact integer floor of a ball narrow enough to decide it."""
    lo, hi = x.lower().floor(), x.upper().floor()
    assert lo == hi
    man, exp = lo.mid().man_exp()
    return int(man) * 2 ** int(exp) if int(exp) >= 0 else int(man) >> -int(exp)


def _convergents_below(bits):
    cf = [2] + [x for k in range(1, 400) for x in (1, 2 * k, 1)]
    p0, q0, p1, q1 = 1, 0, cf[0], 1
    out = []
    for a in cf[1:]:
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        if max(p1, q1).bit_length() > bits:
            break
        out.append((p1, q1))
    return out


@criterion(10, "measure verification at log H = 45 and the small search", 60)
def test_c10_measure_verification():
    with workprec(256):
        H = _floor_int(arb(45).exp())
        assert arb(H).log() <= 45 < arb(H + 1).log()
    rng = random.Random(1017)
    with workprec(256):
        e1, e2 = arb.const_e(), arb.const_e() ** 2
    for i in range(100):
        if i % 2:
            lam = (rng.randint(-H, H), rng.randint(-H, H), rng.randint(-H, H))
        else:
            # lambda_0 chosen to make the form small
            l1, l2 = rng.randint(-H // 10, H // 10), rng.randint(-H // 10, H // 10)
            with workprec(256):
                l0 = -_floor_int(l1 * e1 + l2 * e2)
            lam = (l0, l1, l2)
        if not any(lam):
            continue
        assert verify_measure(LinearForm(lam), 45).passed
    convs = _convergents_below(H.bit_length() - 1)
    assert len(convs) > 20
    for p, q in convs:
        assert verify_measure(LinearForm((-p, q, 0)), 45).passed
    r = empirical_min_search(1, 10)
    assert r.form.coeffs == (-19, 7)
    assert abs(r.value - ball("0.0279")) < ball("0.0001")


@criterion(11, "Legendre valuation against factorisation, with bounds", 10)
def test_c11_valuations():
    f = 1
    for n in range(1, 301):
        f *= n
        for p in primes_upto(50):
            v = vp_factorial(n, p)
            assert v == vp(f, p) if f > 1 else v == 0
            if n >= 2:
                assert vp_factorial_bounds(n, p).contains(v)

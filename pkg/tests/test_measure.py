import pytest
from flint import arb
from hypothesis import given, strategies as st

from emeasure.balls import ball, workprec
from emeasure.errors import PreconditionError
from emeasure.factor import kappa_m, s_of_m
from emeasure.measure import (
    DELTA, DELTA_PROOF_VARIANT, PAPER_FM_TABLE, SMALL_M_DERIVED, b_hat, corollary_bound,
    f_of_m_exact, fm_product, fm_table, generic_lower_bound, implied_omega_excess,
    omega_coefficient, omega_upper, params_for_e, power_measure, rho_constant, rho_value,
    sparse_bound, sparse_generic_bound, sparse_params, theorem_threshold_loglog, z_inverse,
    z_iterates, z_upper_bound,
)


def truncate4(x):
    """First four decimals of a ball's midpoint, checked to be certain."""
    lo, hi = x.lower(), x.upper()
    a, b = (int(float((x * 10000).floor())) for x in (lo, hi))
    assert a == b, f"ball {x} straddles a fourth-decimal boundary"
    return f"0.{a:04d}"


# --- z(y) -------------------------------------------------------------------

@pytest.mark.parametrize("k", range(1, 7))
def test_z_inverse_forward(k):
    with workprec(128):
        y = arb(10) ** k
        z = z_inverse(y, ball("1e-20"))
        assert abs(z * z.log() - y) < ball("1e-18") * y
        assert 2 * z.rad() <= ball("1e-20")


def test_z_inverse_exact_points():
    with workprec(128):
        assert z_inverse(4 * arb(4).log()).overlaps(arb(4))
        ee = arb.const_e() ** arb.const_e()
        assert z_inverse(arb.const_e() * ee).overlaps(ee)


def test_z_inverse_near_e():
    with workprec(128):
        z = z_inverse(arb.const_e() + ball("0.01"))
        assert z > arb.const_e()
        assert abs(z * z.log() - arb.const_e() - ball("0.01")) < ball("1e-25")


def test_z_inverse_rejects_small_y():
    with pytest.raises(PreconditionError):
        z_inverse(arb(2))


@given(st.floats(min_value=0.1, max_value=1e6 - 3))
def test_bracketing(offset):
    with workprec(128):
        y = arb.const_e() + ball(repr(offset))
        zs = z_iterates(y, 3)
        z = z_inverse(y)
        assert zs[1] < zs[3] < zs[2] < zs[0]
        assert zs[1] < z < zs[2]


def test_monotone_on_grid():
    with workprec(128):
        prev = None
        for k in range(30):
            z = z_inverse(arb(3) + arb(k) ** 3)
            if prev is not None:
                assert prev < z
            prev = z


@pytest.mark.parametrize("m", [2, 3, 5])
def test_z_upper_bound(m):
    with workprec(128):
        s = s_of_m(m)
        base = s * s.exp()
        # at the threshold the bound equals e^s = z(s e^s) exactly
        assert z_upper_bound(base, s).overlaps(s.exp())
        assert z_inverse(base).overlaps(s.exp())
        for k in range(1, 8):
            y = base * (1 + arb(k) ** 2)
            assert z_upper_bound(y, s) >= z_inverse(y)


def test_z_upper_bound_preconditions():
    with pytest.raises(PreconditionError):
        z_upper_bound(arb(10), arb.const_e())


# --- parameters ---------------------------------------------------------------

@pytest.mark.parametrize("m", [2, 3, 4])
def test_small_m_derived_constants(m):
    p = params_for_e(m)
    B, D = (ball(x) for x in SMALL_M_DERIVED[m])
    assert abs(p.B - B) < ball("1e-12")
    # the quoted D values are rounded up
    assert p.D <= D
    assert D - p.D < ball("0.0001")
    assert p.C.overlaps(arb(m))


def test_m5_B_closed_form():
    with workprec(128):
        p = params_for_e(5, bits=128)
        k = kappa_m(5, 128).value
        lm = arb(5).log()
        B = 25 * lm - (1 + k) * 25 + 6 * arb(6).log() + arb(5) / 2 * lm \
            - (ball("1.02394") + k) * 5 + ball(DELTA)
        assert p.B.overlaps(B)
        D = 6 * arb(6).log() - k * 5 + ball(DELTA) + 5 / s_of_m(5).exp()
        assert p.D.overlaps(D)


@given(st.integers(min_value=2, max_value=40))
def test_parameter_invariants(m):
    p = params_for_e(m)
    assert p.B.overlaps(p.b + p.a * p.d / p.c)
    assert p.F.overlaps(1 / (2 * p.D.exp()))
    assert p.v.overlaps(p.c - p.d / p.s)
    assert p.u >= 1
    assert 0 < p.v <= 1
    assert b_hat(p) >= p.B


def test_delta_variant_is_exposed():
    assert params_for_e(6, delta=DELTA_PROOF_VARIANT).b > params_for_e(6).b


# --- bounds -------------------------------------------------------------------

def test_generic_bound_m2():
    p = params_for_e(2)
    eps, F = generic_lower_bound(p, 45)
    assert eps > 0
    with pytest.raises(PreconditionError):
        generic_lower_bound(p, 30)


def test_corollary_weaker_than_generic():
    with workprec(128):
        p = params_for_e(2, bits=128)
        for logH in (45, 60, 200, 10 ** 6):
            assert corollary_bound(p, logH).log_bound <= generic_lower_bound(p, logH).log_bound


def test_corollary_m3_at_threshold():
    with workprec(128):
        s = s_of_m(3)
        lb = corollary_bound(params_for_e(3, bits=128), s * s.exp() + 1)
        assert lb.excess > 0


def test_omega_examples():
    assert omega_upper(2, 4).overlaps(ball("3.2325"))
    with pytest.raises(PreconditionError):
        omega_upper(2, 3)


def test_omega_branches():
    with workprec(128):
        lm = arb(15).log()
        k = kappa_m(15, 128).value
        expected = (1 - (1 + k) / lm ** 2) * (1 - k / lm) * 225 * lm
        assert omega_coefficient(15).overlaps(expected)
        assert omega_coefficient(5).overlaps(fm_product(5) * 25 * arb(5).log())


@pytest.mark.parametrize("m", [2, 3, 4])
def test_dominance(m):
    with workprec(128):
        base = theorem_threshold_loglog(m)
        for step in (0, 1, 3, 10, 40, 150):
            ll = base + step
            assert implied_omega_excess(m, ll) <= omega_coefficient(m) / ll


def test_fm_table_rows():
    rows = fm_table()
    ref = {m: (f, p) for m, f, p in PAPER_FM_TABLE}
    for r in rows:
        assert truncate4(r.f) == ref[r.m][0]
        assert truncate4(r.product) == ref[r.m][1]
        assert r.f < r.product
        assert f_of_m_exact(r.m) < r.f


def test_sparse_rho_branches():
    assert rho_constant(4).overlaps(ball("12.88"))
    assert rho_constant(10).overlaps(ball("12.88"))
    assert rho_constant(11).overlaps(arb(2))
    with workprec(128):
        s = s_of_m(4)
        ll = s.log() + s
        val = sparse_bound(1, 4, ll)
        assert val.overlaps(1 + 6 * ball("12.88") * arb(4).log() / ll)


@pytest.mark.parametrize("m2", [4, 6, 10, 11, 15])
def test_rho_constants_cover_the_ratio(m2):
    # (1 + log 2/log H) u/v for every m1 < m2 stays below the branch constant
    with workprec(128):
        s = s_of_m(m2)
        logH = s * s.exp()
        for m1 in range(1, m2):
            assert rho_value(m1, m2, logH) <= rho_constant(m2)


def test_sparse_preconditions():
    with pytest.raises(PreconditionError):
        sparse_params(4, 4)
    with pytest.raises(PreconditionError):
        sparse_bound(1, 3, 100)
    with pytest.raises(PreconditionError):
        sparse_bound(1, 4, 5)


def test_sparse_generic_bound_is_finite():
    with workprec(128):
        s = s_of_m(4)
        lb = sparse_generic_bound(1, 4, s * s.exp())
        assert lb.excess > 0


def test_power_measure():
    with workprec(128):
        ll = theorem_threshold_loglog(12) + 1
        assert power_measure(6, 2, ll).overlaps(2 + 2 * 12 * arb(12).log() / ll)
        ll4 = theorem_threshold_loglog(4) + 1
        assert power_measure(2, 2, ll4).overlaps(sparse_bound(2, 4, ll4))
    with pytest.raises(PreconditionError):
        power_measure(2, 1, 100)

"""Unit and property tests for the scalar special functions.

Oracles: direct-loop products/sums computed in the tests themselves, scipy
as an independent reference, and closed-form identities.
"""

import math

import numpy as np
import pytest
import scipy.special as ss
from hypothesis import given, settings
from hypothesis import strategies as st

from cylpeak import special as sp
from cylpeak.errors import DomainError, NonConvergent, PoleError


def qpoch_oracle(x, q, nmax=8000, tol=1e-16):
    """Direct product until the factor is within tol of 1."""
    out = 1.0
    xi = x
    for _ in range(nmax):
        out *= 1 - xi
        xi *= q
        if abs(xi) < tol:
            break
    return out


class TestQPochhammer:
    def test_finite_empty_product(self):
        assert sp.q_pochhammer_finite(0.7, 0.5, 0) == 1.0

    def test_finite_q_zero(self):
        assert sp.q_pochhammer_finite(0.5, 0.0, 3) == pytest.approx(0.5, abs=0)

    def test_finite_two_factor(self):
        assert sp.q_pochhammer_finite(0.5, 0.5, 2) == pytest.approx(0.375, rel=1e-15)

    def test_inf_direct_product(self):
        assert sp.q_pochhammer_inf(0.5, 0.5) == pytest.approx(qpoch_oracle(0.5, 0.5), rel=1e-13)
        assert sp.q_pochhammer_inf(0.5, 0.5) == pytest.approx(0.288788095087, abs=1e-11)

    def test_inf_x_zero(self):
        assert sp.q_pochhammer_inf(0.0, 0.9) == 1.0

    def test_inf_third_point(self):
        assert sp.q_pochhammer_inf(0.3, 0.3) == pytest.approx(qpoch_oracle(0.3, 0.3), rel=1e-13)
        assert sp.q_pochhammer_inf(0.3, 0.3) == pytest.approx(0.61265, abs=5e-6)

    def test_inf_error_bound_reported(self):
        val, err = sp.q_pochhammer_inf_with_error(0.5, 0.5)
        assert abs(val - qpoch_oracle(0.5, 0.5)) <= max(err, 1e-13)

    def test_inf_vanishing_factor_raises(self):
        with pytest.raises(NonConvergent):
            sp.q_pochhammer_inf(1.0, 0.5)

    def test_inf_rejects_bad_q(self):
        with pytest.raises(NonConvergent):
            sp.q_pochhammer_inf(0.5, 1.0)

    def test_log_variant_matches(self):
        lv = sp.log_q_pochhammer_inf(0.5, 0.5)
        assert math.exp(lv) == pytest.approx(qpoch_oracle(0.5, 0.5), rel=1e-12)

    @given(
        x=st.floats(-0.9, 0.9),
        q=st.floats(0.0, 0.95),
        n=st.integers(0, 30),
    )
    @settings(max_examples=200, deadline=None)
    def test_finite_recurrence(self, x, q, n):
        # (x; q)_{n+1} = (x; q)_n * (1 - x q^n)
        lhs = sp.q_pochhammer_finite(x, q, n + 1)
        rhs = sp.q_pochhammer_finite(x, q, n) * (1 - x * q**n)
        assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-300)

    def test_q_gamma_asymptotics(self):
        # log(q^c; q)_inf = -pi^2/(6 eps) + (1/2 - c) log eps + log(2 pi)/2
        #                   - log Gamma(c) + O(eps),  q = e^{-eps}
        for c in (0.3, 0.7, 1.5):
            for eps in (1e-2, 1e-3):
                q = math.exp(-eps)
                lhs = sp.log_q_pochhammer_inf(q**c, q)
                pred = (
                    -math.pi**2 / (6 * eps)
                    + (0.5 - c) * math.log(eps)
                    + 0.5 * math.log(2 * math.pi)
                    - math.lgamma(c)
                )
                assert abs(lhs - pred) <= 10 * eps


class TestTheta:
    def test_theta3_u_zero(self):
        assert sp.jacobi_theta3(1.0, 0.0) == 1.0

    def test_theta3_direct_sum(self):
        oracle = 1 + sum(0.5 ** (c * c / 2.0) * 2 for c in range(1, 40))
        assert sp.jacobi_theta3(1.0, 0.5) == pytest.approx(oracle, rel=1e-13)
        assert sp.jacobi_theta3(1.0, 0.5) == pytest.approx(3.010767, abs=1e-6)

    def test_theta3_sum_vs_product(self):
        assert sp.jacobi_theta3(1.0, 0.25) == pytest.approx(
            sp.theta3_product(1.0, 0.25), abs=1e-12
        )

    def test_theta3_grid_consistency(self):
        # sum form against the independent triple-product form
        for t in np.linspace(0.5, 2.0, 5):
            for u in np.linspace(0.05, 0.8, 5):
                assert sp.jacobi_theta3(float(t), float(u)) == pytest.approx(
                    sp.theta3_product(float(t), float(u)), abs=1e-10
                )

    def test_theta3_rejects_u_ge_1(self):
        with pytest.raises(NonConvergent):
            sp.jacobi_theta3(1.0, 1.0)

    def test_theta_mult_zero_at_x_eq_u(self):
        assert sp.theta_mult(0.3, 0.3) == pytest.approx(0.0, abs=1e-14)

    def test_theta_mult_symmetry_point(self):
        # at x = sqrt(u), (x; u)(u/x; u) = (x; u)^2
        val = sp.theta_mult(0.5, 0.25)
        assert val == pytest.approx(qpoch_oracle(0.5, 0.25) ** 2, rel=1e-12)

    def test_theta_mult_product_oracle(self):
        val = sp.theta_mult(0.7, 0.3)
        oracle = qpoch_oracle(0.7, 0.3) * qpoch_oracle(0.3 / 0.7, 0.3)
        assert val == pytest.approx(oracle, rel=1e-12)


class TestBesselJ:
    def test_value_at_zero(self):
        assert sp.bessel_j(0.0, 0.0) == 1.0
        assert sp.bessel_j(1.0, 0.0) == 0.0

    def test_first_zero_of_j0(self):
        # bisection on the series oracle brackets the first zero
        lo, hi = 2.0, 3.0
        f = lambda x: sp.bessel_j(0.0, x)
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if f(lo) * f(mid) <= 0:
                hi = mid
            else:
                lo = mid
        assert lo == pytest.approx(2.404825558, abs=1e-8)
        assert abs(sp.bessel_j(0.0, 2.404825558)) < 1e-9

    @pytest.mark.parametrize("alpha", [0.0, 1.0, 2.0, 0.5, 3.5])
    def test_against_scipy(self, alpha):
        xs = np.concatenate([np.linspace(0, 14.9, 60), np.linspace(15.1, 300, 60), [1e3, 1e4]])
        for x in xs:
            assert sp.bessel_j(alpha, float(x)) == pytest.approx(
                float(ss.jv(alpha, x)), abs=1e-10
            )

    def test_large_order_transition_zone(self):
        for x in (60.0, 90.0, 95.0, 100.0, 104.6, 120.0, 250.0):
            assert sp.bessel_j(100.0, x) == pytest.approx(float(ss.jv(100, x)), abs=1e-11)

    def test_series_asymptotic_overlap(self):
        # continuity across the x = 15 switch for orders the kernels use
        for alpha in (0.0, 1.0, 2.0, 3.0):
            for x in np.linspace(15.0, 18.0, 13):
                s = sp._bessel_series_scalar(alpha, float(x))
                a, best = sp._bessel_asym_scalar(alpha, float(x))
                assert best < 1e-10
                assert abs(s - a) < 1e-9

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            sp.bessel_j(-0.5, 1.0)
        with pytest.raises(DomainError):
            sp.bessel_j(0.0, -1.0)

    def test_vectorized_matches_scalar(self):
        xs = np.linspace(0.0, 120.0, 301)
        for alpha in (0.0, 1.0, 2.5):
            v = sp.bessel_j_vec(alpha, xs)
            r = ss.jv(alpha, xs)
            assert np.max(np.abs(v - r)) < 1e-10

    def test_bessel_to_airy_transition(self):
        # (nu/2)^{1/3} J_nu(nu + x nu^{1/3}) -> Ai(-2^{1/3} x) for large order
        nu = 100.0
        for x in (-1.0, 0.0, 1.0):
            lhs = (nu / 2) ** (1 / 3) * sp.bessel_j(nu, nu + x * nu ** (1 / 3))
            rhs = sp.airy_ai(-(2 ** (1 / 3)) * x)
            assert abs(lhs - rhs) <= 0.01

    def test_prime_identities(self):
        for alpha, x in ((0.0, 1.3), (1.0, 2.7), (2.0, 9.0), (0.5, 4.0), (0.3, 20.0)):
            assert sp.bessel_j_prime(alpha, x) == pytest.approx(
                float(ss.jvp(alpha, x)), abs=1e-10
            )


class TestBesselContourRepresentation:
    def test_vertical_line_integral_reproduces_j(self):
        # J_a(X) = (1/2pi i) int Gamma(-Z) (X/2)^{a+2Z} / Gamma(a+1+Z) dZ on a
        # vertical line separating the poles; scipy supplies loggamma here,
        # the value under test is bessel_j.  The slowly-decaying oscillatory
        # tails beyond |s| = T are summed by two integration-by-parts terms.
        def integrand(alpha, X, c, s):
            Z = c + 1j * s
            lg = ss.loggamma(-Z) - ss.loggamma(alpha + 1 + Z)
            return np.exp(lg + (alpha + 2 * Z) * math.log(X / 2))

        def log_rate(alpha, X, c, s0):
            # exact h'/h via digamma (the FD of an oscillatory h is too noisy)
            Z = c + 1j * s0
            return -1j * ss.digamma(-Z) - 1j * ss.digamma(alpha + 1 + Z) + 2j * math.log(X / 2)

        def tail_from(alpha, X, c, s0):
            # int_{s0}^{inf} h ds = -(h/r)(1 + r'/r^2 + ...), two terms kept
            h = integrand(alpha, X, c, np.array([s0]))[0]
            r = log_rate(alpha, X, c, s0)
            d = 0.5
            rp = (log_rate(alpha, X, c, s0 + d) - log_rate(alpha, X, c, s0 - d)) / (2 * d)
            return -(h / r) * (1 + rp / (r * r)), h * r

        for alpha, X in ((0.0, 1.0), (1.0, 2.0), (2.0, 0.5)):
            c = -(alpha + 1) / 2 + 0.25  # line Re Z = c < 0
            T = 2000.0
            n = 400_001
            s = np.linspace(-T, T, n)
            step = s[1] - s[0]
            vals = integrand(alpha, X, c, s)
            integral = np.trapezoid(vals, s)
            tail_hi, fp_b = tail_from(alpha, X, c, T)
            tail_lo, fp_a = tail_from(alpha, X, c, -T)
            # Euler-Maclaurin end correction for the trapezoid rule
            integral -= (step**2 / 12.0) * (fp_b - fp_a)
            # oscillatory tails beyond +-T via two-term integration by parts
            integral += tail_hi - tail_lo
            integral /= 2 * math.pi
            assert integral.real == pytest.approx(sp.bessel_j(alpha, X), abs=1e-8)
            assert abs(integral.imag) < 1e-8


class TestAiry:
    def test_value_at_zero(self):
        assert sp.airy_ai(0.0) == pytest.approx(0.355028053888, abs=1e-12)
        assert sp.airy_ai_prime(0.0) == pytest.approx(-0.258819403793, abs=1e-12)

    def test_decay(self):
        assert sp.airy_ai(10.0) > 0
        assert sp.airy_ai(10.0) < 1e-9
        assert sp.airy_ai(5.0) > sp.airy_ai(6.0) > 0

    def test_against_scipy_dense(self):
        xs = np.linspace(-30.0, 30.0, 1201)
        ai, aip = sp.airy_ai_vec(xs)
        ra, rap, _, _ = ss.airy(xs)
        assert np.max(np.abs(ai - ra)) < 2e-12
        assert np.max(np.abs(aip - rap)) < 5e-12

    def test_large_arguments(self):
        for x in (100.0, 500.0, -100.0, -900.0):
            assert sp.airy_ai(x) == pytest.approx(float(ss.airy(x)[0]), abs=2e-11)

    def test_no_nan_far_out(self):
        ai, aip = sp.airy_ai_vec(np.array([2e3, 1e5, -2e3]))
        assert np.all(np.isfinite(ai)) and np.all(np.isfinite(aip))

    def test_series_asymptotic_overlap(self):
        for x in np.linspace(5.5, 8.0, 11):
            s = sp._airy_maclaurin(np.array([x]))[0][0]
            a = sp._airy_asym_pos(np.array([x]))[0][0]
            assert abs(s - a) < 1e-9
        for x in np.linspace(8.0, 10.0, 9):
            s = sp._airy_maclaurin(np.array([-x]))[0][0]
            a = sp._airy_asym_neg(np.array([x]))[0][0]
            assert abs(s - a) < 1e-9


class TestDilog:
    def test_zero(self):
        assert sp.dilog(0.0) == 0.0

    def test_at_one(self):
        # series oracle: accelerated partial sum of sum 1/k^2
        assert sp.dilog(1.0) == pytest.approx(math.pi**2 / 6, rel=1e-14)
        assert sp.dilog(1.0) == pytest.approx(1.644934067, abs=1e-9)

    def test_at_half(self):
        assert sp.dilog(0.5) == pytest.approx(math.pi**2 / 12 - math.log(2) ** 2 / 2, rel=1e-14)
        assert sp.dilog(0.5) == pytest.approx(0.582240526, abs=1e-9)

    def test_series_oracle_small(self):
        for x in (-0.5, -0.25, 0.1, 0.45):
            oracle = sum(x**k / k**2 for k in range(1, 300))
            assert sp.dilog(x) == pytest.approx(oracle, rel=1e-13)

    def test_against_scipy_spence(self):
        # scipy's spence(x) = Li2(1-x)
        for x in (-5.0, -2.0, -1.0, -0.7, 0.3, 0.8, 0.99):
            assert sp.dilog(x) == pytest.approx(float(ss.spence(1 - x)), rel=1e-12, abs=1e-13)

    def test_domain(self):
        with pytest.raises(DomainError):
            sp.dilog(1.5)


class TestLogGamma:
    def test_trivial_values(self):
        assert abs(sp.log_gamma(1.0)) < 1e-13
        assert sp.log_gamma(5.0).real == pytest.approx(math.log(24.0), rel=1e-13)

    def test_duplication_at_half(self):
        assert sp.log_gamma(0.5).real == pytest.approx(0.5 * math.log(math.pi), rel=1e-13)
        assert sp.log_gamma(0.5).real == pytest.approx(0.5723649429, abs=1e-9)

    def test_complex_grid_vs_scipy(self):
        for re in np.linspace(-6.3, 8.7, 14):
            for im in np.linspace(-7.1, 7.1, 13):
                if abs(im) < 0.2 and re <= 0.5:
                    continue
                z = complex(re, im)
                assert sp.log_gamma(z) == pytest.approx(complex(ss.loggamma(z)), abs=1e-11)

    def test_pole(self):
        with pytest.raises(PoleError):
            sp.log_gamma(0.0)
        with pytest.raises(PoleError):
            sp.log_gamma(-3.0)

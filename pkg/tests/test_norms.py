import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import zeta

from ghill import (A_m, DomainError, PowerWeight, RngStream, TabulatedWeight,
                   UnsupportedWeightError, a_n, b_nf, check_conditions,
                   d_n_sq_random, gamma_numeric, gamma_power,
                   normalization_set, rho_n_sq, sigma_n, weight_sum)
from ghill.varying import PowerPerturbation, ZERO


class TestAn:
    def test_power_one_each_term_is_one(self):
        assert a_n(PowerWeight(1), 3) == 3.0

    def test_power_zero_harmonic(self):
        # 1 + 1/2 + 1/3 = 11/6
        assert a_n(PowerWeight(0), 3) == pytest.approx(11.0 / 6.0, rel=1e-14)

    def test_power_two(self):
        assert a_n(PowerWeight(2), 2) == pytest.approx(3.0)

    def test_large_k_against_integral(self):
        # sum j^-1 ~ log k + gamma_euler
        val = a_n(PowerWeight(0), 10**6)
        assert val == pytest.approx(math.log(10**6) + 0.5772156649, abs=1e-5)


class TestSigmaN:
    def test_power_one(self):
        assert sigma_n(PowerWeight(1), 3) == pytest.approx(math.sqrt(3.0), rel=1e-15)

    def test_power_zero_k4(self):
        expect = math.sqrt(1 + 1 / 4 + 1 / 9 + 1 / 16)
        assert sigma_n(PowerWeight(0), 4) == pytest.approx(expect, rel=1e-14)

    def test_partial_sum_approaches_zeta(self):
        # sum_{j<=1e6} j^-1.5 is within ~2e-3 of zeta(1.5)
        val = sigma_n(PowerWeight(0.25), 10**6)
        assert val == pytest.approx(math.sqrt(zeta(1.5, 1)), abs=1e-3)
        assert val == pytest.approx(1.6156656056206333, rel=1e-12)


class TestBnf:
    def test_hill_weight(self):
        assert b_nf(PowerWeight(1), 100) == pytest.approx(0.1, rel=1e-12)
        assert b_nf(PowerWeight(1), 4) == pytest.approx(0.5, rel=1e-12)

    def test_small_tau_does_not_vanish(self):
        # the sup-ratio stabilizes at 1/sqrt(zeta(1.5)): the Gaussian-branch
        # condition fails below tau = 1/2, which is what makes the series law appear
        val = b_nf(PowerWeight(0.25), 10**6)
        assert val == pytest.approx(1.0 / math.sqrt(zeta(1.5, 1)), abs=5e-4)

    def test_normalization_set_invariants(self):
        ns = normalization_set(PowerWeight(0.7), 1000)
        # Cauchy-type bound and the (0, 1] range of the sup ratio
        assert ns.sigma_n**2 <= ns.a_n * (ns.b_nf * ns.sigma_n) * (1 + 1e-12)
        assert 0.0 < ns.b_nf <= 1.0


class TestAmSeries:
    def test_power_zero_m2_is_zeta2(self):
        res = A_m(PowerWeight(0), 2, tol=1e-9)
        assert not res.divergent
        assert res.value == pytest.approx(math.pi**2 / 6.0, abs=2e-9)

    def test_hill_weight_diverges(self):
        assert A_m(PowerWeight(1), 2).divergent

    def test_power_quarter_m3(self):
        res = A_m(PowerWeight(0.25), 3, tol=1e-9)
        assert res.value == pytest.approx(zeta(2.25, 1), abs=2e-9)

    def test_divergence_predicate_on_tau_grid(self):
        for tau in np.arange(0.1, 0.95, 0.1):
            assert A_m(PowerWeight(tau), 2).divergent == (tau >= 0.5)

    def test_scaled_weight_scales_like_cm(self):
        res = A_m(2.0 * PowerWeight(0), 2, tol=1e-9)
        assert res.value == pytest.approx(4.0 * math.pi**2 / 6.0, rel=1e-9)

    def test_tabulated_hold_tail(self):
        # table (3, 1) held at 1: sum = 9 + sum_{j>=2} j^-2 = 9 + (zeta(2) - 1)
        f = TabulatedWeight([3.0, 1.0], extend="hold")
        res = A_m(f, 2, tol=1e-9)
        assert res.value == pytest.approx(9.0 + zeta(2, 1) - 1.0, abs=2e-9)

    def test_tabulated_without_rule_unsupported(self):
        with pytest.raises(UnsupportedWeightError):
            A_m(TabulatedWeight([1.0, 2.0]), 2)

    def test_error_bound_honest(self):
        res = A_m(PowerWeight(0.25), 2, tol=1e-6)
        assert abs(res.value - zeta(1.5, 1)) <= res.error_bound + 1e-12
        assert res.error_bound <= 1e-6


class TestGammaPower:
    def test_diagonal(self):
        assert gamma_power(0.8, 0.8) == pytest.approx(1.0, rel=1e-15)

    def test_closed_forms(self):
        assert gamma_power(1.0, 0.75) == pytest.approx(math.sqrt(0.5) / 0.75, rel=1e-15)
        assert gamma_power(1.0, 10.0) == pytest.approx(math.sqrt(19.0) / 10.0, rel=1e-15)

    def test_degenerate_half(self):
        with pytest.raises(DomainError, match="log"):
            gamma_power(0.5, 0.8)

    def test_below_half_rejected(self):
        with pytest.raises(DomainError):
            gamma_power(0.4, 0.8)


class TestGammaNumeric:
    def test_self_covariance_is_one(self):
        for tau in (0.0, 0.25, 1.0, 3.0):
            assert abs(gamma_numeric(PowerWeight(tau), PowerWeight(tau), 1000) - 1.0) < 1e-12

    def test_scale_invariance(self):
        f = PowerWeight(0.25)
        assert abs(gamma_numeric(f, 2.0 * f, 512) - 1.0) < 1e-12

    def test_converges_to_closed_form(self):
        got = gamma_numeric(PowerWeight(1), PowerWeight(0.75), 10**5)
        assert got == pytest.approx(gamma_power(1, 0.75), abs=2e-3)
        # frozen against a direct numpy sum oracle
        assert got == pytest.approx(0.9437993887296845, rel=1e-12)

    def test_error_decreasing_on_geometric_grid(self):
        target = gamma_power(1, 0.75)
        errs = [abs(gamma_numeric(PowerWeight(1), PowerWeight(0.75), k) - target)
                for k in (100, 1000, 10**4, 10**5)]
        assert all(b < a for a, b in zip(errs, errs[1:]))
        assert errs[-1] < 1e-2

    @given(t1=st.floats(min_value=0.55, max_value=4.0),
           t2=st.floats(min_value=0.55, max_value=4.0))
    @settings(max_examples=25, deadline=None)
    def test_range_property(self, t1, t2):
        val = gamma_numeric(PowerWeight(t1), PowerWeight(t2), 500)
        assert 0.0 < val <= 1.0


class TestRho:
    def test_identical_weights_zero(self):
        assert rho_n_sq(PowerWeight(0.6), PowerWeight(0.6), 777) == pytest.approx(0.0, abs=1e-12)

    def test_exact_complement_of_gamma(self):
        f1, f2 = PowerWeight(1), PowerWeight(0.75)
        k = 4096
        assert rho_n_sq(f1, f2, k) == pytest.approx(2 - 2 * gamma_numeric(f1, f2, k), abs=1e-14)

    def test_large_k_values(self):
        # (1, 0.75): limit 2(1 - 0.942809) = 0.114381...; finite-k value frozen
        got = rho_n_sq(PowerWeight(1), PowerWeight(0.75), 10**5)
        assert got == pytest.approx(2 * (1 - gamma_power(1, 0.75)), abs=5e-3)
        # (0.9, 0.6) converges like k^-0.2: still far from 0.4 at k = 1e5
        slow = rho_n_sq(PowerWeight(0.9), PowerWeight(0.6), 10**5)
        assert slow == pytest.approx(0.327715475743215, rel=1e-10)


class TestRandomSemimetric:
    def test_identical_weights(self):
        e = np.full(32, 2.0)
        assert d_n_sq_random(PowerWeight(1), PowerWeight(1), 32, e) == 0.0

    def test_unit_draws_vanish(self):
        e = np.ones(32)
        assert d_n_sq_random(PowerWeight(1), PowerWeight(0.5), 32, e) == 0.0

    def test_length_mismatch(self):
        with pytest.raises(DomainError):
            d_n_sq_random(PowerWeight(1), PowerWeight(0.5), 8, np.ones(7))

    def test_expectation_matches_rho(self):
        f1, f2, k = PowerWeight(1), PowerWeight(0.5), 50
        gen = RngStream(1234, 0).generator()
        reps = 10**4
        draws = np.empty(reps)
        for r in range(reps):
            draws[r] = d_n_sq_random(f1, f2, k, gen.standard_exponential(k))
        se = draws.std(ddof=1) / math.sqrt(reps)
        assert abs(draws.mean() - rho_n_sq(f1, f2, k)) < 3 * se


class TestConditions:
    def test_zero_perturbations(self):
        rep = check_conditions(ZERO, ZERO, PowerWeight(1), 1000, 100, 2.0)
        assert rep.g1 == rep.g2 == rep.d == 0.0
        assert rep.ratio_c1 == rep.ratio_c2 == rep.ratio_c3 == 0.0

    def test_monotone_sup_at_endpoint(self):
        # p = 0.5 u: sup over (0, lambda k/n] is 0.5 * lambda k/n = 0.01
        rep = check_conditions(PowerPerturbation(0.5, 1.0), ZERO,
                               PowerWeight(1), 10000, 50, 2.0)
        assert rep.g1 == pytest.approx(0.5 * 2.0 * 50 / 10000, rel=1e-15)

    def test_d_is_max_exactly(self):
        p, b = PowerPerturbation(0.3, 0.5), PowerPerturbation(0.2, 0.5)
        rep = check_conditions(p, b, PowerWeight(1), 10**4, 100, 1.5)
        assert rep.d == max(rep.g1, rep.g2 * math.log(100))

    def test_ratio_c3_decreasing_for_fast_perturbation(self):
        # with k = sqrt(n) the product vanishes once the perturbation decays
        # faster than the weight mass grows: beta = 2 suffices for f(j) = j
        vals = []
        for n in (10**3, 10**4, 10**5, 10**6):
            k = int(math.isqrt(n))
            rep = check_conditions(PowerPerturbation(0.5, 2.0),
                                   PowerPerturbation(0.5, 2.0),
                                   PowerWeight(1), n, k, 2.0)
            vals.append(rep.ratio_c3)
        assert all(b < a for a, b in zip(vals, vals[1:]))

    def test_window_leaving_unit_interval_rejected(self):
        with pytest.raises(DomainError):
            check_conditions(ZERO, ZERO, PowerWeight(1), 100, 80, 2.0)


def test_weight_sum_power():
    assert weight_sum(PowerWeight(1), 4) == 10.0
    assert weight_sum(PowerWeight(0), 7) == 7.0

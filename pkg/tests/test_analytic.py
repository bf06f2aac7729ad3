import math

import numpy as np
import pytest

from swipt_plsec import (
    AnalyticConfig,
    ChannelStats,
    SeriesNotConverged,
    SystemParams,
    ip_dpsr,
    ip_dpsr_no_jamming,
    ip_dpsr_quadrature,
    ip_spsr,
    ip_spsr_no_jamming,
    ip_spsr_quadrature,
    op_dpsr,
    op_dpsr_quadrature,
    op_spsr,
    op_spsr_quadrature,
)
from swipt_plsec.analytic import (
    InterceptScratch,
    SplitFactors,
    dpsr_slot2_factor,
    dpsr_slot2_factor_quadrature,
    dpsr_slot2_kernel,
    dpsr_slot2_outage_factor,
    intercept_series_term,
    slot1_intercept_probability,
    slot1_outage_factor,
    slot2_outage_factor,
    slot2_outage_factor_quadrature,
)
from swipt_plsec.specfun import QuadratureSpec, bessel_k, integrate

from conftest import db, make_params


class TestOutageStatic:
    def test_closed_form_matches_quadrature(self, s1):
        for psi_db in (-5.0, 2.0, 15.0):
            for rho in (0.225, 0.55, 0.875):
                p = make_params(psi_db=psi_db, rho=rho)
                assert op_spsr(p, s1) == pytest.approx(op_spsr_quadrature(p, s1), rel=1e-8)

    @pytest.mark.parametrize("rho", [0.0, 1.0])
    def test_endpoint_rho_is_certain_outage(self, s1, rho):
        p = make_params(rho=rho)
        assert op_spsr(p, s1) == 1.0
        assert op_spsr_quadrature(p, s1) == 1.0

    def test_zero_threshold(self, s1):
        p = make_params(c_th=0.0)
        assert op_spsr(p, s1) == 0.0

    def test_vanishing_power(self, s1):
        p = SystemParams(eta=0.8, rho=0.5, psi=1e-6, phi=1.0,
                         num_sources=2, num_jammers=1, c_th=0.5)
        assert op_spsr(p, s1) > 0.9999

    def test_within_unit_interval(self, s1):
        for psi_db in np.linspace(-5, 15, 9):
            p = make_params(psi_db=psi_db, rho=0.325)
            v = op_spsr(p, s1)
            assert -1e-6 <= v <= 1 + 1e-6


class TestOutageDynamic:
    def test_series_matches_quadrature(self, s1):
        for psi_db in (-5.0, 2.0, 15.0):
            p = make_params(psi_db=psi_db)
            assert op_dpsr(p, s1) == pytest.approx(op_dpsr_quadrature(p, s1), rel=1e-7)

    def test_series_converges_at_default_tolerance_across_table(self, s1, s2):
        # the outage series must reach the default 1e-8 tolerance within the
        # term cap at every standard configuration
        for stats in (s1, s2):
            for c_th in (0.25, 0.5):
                for psi_db in (-5.0, 0.0, 5.0, 10.0, 15.0):
                    for m in (2, 3):
                        p = make_params(psi_db=psi_db, c_th=c_th, num_sources=m)
                        v = op_dpsr(p, stats)  # raises SeriesNotConverged on failure
                        assert 0.0 <= v <= 1.0 + 1e-9

    def test_dominates_every_static_ratio(self, s1):
        p = make_params(psi_db=2.0)
        dyn = op_dpsr(p, s1)
        for rho in np.linspace(0.05, 0.95, 19):
            assert dyn <= op_spsr(make_params(psi_db=2.0, rho=rho), s1) + 1e-12

    def test_vanishing_power(self, s1):
        p = SystemParams(eta=0.8, rho=0.5, psi=1e-6, phi=1.0,
                         num_sources=2, num_jammers=1, c_th=0.5)
        assert op_dpsr(p, s1) > 0.9999

    def test_zero_threshold(self, s1):
        p = make_params(c_th=0.0)
        assert op_dpsr(p, s1) == 0.0


class TestInterceptStatic:
    def test_quadrature_monotone_decreasing_in_phi(self, s1):
        values = []
        for phi_db in np.linspace(-3, 15, 10):
            p = make_params(phi_db=phi_db, rho=0.55)
            values.append(ip_spsr_quadrature(p, s1))
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_saturates_at_high_power(self, s1):
        p = SystemParams(eta=0.8, rho=0.55, psi=1e6, phi=db(1.0),
                         num_sources=2, num_jammers=1, c_th=0.5)
        assert ip_spsr_quadrature(p, s1) > 0.999

    def test_zero_threshold(self, s1):
        p = make_params(c_th=0.0)
        assert ip_spsr_quadrature(p, s1) == 1.0
        assert ip_spsr(p, s1) == 1.0

    def test_series_diverges_in_weak_link_geometry(self, s1):
        p = make_params(rho=0.55)
        with pytest.raises(SeriesNotConverged) as exc:
            ip_spsr(p, s1)
        assert exc.value.value > 0  # best-effort value still reported
        assert exc.value.achieved_rel_tol > 1e-8

    def test_series_matches_quadrature_where_summable(self, dense_stats):
        # 20-point consistency grid inside the series' validity region
        cfg = AnalyticConfig(series_rel_tol=1e-6)
        for psi_db in (-2.0, 0.0, 1.0, 2.0):
            for rho in (0.1, 0.15, 0.2, 0.25, 0.3):
                p = make_params(psi_db=psi_db, rho=rho)
                series = ip_spsr(p, dense_stats, cfg)
                quad = ip_spsr_quadrature(p, dense_stats)
                assert series == pytest.approx(quad, rel=1e-2)

    def test_rho_endpoints_rejected(self, s1):
        for rho in (0.0, 1.0):
            with pytest.raises(ValueError):
                ip_spsr_quadrature(make_params(rho=rho), s1)

    def test_no_jamming_exceeds_jammed(self, s1):
        p = make_params(rho=0.55)
        assert ip_spsr_no_jamming(p, s1) > ip_spsr_quadrature(p, s1)


class TestInterceptDynamic:
    def test_assembly_matches_quadrature(self, s1):
        for psi_db, phi_db in ((2.0, 1.0), (4.0, -1.0)):
            p = make_params(psi_db=psi_db, phi_db=phi_db)
            assert ip_dpsr(p, s1) == pytest.approx(ip_dpsr_quadrature(p, s1), rel=1e-6)

    def test_no_jamming_exceeds_jammed(self, s1):
        p = make_params()
        assert ip_dpsr_no_jamming(p, s1) > ip_dpsr_quadrature(p, s1)

    def test_zero_threshold(self, s1):
        p = make_params(c_th=0.0)
        assert ip_dpsr(p, s1) == 1.0


class TestUnitIntervalInvariant:
    def test_probabilities_land_in_range_without_clamping(self, s1):
        # evaluators return raw formula values; they must land inside [0, 1]
        # to 1e-6 on their own
        lo, hi = -1e-6, 1.0 + 1e-6
        for psi_db in (-5.0, 2.0, 15.0):
            p = make_params(psi_db=psi_db, rho=0.55)
            values = [
                op_spsr(p, s1), op_spsr_quadrature(p, s1),
                op_dpsr(p, s1), op_dpsr_quadrature(p, s1),
                ip_spsr_quadrature(p, s1), ip_spsr_no_jamming(p, s1),
            ]
            assert all(lo <= v <= hi for v in values), (psi_db, values)
        p = make_params(psi_db=2.0, rho=0.55)
        for v in (ip_dpsr(p, s1), ip_dpsr_quadrature(p, s1), ip_dpsr_no_jamming(p, s1)):
            assert lo <= v <= hi


class TestInterceptPieces:
    def test_slot1_mass_vs_quadrature(self):
        # dilute rate 1.5 with base rate 1, two jammers: (1/1.5)**2
        p = SystemParams(eta=0.8, rho=0.5, psi=1.0, phi=1.0,
                         num_sources=2, num_jammers=2, c_th=0.5)
        s = ChannelStats(lambda_sr=1.0, lambda_rd=1.0, lambda_re=1.0,
                         lambda_je=1.0, lambda_se=0.5)
        assert slot1_intercept_probability(p, s) == pytest.approx((1 / 1.5) ** 2, rel=1e-12)
        tilted = p.gamma_th * s.lambda_se * p.phi / p.psi + s.lambda_je
        value, _ = integrate(
            lambda x: x * math.exp(-tilted * x) * s.lambda_je ** 2,
            QuadratureSpec(rel_tol=1e-10, abs_tol=1e-13), points=(2.0,))
        assert slot1_intercept_probability(p, s) == pytest.approx(value, rel=1e-8)

    def test_slot1_factor_vanishes_without_dilution(self, s1):
        p = make_params()
        assert slot1_outage_factor(p, s1, 0.0) == 0.0

    def test_slot2_factor_matches_quadrature(self, s1):
        p = make_params(rho=0.55)
        for x in (0.0, 1.0, 5.0):
            closed = slot2_outage_factor(p, s1, x)
            ref = slot2_outage_factor_quadrature(p, s1, x)
            assert closed == pytest.approx(ref, rel=1e-6)

    def test_slot2_factor_mirrors_outage_form_without_jamming(self, s1):
        # at zero aggregate the factor has the outage closed form with the
        # relay-to-eavesdropper rate in the Bessel argument
        p = make_params(rho=0.55)
        swapped = ChannelStats(lambda_sr=s1.lambda_sr, lambda_rd=s1.lambda_re,
                               lambda_re=s1.lambda_re, lambda_je=s1.lambda_je,
                               lambda_se=s1.lambda_se)
        assert slot2_outage_factor(p, s1, 0.0) == pytest.approx(
            op_spsr(p, swapped), rel=1e-12)

    def test_series_term_matches_direct_integral(self, dense_stats):
        # independently coded quadrature of the pre-transformation integral
        for (t, b, rho) in ((1, 1, 0.2), (2, 1, 0.3), (1, 2, 0.25)):
            p = make_params(rho=rho)
            k = p.num_jammers
            c = b * dense_stats.lambda_sr * dense_stats.lambda_re * p.gamma_th \
                / (p.eta * p.rho * p.psi)
            tilted = p.gamma_th * dense_stats.lambda_se * p.phi / p.psi + dense_stats.lambda_je

            def integrand(y):
                return y ** 0.5 * (y - 1.0) ** (t + k - 1) * bessel_k(1, 2.0 * math.sqrt(c * y))

            ref, _ = integrate(integrand, QuadratureSpec(rel_tol=1e-10, abs_tol=1e-30, lower=1.0),
                               points=(1.0 + (t + k) / math.sqrt(c),))
            expected = (-1.0) ** t * tilted ** t / (
                math.factorial(t) * p.phi ** (t + k)) * ref
            got = intercept_series_term(p, dense_stats, t, b, tilted)
            assert got == pytest.approx(expected, rel=1e-8)

    def test_single_jammer_leading_term_closes_the_loop(self, dense_stats):
        # for one jammer the t=0 term is, by the y = phi*x + 1 substitution,
        # exactly the aggregate-domain quadrature of the slot-2 Bessel kernel
        # with no density weight; computing it both ways checks the
        # substitution chain behind the Meijer-backed series
        p = make_params(rho=0.25, num_jammers=1)
        for b in (1, 2):
            c = b * dense_stats.lambda_sr * dense_stats.lambda_re * p.gamma_th \
                / (p.eta * p.rho * p.psi)

            def f(x, c=c):
                root = math.sqrt(c * (p.phi * x + 1.0))
                return math.sqrt(p.phi * x + 1.0) * bessel_k(1, 2.0 * root)

            direct, _ = integrate(f, QuadratureSpec(rel_tol=1e-10, abs_tol=1e-14),
                                  points=(1.0 / p.phi,))
            # weight^0 = 1, so the Erlang rate argument is irrelevant at t=0
            got = intercept_series_term(p, dense_stats, 0, b, dense_stats.lambda_je)
            assert got == pytest.approx(direct, rel=1e-7)

    def test_dpsr_factor_matches_conditional_average(self, s1):
        p = make_params()
        for x in (0.0, 2.0):
            fast = dpsr_slot2_factor(p, s1, x)
            ref = dpsr_slot2_factor_quadrature(p, s1, x)
            assert fast == pytest.approx(ref, rel=1e-6)

    def test_dpsr_conditional_factor_edges(self, s1):
        p = make_params()
        assert dpsr_slot2_outage_factor(p, s1, 1.0, 0.0) == 1.0
        v = dpsr_slot2_outage_factor(p, s1, 1.0, 2.0)
        assert 0.0 <= v <= 1.0

    def test_dpsr_kernel_positive_decreasing_in_x(self, s1):
        p = make_params()
        k0 = dpsr_slot2_kernel(p, s1, 0.0, 1)
        k5 = dpsr_slot2_kernel(p, s1, 5.0, 1)
        assert k0 > k5 > 0


class TestScratchTypes:
    def test_split_factors_are_reciprocal_fractions(self):
        eta, gain = 0.8, 2.0
        fac = SplitFactors.at(eta, gain)
        g = math.sqrt(eta * gain)
        rho_opt = 1.0 / (1.0 + g)
        assert fac.inv_harvest == pytest.approx(1.0 / rho_opt, rel=1e-14)
        assert fac.inv_info == pytest.approx(1.0 / (1.0 - rho_opt), rel=1e-14)
        assert fac.inv_harvest >= 1.0

    def test_split_factors_degenerate_gain(self):
        fac = SplitFactors.at(0.8, 0.0)
        assert fac.inv_harvest == 1.0
        assert math.isinf(fac.inv_info)

    def test_scratch_invariants(self, s1):
        p = make_params(rho=0.55)
        sc = InterceptScratch.from_params(p, s1, gamma_rd=1.5, omega=0.3)
        assert sc.rho_complement == pytest.approx(0.45)
        assert sc.tilted_jammer_rate >= sc.jammer_rate
        assert sc.rd_factors.inv_harvest >= 1.0
        assert sc.omega_factors.inv_harvest >= 1.0

    def test_scratch_rejects_untilted_rate(self):
        with pytest.raises(ValueError):
            InterceptScratch(rho_complement=0.5, jammer_rate=1.0, tilted_jammer_rate=0.5)

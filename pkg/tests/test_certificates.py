import math

import numpy as np
import pytest

from dads_lab.certificates import (
    AssumptionGrid,
    DadsParams,
    PdeDadsParams,
    c_epsilon,
    check_assumption_a,
    check_params,
    check_pde_params,
    chi,
    lemma1_bound,
    lemma1_s,
    theorem3_constants,
)
from dads_lab.comparison import constant, power, saturating
from dads_lab.errors import ContractError, DomainError
from dads_lab.plants import worked_example_bundle
from oracles import chi_oracle, diffusion_constants_oracle

# Constants of the scalar worked example with a = beta = 1/2.
WE = DadsParams(epsilon=0.1, Gamma=1.0, a=0.5, beta=0.5, b=1.0, C=1.0, r=1.0)
ONE = constant(1.0)


class TestParams:
    def test_default_gate_passes(self):
        assert check_params(DadsParams(0.1, 1.0, 1.0, 0.25, 1.0, 1.0, 1.0)).ok

    def test_coupling_constraint(self):
        res = check_params(DadsParams(0.1, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0))
        assert res.violations == ("2aβ < br",)

    def test_each_range_is_named(self):
        assert "a ∈ (0,1]" in check_params(DadsParams(0.1, 1.0, 0.0, 0.25, 1.0, 1.0)).violations
        assert "Γ > 0" in check_params(DadsParams(0.1, 0.0, 1.0, 0.25, 1.0, 1.0)).violations
        assert "C ≥ 1" in check_params(DadsParams(0.1, 1.0, 1.0, 0.25, 1.0, 0.5)).violations

    def test_pde_gate(self):
        assert check_pde_params(PdeDadsParams(0.05, 1.0, 1.0, 1.0, 1.0)).ok
        assert check_pde_params(PdeDadsParams(0.05, 1.0, 1.0, 0.5, 1.0)).violations == ("b ≥ 1 ≥ a > 0",)
        assert check_pde_params(PdeDadsParams(0.05, 1.0, 1.0, 1.0, 0.5)).violations == ("c ≥ 1",)


class TestChi:
    def test_origin(self):
        assert chi(0, 0, 0, 0, WE, ONE, 0.0) == 0.5

    def test_parameter_excess(self):
        assert chi(1, 0, 3, 0, WE, ONE, 0.0) == 11.5

    def test_excess_absorbed_by_initial_gain(self):
        assert chi(0, 0, 2, 5, WE, ONE, 0.0) == 0.5

    def test_negative_argument(self):
        with pytest.raises(DomainError):
            chi(-1, 0, 0, 0, WE, ONE, 0.0)

    def test_matches_oracle(self):
        rng = np.random.default_rng(3)
        gamma = power(0.7, 1.3)
        for _ in range(50):
            s = rng.uniform(0, 5, 4)
            lam = rng.uniform(0, 2)
            got = chi(*s, WE, gamma, lam)
            want = chi_oracle(*s, WE.a, WE.b, WE.beta, WE.r, gamma(s[1]), lam)
            assert got == pytest.approx(want, rel=1e-12)


class TestCEpsilon:
    def test_inside_half_epsilon(self):
        assert c_epsilon(power(1, 1), 1.0, 0.4) == 1.0

    def test_clipped_at_one(self):
        assert c_epsilon(power(1, 1), 1.0, 1.0) == 1.0

    def test_decreasing_ratio_attains_at_tau(self):
        assert c_epsilon(power(0.1, 1), 1.0, 2.0) == pytest.approx(2 / 15, rel=1e-5)
        assert c_epsilon(power(0.1, 1), 1.0, 2.0) <= 2 / 15

    def test_against_brute_force_grid(self):
        rho = power(0.3, 2.5)
        eps, tau = 0.4, 6.0
        ls = np.linspace(eps / 2, tau, 2_000_001)[1:]
        brute = min(1.0, float(np.min(2 * rho(ls) / (2 * ls - eps))))
        got = c_epsilon(rho, eps, tau)
        assert got <= brute
        assert got == pytest.approx(brute, rel=1e-5)

    def test_requires_k_infinity(self):
        with pytest.raises(ContractError):
            c_epsilon(saturating(1.0), 1.0, 2.0)


class TestComparisonBound:
    def test_no_elapsed_time(self):
        assert lemma1_bound(3.0, 2.0, 2.0, 0.0, 0.7, power(1, 1)) == 3.0

    def test_long_time_limit(self):
        assert lemma1_bound(2.0, 1e3, 0.0, 0.0, 1.0, power(1, 1)) == pytest.approx(0.5, abs=1e-12)

    def test_direct_evaluation(self):
        want = min(2.0, 2.0 * math.exp(-1.0) + 0.5 + 0.5)
        assert lemma1_bound(2.0, 1.0, 0.0, 0.5, 1.0, power(1, 1)) == pytest.approx(want, rel=1e-12)

    def test_time_order(self):
        with pytest.raises(DomainError):
            lemma1_bound(1.0, 0.5, 1.0, 0.0, 1.0, power(1, 1))

    def test_level_uses_inverse(self):
        assert lemma1_s(1.0, 8.0, power(1.0, 3.0)) == pytest.approx(3.0, rel=1e-12)


class TestDiffusionConstants:
    def test_kappa_is_exact_min(self):
        assert theorem3_constants(1, 1, 1, 1, 1, 1).kappa == 2.0
        assert theorem3_constants(0.1, 5, 1, 1, 1, 1).kappa == 0.1 * math.pi**2 / 2

    def test_pinned_values(self):
        # 40-digit evaluations of the closed forms, rounded to 12 digits
        c = theorem3_constants(1, 1, 1, 1, 1, 1)
        assert c.Kbar == pytest.approx(10.8822695490, rel=1e-11)
        assert c.Bbar == pytest.approx(8.41170216178, rel=1e-11)
        c = theorem3_constants(1, 1, 1, 1, 0.05, 1)
        assert c.Bbar == pytest.approx(111.793262878, rel=1e-11)
        c = theorem3_constants(2, 3, 0.5, 2, 0.1, 4)
        assert (c.kappa, c.Kbar, c.Bbar) == pytest.approx((6.0, 11.6941822925, 10.7281620378), rel=1e-11)

    def test_matches_oracle(self):
        c = theorem3_constants(0.3, 2.0, 0.6, 1.5, 0.2, 3.0)
        assert (c.kappa, c.Kbar, c.Bbar) == pytest.approx(diffusion_constants_oracle(0.3, 2.0, 0.6, 1.5, 0.2, 3.0), rel=1e-12)

    @pytest.mark.parametrize(
        "args, hypothesis",
        [((0, 1, 1, 1, 1, 1), "p > 0"), ((1, 0.5, 1, 1, 1, 1), "c ≥ 1"), ((1, 1, 1, 0.5, 1, 1), "b ≥ 1 ≥ a > 0"),
         ((1, 1, 1, 1, 0, 1), "ε, Γ > 0")],
    )
    def test_hypotheses_are_named(self, args, hypothesis):
        with pytest.raises(DomainError, match=hypothesis):
            theorem3_constants(*args)


class TestAssumptionCheck:
    def test_worked_example_passes(self):
        report = check_assumption_a(worked_example_bundle())
        assert report.passed
        assert report.n_points <= 10_000
        assert [r.name for r in report.rows] == ["nominal-decrease", "w-dissipation", "w-coupling-growth", "regressor-growth"]

    def test_hand_evaluated_slacks(self):
        b = worked_example_bundle()
        pts = np.array([[1.0, 0.7, 0.0], [-2.0, 1.5, 0.3]])
        report = check_assumption_a(b, pts)
        nominal, _, coupling, regressor = report.rows
        assert nominal.min_slack == pytest.approx(0.0, abs=1e-12)
        assert coupling.min_slack == pytest.approx(0.0, abs=1e-12)
        assert regressor.min_slack >= 0.0

    def test_grid_contains_origin_and_is_capped(self):
        pts = AssumptionGrid().points(1, 1, 1)
        assert len(pts) <= 10_000
        assert np.any(np.all(pts == 0.0, axis=1))
        assert AssumptionGrid().points(2, 2, 1).shape[0] <= 10_000

    def test_broken_certificate_fails(self):
        from dataclasses import replace

        b = replace(worked_example_bundle(), k=lambda y: float(-0.5 * y[0]))
        report = check_assumption_a(b)
        assert not report.passed
        assert not report.rows[0].passed

    def test_evaluation_failure_names_point(self):
        from dataclasses import replace

        def bad_R(w):
            if w[0] > 2.5:
                raise FloatingPointError("boom")
            return 0.5 * w[0] ** 4

        report = check_assumption_a(replace(worked_example_bundle(), R=bad_R))
        assert not report.passed
        assert "w=[2.7]" in report.error

    def test_bundle_self_checks(self):
        b = worked_example_bundle()
        assert b.point_check_failures() == []
        assert b.gradient_check_failures() == []
        assert b.mu_positive_failures() == []

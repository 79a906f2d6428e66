import numpy as np
import pytest

from infoblotto import OutOfRegimeError, ex_ante_payoff, expected_budget, interim_payoff
from infoblotto.lotto3 import (
    LottoParams,
    build_equilibrium,
    complete_info_baseline,
    gamma_e,
    informed_payoff,
    interim_equivalence_check,
    max_cost,
    multipliers,
    payoff_high_branch,
    payoff_low_branch,
    payoff_mid_branch,
    regime_of,
    solve,
    voi,
    zero_crossing_alpha,
)


def ordered_pairs(count):
    grid = np.linspace(0.05, 0.95, count)
    return [(a, b) for a in grid for b in grid if b <= a]


class TestParams:
    def test_ordering_enforced(self):
        with pytest.raises(ValueError):
            LottoParams(0.3, 0.6, 0.5)
        with pytest.raises(ValueError):
            LottoParams(1.0, 0.5, 0.5)
        with pytest.raises(ValueError):
            LottoParams(0.5, 0.0, 0.5)

    def test_gamma_domain(self):
        with pytest.raises(OutOfRegimeError):
            LottoParams(0.5, 0.5, 0.0)
        with pytest.raises(OutOfRegimeError):
            LottoParams(0.5, 0.5, 1.2)
        LottoParams(0.5, 0.5, 1.0)  # equal budgets allowed here

    def test_regimes(self):
        assert regime_of(0.2) == "low"
        assert regime_of(1 / 3) == "low"
        assert regime_of(0.5) == "mid"
        assert regime_of(2 / 3) == "mid"
        assert regime_of(0.8) == "high"
        assert regime_of(1.0) == "high"


class TestPayoff:
    def test_low_regime_value(self):
        # 3 * 0.2 / 2 - 1
        assert informed_payoff(0.5, 0.5, 0.2) == pytest.approx(-0.7, abs=1e-15)

    def test_boundary_third_from_both_branches(self):
        g = 1.0 / 3.0
        assert payoff_low_branch(0.5, 0.5, g) == pytest.approx(-0.5, abs=1e-15)
        assert payoff_mid_branch(0.5, 0.5, g) == pytest.approx(-0.5, abs=1e-15)

    def test_mid_regime_value(self):
        # c=1/2, bracket (1 - 2/3)(0.75 + 0.5) + 1 = 17/12; payoff -7/24
        assert informed_payoff(0.5, 0.5, 0.5) == pytest.approx(-7 / 24, abs=1e-15)

    def test_high_regime_values(self):
        # frozen from the exact payoff of the constructed equilibrium
        # (test_construction cross-checks through the profile evaluation)
        assert informed_payoff(0.5, 0.5, 1.0) == pytest.approx(1 / 6, abs=1e-15)
        assert informed_payoff(0.6, 0.3, 0.8) == pytest.approx(23 / 285, abs=1e-15)

    def test_regime_continuity_on_grid(self):
        for a, b in ordered_pairs(20):
            third = abs(
                payoff_low_branch(a, b, 1 / 3) - payoff_mid_branch(a, b, 1 / 3)
            )
            two_thirds = abs(
                payoff_mid_branch(a, b, 2 / 3) - payoff_high_branch(a, b, 2 / 3)
            )
            assert third <= 1e-12
            assert two_thirds <= 1e-12

    def test_mid_equals_high_when_symmetric(self):
        for a in np.linspace(0.05, 0.95, 19):
            for g in np.linspace(0.35, 1.0, 14):
                assert payoff_mid_branch(a, a, g) == pytest.approx(
                    payoff_high_branch(a, a, g), abs=1e-12
                )

    def test_beats_uninformed_baseline(self):
        for a, b in ordered_pairs(8):
            for g in np.linspace(0.08, 1.0, 8):
                assert informed_payoff(a, b, g) > complete_info_baseline(g)

    def test_monotone_in_each_parameter(self):
        h = 0.02
        for a, b in [(0.5, 0.3), (0.7, 0.7), (0.4, 0.1)]:
            for g in (0.2, 0.5, 0.8, 1.0):
                base = informed_payoff(a, b, g)
                assert informed_payoff(a + h, b, g) < base
                if b + h <= a:
                    assert informed_payoff(a, b + h, g) < base
                if g - h > 0:
                    assert informed_payoff(a, b, g - h) < base

    def test_baseline_values(self):
        assert complete_info_baseline(1.0) == 0.0
        assert complete_info_baseline(0.4) == pytest.approx(-0.6)
        assert complete_info_baseline(1 / 3) == pytest.approx(-2 / 3)


class TestMultipliers:
    def test_low_regime(self):
        lam_i, lam_u = multipliers(0.5, 0.5, 0.2, 1.0)
        assert lam_i == pytest.approx(0.5, abs=1e-15)
        assert lam_u == pytest.approx(0.3, abs=1e-15)

    def test_mid_regime(self):
        lam_i, lam_u = multipliers(0.5, 0.5, 0.5, 1.0)
        assert lam_i == pytest.approx(13 / 36, abs=1e-15)
        assert lam_u == pytest.approx(13 / 24, abs=1e-15)

    def test_ratio_fixed_by_budget_ratio(self):
        for g in (0.1, 0.4, 0.6, 0.9, 1.0):
            lam_i, lam_u = multipliers(0.6, 0.3, g, 2.5)
            assert lam_u == pytest.approx(3.0 * g * lam_i, rel=1e-14)
            assert lam_i > 0.0

    def test_ratio_identifies_regime(self):
        # lambda_i / lambda_u = 1/(3 gamma): >= 1 low, in [1/2, 1) mid,
        # in [1/3, 1/2) high
        for g, lo, hi in [(0.2, 1.0, np.inf), (0.5, 0.5, 1.0), (0.9, 1 / 3, 0.5)]:
            lam_i, lam_u = multipliers(0.5, 0.4, g, 1.0)
            assert lo <= lam_i / lam_u < hi

    def test_continuity_at_regime_boundaries(self):
        for a, b in [(0.5, 0.5), (0.8, 0.2)]:
            low = multipliers(a, b, 1 / 3, 1.0)[0]
            mid = multipliers(a, b, 1 / 3 + 1e-12, 1.0)[0]
            assert low == pytest.approx(mid, rel=1e-9)
            mid = multipliers(a, b, 2 / 3, 1.0)[0]
            high = multipliers(a, b, 2 / 3 + 1e-12, 1.0)[0]
            assert mid == pytest.approx(high, rel=1e-9)

    def test_budget_feedback(self):
        # multipliers close the informed expected-budget constraint exactly
        for a, b, g in [(0.5, 0.5, 0.2), (0.5, 0.5, 0.5), (0.6, 0.3, 0.8)]:
            params = LottoParams(a, b, g, 1.0)
            profile = build_equilibrium(params)
            spend = expected_budget(profile.informed[0])
            assert spend == pytest.approx(g * 1.0, abs=1e-9)


class TestConstruction:
    def test_regime1_structure(self):
        sol = solve(LottoParams(0.5, 0.5, 0.2, 1.0))
        assert sol.regime == "low"
        # F_U uniform on [0, 2/3] with density 3/2
        assert sol.f_uninformed.atoms == ()
        ((left, right, rho),) = sol.f_uninformed.segments
        assert (left, right, rho) == pytest.approx((0.0, 2 / 3, 1.5))
        # diagonal marginal: atom of 0.4 at zero plus ramp of mass 0.6
        ((loc, mass),) = sol.f_diag.atoms
        assert (loc, mass) == pytest.approx((0.0, 0.4))
        ((dl, dr, drho),) = sol.f_diag.segments
        assert (dl, dr) == pytest.approx((0.0, 2 / 3))
        assert drho * (dr - dl) == pytest.approx(0.6)
        # minor battlefields sit at zero
        assert sol.f_alpha.atoms == ((0.0, 1.0),)
        assert sol.f_beta.atoms == ((0.0, 1.0),)

    def test_uninformed_cdf_tops_out_at_one(self):
        for g in (0.2, 0.5, 0.8, 1.0):
            sol = solve(LottoParams(0.6, 0.3, g, 1.0))
            top = sol.f_uninformed.support_max()
            assert sol.f_uninformed.cdf(top) == pytest.approx(1.0, abs=1e-12)

    def test_budget_feasibility_all_regimes(self):
        for a, b in ordered_pairs(5):
            for g in (0.15, 1 / 3, 0.45, 2 / 3, 0.8, 1.0):
                params = LottoParams(a, b, g, 1.3)
                profile = build_equilibrium(params)
                for i in range(3):
                    spend = expected_budget(profile.informed[i])
                    assert spend == pytest.approx(params.budgets.informed, abs=1e-9)
                spend_u = expected_budget(profile.uninformed)
                assert spend_u == pytest.approx(params.budgets.uninformed, abs=1e-9)

    def test_value_matches_closed_form_all_regimes(self):
        for a, b in ordered_pairs(5):
            for g in (0.15, 0.45, 0.8, 1.0):
                params = LottoParams(a, b, g)
                profile = build_equilibrium(params)
                value = ex_ante_payoff(profile, params.valuation_matrix, params.prior)
                assert value == pytest.approx(informed_payoff(a, b, g), abs=1e-9)

    def test_regime1_value(self):
        params = LottoParams(0.5, 0.5, 0.2)
        profile = build_equilibrium(params)
        value = ex_ante_payoff(profile, params.valuation_matrix, params.prior)
        assert value == pytest.approx(-0.7, abs=1e-12)

    def test_marginals_follow_cyclic_assignment(self):
        params = LottoParams(0.6, 0.3, 0.5)
        sol = solve(params)
        profile = sol.profile()
        vals = params.valuation_matrix.values
        c = params.scale
        marginals = (sol.f_diag, sol.f_alpha, sol.f_beta)
        slot_values = (c, 0.6 * c, 0.3 * c)
        for i in range(3):
            for j in range(3):
                shift = (j - i) % 3
                assert profile.informed[i][j] == marginals[shift]
                assert vals[i][j] == pytest.approx(slot_values[shift])

    def test_interim_payoffs_equal_across_types(self):
        assert interim_equivalence_check(0.5, 0.5, 0.5)
        assert interim_equivalence_check(0.6, 0.3, 0.8)
        assert interim_equivalence_check(0.9, 0.1, 0.25)

    def test_interim_equals_ex_ante(self):
        params = LottoParams(0.7, 0.2, 0.6)
        profile = build_equilibrium(params)
        v, p = params.valuation_matrix, params.prior
        full = ex_ante_payoff(profile, v, p)
        for i in range(3):
            assert interim_payoff(profile, v, p, i) == pytest.approx(full, abs=1e-12)


class TestZeroCrossing:
    def test_threshold_at_half(self):
        assert zero_crossing_alpha(0.5) == pytest.approx(2 / 11, abs=1e-15)

    def test_sign_flip_around_threshold(self):
        assert informed_payoff(0.18, 0.18, 0.5) > 0.0
        assert informed_payoff(0.19, 0.19, 0.5) < 0.0

    def test_limit_from_above_third(self):
        assert 0.0 < zero_crossing_alpha(1 / 3 + 1e-9) < 1e-8

    def test_equal_budgets_always_win(self):
        assert zero_crossing_alpha(1.0) == pytest.approx(1.0, abs=1e-12)

    def test_no_win_region(self):
        with pytest.raises(OutOfRegimeError):
            zero_crossing_alpha(0.3)


class TestValueOfInformation:
    def test_free_information_always_helps(self):
        for a in np.linspace(0.05, 0.95, 10):
            for g in np.linspace(0.1, 1.0, 10):
                assert voi(a, g, 0.0) > 0.0

    def test_cost_enters_through_reduced_budget(self):
        expected = informed_payoff(0.5, 0.5, 0.8) - 0.0
        assert voi(0.5, 1.0, 0.2) == pytest.approx(expected, abs=1e-15)

    def test_zero_at_max_cost(self):
        for a in np.linspace(0.05, 0.95, 12):
            for g in np.linspace(0.1, 1.0, 12):
                assert voi(a, g, max_cost(a, g)) == pytest.approx(0.0, abs=1e-9)

    def test_sign_matches_max_cost_comparison(self):
        for a, g, cost in [(0.2, 0.9, 0.1), (0.8, 0.9, 0.1), (0.4, 0.5, 0.3)]:
            assert (voi(a, g, cost) > 0.0) == (cost < max_cost(a, g))

    def test_cost_domain(self):
        with pytest.raises(ValueError):
            voi(0.5, 0.5, 1.0)
        with pytest.raises(ValueError):
            voi(0.5, 0.5, -0.1)


class TestMaxCost:
    def test_anchor_at_alpha_zero(self):
        assert max_cost(0.0, 1.0) == pytest.approx(2 / 3, abs=1e-12)
        assert max_cost(1e-12, 1.0) == pytest.approx(2 / 3, abs=1e-9)

    def test_decreasing_in_alpha_at_full_budget(self):
        values = [max_cost(a, 1.0) for a in np.linspace(0.01, 0.99, 25)]
        assert all(a > b for a, b in zip(values, values[1:]))
        assert all(0.0 <= v < 1.0 for v in values)

    def test_gamma_e_root_property(self):
        # the equalizing ratio solves informed_payoff(a, a, x) = gamma - 1
        # (both the quadratic branch and the low-budget linear branch)
        for a in np.linspace(0.02, 0.98, 15):
            for g in np.linspace(0.05, 1.0, 15):
                ge = gamma_e(a, g)
                assert 0.0 < ge <= g + 1e-15
                assert informed_payoff(a, a, ge) == pytest.approx(g - 1.0, abs=1e-9)

    def test_gamma_e_against_bisection(self):
        # independent root find on the dispatched payoff
        def bisect(a, g):
            lo, hi = 1e-9, g
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                if informed_payoff(a, a, mid) - (g - 1.0) > 0.0:
                    hi = mid
                else:
                    lo = mid
            return 0.5 * (lo + hi)

        for a, g in [(0.1, 1.0), (0.5, 1.0), (0.5, 0.6), (0.9, 0.8), (0.3, 0.35)]:
            assert gamma_e(a, g) == pytest.approx(bisect(a, g), abs=1e-9)

import pytest

from nlamp import (
    InfeasibleError,
    OptProblem,
    OptResult,
    OptSettings,
    SplitterTriple,
    g_eff_closed,
    maximize,
    p_succ_closed,
    verify_symmetry,
)


@pytest.fixture(scope="module")
def threshold_14_result():
    return maximize(OptProblem(g_eff0=1.4))


class TestThreshold14:
    def test_reported_operating_point(self, threshold_14_result):
        result = threshold_14_result
        assert result.converged
        # reported optimum: p ~ 1e-3 at alpha ~ 0.51 with r ~ 0.38 each
        assert result.p_opt == pytest.approx(1e-3, rel=0.15)
        assert result.alpha_opt == pytest.approx(0.51, abs=0.01)
        for r in result.r_opt:
            assert r == pytest.approx(0.38, abs=0.01)

    def test_optimum_is_symmetric(self, threshold_14_result):
        assert verify_symmetry(threshold_14_result) < 1e-6

    def test_constraint_active(self, threshold_14_result):
        # the gain constraint binds at the optimum
        slack = threshold_14_result.constraint_slack
        assert -1e-8 <= slack < 1e-4

    def test_fidelity_reported(self, threshold_14_result):
        assert 0.9 < threshold_14_result.f_opt < 1.0

    def test_barrier_trace_schedule(self, threshold_14_result):
        trace = threshold_14_result.barrier_trace
        assert len(trace) == 10
        mus = [mu for mu, _ in trace]
        assert all(b == pytest.approx(0.2 * a, rel=1e-12) for a, b in zip(mus, mus[1:]))

    def test_determinism(self, threshold_14_result):
        again = maximize(OptProblem(g_eff0=1.4))
        assert again.p_opt == threshold_14_result.p_opt
        assert again.alpha_opt == threshold_14_result.alpha_opt
        assert again.r_opt == threshold_14_result.r_opt

    def test_symmetric_restriction_matches_full_search(self, threshold_14_result):
        restricted = maximize(OptProblem(g_eff0=1.4), OptSettings(symmetric=True))
        assert restricted.p_opt == pytest.approx(threshold_14_result.p_opt, abs=1e-8)
        assert restricted.alpha_opt == pytest.approx(
            threshold_14_result.alpha_opt, abs=1e-4
        )

    def test_permuted_starts_agree(self, threshold_14_result):
        permuted = maximize(
            OptProblem(g_eff0=1.4),
            OptSettings(alpha_starts=(0.8, 0.2, 0.5), r_starts=(0.45, 0.1, 0.3)),
        )
        assert permuted.p_opt == pytest.approx(threshold_14_result.p_opt, abs=1e-10)

    def test_asymmetric_point_with_same_products_is_feasible_but_not_better(
        self, threshold_14_result
    ):
        # split one reflectivity while keeping the other two; probability and
        # gain depend only on the r and t products, so breaking the product
        # structure while holding the gain feasible cannot beat the optimum
        alpha = threshold_14_result.alpha_opt
        r = threshold_14_result.r_opt[0]
        skewed = SplitterTriple(min(r * 1.2, 0.89), r, max(r * 0.8, 1e-6))
        if g_eff_closed(alpha, skewed) > 1.4:
            assert p_succ_closed(alpha, skewed) <= threshold_14_result.p_opt + 1e-12


class TestValidationAndFeasibility:
    def test_threshold_must_be_meaningful(self):
        with pytest.raises(ValueError):
            OptProblem(g_eff0=2.0)
        with pytest.raises(ValueError):
            OptProblem(g_eff0=0.9)

    def test_infeasible_box(self):
        # large alpha with large reflectivity cannot reach gain 1.9
        problem = OptProblem(
            g_eff0=1.9, alpha_bounds=(1.5, 2.0), r_bounds=(0.8, 0.9)
        )
        settings = OptSettings(alpha_starts=(1.5, 2.0), r_starts=(0.8, 0.9))
        with pytest.raises(InfeasibleError):
            maximize(problem, settings)

    def test_result_types(self, threshold_14_result):
        result = threshold_14_result
        assert isinstance(result, OptResult)
        assert isinstance(result.alpha_opt, float)
        assert all(isinstance(r, float) for r in result.r_opt)
        assert result.iterations > 0


class TestThresholdMonotonicity:
    def test_probability_decreases_with_threshold(self):
        previous = None
        for g0 in (1.2, 1.5, 1.8):
            result = maximize(OptProblem(g_eff0=g0))
            assert result.converged
            if previous is not None:
                assert result.p_opt < previous
            previous = result.p_opt

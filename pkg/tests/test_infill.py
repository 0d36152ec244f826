import numpy as np
import pytest

import infillbench.infill as infill_module
from infillbench.design import BoxBounds
from infillbench.infill import (
    InfillCriterion,
    expected_improvement,
    improvement_from_moments,
    predicted_value_score,
    propose,
)
from infillbench.kriging import Dataset, fit, predict


@pytest.fixture(scope="module")
def parabola_model():
    x = np.linspace(0.0, 1.0, 12)[:, None]
    y = (x[:, 0] - 0.3) ** 2
    return fit(Dataset(x, y), seed=3)


class TestPredictedValue:
    def test_equals_predict_mean_bitwise(self, parabola_model):
        rng = np.random.default_rng(0)
        for _ in range(100):
            x = rng.uniform(0.0, 1.0, 1)
            assert predicted_value_score(parabola_model, x) == predict(parabola_model, x)[0]


class TestExpectedImprovement:
    def test_no_uncertainty_no_improvement(self):
        assert improvement_from_moments(1.0, 0.0, 1.0) == 0.0

    def test_no_uncertainty_mean_above_best(self):
        assert improvement_from_moments(2.0, 0.0, 1.0) == 0.0

    def test_deterministic_improvement(self):
        # mean one unit below the best with vanishing spread
        assert improvement_from_moments(0.0, 0.0, 1.0) == 1.0
        np.testing.assert_allclose(improvement_from_moments(0.0, 1e-30, 1.0), 1.0, rtol=1e-9)

    def test_mean_at_best_equals_pdf_at_zero(self):
        # E[max(y_best - N(y_best, 1), 0)] = phi(0)
        np.testing.assert_allclose(
            improvement_from_moments(0.0, 1.0, 0.0), 0.3989422804014327, atol=1e-9
        )

    def test_never_negative(self):
        rng = np.random.default_rng(4)
        means = rng.normal(size=1000)
        variances = rng.uniform(0.0, 4.0, 1000)
        ei = improvement_from_moments(means, variances, 0.0)
        assert np.all(ei >= 0.0)

    def test_monotone_in_uncertainty(self):
        # more spread means more expected improvement (mean not below best)
        for mean in (0.0, 0.5, 1.0, 2.5):
            spreads = np.linspace(0.05, 4.0, 60)
            ei = improvement_from_moments(mean, spreads**2, 0.0)
            assert np.all(np.diff(ei) > 0.0)

    def test_strictly_decreasing_in_mean(self):
        means = np.linspace(-2.0, 4.0, 80)
        ei = improvement_from_moments(means, 1.0, 0.0)
        assert np.all(np.diff(ei) < 0.0)

    def test_model_route_matches_moment_route(self, parabola_model):
        rng = np.random.default_rng(5)
        for _ in range(20):
            x = rng.uniform(0.0, 1.0, 1)
            mean, variance = predict(parabola_model, x)
            assert expected_improvement(parabola_model, x, 0.1) == improvement_from_moments(
                mean, variance, 0.1
            )


class TestPropose:
    def test_predicted_value_finds_model_minimum(self, parabola_model):
        bounds = BoxBounds([0.0], [1.0])
        proposal = propose(parabola_model, InfillCriterion.PREDICTED_VALUE, bounds, 0.0, seed=7)
        # dense grid scan of the surrogate mean as the reference
        grid = np.linspace(0.0, 1.0, 10_000)[:, None]
        from infillbench.kriging import predict_batch

        means, _ = predict_batch(parabola_model, grid)
        assert abs(proposal[0] - 0.3) <= 0.05
        assert predict(parabola_model, proposal)[0] <= means.min() + 1e-9 * np.ptp(means)

    def test_expected_improvement_near_grid_optimum(self, parabola_model):
        bounds = BoxBounds([0.0], [1.0])
        y_best = float(((np.linspace(0, 1, 12) - 0.3) ** 2).min())
        proposal = propose(
            parabola_model, InfillCriterion.EXPECTED_IMPROVEMENT, bounds, y_best, seed=8
        )
        grid = np.linspace(0.0, 1.0, 10_000)[:, None]
        from infillbench.kriging import predict_batch

        means, variances = predict_batch(parabola_model, grid)
        grid_ei = improvement_from_moments(means, variances, y_best)
        proposal_ei = expected_improvement(parabola_model, proposal, y_best)
        assert proposal_ei >= 0.999 * grid_ei.max()

    def test_random_search_reproducible_and_inside(self):
        bounds = BoxBounds.cube(3)
        a = propose(None, InfillCriterion.RANDOM_SEARCH, bounds, 0.0, seed=5)
        b = propose(None, InfillCriterion.RANDOM_SEARCH, bounds, 0.0, seed=5)
        np.testing.assert_array_equal(a, b)
        assert bounds.contains(a)

    def test_model_based_requires_model(self):
        with pytest.raises(ValueError):
            propose(None, InfillCriterion.PREDICTED_VALUE, BoxBounds.cube(2), 0.0, seed=1)

    def test_proposals_stay_inside_bounds(self, parabola_model):
        bounds = BoxBounds([0.0], [1.0])
        for seed in range(10):
            for criterion in (InfillCriterion.PREDICTED_VALUE, InfillCriterion.EXPECTED_IMPROVEMENT):
                proposal = propose(parabola_model, criterion, bounds, 0.05, seed=seed)
                assert bounds.contains(proposal)

    def test_model_evaluation_budget_exact(self, parabola_model, monkeypatch):
        counter = {"rows": 0}
        real_batch = infill_module.predict_batch

        def counting_batch(model, points):
            counter["rows"] += np.atleast_2d(points).shape[0]
            return real_batch(model, points)

        monkeypatch.setattr(infill_module, "predict_batch", counting_batch)
        bounds = BoxBounds([0.0], [1.0])
        propose(parabola_model, InfillCriterion.PREDICTED_VALUE, bounds, 0.0, seed=2)
        assert counter["rows"] == 1000 * 1

        counter["rows"] = 0
        propose(parabola_model, InfillCriterion.EXPECTED_IMPROVEMENT, bounds, 0.0, seed=2)
        assert counter["rows"] == 1000 * 1

    def test_random_search_never_touches_model(self, monkeypatch):
        def forbidden(*args, **kwargs):
            raise AssertionError("random search must not evaluate the model")

        monkeypatch.setattr(infill_module, "predict_batch", forbidden)
        monkeypatch.setattr(infill_module, "predict", forbidden)
        bounds = BoxBounds.cube(2)
        proposal = propose(None, InfillCriterion.RANDOM_SEARCH, bounds, 0.0, seed=3)
        assert bounds.contains(proposal)

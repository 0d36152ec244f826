"""Shared test helpers."""

import numpy as np

from infillbench.kriging import KrigingModel, _FitWorkspace, _likelihood_terms
from infillbench.numerics import solve_triangular


def pinned_model(data, params) -> KrigingModel:
    """Model with pinned hyperparameters, bypassing the likelihood search."""
    ws = _FitWorkspace(data.X, data.y)
    terms = _likelihood_terms(ws, params.theta, params.power, params.nugget)
    assert terms is not None
    chol = np.tril(terms.chol)
    alpha = solve_triangular(
        chol, solve_triangular(chol, data.y - terms.mu_hat), transposed=True
    )
    return KrigingModel(
        data=data, params=params, chol=chol, alpha=alpha,
        mu_hat=terms.mu_hat, sigma2_hat=terms.sigma2_hat,
        neg_log_likelihood=terms.nll,
    )

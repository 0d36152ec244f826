"""Kriging (Gaussian process) surrogate with a power-exponential kernel.

Correlation between two points is ``exp(-sum_i theta_i * |x_i - x'_i|^p_i)``
with a separate weight theta_i > 0 and exponent p_i in [0.01, 2] per input
dimension, plus a nugget lambda in [1e-8, 1e-4] on the matrix diagonal for
numerical stability.

Fitting maximizes the concentrated likelihood: for a candidate (theta, p,
lambda) the process mean and variance have closed forms

    mu_hat     = (1' C^-1 y) / (1' C^-1 1)
    sigma2_hat = (y - 1 mu_hat)' C^-1 (y - 1 mu_hat) / n

with C = K + lambda*I, leaving ``-log L = (n/2) log sigma2_hat +
(1/2) log det C`` to be minimized over the 2d+1 kernel parameters by
differential evolution (theta and lambda are searched in log10 scale).
All linear algebra goes through one Cholesky factorization of C.

Prediction at a query point x uses

    mean     = mu_hat + k' C^-1 (y - 1 mu_hat)
    variance = sigma2_hat * (1 + lambda - k' C^-1 k)    (clamped at zero)

where k is the correlation vector between x and the training points.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

import scipy.linalg

from . import de
from .design import BoxBounds
from .numerics import solve_triangular

# Raw LAPACK handles for the likelihood hot path (thousands of calls per fit).
_potrf, _trtrs = scipy.linalg.get_lapack_funcs(
    ("potrf", "trtrs"), (np.empty((1, 1), dtype=float),)
)

THETA_LOG10_BOUNDS = (-3.0, 2.0)
POWER_BOUNDS = (0.01, 2.0)
NUGGET_LOG10_BOUNDS = (-8.0, -4.0)
NUGGET_MAX = 1.0e-4
SIGMA2_FLOOR = 1.0e-12
PENALTY_NLL = 1.0e10
DUPLICATE_TOL = 1.0e-12
LIKELIHOOD_EVALS_PER_PARAM = 500


class DegenerateData(Exception):
    """Training data cannot support a model (fewer than two distinct points, or constant y)."""


@dataclass(frozen=True, eq=False)
class Dataset:
    """Evaluated design points X (n, d) with objective values y (n,)."""

    X: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        X = np.atleast_2d(np.asarray(self.X, dtype=float))
        y = np.atleast_1d(np.asarray(self.y, dtype=float))
        if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.shape[0]:
            raise ValueError(f"inconsistent data shapes {X.shape} and {y.shape}")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def dimension(self) -> int:
        return self.X.shape[1]

    def deduplicated(self, tol: float = DUPLICATE_TOL) -> "Dataset":
        """Drop rows within ``tol`` (max-norm) of an earlier row, keeping the first."""
        keep: list[int] = []
        for i in range(self.n):
            kept = self.X[keep]
            if keep and float(np.abs(kept - self.X[i]).max(axis=1).min()) < tol:
                continue
            keep.append(i)
        if len(keep) == self.n:
            return self
        return Dataset(self.X[keep], self.y[keep])


@dataclass(frozen=True, eq=False)
class KrigingHyperparameters:
    """Kernel weights theta (d,), exponents power (d,), and the nugget."""

    theta: np.ndarray
    power: np.ndarray
    nugget: float

    def __post_init__(self):
        theta = np.atleast_1d(np.asarray(self.theta, dtype=float))
        power = np.atleast_1d(np.asarray(self.power, dtype=float))
        if theta.shape != power.shape or theta.ndim != 1:
            raise ValueError("theta and power must be 1-d vectors of equal length")
        if np.any(theta <= 0.0):
            raise ValueError("theta entries must be positive")
        if np.any(power < POWER_BOUNDS[0]) or np.any(power > POWER_BOUNDS[1]):
            raise ValueError(f"power entries must lie in {POWER_BOUNDS}")
        if not 1e-8 <= self.nugget <= NUGGET_MAX:
            raise ValueError(f"nugget must lie in [1e-08, {NUGGET_MAX}]")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "power", power)

    def as_dict(self) -> dict:
        """JSON-ready form, for dropping fitted parameters into run artifacts."""
        return {
            "theta": self.theta.tolist(),
            "power": self.power.tolist(),
            "nugget": self.nugget,
        }

    @classmethod
    def from_dict(cls, mapping: dict) -> "KrigingHyperparameters":
        return cls(mapping["theta"], mapping["power"], mapping["nugget"])


@dataclass(frozen=True, eq=False)
class KrigingModel:
    """Immutable fitted surrogate; query it through predict / predict_batch."""

    data: Dataset
    params: KrigingHyperparameters
    chol: np.ndarray
    alpha: np.ndarray  # C^-1 (y - 1 mu_hat), cached for O(n) mean prediction
    mu_hat: float
    sigma2_hat: float
    neg_log_likelihood: float
    nll_evaluations: int = 0


# ---------------------------------------------------------------------------
# Kernel arithmetic. All routes (scalar correlation, training matrix, query
# vectors) share the same exp(p * log|delta|) formulation so they agree to the
# last float; log(0) = -inf propagates to a clean |delta|^p = 0.
# ---------------------------------------------------------------------------


def _log_abs(diffs: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(np.abs(diffs))


def _weighted_distance(
    log_abs_diffs: np.ndarray, theta: np.ndarray, power: np.ndarray
) -> np.ndarray:
    """sum_i theta_i |delta_i|^p_i along the last axis."""
    powered = np.exp(log_abs_diffs * power)
    return powered @ theta


def correlation(x: np.ndarray, x2: np.ndarray, params: KrigingHyperparameters) -> float:
    """Kernel value in (0, 1]; exactly 1 at zero distance and symmetric."""
    x = np.asarray(x, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    return float(np.exp(-_weighted_distance(_log_abs(x - x2), params.theta, params.power)))


class _FitWorkspace:
    """Condensed pairwise geometry reused across the likelihood evaluations of one fit."""

    def __init__(self, X: np.ndarray, y: np.ndarray):
        n = X.shape[0]
        self.n = n
        self.rows, self.cols = np.triu_indices(n, 1)
        self.log_diffs = _log_abs(X[self.rows] - X[self.cols])  # (m, d)
        self.rhs = np.column_stack([y, np.ones(n)])
        self.y = y
        # Fortran order lets LAPACK factor in place; only the lower triangle
        # is ever filled, which is all potrf/trtrs read.
        self.matrix = np.zeros((n, n), order="F")
        self.diag = np.diag_indices(n)
        self.powered = np.empty_like(self.log_diffs)


@dataclass(frozen=True)
class _LikelihoodTerms:
    nll: float
    mu_hat: float
    sigma2_hat: float
    chol: np.ndarray
    nugget: float  # effective value after any jitter escalation


def _likelihood_terms(
    ws: _FitWorkspace, theta: np.ndarray, power: np.ndarray, nugget: float
) -> Optional[_LikelihoodTerms]:
    """Concentrated likelihood pieces, or None when the matrix stays indefinite.

    On factorization failure the nugget escalates tenfold (capped at
    NUGGET_MAX); only if the cap still fails is None returned, which callers
    map to a large penalty so the surrounding search keeps moving.
    """
    np.multiply(ws.log_diffs, power, out=ws.powered)
    np.exp(ws.powered, out=ws.powered)
    corr = ws.powered @ theta
    np.negative(corr, out=corr)
    np.exp(corr, out=corr)

    n = ws.n
    while True:
        # In-place factorization destroys the lower triangle, so every
        # attempt rebuilds it from the correlation vector first.
        ws.matrix[ws.cols, ws.rows] = corr
        ws.matrix[ws.diag] = 1.0 + nugget
        lower, info = _potrf(ws.matrix, lower=1, clean=0, overwrite_a=1)
        if info == 0:
            break
        if info < 0:
            raise RuntimeError(f"invalid factorization argument {-info}")
        if nugget >= NUGGET_MAX:
            return None
        nugget = min(nugget * 10.0, NUGGET_MAX)

    solved, _ = _trtrs(lower, ws.rhs, lower=1)
    y_white, ones_white = solved[:, 0], solved[:, 1]
    mu_hat = float(ones_white @ y_white) / float(ones_white @ ones_white)
    residual = y_white - mu_hat * ones_white
    sigma2_hat = max(float(residual @ residual) / n, SIGMA2_FLOOR)
    half_log_det = float(np.log(np.diag(lower)).sum())
    nll = 0.5 * n * np.log(sigma2_hat) + half_log_det
    return _LikelihoodTerms(float(nll), mu_hat, sigma2_hat, lower, nugget)


def negative_log_likelihood(data: Dataset, params: KrigingHyperparameters) -> float:
    """Concentrated negative log likelihood; a large penalty instead of failure."""
    if data.n < 2:
        raise DegenerateData("likelihood needs at least two points")
    ws = _FitWorkspace(data.X, data.y)
    terms = _likelihood_terms(ws, params.theta, params.power, params.nugget)
    return PENALTY_NLL if terms is None else terms.nll


def _mle_bounds(dimension: int) -> BoxBounds:
    lower = np.concatenate(
        [
            np.full(dimension, THETA_LOG10_BOUNDS[0]),
            np.full(dimension, POWER_BOUNDS[0]),
            [NUGGET_LOG10_BOUNDS[0]],
        ]
    )
    upper = np.concatenate(
        [
            np.full(dimension, THETA_LOG10_BOUNDS[1]),
            np.full(dimension, POWER_BOUNDS[1]),
            [NUGGET_LOG10_BOUNDS[1]],
        ]
    )
    return BoxBounds(lower, upper)


def _decode(vector: np.ndarray, dimension: int) -> tuple[np.ndarray, np.ndarray, float]:
    """Search vector -> (theta, power, nugget); theta and nugget live in log10 scale."""
    return (
        10.0 ** vector[:dimension],
        vector[dimension : 2 * dimension],
        float(10.0 ** vector[2 * dimension]),
    )


def fit(data: Dataset, seed: int, evals_per_param: int = LIKELIHOOD_EVALS_PER_PARAM) -> KrigingModel:
    """Fit hyperparameters by likelihood search with differential evolution.

    The search covers log10(theta) in [-3, 2]^d, p in [0.01, 2]^d, and
    log10(lambda) in [-8, -4], spending exactly ``evals_per_param * (2d + 1)``
    likelihood evaluations. Duplicate rows are dropped before fitting.
    Deterministic for a fixed (data, seed).
    """
    data = data.deduplicated()
    if data.n < 2:
        raise DegenerateData("fitting needs at least two distinct points")
    if float(np.ptp(data.y)) == 0.0:
        raise DegenerateData("constant objective values cannot identify a model")

    d = data.dimension
    n_params = 2 * d + 1
    ws = _FitWorkspace(data.X, data.y)

    def objective(vector: np.ndarray) -> float:
        terms = _likelihood_terms(ws, *_decode(vector, d))
        return PENALTY_NLL if terms is None else terms.nll

    config = de.DEConfig(
        population_size=de.default_population_size(n_params),
        budget=evals_per_param * n_params,
        seed=seed,
    )
    result = de.minimize(objective, _mle_bounds(d), config)

    theta, power, nugget = _decode(result.x_best, d)
    terms = _likelihood_terms(ws, theta, power, nugget)
    if terms is None:
        raise DegenerateData("no positive definite correlation matrix found")
    fitted = KrigingHyperparameters(theta, power, terms.nugget)

    # The workspace factor shares memory with the scratch matrix and carries a
    # stale upper triangle; keep a clean private copy on the model.
    chol = np.tril(terms.chol)
    centered = data.y - terms.mu_hat
    alpha = solve_triangular(chol, solve_triangular(chol, centered), transposed=True)
    return KrigingModel(
        data=data,
        params=fitted,
        chol=chol,
        alpha=alpha,
        mu_hat=terms.mu_hat,
        sigma2_hat=terms.sigma2_hat,
        neg_log_likelihood=terms.nll,
        nll_evaluations=result.evaluations_used,
    )


def _query_correlations(model: KrigingModel, points: np.ndarray) -> np.ndarray:
    """Correlation matrix (m, n) between query points and training points."""
    diffs = points[:, None, :] - model.data.X[None, :, :]
    weighted = _weighted_distance(_log_abs(diffs), model.params.theta, model.params.power)
    return np.exp(-weighted)


def predict_batch(model: KrigingModel, points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Predictive means and variances for an (m, d) array of query points."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    corr = _query_correlations(model, points)
    means = model.mu_hat + corr @ model.alpha
    whitened = solve_triangular(model.chol, corr.T)
    variances = model.sigma2_hat * (
        1.0 + model.params.nugget - (whitened * whitened).sum(axis=0)
    )
    return means, np.maximum(variances, 0.0)


def predict(model: KrigingModel, x: np.ndarray) -> tuple[float, float]:
    """Predictive mean and (non-negative) variance at a single point."""
    x = np.asarray(x, dtype=float)
    if x.shape != (model.data.dimension,):
        raise ValueError(f"expected a point of dimension {model.data.dimension}, got shape {x.shape}")
    means, variances = predict_batch(model, x[None, :])
    return float(means[0]), float(variances[0])

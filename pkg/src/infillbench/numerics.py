"""Dense linear algebra and Gaussian distribution helpers for the surrogate stack."""

from __future__ import annotations

import math

import numpy as np
import scipy.linalg
import scipy.special

_SYMMETRY_RTOL = 1e-12
_SQRT_2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


class NotPositiveDefinite(Exception):
    """Factorization failed; the caller may retry with a larger diagonal jitter."""


class SingularMatrix(Exception):
    """A triangular solve hit a zero diagonal entry."""


def cholesky(a: np.ndarray, check: bool = True) -> np.ndarray:
    """Lower-triangular factor L with L @ L.T == a.

    With ``check`` enabled the input must be square and symmetric to within
    1e-12 relative to its largest entry; violations are programming errors
    and raise ValueError. Indefinite input raises NotPositiveDefinite.
    """
    a = np.asarray(a, dtype=float)
    if check:
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {a.shape}")
        scale = float(np.abs(a).max()) if a.size else 0.0
        if scale > 0.0 and float(np.abs(a - a.T).max()) > _SYMMETRY_RTOL * scale:
            raise ValueError("matrix is not symmetric")
    try:
        return scipy.linalg.cholesky(a, lower=True, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(str(exc)) from None


def solve_triangular(
    l: np.ndarray, b: np.ndarray, transposed: bool = False
) -> np.ndarray:
    """Solve l @ x = b (or l.T @ x = b when ``transposed``) for lower-triangular l."""
    l = np.asarray(l, dtype=float)
    b = np.asarray(b, dtype=float)
    if l.ndim != 2 or l.shape[0] != l.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {l.shape}")
    if np.any(np.diag(l) == 0.0):
        raise SingularMatrix("zero entry on the triangular diagonal")
    return scipy.linalg.solve_triangular(
        l, b, lower=True, trans=1 if transposed else 0, check_finite=False
    )


def standard_normal_cdf(z):
    """Phi(z), the standard normal CDF. Accepts scalars or arrays.

    Computed through erfc so the far tails keep full relative accuracy.
    """
    return 0.5 * scipy.special.erfc(-z / _SQRT_2)


def standard_normal_pdf(z):
    """phi(z) = exp(-z^2 / 2) / sqrt(2 pi). Accepts scalars or arrays."""
    z = np.asarray(z, dtype=float)
    out = _INV_SQRT_2PI * np.exp(-0.5 * z * z)
    return float(out) if out.ndim == 0 else out

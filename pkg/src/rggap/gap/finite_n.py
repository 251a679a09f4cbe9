"""Gap probability of (-s, s) for N x N real Ginibre matrices as an N/2 x N/2 determinant.

Entry (j, l) is

    delta_jl - gamma(l + j - 3/2; s^2) / (sqrt(2 pi) sqrt(Gamma(2j-1) Gamma(2l-1))),

formed as P(a, s^2) * exp(lnGamma(a) - lnGamma(2j-1)/2 - lnGamma(2l-1)/2) / sqrt(2 pi),
a = l + j - 3/2, so nothing overflows at N in the hundreds.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from ..errors import DomainError
from ..skewlinalg import determinant
from ..specialfun import log_gamma, lower_incomplete_gamma_regularized

MAX_N = 512


def _check_n(n_matrix: int) -> int:
    if int(n_matrix) != n_matrix or n_matrix % 2 or not 2 <= n_matrix <= MAX_N:
        raise DomainError(f"matrix size must be an even integer in [2, {MAX_N}], got {n_matrix!r}")
    return int(n_matrix)


@lru_cache(maxsize=16)
def _log_weights(n_matrix: int) -> np.ndarray:
    m = n_matrix // 2
    j = np.arange(1, m + 1)
    half_lg = np.array([0.5 * log_gamma(2 * k - 1) for k in j])
    lg_a = np.array([log_gamma(k - 1.5) for k in range(2, 2 * m + 1)])  # a = k - 3/2 for k = j + l
    w = lg_a[(j[:, None] + j[None, :]) - 2] - half_lg[:, None] - half_lg[None, :]
    w -= 0.5 * math.log(2 * math.pi)
    w.setflags(write=False)
    return w


def finite_n_matrix(half_width: float, n_matrix: int) -> np.ndarray:
    n_matrix = _check_n(n_matrix)
    if not half_width >= 0:
        raise DomainError(f"half width must be >= 0, got {half_width!r}")
    m = n_matrix // 2
    x = float(half_width) ** 2
    # P(a, x) for the 2m - 1 distinct values a = 1/2, 3/2, ..., 2m - 3/2
    p = np.array([lower_incomplete_gamma_regularized(k - 0.5, x) for k in range(1, 2 * m)])
    j = np.arange(m)
    return np.eye(m) - p[j[:, None] + j[None, :]] * np.exp(_log_weights(n_matrix))


@lru_cache(maxsize=4096)
def gap_finite_n(half_width: float, n_matrix: int = 120) -> float:
    """E^{rG,N}(0; (-half_width, half_width)) for even N = ``n_matrix``."""
    return determinant(finite_n_matrix(half_width, n_matrix))

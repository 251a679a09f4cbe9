"""Truncated generating function E((0, s); xi) = 1 + sum_{n<=m} (-xi)^n/n! int_{(0,s)^n} rho_n.

Each cube integral equals n! times the integral over the ordered simplex
0 < x_1 < ... < x_n < s. The I entry's sign jump sits on the diagonals, so on the
simplex rho_n is analytic and a fixed tensor Gauss-Legendre rule converges fast.
The simplex is mapped to the unit cube by x_n = s u_n, x_k = x_{k+1} u_k.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache

import numpy as np

from ..correlations import rho_n_batch
from ..errors import DomainError
from ..kernels import KernelParams

GF_WINDOW = 3.0
MAX_ORDER = 4
MIN_NODES = 24


def _simplex_points(u: np.ndarray, s: float) -> tuple[np.ndarray, np.ndarray]:
    """Map cube points u (B, n) to ordered points x (B, n) and their Jacobians."""
    n = u.shape[1]
    x = np.empty_like(u)
    x[:, n - 1] = s * u[:, n - 1]
    for k in range(n - 2, -1, -1):
        x[:, k] = x[:, k + 1] * u[:, k]
    jac = s ** n * np.prod(u ** np.arange(n), axis=1)
    return x, jac


def _chunk_integral(first: int, nodes: np.ndarray, weights: np.ndarray, n: int, s: float) -> float:
    # rule restricted to u_n = nodes[first]
    rest = list(itertools.product(range(nodes.size), repeat=n - 1))
    idx = np.array([(*r, first) for r in rest], dtype=int).reshape(-1, n)
    u = nodes[idx]
    w = np.prod(weights[idx], axis=1)
    x, jac = _simplex_points(u, s)
    return float(np.sum(w * jac * rho_n_batch(x, KernelParams.real_ginibre())))


@lru_cache(maxsize=256)
def simplex_integral(s: float, n: int, nodes: int = MIN_NODES, workers: int | None = None) -> float:
    """int over 0 < x_1 < ... < x_n < s of rho_n^{rG}, by tensor Gauss-Legendre.

    Work is split by the node of the outermost variable; partial sums are
    combined in node order, so the value does not depend on ``workers``.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    if s == 0.0:
        return 0.0
    x, w = np.polynomial.legendre.leggauss(nodes)
    x = 0.5 * (x + 1.0)
    w = 0.5 * w
    workers = workers or os.cpu_count() or 1
    if workers == 1 or n == 1:
        parts = [_chunk_integral(i, x, w, n, s) for i in range(nodes)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda i: _chunk_integral(i, x, w, n, s), range(nodes)))
    return float(np.sum(np.array(parts)))


def gap_truncated_gf(s: float, xi: float, max_order: int = MAX_ORDER, *,
                     nodes: int = MIN_NODES, workers: int | None = None) -> float:
    """E^{rG}((0, s); xi) with the correlation series cut after ``max_order`` terms.

    The n-th term first contributes at order s^{n(n+1)/2}, so the truncation
    error is O(s^{(m+1)(m+2)/2}).
    """
    if not 0.0 <= s <= GF_WINDOW:
        raise DomainError(f"s must lie in [0, {GF_WINDOW}], got {s!r}")
    if not 0.0 <= xi <= 2.0:
        raise DomainError(f"xi must lie in [0, 2], got {xi!r}")
    if int(max_order) != max_order or not 0 <= max_order <= MAX_ORDER:
        raise DomainError(f"max_order must be an integer in [0, {MAX_ORDER}]")
    if nodes < MIN_NODES:
        raise DomainError(f"use at least {MIN_NODES} Gauss-Legendre nodes per axis")
    terms = [1.0]
    for n in range(1, int(max_order) + 1):
        # (-xi)^n / n! * n! * simplex integral
        terms.append((-xi) ** n * simplex_integral(float(s), n, nodes, workers))
    return math.fsum(terms)

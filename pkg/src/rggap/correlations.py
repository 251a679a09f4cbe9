"""n-point correlation functions as Pfaffians of 2n x 2n kernel matrices."""

from __future__ import annotations

import itertools
import math

import numpy as np
from scipy import integrate

from .errors import DegenerateInputError, DomainError
from .kernels import KernelParams, Process, d_kernel, i_kernel, s_kernel
from .skewlinalg import pfaffian, pfaffian_batch

COINCIDENCE_TOL = 1e-12


def correlation_matrix(points, p: KernelParams) -> np.ndarray:
    """The antisymmetric matrix whose Pfaffian is rho_n.

    Works on the trailing axis, so ``points`` of shape (..., n) gives
    matrices of shape (..., 2n, 2n). Point i occupies rows 2i, 2i+1 with block
    [[-I(y_i,y_j), S(y_i,y_j)], [-S(y_j,y_i), D(y_i,y_j)]] times the process weight.
    """
    y = np.asarray(points, dtype=float)
    n = y.shape[-1]
    a = y[..., :, None]
    b = y[..., None, :]
    w = p.block_weight
    s = np.asarray(s_kernel(a, b, p))
    m = np.empty(y.shape[:-1] + (2 * n, 2 * n))
    m[..., 0::2, 0::2] = -w * np.asarray(i_kernel(a, b, p))
    m[..., 0::2, 1::2] = w * s
    m[..., 1::2, 0::2] = -w * np.swapaxes(s, -1, -2)
    m[..., 1::2, 1::2] = w * np.asarray(d_kernel(a, b, p))
    return m


def _check_distinct(y: np.ndarray) -> None:
    if y.size == 0:
        raise DomainError("need at least one point")
    if not np.all(np.isfinite(y)):
        raise DomainError("points must be finite")
    ys = np.sort(y)
    if ys.size > 1 and np.min(np.diff(ys)) < COINCIDENCE_TOL:
        raise DegenerateInputError("correlation functions need pairwise distinct points")


def rho_n(points, p: KernelParams) -> float:
    """n-point correlation rho_(n)(points) for the process described by ``p``."""
    y = np.atleast_1d(np.asarray(points, dtype=float))
    if y.ndim != 1:
        raise DomainError("points must be a 1-d sequence")
    _check_distinct(y)
    return float(pfaffian(correlation_matrix(y, p)))


def rho_n_batch(points, p: KernelParams) -> np.ndarray:
    """rho_n for each row of a (B, n) array. No coincidence check."""
    y = np.asarray(points, dtype=float)
    if y.ndim != 2:
        raise DomainError("expected a (B, n) array of configurations")
    return pfaffian_batch(correlation_matrix(y, p))


def rho_annihilation(points, rho: float) -> float:
    """Annihilation correlations at particle density ``rho``.

    Evaluated as the keep-1/2 thinning of coalescence at density 2 rho,
    i.e. 2^-n rho_n^c, independently of the annihilation kernel parameters.
    """
    y = np.atleast_1d(np.asarray(points, dtype=float))
    return 0.5 ** y.size * rho_n(y, KernelParams.coalescence(2.0 * rho))


def truncated_pair_correlation(x: float, p: KernelParams) -> float:
    """rho_2^T(x, 0) = rho_2(x, 0) - rho_1(x) rho_1(0)."""
    if x == 0:
        raise DegenerateInputError("truncated pair correlation is evaluated at x != 0")
    return rho_n([x, 0.0], p) - rho_n([x], p) * rho_n([0.0], p)


def compressibility(p: KernelParams, cutoff: float = 20.0) -> float:
    """1 + (1/rho) int_{|x|<cutoff} rho_2^T(x, 0) dx by adaptive quadrature."""
    rho1 = rho_n([0.0], p)
    f = lambda x: truncated_pair_correlation(x, p)  # noqa: E731
    opts = dict(epsabs=1e-13, epsrel=1e-12, limit=200)
    left, _ = integrate.quad(f, -cutoff, 0.0, **opts)
    right, _ = integrate.quad(f, 0.0, cutoff, **opts)
    return 1.0 + (left + right) / rho1


# one-sided second-order first-derivative stencil at offsets 0, h, 2h
_STENCIL = (-1.5, 2.0, -0.5)


def correlation_from_gap_derivative(y, p: KernelParams, h: float = 1e-3, n_matrix: int = 120) -> float:
    """rho_n(y) from (-1)^n d^n E(0; J) / dx_2 dx_4 ... dx_2n at collapsed intervals.

    A cross-check of :func:`rho_n`, not a production path. Collapsed intervals
    cannot be shrunk below zero width, so each right endpoint is differenced
    with a one-sided second-order stencil (error O(h^2)).

    Coalescence supports n <= 3 through the multi-interval Pfaffian. The real
    Ginibre bulk supports n = 1 through the finite-N determinant (its density at
    the origin is exactly 1/sqrt(2 pi) for every even N).
    """
    from .gap.pfaffian_gaps import coalescence_gap_from_endpoints
    from .gap.finite_n import gap_finite_n

    y = np.atleast_1d(np.asarray(y, dtype=float))
    n = y.size
    if n < 1 or n > 3:
        raise DomainError("correlation_from_gap_derivative supports 1 <= n <= 3")
    if n > 1 and np.min(np.diff(y)) <= 2 * h:
        raise DomainError("points must be strictly increasing with spacing above 2h")

    if p.process is Process.COALESCENCE:
        def gap(widths):
            ends = np.empty(2 * n)
            ends[0::2] = y
            ends[1::2] = y + widths
            return coalescence_gap_from_endpoints(ends, p.rho)
    elif p.process is Process.REAL_GINIBRE_BULK and n == 1:
        def gap(widths):
            return gap_finite_n(0.5 * widths[0], n_matrix)
    else:
        raise DomainError(f"no multi-interval gap probability available for {p.process.value} with n={n}")

    total = 0.0
    for offsets in itertools.product(range(3), repeat=n):
        weight = math.prod(_STENCIL[o] for o in offsets)
        total += weight * gap(h * np.array(offsets, dtype=float))
    return (-1) ** n * total / h ** n

"""Scalar special functions: erf/erfc, log-gamma, regularized lower incomplete
gamma and the constant zeta(3/2).

erf, erfc and lgamma come from ``math`` (scalars) and ``scipy.special``
(arrays). The incomplete gamma function and zeta(3/2) are evaluated here.
"""

from __future__ import annotations

import math
import sys
from functools import lru_cache

import numpy as np
from scipy import special as _sp

from .errors import ConvergenceError, DomainError

_EPS = sys.float_info.epsilon
_TINY = sys.float_info.min / _EPS


def erf(x):
    if np.ndim(x) == 0:
        return math.erf(float(x))
    return _sp.erf(np.asarray(x, dtype=float))


def erfc(x):
    """Complementary error function, scalar or elementwise on arrays."""
    if np.ndim(x) == 0:
        return math.erfc(float(x))
    return _sp.erfc(np.asarray(x, dtype=float))


def log_gamma(a: float) -> float:
    """ln Gamma(a) for a > 0."""
    if not a > 0:
        raise DomainError(f"log_gamma requires a > 0, got {a!r}")
    return math.lgamma(a)


def _check_gamma_args(a: float, x: float) -> None:
    if not a > 0 or math.isinf(a):
        raise DomainError(f"incomplete gamma requires finite a > 0, got a={a!r}")
    if not x >= 0:
        raise DomainError(f"incomplete gamma requires x >= 0, got x={x!r}")


def _log_prefactor(a: float, x: float) -> float:
    # log(x^a e^-x / Gamma(a))
    return a * math.log(x) - x - math.lgamma(a)


def _gamma_series(a: float, x: float, max_iter: int) -> float:
    """sum_{n>=0} x^n / ((a+1)...(a+n)), so that P(a,x) = prefactor * sum / a."""
    term = 1.0
    total = 1.0
    ap = a
    for _ in range(max_iter):
        ap += 1.0
        term *= x / ap
        total += term
        if term < total * _EPS:
            return total
    raise ConvergenceError(f"incomplete gamma series did not converge (a={a}, x={x})")


def _gamma_cf(a: float, x: float, max_iter: int) -> float:
    """Continued fraction for Q(a,x) / prefactor (modified Lentz)."""
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, max_iter + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise ConvergenceError(f"incomplete gamma continued fraction did not converge (a={a}, x={x})")


def _max_iter(a: float, x: float) -> int:
    return 200 + int(10 * math.sqrt(max(a, x)))


def lower_incomplete_gamma_regularized(a: float, x: float) -> float:
    """P(a, x) = gamma(a; x) / Gamma(a).

    Power series below ``x = a + 1``, continued fraction for the upper
    function above it.
    """
    a = float(a)
    x = float(x)
    _check_gamma_args(a, x)
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return 1.0
    n = _max_iter(a, x)
    if x < a + 1.0:
        return math.exp(_log_prefactor(a, x) + math.log(_gamma_series(a, x, n) / a))
    return 1.0 - math.exp(_log_prefactor(a, x)) * _gamma_cf(a, x, n)


def log_lower_incomplete_gamma_regularized(a: float, x: float) -> float:
    """log P(a, x); -inf at x = 0. Stays finite where P itself underflows."""
    a = float(a)
    x = float(x)
    _check_gamma_args(a, x)
    if x == 0.0:
        return -math.inf
    if math.isinf(x):
        return 0.0
    n = _max_iter(a, x)
    if x < a + 1.0:
        return _log_prefactor(a, x) + math.log(_gamma_series(a, x, n) / a)
    return math.log1p(-math.exp(_log_prefactor(a, x)) * _gamma_cf(a, x, n))


@lru_cache(maxsize=None)
def zeta_three_halves() -> float:
    """Riemann zeta at 3/2: direct sum to N-1 plus an Euler-Maclaurin tail."""
    s = 1.5
    n_terms = 200
    head = math.fsum(k ** -s for k in range(1, n_terms))
    N = float(n_terms)
    # sum_{k>=N} k^-s = N^(1-s)/(s-1) + N^-s/2 - sum_j B_2j/(2j)! f^(2j-1)(N)
    tail = [N ** (1 - s) / (s - 1), 0.5 * N ** -s]
    bernoulli = (1 / 6, -1 / 30, 1 / 42, -1 / 30)
    rising = s  # s (s+1) ... (s+2j-2)
    fact = 2.0
    for j, b2j in enumerate(bernoulli, start=1):
        # f^(2j-1)(N) = -rising * N^-(s+2j-1)
        tail.append(b2j / fact * rising * N ** -(s + 2 * j - 1))
        rising *= (s + 2 * j - 1) * (s + 2 * j)
        fact *= (2 * j + 1) * (2 * j + 2)
    return math.fsum([head, *tail])

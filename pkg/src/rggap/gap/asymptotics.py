"""Large-s behaviour of the bulk gap probability: exp(-c1_tilde s + c2)."""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy import integrate

from ..errors import DomainError
from ..specialfun import zeta_three_halves


def c1_annihilation() -> float:
    """Decay rate of the annihilation gap probability at unit density, zeta(3/2)/2."""
    return 0.5 * zeta_three_halves()


def c1_tilde() -> float:
    """Decay rate of the real Ginibre bulk gap probability, zeta(3/2) / (2 sqrt(2 pi))."""
    return c1_annihilation() / math.sqrt(2 * math.pi)


def c2_terms(n_max: int) -> np.ndarray:
    """Outer terms t_n = (1/n)(-pi + sum_{p=1}^{n-1} 1/sqrt(p(n-p))) for n = 2..n_max."""
    out = np.empty(n_max - 1)
    for n in range(2, n_max + 1):
        p = np.arange(1, n, dtype=float)
        out[n - 2] = (np.sum(1.0 / np.sqrt(p * (n - p))) - math.pi) / n
    return out


def c2_partial_sums(n_max: int) -> np.ndarray:
    """log 2 - 1/4 + (1/4pi) sum_{n=2}^{m} t_n for m = 2..n_max."""
    return math.log(2) - 0.25 + np.cumsum(c2_terms(n_max)) / (4 * math.pi)


def c2_tail_estimate(terms: np.ndarray) -> float:
    """Remainder of (1/4pi) sum t_n past the last term.

    Fits |t_n| = A n^-alpha over the last decade of ``terms`` (t_2, t_3, ...)
    and integrates the fit from n_max + 1/2 to infinity.
    """
    n_max = terms.size + 1
    n = np.arange(2, n_max + 1, dtype=float)
    sel = n >= n_max / 10
    slope, intercept = np.polyfit(np.log(n[sel]), np.log(-terms[sel]), 1)
    alpha = -slope
    if alpha <= 1:
        raise DomainError("outer terms do not decay fast enough for a tail estimate")
    tail = math.exp(intercept) * (n_max + 0.5) ** (1 - alpha) / (alpha - 1)
    return -tail / (4 * math.pi)


@lru_cache(maxsize=8)
def c2_constant(n_max: int = 20000) -> float:
    """The constant term of -log E at large s; about 0.0626."""
    terms = c2_terms(n_max)
    head = math.log(2) - 0.25 + math.fsum(terms) / (4 * math.pi)
    return head + c2_tail_estimate(terms)


def asymptote_large_s(s: float) -> float:
    """exp(-c1_tilde s + c2), the large-gap form of E^{rG}(0; (0, s))."""
    if not s > 0:
        raise DomainError(f"the large-s form needs s > 0, got {s!r}")
    return math.exp(-c1_tilde() * s + c2_constant())


def decay_rate_fourier(xi: float) -> float:
    """Exponential decay rate of E^{rG}((0, s); xi) from the leading Fredholm term.

    -(1/4pi) int log(1 - (2 xi - xi^2) e^{-k^2/2}) dk; the extra 1/2 against the
    Fredholm determinant comes from E^2 = det(1 - xi K). The integrand is even with
    an integrable log singularity at k = 0 when xi = 1, so the two half lines are
    integrated separately, each split again at |k| = 1. On |k| < 1 the substitution
    |k| = t^2 damps the singularity to t log t.
    """
    if not 0.0 <= xi <= 2.0:
        raise DomainError(f"xi must lie in [0, 2], got {xi!r}")
    q = 2.0 * xi - xi * xi
    if q == 0.0:
        return 0.0

    def f(k):
        # 1 - q e^{-x} = (1 - q) - q expm1(-x), exact near k = 0 when q = 1
        return math.log((1.0 - q) - q * math.expm1(-0.5 * k * k))

    def near(t):
        return 0.0 if t == 0.0 else 2.0 * t * f(t * t)

    opts = dict(epsabs=1e-14, epsrel=1e-13, limit=200)
    pieces = [
        integrate.quad(near, 0.0, 1.0, **opts)[0],
        integrate.quad(f, -np.inf, -1.0, **opts)[0],
        integrate.quad(near, 0.0, 1.0, **opts)[0],
        integrate.quad(f, 1.0, np.inf, **opts)[0],
    ]
    return -math.fsum(pieces) / (4 * math.pi)

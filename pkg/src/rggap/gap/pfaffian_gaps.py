"""Multi-interval gap probabilities that are Pfaffians of erfc matrices."""

from __future__ import annotations

import math

import numpy as np

from ..errors import DomainError
from ..kernels import RG_COALESCENCE_DENSITY
from ..skewlinalg import SkewMatrix, determinant, pfaffian
from ..specialfun import erfc
from .types import IntervalUnion


def _erfc_skew(ends: np.ndarray, rho: float) -> SkewMatrix:
    iu = np.triu_indices(ends.size, k=1)
    diff = ends[iu[1]] - ends[iu[0]]
    return SkewMatrix(ends.size, erfc(0.5 * math.sqrt(math.pi) * rho * diff))


def coalescence_gap_from_endpoints(ends, rho: float) -> float:
    """Pf[erfc(sqrt(pi) rho (x_j - x_i) / 2)]_{i<j} on raw endpoints.

    No ordering check: zero-width intervals are allowed, which the finite
    difference oracles rely on. Public callers use :func:`gap_coalescence`.
    """
    ends = np.asarray(ends, dtype=float)
    return pfaffian(_erfc_skew(ends, rho))


def gap_coalescence(j: IntervalUnion, rho: float) -> float:
    """Probability that the coalescence process at density ``rho`` has no particle in J."""
    if not rho > 0:
        raise DomainError(f"density must be positive, got {rho!r}")
    return coalescence_gap_from_endpoints(np.array(j.endpoints), rho)


def gap_rg_xi2(j: IntervalUnion) -> float:
    """The real Ginibre generating function E(J; xi=2), equal to the coalescence gap at sqrt(2/pi)."""
    return gap_coalescence(j, RG_COALESCENCE_DENSITY)


def rg_xi2_determinant(j: IntervalUnion) -> float:
    """det[sgn(x_j - x_i) erfc(|x_j - x_i| / sqrt 2)], the square of :func:`gap_rg_xi2`."""
    x = np.array(j.endpoints)
    d = x[None, :] - x[:, None]
    return determinant(np.sign(d) * erfc(np.abs(d) / math.sqrt(2.0)))


def even_count_gap(j: IntervalUnion) -> float:
    """Probability that J holds an even number of real Ginibre bulk eigenvalues."""
    return 0.5 + 0.5 * gap_coalescence(j, RG_COALESCENCE_DENSITY)

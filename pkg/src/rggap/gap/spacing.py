"""Nearest-neighbour spacing densities p0(s) = (1/rho) d^2/ds^2 E(0; (0, s))."""

from __future__ import annotations

import math

from ..errors import DomainError
from ..kernels import RG_DENSITY
from .finite_n import gap_finite_n


def spacing_density_finite_n(s: float, n_matrix: int = 120, h: float = 1e-3) -> float:
    """Central second difference of the finite-N gap probability over total width s."""
    if not (h > 0 and s > 2 * h):
        raise DomainError(f"need s > 2h > 0, got s={s!r}, h={h!r}")
    e_minus = gap_finite_n(0.5 * (s - h), n_matrix)
    e_mid = gap_finite_n(0.5 * s, n_matrix)
    e_plus = gap_finite_n(0.5 * (s + h), n_matrix)
    return (e_plus - 2.0 * e_mid + e_minus) / (h * h * RG_DENSITY)


def wigner_surmise(s: float) -> float:
    if not s >= 0:
        raise DomainError(f"spacing must be >= 0, got {s!r}")
    return 0.5 * math.pi * s * math.exp(-0.25 * math.pi * s * s)


def coalescence_spacing_density(s: float, rho: float) -> float:
    """(pi rho^2 / 2) s exp(-pi (rho s)^2 / 4); the Wigner surmise at rho = 1."""
    if not s >= 0:
        raise DomainError(f"spacing must be >= 0, got {s!r}")
    return 0.5 * math.pi * rho * rho * s * math.exp(-0.25 * math.pi * (rho * s) ** 2)

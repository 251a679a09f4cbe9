"""Kernel entries S, I, D of the 2x2 matrix kernel and their Fourier transforms.

All three processes share one Gaussian kernel family

    S(x, y; c) = (c/2) exp(-pi c^2 (x-y)^2 / 4),
    I(x, y; c) = sgn(y-x)/2 - int_x^y S(x, u; c) du = sgn(y-x) erfc(sqrt(pi) c |y-x| / 2) / 2,
    D(x, y; c) = dS/dx = (pi c^2 / 2) (y - x) S(x, y; c),

indexed by the coalescence density ``c``. The real Ginibre bulk is c = sqrt(2/pi);
coalescence at density rho is c = rho; annihilation at density rho is c = 2 rho.
The scalar functions below return these raw entries. Correlation Pfaffians use
:func:`kernel_block`, which applies the per-point weight (2 for coalescence,
1 otherwise) so that coalescence carries its 2^n prefactor entrywise.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import specialfun
from .errors import DomainError

RG_DENSITY = 1.0 / math.sqrt(2.0 * math.pi)
RG_COALESCENCE_DENSITY = math.sqrt(2.0 / math.pi)


class Process(enum.Enum):
    REAL_GINIBRE_BULK = "rg"
    COALESCENCE = "coalescence"
    ANNIHILATION = "annihilation"


@dataclass(frozen=True)
class KernelParams:
    """Process tag plus particle density (points per unit length).

    For the real Ginibre bulk the density is fixed at 1/sqrt(2 pi).
    """

    process: Process
    rho: float = RG_DENSITY

    def __post_init__(self):
        process = Process(self.process)
        object.__setattr__(self, "process", process)
        rho = float(self.rho)
        if not (rho > 0 and math.isfinite(rho)):
            raise DomainError(f"density must be positive and finite, got {self.rho!r}")
        if process is Process.REAL_GINIBRE_BULK and not math.isclose(rho, RG_DENSITY, rel_tol=1e-15):
            raise DomainError("the real Ginibre bulk has density 1/sqrt(2 pi)")
        object.__setattr__(self, "rho", rho)

    @classmethod
    def real_ginibre(cls) -> "KernelParams":
        return cls(Process.REAL_GINIBRE_BULK, RG_DENSITY)

    @classmethod
    def coalescence(cls, rho: float) -> "KernelParams":
        return cls(Process.COALESCENCE, rho)

    @classmethod
    def annihilation(cls, rho: float) -> "KernelParams":
        return cls(Process.ANNIHILATION, rho)

    @property
    def coalescence_density(self) -> float:
        if self.process is Process.REAL_GINIBRE_BULK:
            return RG_COALESCENCE_DENSITY
        if self.process is Process.COALESCENCE:
            return self.rho
        return 2.0 * self.rho

    @property
    def block_weight(self) -> float:
        return 2.0 if self.process is Process.COALESCENCE else 1.0


def _scalar_or_array(v):
    return float(v) if np.ndim(v) == 0 else v


def s_kernel(x, y, p: KernelParams):
    c = p.coalescence_density
    d = np.subtract(x, y, dtype=float)
    return _scalar_or_array(0.5 * c * np.exp(-0.25 * math.pi * c * c * d * d))


def i_kernel(x, y, p: KernelParams):
    c = p.coalescence_density
    d = np.subtract(y, x, dtype=float)
    return _scalar_or_array(0.5 * np.sign(d) * specialfun.erfc(0.5 * math.sqrt(math.pi) * c * np.abs(d)))


def d_kernel(x, y, p: KernelParams):
    c = p.coalescence_density
    d = np.subtract(y, x, dtype=float)
    return _scalar_or_array(0.5 * math.pi * c * c * d * np.asarray(s_kernel(x, y, p)))


class KernelBlock(NamedTuple):
    """Weighted entries of K(x, y) = [[S(x,y), I(x,y)], [D(x,y), S(y,x)]]."""

    s_xy: float
    i_xy: float
    d_xy: float
    s_yx: float

    def as_matrix(self) -> np.ndarray:
        return np.array([[self.s_xy, self.i_xy], [self.d_xy, self.s_yx]])


def kernel_block(x, y, p: KernelParams) -> KernelBlock:
    w = p.block_weight
    return KernelBlock(
        w * s_kernel(x, y, p),
        w * i_kernel(x, y, p),
        w * d_kernel(x, y, p),
        w * s_kernel(y, x, p),
    )


class Entry(enum.Enum):
    S = "S"
    D = "D"
    I = "I"  # noqa: E741


def kernel_fourier(k, entry) -> complex:
    """Fourier transform of a real Ginibre bulk kernel entry.

    The I transform has a removable singularity at k = 0 and raises there.
    """
    entry = Entry(entry)
    k = float(k)
    g = math.exp(-0.5 * k * k)
    if entry is Entry.S:
        return complex(g)
    if entry is Entry.D:
        return 1j * k * g
    if k == 0.0:
        raise DomainError("the I transform is undefined at k = 0; evaluate the limit analytically")
    # -1 + e^{-k^2/2} written with expm1 so small k keeps its precision
    return math.expm1(-0.5 * k * k) / (1j * k)


def fourier_block_determinant(k, xi: float) -> float:
    """det(I_2 - xi K~(k)), assembled from the three transforms."""
    s = kernel_fourier(k, Entry.S)
    i = kernel_fourier(k, Entry.I)
    d = kernel_fourier(k, Entry.D)
    m = np.eye(2) - xi * np.array([[s, i], [d, s]])
    value = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    return float(value.real)

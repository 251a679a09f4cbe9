"""Dense determinants and Pfaffians.

The determinant uses Gaussian elimination with row pivoting; the Pfaffian
uses Parlett-Reid skew-symmetric tridiagonalization with partial pivoting.
Both track the sign through every row interchange.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np


@dataclass(frozen=True)
class SkewMatrix:
    """Even-dimensional antisymmetric matrix stored by its strict upper triangle.

    ``upper`` holds entries (0,1), (0,2), ..., (0,n-1), (1,2), ... in row-major
    order, so antisymmetry holds by construction.
    """

    dim: int
    upper: np.ndarray

    def __post_init__(self):
        upper = np.asarray(self.upper, dtype=float).ravel()
        if self.dim < 0 or self.dim % 2:
            raise ValueError(f"SkewMatrix dimension must be even, got {self.dim}")
        if upper.size != self.dim * (self.dim - 1) // 2:
            raise ValueError(
                f"expected {self.dim * (self.dim - 1) // 2} upper entries, got {upper.size}"
            )
        if not np.all(np.isfinite(upper)):
            raise ValueError("SkewMatrix entries must be finite")
        upper.setflags(write=False)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def from_dense(cls, m, *, atol: float = 0.0) -> "SkewMatrix":
        """Build from a full matrix, checking ``m == -m.T`` to within ``atol``."""
        m = np.asarray(m, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {m.shape}")
        if np.max(np.abs(m + m.T), initial=0.0) > atol:
            raise ValueError("matrix is not antisymmetric")
        iu = np.triu_indices(m.shape[0], k=1)
        return cls(m.shape[0], m[iu])

    def to_dense(self) -> np.ndarray:
        m = np.zeros((self.dim, self.dim))
        iu = np.triu_indices(self.dim, k=1)
        m[iu] = self.upper
        return m - m.T


class DeterminantInfo(NamedTuple):
    value: float
    sign: float
    log_abs: float
    # smallest |pivot| / largest |pivot|; a crude conditioning indicator
    pivot_ratio: float
    swaps: int


def determinant_info(m) -> DeterminantInfo:
    """Determinant by row-pivoted elimination, with pivot diagnostics."""
    a = np.array(m, dtype=float, copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"determinant needs a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    n = a.shape[0]
    if n == 0:
        return DeterminantInfo(1.0, 1.0, 0.0, 1.0, 0)
    sign = 1.0
    log_abs = 0.0
    swaps = 0
    pivots = np.empty(n)
    for k in range(n):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        pivot = a[p, k]
        if pivot == 0.0:
            return DeterminantInfo(0.0, 0.0, -math.inf, 0.0, swaps)
        if p != k:
            a[[k, p], k:] = a[[p, k], k:]
            sign = -sign
            swaps += 1
        if pivot < 0:
            sign = -sign
        log_abs += math.log(abs(pivot))
        pivots[k] = abs(pivot)
        if k + 1 < n:
            factors = a[k + 1:, k] / pivot
            a[k + 1:, k + 1:] -= np.outer(factors, a[k, k + 1:])
    # past the double range the value saturates; log_abs stays exact
    magnitude = math.exp(log_abs) if log_abs < 709.0 else math.inf
    return DeterminantInfo(sign * magnitude, sign, log_abs,
                           float(pivots.min() / pivots.max()), swaps)


def determinant(m) -> float:
    return determinant_info(m).value


def _as_dense_skew(m) -> np.ndarray:
    if isinstance(m, SkewMatrix):
        return m.to_dense()
    a = np.array(m, dtype=float, copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"pfaffian needs a square matrix, got shape {a.shape}")
    scale = np.max(np.abs(a), initial=0.0)
    if np.max(np.abs(a + a.T), initial=0.0) > 1e-12 * max(scale, 1.0):
        raise ValueError("pfaffian needs an antisymmetric matrix")
    return a


def pfaffian(m) -> float:
    """Pfaffian of a :class:`SkewMatrix` or a dense antisymmetric array."""
    a = _as_dense_skew(m)
    n = a.shape[0]
    if n % 2:
        raise ValueError(f"pfaffian needs an even dimension, got {n}")
    pf = 1.0
    for k in range(0, n - 1, 2):
        kp = k + 1 + int(np.argmax(np.abs(a[k + 1:, k])))
        if kp != k + 1:
            a[[k + 1, kp], :] = a[[kp, k + 1], :]
            a[:, [k + 1, kp]] = a[:, [kp, k + 1]]
            pf = -pf
        pivot = a[k, k + 1]
        if pivot == 0.0:
            return 0.0
        pf *= pivot
        if k + 2 < n:
            tau = a[k, k + 2:] / pivot
            col = a[k + 2:, k + 1].copy()
            a[k + 2:, k + 2:] += np.outer(tau, col) - np.outer(col, tau)
    return pf


def pfaffian_batch(stack) -> np.ndarray:
    """Pfaffians of a stack of antisymmetric matrices, shape (B, n, n).

    Same elimination as :func:`pfaffian`, vectorized over the leading axis.
    Antisymmetry is assumed, not checked.
    """
    a = np.array(stack, dtype=float, copy=True)
    if a.ndim != 3 or a.shape[1] != a.shape[2]:
        raise ValueError(f"expected shape (B, n, n), got {a.shape}")
    nb, n, _ = a.shape
    if n % 2:
        raise ValueError(f"pfaffian needs an even dimension, got {n}")
    pf = np.ones(nb)
    singular = np.zeros(nb, dtype=bool)
    rows = np.arange(nb)
    for k in range(0, n - 1, 2):
        kp = k + 1 + np.argmax(np.abs(a[:, k + 1:, k]), axis=1)
        swap = kp != k + 1
        if np.any(swap):
            perm = np.broadcast_to(np.arange(n), (nb, n)).copy()
            perm[:, k + 1] = kp
            perm[rows, kp] = k + 1
            a = a[rows[:, None, None], perm[:, :, None], perm[:, None, :]]
            pf[swap] = -pf[swap]
        pivot = a[:, k, k + 1]
        singular |= pivot == 0.0
        pf *= pivot
        if k + 2 < n:
            safe = np.where(pivot == 0.0, 1.0, pivot)
            tau = a[:, k, k + 2:] / safe[:, None]
            col = a[:, k + 2:, k + 1].copy()
            a[:, k + 2:, k + 2:] += tau[:, :, None] * col[:, None, :] - col[:, :, None] * tau[:, None, :]
    pf[singular] = 0.0
    return pf

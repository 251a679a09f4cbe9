"""Real eigenvalues of real Gaussian (Ginibre) matrices."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError

MAX_N = 400
REAL_TOL = 1e-8  # times sqrt(n): the spectral radius scale

# replicas per independently seeded block of the batch sampler
_BLOCK = 250


@dataclass(frozen=True)
class GinibreSample:
    n: int
    real_eigenvalues: np.ndarray
    seed: int | None = None

    @property
    def count(self) -> int:
        return int(self.real_eigenvalues.size)


def _check_n(n):
    if int(n) != n or not 2 <= n <= MAX_N:
        raise DomainError(f"matrix size must be an integer in [2, {MAX_N}], got {n!r}")
    return int(n)


def real_parts(eigs: np.ndarray, n: int, tol: float = REAL_TOL) -> np.ndarray:
    """Sorted real parts of the eigenvalues with |imag| <= tol * sqrt(n), along the last axis."""
    eigs = np.asarray(eigs)
    return np.sort(eigs.real[np.abs(eigs.imag) <= tol * math.sqrt(n)])


def sample_ginibre_real_eigs(n: int, seed, tol: float = REAL_TOL) -> GinibreSample:
    n = _check_n(n)
    rng = np.random.default_rng(seed)
    eigs = np.linalg.eigvals(rng.standard_normal((n, n)))
    return GinibreSample(n, real_parts(eigs, n, tol), seed if isinstance(seed, int) else None)


def _block(n, seed, block, size, tol):
    rng = np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(block,)))
    mats = rng.standard_normal((size, n, n))
    try:
        eigs = np.linalg.eigvals(mats)
    except np.linalg.LinAlgError:
        # redo one matrix at a time so a single failure costs one replica
        out = []
        for m in mats:
            try:
                out.append(real_parts(np.linalg.eigvals(m), n, tol))
            except np.linalg.LinAlgError:
                pass
        return out
    mask = np.abs(eigs.imag) <= tol * math.sqrt(n)
    return [np.sort(e.real[k]) for e, k in zip(eigs, mask)]


def sample_real_eigs_batch(n: int, replicas: int, seed: int, threads: int | None = None,
                           tol: float = REAL_TOL) -> list[np.ndarray]:
    """Real eigenvalues of ``replicas`` independent matrices.

    Replicas are drawn in blocks of fixed size, each from its own stream keyed by
    (seed, block), so the output does not depend on ``threads``. Matrices whose
    eigensolver fails are dropped.
    """
    n = _check_n(n)
    if int(replicas) != replicas or replicas < 1:
        raise ValueError(f"replicas must be a positive integer, got {replicas!r}")
    sizes = [min(_BLOCK, replicas - b * _BLOCK) for b in range(-(-replicas // _BLOCK))]
    threads = threads or os.cpu_count() or 1
    with ThreadPoolExecutor(max_workers=threads) as pool:
        blocks = list(pool.map(lambda b: _block(n, seed, b, sizes[b], tol), range(len(sizes))))
    return [e for blk in blocks for e in blk]


def real_count_stats(samples) -> tuple[float, float]:
    """Mean number of real eigenvalues and its standard error."""
    c = np.array([len(e) for e in samples], dtype=float)
    return float(c.mean()), float(c.std(ddof=1) / math.sqrt(c.size))


def two_real_fraction(samples) -> tuple[float, float]:
    """Fraction of 2x2 samples with both eigenvalues real, with its binomial error."""
    c = np.array([len(e) == 2 for e in samples], dtype=float)
    p = c.mean()
    return float(p), math.sqrt(p * (1 - p) / c.size)


def empirical_gap(samples, s_values) -> tuple[np.ndarray, np.ndarray]:
    """Fraction of samples without a real eigenvalue in (-s/2, s/2), with binomial errors."""
    s = np.atleast_1d(np.asarray(s_values, dtype=float))
    nearest = np.array([np.min(np.abs(e)) if len(e) else np.inf for e in samples])
    p = (nearest[:, None] >= s[None, :] / 2).mean(axis=0)
    return p, np.sqrt(p * (1 - p) / nearest.size)

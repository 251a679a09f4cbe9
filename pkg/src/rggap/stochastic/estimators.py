"""Window estimators for simulated particle systems, rescaled to a target density."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ..errors import DegenerateInputError, EquilibrationError
from ..kernels import RG_COALESCENCE_DENSITY, RG_DENSITY, Process
from .particles import ParticleSystem, SimConfig, _reaction, simulate_ensemble

# relative step for the numerical d/d(window) used by the error propagation
_DERIV_STEP = 0.01


@dataclass(frozen=True)
class EmpiricalGap:
    s_grid: np.ndarray
    e_hat: np.ndarray
    stderr: np.ndarray
    samples: int
    rho_hat: float = math.nan  # pooled lattice density used for the rescaling
    time: float = math.nan

    def __post_init__(self):
        for name in ("s_grid", "e_hat", "stderr"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if not (self.s_grid.shape == self.e_hat.shape == self.stderr.shape):
            raise ValueError("s_grid, e_hat and stderr must have the same shape")
        if np.any(self.stderr < 0):
            raise ValueError("stderr must be nonnegative")

    def z_scores(self, exact) -> np.ndarray:
        """(estimate - exact) / stderr; zero where both the error and the deviation vanish."""
        diff = self.e_hat - np.asarray(exact, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            z = diff / self.stderr
        return np.where(self.stderr > 0, z, np.where(np.abs(diff) < 1e-12, 0.0, np.inf))


@dataclass(frozen=True)
class Ensemble:
    """Replicas of one run recorded at the midpoint and at the end time."""

    config: SimConfig
    process: Process
    mid: list[ParticleSystem]
    end: list[ParticleSystem]


def run_ensemble(config: SimConfig, process, threads: int | None = None) -> Ensemble:
    process = _reaction(process)
    mid, end = simulate_ensemble(config, process, [config.t_end / 2, config.t_end], threads)
    return Ensemble(config, process, mid, end)


# single-configuration window statistics, all in lattice units ------------------

def _gaps(ps: ParticleSystem) -> np.ndarray:
    p = ps.positions
    return np.diff(np.append(p, p[0] + ps.lattice_size)).astype(float)


def empty_window_fraction(ps: ParticleSystem, ell) -> np.ndarray:
    """Fraction of translates of a window of length ``ell`` containing no particle.

    Between neighbours at distance g the empty placements have measure max(g - ell, 0).
    """
    ell = np.asarray(ell, dtype=float)
    if ps.count == 0:
        return np.ones_like(ell)
    g = _gaps(ps)
    return np.maximum(g[:, None] - ell.ravel()[None, :], 0.0).sum(axis=0).reshape(ell.shape) / ps.lattice_size


def window_count_profile(ps: ParticleSystem, ell: float):
    """(lengths, counts): placements u in [0, L) grouped into runs of constant occupation."""
    size = ps.lattice_size
    p = ps.positions.astype(float)
    if not 0 <= ell < size:
        raise ValueError(f"window length must lie in [0, {size}), got {ell!r}")
    if p.size == 0:
        return np.array([float(size)]), np.array([0])
    # [u, u + ell] holds the particle at p iff u in [p - ell, p]
    cuts = np.unique(np.concatenate([p, np.mod(p - ell, size), [0.0, float(size)]]))
    lengths = np.diff(cuts)
    mid = cuts[:-1] + 0.5 * lengths
    ext = np.concatenate([p, p + size])
    counts = np.searchsorted(ext, mid + ell, side="right") - np.searchsorted(ext, mid, side="left")
    return lengths, counts


def even_window_fraction(ps: ParticleSystem, ell) -> np.ndarray:
    """Fraction of translates of a length-``ell`` window holding an even number of particles."""
    ell = np.atleast_1d(np.asarray(ell, dtype=float))
    out = np.empty(ell.size)
    for i, e in enumerate(ell.ravel()):
        lengths, counts = window_count_profile(ps, e)
        out[i] = lengths[counts % 2 == 0].sum() / ps.lattice_size
    return out.reshape(ell.shape)


# ensemble estimates ----------------------------------------------------------

def _window_estimate(systems: Sequence[ParticleSystem], s_grid, target_rho: float,
                     stat: Callable[[ParticleSystem, np.ndarray], np.ndarray],
                     densities=None) -> tuple[EmpiricalGap, np.ndarray]:
    """Rescaled window statistic with cluster (per-replica) standard errors.

    Grid values ``s`` are in units where the density is ``target_rho``; with pooled
    lattice density rho_hat the window has length s * target_rho / rho_hat sites.
    The error propagates both the replica spread of the statistic and the
    uncertainty of rho_hat through a delta-method influence function. Returns the
    estimate and the per-replica influence values (replicas x grid).
    """
    if len(systems) < 2:
        raise DegenerateInputError("at least two replicas are needed for a standard error")
    s = np.asarray(s_grid, dtype=float)
    if s.ndim != 1 or np.any(s < 0):
        raise ValueError("s_grid must be a one-dimensional array of nonnegative values")
    rho_r = np.array([ps.density for ps in systems]) if densities is None else np.asarray(densities, float)
    rho_hat = float(rho_r.mean())
    if rho_hat <= 0:
        raise DegenerateInputError("all replicas are empty; the density cannot be rescaled")
    ell = s * target_rho / rho_hat
    grid = np.concatenate([ell, ell * (1 - _DERIV_STEP), ell * (1 + _DERIV_STEP)])
    f = np.array([stat(ps, grid) for ps in systems])
    k = s.size
    f0, fm, fp = f[:, :k], f[:, k:2 * k], f[:, 2 * k:]
    e_hat = f0.mean(axis=0)
    # ell * dE/d(ell) by a central difference in log(ell)
    slope = (fp.mean(axis=0) - fm.mean(axis=0)) / (2 * _DERIV_STEP)
    psi = f0 - e_hat - slope * (rho_r[:, None] - rho_hat) / rho_hat
    r = len(systems)
    stderr = psi.std(axis=0, ddof=1) / math.sqrt(r)
    est = EmpiricalGap(s, np.clip(e_hat, 0.0, 1.0), stderr, r, rho_hat, float(systems[0].time))
    return est, psi


def gap_from_systems(systems, s_grid, target_rho: float, densities=None) -> EmpiricalGap:
    """P(no particle in a window of rescaled length s), averaged over translations and replicas."""
    return _window_estimate(systems, s_grid, target_rho, empty_window_fraction, densities)[0]


def even_count_from_systems(systems, s_grid, target_rho: float = RG_DENSITY, densities=None) -> EmpiricalGap:
    return _window_estimate(systems, s_grid, target_rho, even_window_fraction, densities)[0]


def target_density(process) -> float:
    """Density at which each process is compared with the real Ginibre bulk."""
    process = _reaction(process)
    return RG_DENSITY if process is Process.ANNIHILATION else RG_COALESCENCE_DENSITY


def check_equilibration(ens: Ensemble, stat=empty_window_fraction, s_ref: float = 1.0,
                        tol: float = 3.0, max_fill_fraction: float = 0.1) -> float:
    """Raise EquilibrationError unless the run looks like its long-time limit.

    The pooled density must be below ``max_fill_fraction`` of the initial fill and
    the rescaled statistic at ``s_ref`` must agree between t_end/2 and t_end within
    ``tol`` standard errors of the paired, per-replica difference. Returns that
    difference in units of its standard error.
    """
    cfg = ens.config
    rho_end = np.mean([ps.density for ps in ens.end])
    if rho_end >= max_fill_fraction * cfg.initial_fill:
        raise EquilibrationError(
            f"density {rho_end:.4g} has not dropped below {max_fill_fraction:.0%} of the "
            f"initial fill {cfg.initial_fill}; increase t_end")
    rho_t = target_density(ens.process)
    grid = np.array([s_ref])
    a, psi_a = _window_estimate(ens.mid, grid, rho_t, stat)
    b, psi_b = _window_estimate(ens.end, grid, rho_t, stat)
    d = psi_b[:, 0] - psi_a[:, 0]
    se = d.std(ddof=1) / math.sqrt(d.size)
    diff = float(b.e_hat[0] - a.e_hat[0])
    z = 0.0 if se == 0 else diff / se
    if abs(z) > tol:
        raise EquilibrationError(
            f"estimate at s={s_ref} moved by {diff:.3g} ({z:.1f} stderr) between "
            f"t={cfg.t_end / 2:g} and t={cfg.t_end:g}; increase t_end")
    return z


def estimate_gap(config: SimConfig, process, s_grid, *, ensemble: Ensemble | None = None,
                 threads: int | None = None, check: bool = True, s_ref: float = 1.0,
                 stability_tol: float = 3.0) -> EmpiricalGap:
    """Simulated gap probability at the comparison density of ``process``."""
    process = _reaction(process)
    ens = ensemble if ensemble is not None else run_ensemble(config, process, threads)
    if ens.process is not process or ens.config != config:
        raise ValueError("ensemble was produced by a different run")
    if check:
        check_equilibration(ens, empty_window_fraction, s_ref, stability_tol)
    return gap_from_systems(ens.end, s_grid, target_density(process))


def even_count_estimate(config: SimConfig, s_grid, *, ensemble: Ensemble | None = None,
                        threads: int | None = None, check: bool = True, s_ref: float = 1.0,
                        stability_tol: float = 3.0) -> EmpiricalGap:
    """P(even number of annihilating particles in a window), density 1/sqrt(2 pi)."""
    ens = ensemble if ensemble is not None else run_ensemble(config, Process.ANNIHILATION, threads)
    if ens.process is not Process.ANNIHILATION or ens.config != config:
        raise ValueError("even-count estimates need an annihilation ensemble of this run")
    if check:
        check_equilibration(ens, even_window_fraction, s_ref, stability_tol)
    return even_count_from_systems(ens.end, s_grid, RG_DENSITY)


def pair_correlation(systems: Sequence[ParticleSystem], edges):
    """Two-point density rho_2(0, r) on distance bins ``edges`` (lattice units).

    Returns (centres, mean, stderr) with the mean over replicas of
    #{ordered pairs with separation in the bin} / (L * bin width).
    """
    edges = np.asarray(edges, dtype=float)
    if edges.ndim != 1 or edges.size < 2 or np.any(np.diff(edges) <= 0) or edges[0] < 0:
        raise ValueError("edges must be increasing and nonnegative")
    width = np.diff(edges)
    vals = []
    for ps in systems:
        p = ps.positions.astype(float)
        if edges[-1] >= ps.lattice_size:
            raise ValueError("bins must be shorter than the lattice")
        ext = np.concatenate([p, p + ps.lattice_size])
        # ordered pairs with p_j - p_i in [lo, hi); i itself only enters a bin starting at 0
        lo = np.searchsorted(ext, p[:, None] + edges[None, :-1], side="left")
        hi = np.searchsorted(ext, p[:, None] + edges[None, 1:], side="left")
        vals.append((hi - lo).sum(axis=0) / (ps.lattice_size * width))
    vals = np.array(vals)
    se = vals.std(axis=0, ddof=1) / math.sqrt(len(vals)) if len(vals) > 1 else np.full(width.size, np.nan)
    return 0.5 * (edges[:-1] + edges[1:]), vals.mean(axis=0), se

"""Monte Carlo checks: reaction-diffusion particle systems and Ginibre sampling."""

from .estimators import (
    EmpiricalGap,
    Ensemble,
    check_equilibration,
    empty_window_fraction,
    estimate_gap,
    even_count_estimate,
    even_count_from_systems,
    even_window_fraction,
    gap_from_systems,
    pair_correlation,
    run_ensemble,
    target_density,
    window_count_profile,
)
from .ginibre import (
    GinibreSample,
    empirical_gap,
    real_count_stats,
    real_parts,
    sample_ginibre_real_eigs,
    sample_real_eigs_batch,
    two_real_fraction,
)
from .particles import (
    ParticleSystem,
    SimConfig,
    replica_rng,
    simulate,
    simulate_ensemble,
    simulate_snapshots,
    thin,
)

__all__ = [
    "EmpiricalGap", "Ensemble", "GinibreSample", "ParticleSystem", "SimConfig",
    "check_equilibration", "empirical_gap", "empty_window_fraction", "estimate_gap",
    "even_count_estimate", "even_count_from_systems", "even_window_fraction",
    "gap_from_systems", "pair_correlation", "real_count_stats", "real_parts", "replica_rng",
    "run_ensemble", "sample_ginibre_real_eigs", "sample_real_eigs_batch", "simulate",
    "simulate_ensemble", "simulate_snapshots", "target_density", "thin", "two_real_fraction",
    "window_count_profile",
]

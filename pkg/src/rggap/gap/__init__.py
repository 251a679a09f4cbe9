"""Gap probabilities: exact finite-N, Pfaffian multi-interval, series and asymptotics."""

from .asymptotics import (
    asymptote_large_s,
    c1_annihilation,
    c1_tilde,
    c2_constant,
    c2_partial_sums,
    decay_rate_fourier,
)
from .finite_n import gap_finite_n
from .generating import gap_truncated_gf, simplex_integral
from .pfaffian_gaps import even_count_gap, gap_coalescence, gap_rg_xi2, rg_xi2_determinant
from .series import (
    ANNIHILATION_SPACING_SERIES,
    SMALL_GAP_SERIES,
    series_small_s,
    series_small_s_spacing_annihilation,
)
from .spacing import coalescence_spacing_density, spacing_density_finite_n, wigner_surmise
from .types import GapCurve, IntervalUnion, Method, PowerSeries

__all__ = [
    "ANNIHILATION_SPACING_SERIES",
    "GapCurve",
    "IntervalUnion",
    "Method",
    "PowerSeries",
    "SMALL_GAP_SERIES",
    "asymptote_large_s",
    "c1_annihilation",
    "c1_tilde",
    "c2_constant",
    "c2_partial_sums",
    "coalescence_spacing_density",
    "decay_rate_fourier",
    "even_count_gap",
    "gap_coalescence",
    "gap_finite_n",
    "gap_rg_xi2",
    "gap_truncated_gf",
    "rg_xi2_determinant",
    "series_small_s",
    "series_small_s_spacing_annihilation",
    "simplex_integral",
    "spacing_density_finite_n",
    "wigner_surmise",
]

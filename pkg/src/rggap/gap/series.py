"""Small-s power series for the bulk gap probability and the annihilation spacing density."""

from __future__ import annotations

import math

from .types import PowerSeries

_R = math.sqrt(2 * math.pi)
_PI = math.pi

# E^{rG}(0; (0, s)) through s^15. The odd part sums to
# -s / (2 sqrt(2 pi)) - erf(s / sqrt 2) / 4 term by term; in particular the
# 1/(19353600 sqrt(2 pi)) piece of the s^15 coefficient is positive, which is also
# what the annihilation spacing series gives after rescaling.
_GAP_COEFFS = (
    1.0,
    -1 / _R,
    0.0,
    1 / (12 * _R),
    0.0,
    -1 / (80 * _R),
    1 / (720 * _PI),
    1 / (672 * _R),
    -1 / (3360 * _PI),
    -1 / (6912 * _R),
    7 / (172800 * _PI),
    1 / (84480 * _R),
    -23 / (5322240 * _PI),
    -1 / (1198080 * _R),
    1523 / (3874590720 * _PI),
    -1 / (762048000 * math.sqrt(2) * _PI ** 1.5) + 1 / (19353600 * _R),
)

SMALL_GAP_WINDOW = 2.2
SMALL_GAP_SERIES = PowerSeries(_GAP_COEFFS, SMALL_GAP_WINDOW)

# spacing density of the annihilation process at unit density, through s^13
_SPACING_COEFFS = (
    0.0,
    _PI,
    0.0,
    -_PI ** 2,
    _PI ** 2 / 3,
    _PI ** 3 / 2,
    -4 * _PI ** 3 / 15,
    -_PI ** 4 / 6,
    7 * _PI ** 4 / 60,
    _PI ** 5 / 24,
    -23 * _PI ** 5 / 630,
    -_PI ** 6 / 120,
    1523 * _PI ** 6 / 166320,
    _PI ** 6 * (-64 + 2520 * _PI) / 1814400,
)

SPACING_WINDOW = 1.0
ANNIHILATION_SPACING_SERIES = PowerSeries(_SPACING_COEFFS, SPACING_WINDOW)


def series_small_s(s: float, *, check_window: bool = True) -> float:
    """E^{rG}(0; (0, s)) from its small-s expansion; valid for 0 <= s <= 2.2."""
    return SMALL_GAP_SERIES(s, check_window=check_window)


def series_small_s_spacing_annihilation(s: float, *, check_window: bool = True) -> float:
    """Annihilation nearest-neighbour spacing density at unit density, for 0 <= s <= 1."""
    return ANNIHILATION_SPACING_SERIES(s, check_window=check_window)

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..errors import DomainError


@dataclass(frozen=True)
class IntervalUnion:
    """Disjoint intervals (x1, x2), (x3, x4), ... with x1 < x2 < ... < x2n."""

    endpoints: tuple[float, ...]

    def __post_init__(self):
        ends = tuple(float(v) for v in np.ravel(self.endpoints))
        if len(ends) < 2 or len(ends) % 2:
            raise DomainError("an interval union needs an even, nonzero number of endpoints")
        if not all(np.isfinite(ends)):
            raise DomainError("interval endpoints must be finite")
        if any(b <= a for a, b in zip(ends, ends[1:])):
            raise DomainError("interval endpoints must be strictly increasing")
        object.__setattr__(self, "endpoints", ends)

    @classmethod
    def single(cls, a: float, b: float) -> "IntervalUnion":
        return cls((a, b))

    @classmethod
    def of(cls, *intervals: tuple[float, float]) -> "IntervalUnion":
        return cls(tuple(v for iv in intervals for v in iv))

    @property
    def count(self) -> int:
        return len(self.endpoints) // 2

    @property
    def intervals(self) -> list[tuple[float, float]]:
        e = self.endpoints
        return [(e[2 * i], e[2 * i + 1]) for i in range(self.count)]


@dataclass(frozen=True)
class PowerSeries:
    """Truncated power series sum_k coefficients[k] s^k, honoured on [0, bound]."""

    coefficients: tuple[float, ...]
    bound: float = np.inf

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(float(c) for c in self.coefficients))

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, s: float, *, check_window: bool = True) -> float:
        if check_window and not (0.0 <= s <= self.bound):
            raise DomainError(f"series evaluated at s={s} outside its window [0, {self.bound}]")
        total = 0.0
        for c in reversed(self.coefficients):
            total = total * s + c
        return total

    def derivative(self) -> "PowerSeries":
        return PowerSeries(tuple(k * c for k, c in enumerate(self.coefficients))[1:] or (0.0,), self.bound)


class Method(enum.Enum):
    FINITE_N = "finite-n"
    SERIES = "series"
    ASYMPTOTIC = "asymptotic"
    TRUNCATED_GF = "truncated-gf"
    MONTE_CARLO = "monte-carlo"


@dataclass
class GapCurve:
    s_values: np.ndarray
    e_values: np.ndarray
    method: Method
    params: dict[str, Any] = field(default_factory=dict)
    stderr: np.ndarray | None = None

    def __post_init__(self):
        self.s_values = np.asarray(self.s_values, dtype=float)
        self.e_values = np.asarray(self.e_values, dtype=float)
        self.method = Method(self.method)
        if self.s_values.shape != self.e_values.shape:
            raise ValueError("s_values and e_values must have the same shape")
        if self.s_values.size > 1 and np.any(np.diff(self.s_values) <= 0):
            raise ValueError("s_values must be strictly increasing")
        if self.stderr is not None:
            self.stderr = np.asarray(self.stderr, dtype=float)

    def to_dict(self) -> dict[str, Any]:
        out = {
            "method": self.method.value,
            "params": self.params,
            "s_values": self.s_values.tolist(),
            "e_values": self.e_values.tolist(),
        }
        if self.stderr is not None:
            out["stderr"] = self.stderr.tolist()
        return out

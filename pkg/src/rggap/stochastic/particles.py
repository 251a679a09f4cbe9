"""Lattice simulation of A + A -> 0 and A + A -> A with seeded, replica-indexed streams."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..kernels import Process
from . import _lattice

REACTIONS = (Process.ANNIHILATION, Process.COALESCENCE)


def _reaction(process) -> Process:
    process = Process(process)
    if process not in REACTIONS:
        raise ValueError(f"simulation supports annihilation or coalescence, not {process.value}")
    return process


@dataclass(frozen=True)
class SimConfig:
    lattice_size: int = 100_000
    initial_fill: float = 1.0
    t_end: float = 1000.0
    seed: int = 0
    replicas: int = 200

    def __post_init__(self):
        if int(self.lattice_size) != self.lattice_size or self.lattice_size < 2:
            raise ValueError(f"lattice_size must be an integer >= 2, got {self.lattice_size!r}")
        if not 0.0 < self.initial_fill <= 1.0:
            raise ValueError(f"initial_fill must lie in (0, 1], got {self.initial_fill!r}")
        if not self.t_end >= 0:
            raise ValueError(f"t_end must be >= 0, got {self.t_end!r}")
        if int(self.replicas) != self.replicas or self.replicas < 1:
            raise ValueError(f"replicas must be a positive integer, got {self.replicas!r}")
        if int(self.seed) != self.seed or not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be an unsigned 64-bit integer")


@dataclass(frozen=True)
class ParticleSystem:
    positions: np.ndarray
    time: float
    process: Process
    lattice_size: int

    def __post_init__(self):
        pos = np.asarray(self.positions)
        if pos.size > 1 and np.any(np.diff(pos) <= 0):
            raise ValueError("positions must be strictly increasing")
        object.__setattr__(self, "process", _reaction(self.process))
        pos.setflags(write=False)
        object.__setattr__(self, "positions", pos)

    @property
    def count(self) -> int:
        return int(self.positions.size)

    @property
    def density(self) -> float:
        """Particles per lattice site."""
        return self.count / self.lattice_size


def replica_rng(seed: int, replica: int) -> np.random.Generator:
    """Independent stream for replica ``replica`` of a run seeded with ``seed``."""
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(int(replica),)))


def simulate_snapshots(config: SimConfig, process, times, replica: int = 0) -> list[ParticleSystem]:
    """One replica, recorded at each of the increasing ``times``."""
    process = _reaction(process)
    times = [float(t) for t in times]
    if any(b < a for a, b in zip(times, times[1:])) or (times and times[0] < 0):
        raise ValueError("snapshot times must be nonnegative and nondecreasing")
    rng = replica_rng(config.seed, replica)
    size = int(config.lattice_size)
    occ = np.empty(size, dtype=np.int64)
    pos = np.empty(size, dtype=np.int64)
    n = _lattice.fill_lattice(rng, occ, pos, float(config.initial_fill))
    t_event = _lattice.first_event(rng, n)
    out = []
    annihilate = process is Process.ANNIHILATION
    for t_stop in times:
        n, t_event = _lattice.evolve(rng, occ, pos, n, t_event, t_stop, annihilate)
        out.append(ParticleSystem(_lattice.snapshot(pos, n), t_stop, process, size))
    return out


def simulate(config: SimConfig, process, replica: int = 0) -> ParticleSystem:
    """Evolve one replica to ``config.t_end``; deterministic in (seed, replica)."""
    return simulate_snapshots(config, process, [config.t_end], replica)[0]


def simulate_ensemble(config: SimConfig, process, times=None, threads: int | None = None) -> list[list[ParticleSystem]]:
    """All replicas at each snapshot time: result[i][r] is replica r at times[i].

    Replicas run on a thread pool (the kernel releases the GIL); each owns its
    own stream, so the output does not depend on ``threads``.
    """
    times = [config.t_end] if times is None else list(times)
    threads = threads or os.cpu_count() or 1

    def one(r):
        return simulate_snapshots(config, process, times, r)

    if threads == 1:
        runs = [one(r) for r in range(config.replicas)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            runs = list(pool.map(one, range(config.replicas)))
    return [[run[i] for run in runs] for i in range(len(times))]


def thin(ps: ParticleSystem, keep_prob: float, seed) -> ParticleSystem:
    """Keep each particle independently with probability ``keep_prob``."""
    if not 0.0 < keep_prob <= 1.0:
        raise ValueError(f"keep_prob must lie in (0, 1], got {keep_prob!r}")
    if keep_prob == 1.0:
        return ps
    keep = np.random.default_rng(seed).random(ps.count) < keep_prob
    return ParticleSystem(ps.positions[keep], ps.time, ps.process, ps.lattice_size)

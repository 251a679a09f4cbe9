"""Event-driven kernels for diffusion-limited annihilation / coalescence on a ring."""

import math

import numba
import numpy as np


@numba.njit(nogil=True, cache=True)
def fill_lattice(rng, occ, pos, fill):
    """Occupy each site independently with probability ``fill``; returns the count."""
    n = 0
    for x in range(occ.size):
        if fill >= 1.0 or rng.random() < fill:
            occ[x] = n
            pos[n] = x
            n += 1
        else:
            occ[x] = -1
    return n


@numba.njit(nogil=True, cache=True)
def first_event(rng, n):
    """Time of the first event from t = 0 with ``n`` particles (inf when empty)."""
    if n == 0:
        return math.inf
    return -math.log(1.0 - rng.random()) / n


@numba.njit(nogil=True, cache=True)
def evolve(rng, occ, pos, n, t_event, t_stop, annihilate):
    """Run every event before ``t_stop``, starting with the pending one at ``t_event``.

    ``occ[x]`` is the slot of the particle on site x (or -1) and ``pos[:n]`` the
    occupied sites in slot order. Every particle hops to a uniformly chosen
    neighbour at rate 1. A hop onto an occupied site removes both particles
    (annihilation) or only the mover (coalescence). Returns (n, t_event) with the
    next pending event, so splitting a run at intermediate times leaves the
    trajectory unchanged.
    """
    size = occ.size
    while t_event < t_stop:
        k = int(rng.random() * n)
        x = pos[k]
        y = x + 1 if rng.random() < 0.5 else x - 1
        if y == size:
            y = 0
        elif y < 0:
            y = size - 1
        occ[x] = -1
        n -= 1
        if k != n:
            pos[k] = pos[n]
            occ[pos[k]] = k
        j = occ[y]
        if j >= 0:
            if annihilate:
                occ[y] = -1
                n -= 1
                if j != n:
                    pos[j] = pos[n]
                    occ[pos[j]] = j
        else:
            occ[y] = n
            pos[n] = y
            n += 1
        if n == 0:
            return 0, math.inf
        t_event += -math.log(1.0 - rng.random()) / n
    return n, t_event


def snapshot(pos, n):
    return np.sort(pos[:n])

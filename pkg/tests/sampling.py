"""Reproducible random arcs for the engine-agreement checks."""

import math

import numpy as np

from shrinker_lab.phase_plane import Branch, Energy, PhasePoint


def random_point(rng, e: Energy) -> PhasePoint:
    # stay a hair inside [psi_min, psi_max] so the branch label is meaningful
    lo, hi = e.psi_min, e.psi_max
    psi = lo + (hi - lo) * rng.uniform(1e-6, 1 - 1e-6)
    return PhasePoint.at_psi(e, psi, Branch.LEFT if rng.random() < 0.5 else Branch.RIGHT)


def random_arcs(n: int, seed: int = 20240611, c_range=(1.01, 8.0)):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        c = float(math.exp(rng.uniform(math.log(c_range[0]), math.log(c_range[1]))))
        e = Energy(c)
        out.append((e, random_point(rng, e), random_point(rng, e)))
    return out

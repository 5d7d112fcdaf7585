"""Numerical tolerances and energy constants shared across the package."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, replace

ENV_TOL = "SHRINKER_LAB_TOL"

#: Lowest energy whose trajectory meets psi = pi/3 (points A, B, C, D exist).
C_STAR = 2.0 / math.sqrt(3.0)
ETA_STAR = 1.0 + math.log(4.0 / 3.0)
#: Upper end of the admissible interval for the upper curve.
ETA_BAR = 1.3065
C_BAR = math.exp((ETA_BAR - 1.0) / 2.0)
#: Energy with eta = 1.38.
C_HAT = math.exp(0.19)
I_A = (C_STAR, C_BAR)

#: Arc evaluation is refused below this energy (the period degenerates).
CIRCLE_GUARD = 1.0 + 1e-6


@dataclass(frozen=True)
class Tolerances:
    quad_abs: float = 1e-13
    quad_max_level: int = 12
    ode_rtol: float = 1e-12
    ode_atol: float = 1e-13
    event_s: float = 1e-13
    root_xtol: float = 1e-15
    root_residual: float = 1e-11
    newton_rtol: float = 1e-15

    def __post_init__(self):
        for name in ("quad_abs", "ode_rtol", "ode_atol", "event_s", "root_xtol",
                     "root_residual", "newton_rtol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"tolerance {name} must be positive")
        if self.quad_max_level < 1:
            raise ValueError("quad_max_level must be >= 1")


def default_tolerances() -> Tolerances:
    """Defaults, with the quadrature tolerance overridable through ``SHRINKER_LAB_TOL``."""
    tol = Tolerances()
    raw = os.environ.get(ENV_TOL)
    if raw:
        tol = replace(tol, quad_abs=float(raw))
    return tol


TOL = default_tolerances()

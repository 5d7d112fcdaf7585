"""Closed-form primitives of the (R, psi) phase plane of Abresch-Langer curves.

A self-similarly shrinking curve satisfies the conservation law
``K(R) = c sin(psi)`` with ``K(R) = exp((R^2 - 1)/2) / R``.  Every trajectory
with energy ``c > 1`` is a closed loop around ``(1, pi/2)``; traversing the
curve counterclockwise moves the phase point N -> A -> B -> M on the right
branch (R >= 1, psi increasing) and M -> C -> D -> N on the left branch.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .config import C_STAR, TOL


class DomainError(ValueError):
    """Argument outside the domain of a phase-plane primitive."""


class UndefinedPointError(DomainError):
    """A special point requested at an energy where it does not exist."""


class Branch(enum.Enum):
    LEFT = "left"    # R <= 1
    RIGHT = "right"  # R >= 1


class SpecialPointLabel(enum.Enum):
    A = "A"
    B = "B"
    C = "C"
    D = "D"
    M = "M"
    N = "N"


@dataclass(frozen=True)
class Energy:
    """Trajectory energy ``c`` together with its logarithmic form ``eta = 1 + 2 ln c``."""

    c: float
    eta: float = field(init=False)

    def __post_init__(self):
        if not (math.isfinite(self.c) and self.c > 1.0):
            raise DomainError(f"energy must satisfy 1 < c < inf, got {self.c!r}")
        object.__setattr__(self, "eta", 1.0 + 2.0 * math.log(self.c))

    @classmethod
    def from_eta(cls, eta: float) -> "Energy":
        return cls(math.exp((eta - 1.0) / 2.0))

    @property
    def psi_min(self) -> float:
        return math.asin(1.0 / self.c)

    @property
    def psi_max(self) -> float:
        return math.pi - math.asin(1.0 / self.c)

    @property
    def has_junction_points(self) -> bool:
        return self.c >= C_STAR * (1.0 - 4e-16)


# -- K and its two inverses -------------------------------------------------


def K(R):
    """``exp((R^2 - 1)/2) / R`` for ``R > 0`` (scalar or array)."""
    arr = np.asarray(R, dtype=float)
    if np.any(~(arr > 0)):
        raise DomainError("K(R) requires R > 0")
    out = np.exp(0.5 * (arr * arr - 1.0)) / arr
    return float(out) if out.ndim == 0 else out


def V(k):
    """Curvature potential ``k^2 - 2 ln k`` for ``k > 0``."""
    arr = np.asarray(k, dtype=float)
    if np.any(~(arr > 0)):
        raise DomainError("V(k) requires k > 0")
    out = arr * arr - 2.0 * np.log(arr)
    return float(out) if out.ndim == 0 else out


_SERIES_CUT = 2e-2
# expm1(2u)/2 - u = sum_{n>=2} 2^(n-1) u^n / n!
_LOGK_COEFFS = [2.0 ** (n - 1) / math.factorial(n) for n in range(2, 14)]


def log_K_of_log_R(u):
    """``ln K(e^u) = expm1(2u)/2 - u`` evaluated without cancellation near ``u = 0``."""
    u = np.asarray(u, dtype=float)
    small = np.abs(u) < _SERIES_CUT
    out = np.empty_like(u)
    if np.any(~small):
        ub = u[~small]
        out[~small] = 0.5 * np.expm1(2.0 * ub) - ub
    if np.any(small):
        us = u[small]
        acc = np.zeros_like(us)
        for coeff in reversed(_LOGK_COEFFS):
            acc = (acc + coeff) * us
        out[small] = acc * us
    return out


def log_inverse_K(x, branch: Branch):
    """Return ``ln R`` where ``K(R) = x`` on the requested branch.

    Works in ``u = ln R``, where ``g(u) = ln K(e^u)`` is convex with its
    minimum 0 at ``u = 0``.  Newton started on the far side of the root
    converges monotonically; a bisection step is taken whenever an iterate
    leaves the current bracket.
    """
    x = np.asarray(x, dtype=float)
    if np.any(~(x >= 1.0)) or np.any(~np.isfinite(x)):
        raise DomainError("inverse of K requires finite x >= 1")
    t = np.log(x)
    sign = 1.0 if branch is Branch.RIGHT else -1.0
    # |u| candidates with g(sign*|u|) >= t; keep the one closest to the root.
    sq = np.sqrt(t)
    if branch is Branch.RIGHT:
        cands = [sq, 0.5 * np.log1p(2.0 * t + 2.0 * sq)]
    else:
        cands = [sq + t, t + 0.5]
    a = np.full_like(t, np.inf)
    for cand in cands:
        ok = log_K_of_log_R(sign * cand) >= t
        a = np.where(ok & (cand < a), cand, a)
    a = np.where(np.isfinite(a), a, t + 0.5 + sq)
    lo = np.zeros_like(t)
    hi = a.copy()
    for _ in range(100):
        u = sign * a
        g = log_K_of_log_R(u) - t
        dg = sign * np.expm1(2.0 * u)  # d g / d|u|
        with np.errstate(divide="ignore", invalid="ignore"):
            step = np.where(dg > 0, g / dg, 0.0)
        over = g > 0
        hi = np.where(over, np.minimum(hi, a), hi)
        lo = np.where(~over, np.maximum(lo, a), lo)
        new = a - step
        bad = ~((new >= lo) & (new <= hi)) | ~np.isfinite(new)
        new = np.where(bad, 0.5 * (lo + hi), new)
        done = np.abs(new - a) <= TOL.newton_rtol * np.maximum(np.abs(new), 1e-300)
        a = new
        if np.all(done | (t == 0)):
            break
    a = np.where(t == 0, 0.0, a)
    out = sign * a
    return float(out) if out.ndim == 0 else out


def invert_K(x, branch: Branch):
    """``R^-(x)`` (``branch=LEFT``, values in (0, 1]) or ``R^+(x)`` (``RIGHT``, values >= 1)."""
    out = np.exp(log_inverse_K(x, branch))
    return float(out) if np.ndim(out) == 0 else out


def r_minus(x):
    return invert_K(x, Branch.LEFT)


def r_plus(x):
    return invert_K(x, Branch.RIGHT)


def turning_curvatures(e: Energy) -> tuple[float, float]:
    """Curvature extremes on the trajectory: ``(k_min, k_max) = (R^-(c), R^+(c))``."""
    return r_minus(e.c), r_plus(e.c)


def k_min_of_eta(eta: float) -> float:
    """Unique ``k < 1`` with ``V(k) = eta``."""
    if eta <= 1.0:
        raise DomainError("k_min requires eta > 1")
    return r_minus(math.exp((eta - 1.0) / 2.0))


# -- points on a trajectory -------------------------------------------------


@dataclass(frozen=True)
class PhasePoint:
    """A point ``(R, psi)`` on the trajectory of energy ``c``."""

    c: float
    psi: float
    branch: Branch
    R: float
    k: float

    @classmethod
    def at_psi(cls, e: Energy, psi: float, branch: Branch) -> "PhasePoint":
        lo, hi = e.psi_min, e.psi_max
        if not (lo - 1e-13 <= psi <= hi + 1e-13):
            raise DomainError(f"psi={psi!r} outside [{lo}, {hi}] for c={e.c}")
        x = max(e.c * math.sin(psi), 1.0)
        R = invert_K(x, branch)
        return cls(e.c, psi, branch, R, R * math.sin(psi))

    @classmethod
    def at_radius(cls, e: Energy, R: float, upper: bool = False) -> "PhasePoint":
        """``P(R) = (R, asin(K(R)/c))`` on the lower half (or upper half if ``upper``)."""
        if not R > 0:
            raise DomainError("radius must be positive")
        s = K(R) / e.c
        if s > 1.0:
            if s - 1.0 > 1e-12:
                raise DomainError(f"R={R!r} is not reached by the trajectory c={e.c}")
            s = 1.0
        psi = math.asin(s)
        if upper:
            psi = math.pi - psi
        branch = Branch.LEFT if R < 1.0 else Branch.RIGHT
        return cls(e.c, psi, branch, R, R * math.sin(psi))

    @property
    def energy(self) -> Energy:
        return Energy(self.c)

    def conservation_residual(self) -> float:
        return abs(K(self.R) - self.c * math.sin(self.psi))


def special_point(e: Energy, label: SpecialPointLabel | str) -> PhasePoint:
    """Coordinates of A, B, C, D (psi = pi/3, 2pi/3) and M, N (R = 1)."""
    label = SpecialPointLabel(label)
    if label is SpecialPointLabel.N:
        return PhasePoint(e.c, e.psi_min, Branch.RIGHT, 1.0, 1.0 / e.c)
    if label is SpecialPointLabel.M:
        return PhasePoint(e.c, e.psi_max, Branch.LEFT, 1.0, 1.0 / e.c)
    if not e.has_junction_points:
        raise UndefinedPointError(f"point {label.value} undefined for c={e.c} < c*")
    x = max(0.5 * math.sqrt(3.0) * e.c, 1.0)
    psi, branch = {
        SpecialPointLabel.A: (math.pi / 3.0, Branch.RIGHT),
        SpecialPointLabel.B: (2.0 * math.pi / 3.0, Branch.RIGHT),
        SpecialPointLabel.C: (2.0 * math.pi / 3.0, Branch.LEFT),
        SpecialPointLabel.D: (math.pi / 3.0, Branch.LEFT),
    }[label]
    R = invert_K(x, branch)
    return PhasePoint(e.c, psi, branch, R, R * math.sin(psi))


def psi_from_radius(e: Energy, R: float) -> float:
    """Lower-half psi value at radius ``R``."""
    return PhasePoint.at_radius(e, R).psi

"""ODE-flow oracle: integrates a shrinking curve together with its phase point.

In arc length ``s`` a self-similarly shrinking curve obeys::

    R' = cos(psi),  psi' = (R - 1/R) sin(psi),  theta' = sin(psi)/R,
    phi' = R sin(psi),  x' = cos(phi),  y' = sin(phi)

with ``phi = theta + psi``.  The system is regular at the branch turning
points M and N, which makes it an independent check on the quadrature
formulas whose integrands degenerate there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from ..config import CIRCLE_GUARD, TOL
from ..phase_plane import Branch, DomainError, Energy, K, PhasePoint
from .ode import Event, NoEventError, StiffnessError, integrate_until

__all__ = [
    "ArcLengthReached", "BranchTurn", "FlowResult", "FlowState", "NoEventError",
    "PsiCrossing", "StiffnessError", "ThetaReached", "flow", "event_for_point", "period_flow",
]

_THETA_LIMIT = 1.5 * math.sqrt(2.0) * math.pi  # 1.5 periods, since T(c) < sqrt(2) pi


@dataclass(frozen=True)
class FlowState:
    s: float
    R: float
    theta: float
    psi: float
    phi: float
    x: float = 0.0
    y: float = 0.0


@dataclass(frozen=True)
class PsiCrossing:
    target: float
    direction: int  # +1 on the right branch (psi increasing), -1 on the left


@dataclass(frozen=True)
class BranchTurn:
    label: str  # "M" or "N"


@dataclass(frozen=True)
class ArcLengthReached:
    s: float


@dataclass(frozen=True)
class ThetaReached:
    theta: float


FlowEvent = Union[PsiCrossing, BranchTurn, ArcLengthReached, ThetaReached]


@dataclass(frozen=True)
class FlowResult:
    end: PhasePoint
    dtheta: float
    dphi: float
    dpsi: float
    ds: float
    conservation_residual: float
    trace: tuple[FlowState, ...] | None = None


def event_for_point(q: PhasePoint) -> FlowEvent:
    """Stop event that fires when the flow reaches ``q``."""
    e = Energy(q.c)
    if q.R == 1.0 and abs(q.psi - e.psi_min) < 1e-12:
        return BranchTurn("N")
    if q.R == 1.0 and abs(q.psi - e.psi_max) < 1e-12:
        return BranchTurn("M")
    return PsiCrossing(q.psi, +1 if q.branch is Branch.RIGHT else -1)


def _rhs(_s, y):
    R, psi, phi = y[0], y[1], y[3]
    sp = math.sin(psi)
    return np.array([math.cos(psi), (R - 1.0 / R) * sp, sp / R, R * sp,
                     math.cos(phi), math.sin(phi)])


def _to_event(stop: FlowEvent, s0: float, theta0: float) -> Event:
    if isinstance(stop, PsiCrossing):
        tgt = stop.target
        return Event(lambda s, y: y[1] - tgt, stop.direction, "psi",
                     dg=lambda s, y: (y[0] - 1.0 / y[0]) * math.sin(y[1]))
    if isinstance(stop, BranchTurn):
        if stop.label not in ("M", "N"):
            raise ValueError("BranchTurn label must be 'M' or 'N'")
        return Event(lambda s, y: y[0] - 1.0, -1 if stop.label == "M" else +1, stop.label)
    if isinstance(stop, ArcLengthReached):
        tgt = s0 + stop.s
        return Event(lambda s, y: s - tgt, +1, "s")
    if isinstance(stop, ThetaReached):
        tgt = theta0 + stop.theta
        return Event(lambda s, y: y[2] - tgt, +1, "theta")
    raise TypeError(f"unknown flow event {stop!r}")


def flow(
    e: Energy,
    start: PhasePoint,
    stop: FlowEvent | PhasePoint,
    *,
    theta0: float = 0.0,
    position: tuple[float, float] | None = None,
    record: bool = False,
    max_step: float = math.inf,
    rtol: float = TOL.ode_rtol,
) -> FlowResult:
    """Flow counterclockwise from ``start`` until ``stop``.

    ``stop`` may be a :data:`FlowEvent` or a target :class:`PhasePoint`.
    ``position`` defaults to ``R (cos theta0, sin theta0)``; pass an explicit
    position to continue a curve after a junction.
    """
    if e.c < CIRCLE_GUARD:
        raise DomainError(f"c={e.c} too close to the circle limit for arc evaluation")
    if isinstance(stop, PhasePoint):
        if abs(stop.c - e.c) > 1e-14 * e.c:
            raise DomainError("target point lies on a different trajectory")
        if abs(stop.R - start.R) <= 1e-15 and abs(stop.psi - start.psi) <= 1e-15:
            x0, y0 = position or (start.R * math.cos(theta0), start.R * math.sin(theta0))
            st = FlowState(0.0, start.R, theta0, start.psi, theta0 + start.psi, x0, y0)
            return FlowResult(start, 0.0, 0.0, 0.0, 0.0, start.conservation_residual(),
                              (st,) if record else None)
        stop = event_for_point(stop)
    if position is None:
        position = (start.R * math.cos(theta0), start.R * math.sin(theta0))
    y0 = [start.R, start.psi, theta0, theta0 + start.psi, position[0], position[1]]
    ev = _to_event(stop, 0.0, theta0)
    limit_theta = theta0 + _THETA_LIMIT

    def limit(s, y):
        return y[2] > limit_theta

    # a step of O(R_min) keeps the first step sane near the origin
    h0 = min(1e-2, 0.1 * start.R)
    sol = integrate_until(_rhs, 0.0, y0, [ev], limit, rtol=rtol, atol=rtol * 0.1,
                          h0=h0, max_step=max_step, record=record)
    R, psi, theta, phi, x, y = (float(v) for v in sol.y)
    branch = Branch.LEFT if R < 1.0 else Branch.RIGHT
    if isinstance(stop, BranchTurn):
        branch = Branch.RIGHT if stop.label == "N" else Branch.LEFT
    end = PhasePoint(e.c, psi, branch, R, R * math.sin(psi))
    trace = None
    resid = abs(K(R) - e.c * math.sin(psi))
    if record:
        trace = tuple(FlowState(float(s), float(yy[0]), float(yy[2]), float(yy[1]), float(yy[3]),
                                float(yy[4]), float(yy[5])) for s, yy in zip(sol.ts, sol.ys))
        resid = max(resid, max(abs(K(st.R) - e.c * math.sin(st.psi)) for st in trace))
    return FlowResult(end, theta - theta0, phi - (theta0 + start.psi), psi - start.psi,
                      sol.t, resid, trace)


def period_flow(e: Energy, record: bool = False) -> FlowResult:
    """One full period from N back to N."""
    from ..phase_plane import special_point
    n = special_point(e, "N")
    return flow(e, n, BranchTurn("N"), record=record)

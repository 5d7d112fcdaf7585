"""Dormand-Prince 5(4) stepper with PI step-size control and event location."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import brentq

from ..config import TOL


class StiffnessError(ArithmeticError):
    """Step size underflowed."""


class NoEventError(RuntimeError):
    """The integration limit was reached before the event fired."""


# Dormand & Prince (1980), RK5(4)7M
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_E = _B - np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])


def dp_step(f: Callable, t: float, y: np.ndarray, h: float, k0: np.ndarray | None = None):
    """One Dormand-Prince step. Returns ``(y_new, err_vec, k_last)``."""
    ks = [f(t, y) if k0 is None else k0]
    for i in range(1, 7):
        dy = np.zeros_like(y)
        for j, a in enumerate(_A[i]):
            if a:
                dy = dy + a * ks[j]
        ks.append(f(t + _C[i] * h, y + h * dy))
    K = np.array(ks)
    y_new = y + h * (_B @ K)
    err = h * (_E @ K)
    return y_new, err, ks[-1]


@dataclass
class Event:
    """Zero crossing of ``g(t, y)``; ``direction`` +1 rising, -1 falling, 0 either."""

    g: Callable[[float, np.ndarray], float]
    direction: int = 0
    name: str = "event"
    # optional d/dt g; lets a step that enters and leaves the surface be caught
    dg: Callable[[float, np.ndarray], float] | None = None


@dataclass
class Solution:
    t: float
    y: np.ndarray
    event: str | None
    ts: list = field(default_factory=list)
    ys: list = field(default_factory=list)
    steps: int = 0


def _leave_zero(g_sub, h, g_end):
    """Sub-step at which ``g`` has the sign opposite to ``g_end``, or None.

    Used when a step starts exactly on an event surface: the event fires
    in this step only if ``g`` first moves away to the other side.
    """
    sigma = h * 1e-6
    for _ in range(40):
        v = g_sub(sigma)
        if v * g_end < 0:
            return sigma
        if v == 0:
            sigma *= 0.5
            continue
        return None
    return None


def _dip(ev, g_sub, f, t, y, h, k0, g_old):
    """Extremum of ``g`` inside a step whose end values share a sign.

    Returns ``(g_extremum, sigma_extremum)`` when ``dg`` changes sign within
    the step, else None.
    """
    def dg_sub(sigma):
        if sigma == 0.0:
            return ev.dg(t, y)
        ys, _, _ = dp_step(f, t, y, sigma, k0)
        return ev.dg(t + sigma, ys)

    d0, d1 = dg_sub(0.0), dg_sub(h)
    if d0 * d1 >= 0 or d0 * g_old >= 0:
        # no turn, or g moving away from zero at the start
        return None
    sig = brentq(dg_sub, 0.0, h, xtol=1e-15, maxiter=200)
    return g_sub(sig), sig


def integrate_until(
    f: Callable[[float, np.ndarray], np.ndarray],
    t0: float,
    y0: Sequence[float],
    events: Sequence[Event],
    limit: Callable[[float, np.ndarray], bool],
    rtol: float = TOL.ode_rtol,
    atol: float = TOL.ode_atol,
    h0: float = 1e-3,
    max_step: float = math.inf,
    record: bool = False,
    event_tol: float = TOL.event_s,
) -> Solution:
    """Integrate until the first event crossing.

    A crossing is bracketed by a sign change of ``g`` across an accepted step
    and then located by Brent's method on ``sigma -> g(step(y_n, sigma))``,
    i.e. on genuine sub-steps from the last accepted state, so the event is
    resolved to ``event_tol`` in ``t`` with the accuracy of the stepper.
    ``limit(t, y)`` returning True aborts with :class:`NoEventError`.
    """
    y = np.asarray(y0, dtype=float)
    t = t0
    h = min(h0, max_step)
    gs = [ev.g(t, y) for ev in events]
    sol = Solution(t, y, None)
    if record:
        sol.ts.append(t)
        sol.ys.append(y.copy())
    k0 = f(t, y)
    err_prev = 1.0
    safety, alpha, beta = 0.9, 0.7 / 5, 0.4 / 5
    steps = 0
    while True:
        if h < 1e-14 * max(1.0, abs(t)):
            raise StiffnessError(f"step size underflow at t={t}")
        y_new, err_vec, k_last = dp_step(f, t, y, h, k0)
        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        err = math.sqrt(float(np.mean((err_vec / scale) ** 2)))
        if err > 1.0 or not np.all(np.isfinite(y_new)):
            if not np.isfinite(err):
                h *= 0.1
            else:
                h *= max(0.2, safety * err ** -alpha)
            continue
        steps += 1
        t_new = t + h
        hit = None
        for i, ev in enumerate(events):
            g_new = ev.g(t_new, y_new)
            g_old = gs[i]

            def g_sub(sigma, ev=ev):
                if sigma == 0.0:
                    return ev.g(t, y)
                ys, _, _ = dp_step(f, t, y, sigma, k0)
                return ev.g(t + sigma, ys)

            lo = 0.0
            if g_old == 0 and g_new != 0:
                # sitting on the surface: only a dip away from it and back counts
                lo = _leave_zero(g_sub, h, g_new)
                if lo is not None:
                    g_old = g_sub(lo)
            if lo is not None and g_old * g_new > 0 and ev.dg is not None:
                lo_hi = _dip(ev, g_sub, f, t, y, h, k0, g_old)
                if lo_hi is not None:
                    g_new_eff, h_eff = lo_hi
                else:
                    g_new_eff, h_eff = g_new, h
            else:
                g_new_eff, h_eff = g_new, h
            crossed = lo is not None and (
                (g_old < 0 < g_new_eff and ev.direction >= 0) or
                (g_old > 0 > g_new_eff and ev.direction <= 0) or
                (g_new_eff == 0 and g_old != 0 and (ev.direction == 0 or
                                                    ev.direction * (g_new_eff - g_old) > 0)))
            if crossed:
                if g_new_eff == 0:
                    sigma = h_eff
                else:
                    sigma = brentq(g_sub, lo, h_eff, xtol=event_tol,
                                   rtol=4 * np.finfo(float).eps, maxiter=200)
                if hit is None or sigma < hit[0]:
                    hit = (sigma, ev.name)
            gs[i] = g_new
        if hit is not None:
            sigma, name = hit
            y_ev = dp_step(f, t, y, sigma, k0)[0] if sigma > 0 else y
            sol.t, sol.y, sol.event, sol.steps = t + sigma, y_ev, name, steps
            if record:
                sol.ts.append(sol.t)
                sol.ys.append(y_ev.copy())
            return sol
        t, y, k0 = t_new, y_new, k_last
        if record:
            sol.ts.append(t)
            sol.ys.append(y.copy())
        if limit(t, y):
            raise NoEventError(f"no event before integration limit (t={t})")
        # PI controller
        fac = safety * err ** -alpha * err_prev ** beta if err > 0 else 5.0
        h = min(h * min(5.0, max(0.2, fac)), max_step)
        err_prev = max(err, 1e-4)

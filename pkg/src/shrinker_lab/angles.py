"""Named angle functionals on a trajectory: h1, h2, h3, T and arc angles.

The counterclockwise arc is cut at N, the right turning point (psi = pi/2,
R = k_max), M and the left turning point (psi = pi/2, R = k_min).  Inside
each quarter R, psi and k are monotone.  Each quarter piece is split once
more at the psi midpoint between its turning point and its R = 1 end:

* near psi = pi/2 the psi-form ``dtheta = dpsi / |R^2 - 1|`` is regular;
* near R = 1 the k-form ``dtheta = dk / sqrt(eta - V(k)) - dpsi`` is regular.

So no quadrature call ever sees an endpoint singularity, and the flow
engine in :mod:`shrinker_lab.integrators.flow` supplies the independent
check.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .config import C_STAR, CIRCLE_GUARD
from .integrators.flow import flow
from .integrators.quadrature import QuadratureSpec, integrate
from .phase_plane import (
    Branch, DomainError, Energy, K, PhasePoint, log_inverse_K, special_point,
    turning_curvatures,
)

HALF_PI = 0.5 * math.pi

_SPEC = QuadratureSpec()


@dataclass(frozen=True)
class HTriple:
    h1: float
    h2: float
    h3: float

    @property
    def T(self) -> float:
        return self.h1 + 2.0 * self.h2 + self.h3


@dataclass(frozen=True)
class ArcSpec:
    """Counterclockwise arc between two points of one trajectory (less than a period)."""

    start: PhasePoint
    stop: PhasePoint


# -- k-form ------------------------------------------------------------------


def _q_low(u, k_min):
    """``(eta - V(k)) / u^2`` for ``k = k_min + u^2``, with ``eta = V(k_min)``."""
    u2 = u * u
    r = u2 / k_min
    with np.errstate(divide="ignore", invalid="ignore"):
        lg = np.where(r > 1e-8, 2.0 * np.log1p(r) / np.where(u2 > 0, u2, 1.0),
                      2.0 / k_min - r / k_min)
    return lg - (2.0 * k_min + u2)


def _q_high(u, k_max):
    """``(eta - V(k)) / u^2`` for ``k = k_max - u^2``, with ``eta = V(k_max)``."""
    u2 = u * u
    r = u2 / k_max
    with np.errstate(divide="ignore", invalid="ignore"):
        lg = np.where(r > 1e-8, 2.0 * np.log1p(-r) / np.where(u2 > 0, u2, 1.0),
                      -2.0 / k_max - r / k_max)
    return (2.0 * k_max - u2) + lg


def _phi_low(k_min, k1, k2, spec):
    # k in [k_min, 1]; dk = 2u du, integrand 2 / sqrt(Q)
    ua, ub = math.sqrt(max(k1 - k_min, 0.0)), math.sqrt(max(k2 - k_min, 0.0))
    return integrate(lambda u: 2.0 / np.sqrt(_q_low(u, k_min)), ua, ub, spec)


def _phi_high(k_max, k1, k2, spec):
    ua, ub = math.sqrt(max(k_max - k2, 0.0)), math.sqrt(max(k_max - k1, 0.0))
    return integrate(lambda u: 2.0 / np.sqrt(_q_high(u, k_max)), ua, ub, spec)


def _phi_between(k_min, k_max, k1, k2, spec=_SPEC):
    lo, hi = min(k1, k2), max(k1, k2)
    if lo == hi:
        return 0.0
    total = 0.0
    if lo < 1.0:
        total += _phi_low(k_min, lo, min(hi, 1.0), spec)
    if hi > 1.0:
        total += _phi_high(k_max, max(lo, 1.0), hi, spec)
    return total


def delta_phi_k(e: Energy, k1: float, k2: float, spec: QuadratureSpec = _SPEC) -> float:
    """``int_{k1}^{k2} dk / sqrt(eta - V(k))`` for ``k_min <= k1 <= k2 <= k_max``.

    Below ``k = 1`` the substitution ``k = k_min + u^2`` is used, above it
    ``k = k_max - u^2``; both remove the square-root blow-up at the turning
    curvature and leave a smooth integrand.
    """
    k_min, k_max = turning_curvatures(e)
    slack = 1e-13
    if not (k_min * (1 - slack) <= k1 <= k2 <= k_max * (1 + slack)):
        raise DomainError(f"need k_min={k_min} <= k1={k1} <= k2={k2} <= k_max={k_max}")
    return _phi_between(k_min, k_max, min(max(k1, k_min), k_max), min(max(k2, k_min), k_max), spec)


# -- psi-form ----------------------------------------------------------------


def _psi_integrand(c, branch):
    def f(psi):
        x = np.maximum(c * np.sin(psi), 1.0)
        u = log_inverse_K(x, branch)
        return 1.0 / np.abs(np.expm1(2.0 * np.asarray(u)))
    return f


def psi_form(e: Energy, psi1: float, psi2: float, branch: Branch,
             spec: QuadratureSpec = _SPEC) -> float:
    """``|int dpsi / (R(psi)^2 - 1)|`` on one branch; singular only where R = 1."""
    lo, hi = min(psi1, psi2), max(psi1, psi2)
    return integrate(_psi_integrand(e.c, branch), lo, hi, spec)


# -- arc decomposition ---------------------------------------------------------


@dataclass(frozen=True)
class _Waypoint:
    psi: float
    k: float
    quarter: int


def _geometry(e: Energy):
    k_min, k_max = turning_curvatures(e)
    psi_min = e.psi_min
    qb = HALF_PI - psi_min
    half = 2.0 * qb  # psi_max - psi_min
    return k_min, k_max, psi_min, qb, half


def _key(p: PhasePoint, psi_min: float, half: float) -> float:
    if p.branch is Branch.RIGHT:
        key = p.psi - psi_min
    else:
        key = half + (math.pi - psi_min - p.psi)
    return key % (2.0 * half)


def _quarter_of(p: PhasePoint) -> int:
    if p.branch is Branch.RIGHT:
        return 0 if p.psi < HALF_PI else 1
    return 2 if p.psi > HALF_PI else 3


def _check_on(e: Energy, p: PhasePoint):
    if abs(p.c - e.c) > 1e-14 * e.c:
        raise DomainError("point lies on a different trajectory")
    if p.conservation_residual() > 1e-9 * e.c:
        raise DomainError(f"point {p} violates the conservation law")


def _waypoints(e: Energy, p: PhasePoint, q: PhasePoint) -> list[_Waypoint]:
    """``p``, every quarter boundary passed, ``q``; consecutive pairs share a quarter."""
    k_min, k_max, psi_min, qb, half = _geometry(e)
    L = 2.0 * half
    kp, kq = _key(p, psi_min, half), _key(q, psi_min, half)
    if kq < kp:
        kq += L
    bounds = [  # (key, psi, k, quarter entered)
        (0.0, psi_min, 1.0 / e.c, 0),
        (qb, HALF_PI, k_max, 1),
        (half, math.pi - psi_min, 1.0 / e.c, 2),
        (half + qb, HALF_PI, k_min, 3),
    ]
    start_q = _quarter_of(p)
    # a point sitting exactly on a boundary belongs to the quarter that starts there
    for bk, _, _, quarter in bounds:
        if kp == bk:
            start_q = quarter
    pts = [_Waypoint(p.psi, p.k, start_q)]
    for lap in (0.0, L):
        for bk, psi, k, quarter in bounds:
            key = bk + lap
            if kp < key < kq:
                pts.append(_Waypoint(psi, k, quarter))
    pts.append(_Waypoint(q.psi, q.k, -1))
    return pts


def _quarter_info(e: Energy, quarter: int):
    psi_unit = e.psi_min if quarter in (0, 3) else e.psi_max
    branch = Branch.RIGHT if quarter in (0, 1) else Branch.LEFT
    return psi_unit, branch


def _piece(e: Energy, a: _Waypoint, b: _Waypoint, quarter: int, k_min, k_max, spec):
    """Delta theta between two waypoints of one quarter."""
    psi_unit, branch = _quarter_info(e, quarter)
    split = 0.5 * (HALF_PI + psi_unit)
    sgn = 1.0 if psi_unit > HALF_PI else -1.0  # direction from pi/2 toward the R=1 end

    def dist(psi):  # distance from pi/2 measured toward the unit end
        return sgn * (psi - HALF_PI)

    d_split = dist(split)
    da, db = dist(a.psi), dist(b.psi)
    lo, hi = min(da, db), max(da, db)
    total = 0.0
    # turning side: psi-form on [lo, min(hi, d_split)]
    if lo < d_split:
        t_hi = min(hi, d_split)
        total += psi_form(e, HALF_PI + sgn * lo, HALF_PI + sgn * t_hi, branch, spec)
    # unit side: k-form on [max(lo, d_split), hi]
    if hi > d_split:
        u_lo = max(lo, d_split)

        def k_at(d, wp_a=a, wp_b=b):
            if d == da:
                return wp_a.k
            if d == db:
                return wp_b.k
            psi = HALF_PI + sgn * d
            return PhasePoint.at_psi(e, psi, branch).k

        k1, k2 = k_at(u_lo), k_at(hi)
        dphi = _phi_between(k_min, k_max, k1, k2, spec)
        dpsi = abs(hi - u_lo)
        # psi rises on the right branch and falls on the left
        total += dphi - dpsi if branch is Branch.RIGHT else dphi + dpsi
    return total


def delta_theta(e: Energy, arc: ArcSpec | PhasePoint, stop: PhasePoint | None = None,
                spec: QuadratureSpec = _SPEC) -> float:
    """Counterclockwise change of polar angle along an arc (quadrature engine).

    Accepts an :class:`ArcSpec` or two points.  The result lies in ``[0, T(c))``.
    """
    if stop is not None:
        arc = ArcSpec(arc, stop)
    if e.c < CIRCLE_GUARD:
        raise DomainError(f"c={e.c} too close to the circle limit for arc evaluation")
    p, q = arc.start, arc.stop
    _check_on(e, p)
    _check_on(e, q)
    k_min, k_max = turning_curvatures(e)
    pts = _waypoints(e, p, q)
    total = 0.0
    for a, b in zip(pts[:-1], pts[1:]):
        total += _piece(e, a, b, a.quarter, k_min, k_max, spec)
    return total


def delta_phi(e: Energy, arc: ArcSpec | PhasePoint, stop: PhasePoint | None = None,
              spec: QuadratureSpec = _SPEC) -> float:
    """Change of tangent angle along an arc, from the k-form alone."""
    if stop is not None:
        arc = ArcSpec(arc, stop)
    p, q = arc.start, arc.stop
    _check_on(e, p)
    _check_on(e, q)
    k_min, k_max = turning_curvatures(e)
    pts = _waypoints(e, p, q)
    return sum(_phi_between(k_min, k_max, a.k, b.k, spec) for a, b in zip(pts[:-1], pts[1:]))


def flow_delta_theta(e: Energy, arc: ArcSpec | PhasePoint, stop: PhasePoint | None = None) -> float:
    """Same quantity as :func:`delta_theta`, from the ODE flow."""
    if stop is not None:
        arc = ArcSpec(arc, stop)
    p, q = arc.start, arc.stop
    if p == q:
        return 0.0
    return flow(e, p, q).dtheta


# -- named functionals -----------------------------------------------------------


def _require_junctions(e: Energy):
    if not e.has_junction_points:
        raise DomainError(f"h functions need c >= c* = {C_STAR}, got {e.c}")


@functools.lru_cache(maxsize=4096)
def _h_cached(c: float) -> HTriple:
    e = Energy(c)
    A, B, C, D = (special_point(e, x) for x in "ABCD")
    h1 = delta_theta(e, C, D)
    h2 = delta_theta(e, D, A)
    h3 = delta_theta(e, A, B)
    return HTriple(h1, h2, h3)


def h_triple(e: Energy) -> HTriple:
    """``h1 = dtheta_CD``, ``h2 = dtheta_DA = dtheta_BC``, ``h3 = dtheta_AB`` (memoized per c)."""
    _require_junctions(e)
    if e.c < CIRCLE_GUARD:
        raise DomainError("c too close to the circle limit")
    return _h_cached(e.c)


def h_triple_flow(e: Energy) -> HTriple:
    """Flow-engine counterpart of :func:`h_triple`."""
    _require_junctions(e)
    A, B, C, D = (special_point(e, x) for x in "ABCD")
    return HTriple(flow(e, C, D).dtheta, flow(e, D, A).dtheta, flow(e, A, B).dtheta)


def h1_psi_form(e: Energy) -> float:
    """h1 straight from its psi-form definition over [pi/3, 2pi/3] on the left branch."""
    _require_junctions(e)
    return psi_form(e, math.pi / 3, 2 * math.pi / 3, Branch.LEFT)


def h3_psi_form(e: Energy) -> float:
    _require_junctions(e)
    return psi_form(e, math.pi / 3, 2 * math.pi / 3, Branch.RIGHT)


def period(e: Energy) -> float:
    """T(c): polar angle swept in one full period."""
    return delta_theta_MN(e) + delta_theta_NM(e)


def delta_theta_MN(e: Energy) -> float:
    """M to N along the left branch."""
    return delta_theta(e, special_point(e, "M"), special_point(e, "N"))


def delta_theta_NM(e: Energy) -> float:
    """N to M along the right branch."""
    return delta_theta(e, special_point(e, "N"), special_point(e, "M"))


def delta_theta_NA(e: Energy) -> float:
    _require_junctions(e)
    return delta_theta(e, special_point(e, "N"), special_point(e, "A"))


def delta_theta_PA(e: Energy, R0: float, spec: QuadratureSpec = _SPEC) -> float:
    """From ``P(R0) = (R0, asin(K(R0)/c))`` on the lower half to A, in R-form.

    ``int_{R0}^{R_A} K(R) dR / (R sqrt(c^2 - K(R)^2))``.  Valid for
    ``R0 >= k_min = R^-(c)``; at exactly ``k_min`` the integrand has a
    square-root end singularity, so that case goes through :func:`delta_theta`.
    """
    _require_junctions(e)
    k_min, _ = turning_curvatures(e)
    A = special_point(e, "A")
    if R0 < k_min * (1 - 1e-13) or R0 > A.R * (1 + 1e-13):
        raise DomainError(f"R0={R0} outside [{k_min}, {A.R}] for c={e.c}")
    if R0 <= k_min * (1 + 1e-6):
        return delta_theta(e, PhasePoint.at_radius(e, max(R0, k_min)), A, spec=spec)
    c = e.c

    def f(R):
        k = K(R)
        return k / (R * np.sqrt((c - k) * (c + k)))
    return integrate(f, R0, A.R, spec)


def _lower_point(e: Energy, psi: float, branch: Branch) -> PhasePoint:
    return PhasePoint.at_psi(e, psi, branch)


def h_circ_psi(e: Energy, psi: float) -> tuple[float, float]:
    """``(h1_circ, h3_circ)`` for a start point with ``psi in [pi/3, pi/2]``.

    h1_circ = dtheta_SD with S on the lower CD arc; h3_circ = dtheta_SB with S
    on the lower AB arc.  By the reflection symmetry of the trajectory these
    also equal dtheta_CE and dtheta_AE for the mirrored end point E.
    """
    _require_junctions(e)
    if not (math.pi / 3 - 1e-13 <= psi <= HALF_PI + 1e-13):
        raise DomainError("start angle must lie in [pi/3, pi/2]")
    psi = min(max(psi, math.pi / 3), HALF_PI)
    D, B = special_point(e, "D"), special_point(e, "B")
    s_left = _lower_point(e, psi, Branch.LEFT)
    s_right = _lower_point(e, psi, Branch.RIGHT)
    return delta_theta(e, s_left, D), delta_theta(e, s_right, B)


def h_circ(e: Energy, R_start: float) -> tuple[float, float]:
    """``(h1_circ, h3_circ)`` for the start point on the lower CD (R < 1) or AB arc (R > 1)."""
    _require_junctions(e)
    x = K(R_start)
    s = x / e.c
    if s > 1 + 1e-13 or s < math.sqrt(3) / 2 * (1 - 1e-13):
        raise DomainError(f"R_start={R_start} is not on the CD or AB arc at c={e.c}")
    return h_circ_psi(e, math.asin(min(s, 1.0)))


__all__ = [
    "ArcSpec", "HTriple", "delta_phi", "delta_phi_k", "delta_theta", "delta_theta_MN",
    "delta_theta_NA", "delta_theta_NM", "delta_theta_PA", "flow_delta_theta", "h1_psi_form",
    "h3_psi_form", "h_circ", "h_circ_psi", "h_triple", "h_triple_flow", "period", "psi_form",
]

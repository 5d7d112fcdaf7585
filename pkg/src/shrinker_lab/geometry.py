"""Physical curves and networks reconstructed from phase-plane paths.

Placement convention: the start junction S sits on the positive x-axis at
radius ``R_start``, the upper curve runs counterclockwise to the end
junction E on the negative x-axis, and the inner curve is the segment S-E.
The lower curve is either the reflection of the upper one in the x-axis or
its image under the point reflection through the origin.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .catalog import ShrinkerSolution, TrajectoryPath, _label_point, end_points
from .integrators.flow import FlowEvent, flow
from .phase_plane import Energy, PhasePoint, turning_curvatures

SCHEMA_NET = "shrinker-net/1"
MAX_TURN = math.radians(0.5)  # turning between adjacent samples


class ClosureError(RuntimeError):
    """The reconstructed upper curve misses the end junction."""

    def __init__(self, msg: str, gap: float):
        super().__init__(msg)
        self.gap = gap


@dataclass
class Polyline:
    """Sampled curve with per-point phase annotations.

    ``k`` is the curvature read off the geometry, ``<gamma, N> = x sin(phi) -
    y cos(phi)``, while ``R`` and ``psi`` come from the phase variables; the
    shrinker equation ties them by ``k = R sin(psi)``.
    """

    points: np.ndarray          # (n, 2)
    R: np.ndarray
    psi: np.ndarray
    k: np.ndarray
    theta: np.ndarray           # flow polar angle (continuous)
    phi: np.ndarray             # tangent angle
    s: np.ndarray               # arc length
    label: str = ""
    multiplicity: int = 1
    kind: str = "arc"           # "arc", "segment" or "degenerate"

    @property
    def start(self) -> np.ndarray:
        return self.points[0]

    @property
    def end(self) -> np.ndarray:
        return self.points[-1]

    @property
    def t_start(self) -> np.ndarray:
        return np.array([math.cos(self.phi[0]), math.sin(self.phi[0])])

    @property
    def t_end(self) -> np.ndarray:
        return np.array([math.cos(self.phi[-1]), math.sin(self.phi[-1])])

    @property
    def length(self) -> float:
        return float(self.s[-1] - self.s[0])

    def shrinker_residual(self) -> float:
        if self.kind != "arc" or len(self.points) == 0:
            return 0.0
        return float(np.max(np.abs(self.k - self.R * np.sin(self.psi))))

    def polar_residual(self) -> float:
        """max |unwrap(atan2(y, x)) - theta| over the samples."""
        if self.kind != "arc" or len(self.points) < 2:
            return 0.0
        ang = np.unwrap(np.arctan2(self.points[:, 1], self.points[:, 0]))
        ang += 2 * math.pi * round((self.theta[0] - ang[0]) / (2 * math.pi))
        return float(np.max(np.abs(ang - self.theta)))

    def transformed(self, how: str) -> "Polyline":
        """Image under ``"mirror"`` (y -> -y) or ``"point"`` (p -> -p, traversal reversed)."""
        if how == "mirror":
            pts = self.points * np.array([1.0, -1.0])
            return Polyline(pts, self.R.copy(), self.psi.copy(), self.k.copy(), -self.theta,
                            -self.phi, self.s.copy(), self.label, self.multiplicity, self.kind)
        if how == "point":
            r = slice(None, None, -1)
            pts = -self.points[r]
            s = self.s[-1] - self.s[r]
            # reversed traversal of a rotated curve keeps the tangent direction;
            # psi is measured in the opposite orientation, so psi -> pi - psi
            return Polyline(pts, self.R[r].copy(), math.pi - self.psi[r], self.k[r].copy(),
                            self.theta[r] + math.pi, self.phi[r].copy(), s, self.label,
                            self.multiplicity, self.kind)
        raise ValueError(f"unknown transformation {how!r}")


@dataclass(frozen=True)
class Ray:
    origin: tuple[float, float]
    direction: tuple[float, float]
    multiplicity: int = 1

    def radial_error(self) -> float:
        o = np.asarray(self.origin)
        d = np.asarray(self.direction)
        r = np.linalg.norm(o)
        if r == 0:
            return 0.0
        return float(abs(o[0] * d[1] - o[1] * d[0]) / r + max(0.0, -(o @ d) / r))


@dataclass(frozen=True)
class Junction:
    point: tuple[float, float]
    directions: tuple[tuple[float, float], ...]
    label: str = ""

    def herring_error(self) -> float:
        """Largest deviation of the three pairwise angles from 2pi/3."""
        if len(self.directions) != 3:
            return math.inf
        worst = 0.0
        for i in range(3):
            for j in range(i + 1, 3):
                a, b = np.asarray(self.directions[i]), np.asarray(self.directions[j])
                ang = math.atan2(a[0] * b[1] - a[1] * b[0], float(a @ b))
                worst = max(worst, abs(abs(ang) - 2 * math.pi / 3))
        return worst


@dataclass
class NetworkGeometry:
    curves: list[Polyline] = field(default_factory=list)
    rays: list[Ray] = field(default_factory=list)
    junctions: list[Junction] = field(default_factory=list)
    name: str = ""
    meta: dict = field(default_factory=dict)

    def herring_error(self) -> float:
        return max((j.herring_error() for j in self.junctions), default=0.0)

    def curve(self, label: str) -> list[Polyline]:
        return [c for c in self.curves if c.label == label]


# -- reconstruction --------------------------------------------------------


def sampling_step(e: Energy, max_ds: float | None = None) -> float:
    """Arc-length cap so that the tangent turns less than 0.5 degrees per sample."""
    _, k_max = turning_curvatures(e)
    cap = MAX_TURN / k_max
    return cap if max_ds is None else min(cap, max_ds)


def _unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


def reconstruct_arc(e: Energy, start: tuple[tuple[float, float], PhasePoint],
                    stop: FlowEvent | PhasePoint, sampling: float | None = None,
                    label: str = "") -> Polyline:
    """Integrate position and phase together from ``start = (position, point)``."""
    pos, p = start
    r = math.hypot(*pos)
    if abs(r - p.R) > 1e-10 * max(1.0, p.R):
        raise ValueError(f"|position| = {r} does not match R = {p.R}")
    theta0 = math.atan2(pos[1], pos[0])
    res = flow(e, p, stop, theta0=theta0, position=tuple(pos), record=True,
               max_step=sampling_step(e, sampling))
    tr = res.trace
    pts = np.array([[st.x, st.y] for st in tr])
    R = np.array([st.R for st in tr])
    psi = np.array([st.psi for st in tr])
    phi = np.array([st.phi for st in tr])
    k = pts[:, 0] * np.sin(phi) - pts[:, 1] * np.cos(phi)
    kind = "degenerate" if len(tr) == 1 else "arc"
    return Polyline(pts, R, psi, k, np.array([st.theta for st in tr]), phi,
                    np.array([st.s for st in tr]), label, 1, kind)


def _degenerate(pos: np.ndarray, p: PhasePoint, theta: float, label: str) -> Polyline:
    one = np.ones(1)
    phi = theta + p.psi
    return Polyline(pos.reshape(1, 2).copy(), p.R * one, p.psi * one, p.k * one, theta * one,
                    phi * one, 0.0 * one, label, 1, "degenerate")


@dataclass
class _Chain:
    edges: list[Polyline]
    rays: list[Ray]             # rays[i] sits between edges[i] and edges[i + 1]


def _build_chain(e: Energy, path: TrajectoryPath, psi_start: float, pos0: np.ndarray,
                 sampling: float | None, label: str) -> _Chain:
    S, E = end_points(e, path, psi_start)
    pos = np.asarray(pos0, dtype=float)
    theta = math.atan2(pos[1], pos[0])
    edges, rays = [], []
    for i, (a, b) in enumerate(path.arcs):
        p, q = _label_point(e, a, S, E), _label_point(e, b, S, E)
        if a == b:
            edge = _degenerate(pos, p, theta, label)
        else:
            edge = reconstruct_arc(e, (tuple(pos), p), q, sampling, label)
        edges.append(edge)
        pos = edge.end.copy()
        theta = float(edge.theta[-1])
        if i + 1 < len(path.arcs):
            rays.append(Ray(tuple(pos), tuple(_unit(pos)), 1))
    return _Chain(edges, rays)


def _chain_transformed(ch: _Chain, how: str) -> _Chain:
    if how == "mirror":
        edges = [ed.transformed("mirror") for ed in ch.edges]
        rays = [Ray((r.origin[0], -r.origin[1]), (r.direction[0], -r.direction[1])) for r in ch.rays]
        return _Chain(edges, rays)
    edges = [ed.transformed("point") for ed in reversed(ch.edges)]
    rays = [Ray((-r.origin[0], -r.origin[1]), (-r.direction[0], -r.direction[1]))
            for r in reversed(ch.rays)]
    return _Chain(edges, rays)


def _segment(p0: np.ndarray, p1: np.ndarray, label: str) -> Polyline:
    """Straight inner curve from ``p0`` through the origin to ``p1``."""
    pts = np.array([p0, [0.0, 0.0], p1])
    d = np.linalg.norm(p1 - p0)
    phi = math.atan2(*(p1 - p0)[::-1])
    z = np.zeros(3)
    return Polyline(pts, np.linalg.norm(pts, axis=1), np.array([math.pi, math.pi / 2, 0.0]), z,
                    np.array([0.0, math.nan, math.pi]), np.full(3, phi),
                    np.array([0.0, np.linalg.norm(p0), d]), label, 1, "segment")


def _merge_rays(rays: Sequence[Ray], tol: float = 1e-9) -> list[Ray]:
    out: list[Ray] = []
    for r in rays:
        for i, q in enumerate(out):
            if (math.dist(r.origin, q.origin) < tol and
                    math.dist(r.direction, q.direction) < tol):
                out[i] = Ray(q.origin, q.direction, q.multiplicity + r.multiplicity)
                break
        else:
            out.append(r)
    return out


def _chain_junctions(ch: _Chain, label: str) -> list[Junction]:
    out = []
    for i, r in enumerate(ch.rays):
        a, b = ch.edges[i], ch.edges[i + 1]
        out.append(Junction(r.origin, (tuple(-a.t_end), r.direction, tuple(b.t_start)),
                            f"{label}{i + 1}"))
    return out


def assemble_network(sol: ShrinkerSolution, sampling: float | None = None,
                     gap_tol: float = 1e-6) -> NetworkGeometry:
    """Physical network of a catalog solution.

    Raises :class:`ClosureError` if the upper curve ends farther than
    ``gap_tol`` from the end junction.
    """
    if sol.residual >= 1e-9:
        raise ValueError(f"{sol.name}: closure residual {sol.residual} too large to assemble")
    e = sol.c_up
    S = np.array([sol.R_start, 0.0])
    E = np.array([-sol.R_end, 0.0])
    up = _build_chain(e, sol.path_up, sol.psi_up, S, sampling, "up")
    gap = float(np.linalg.norm(up.edges[-1].end - E))
    if gap > gap_tol:
        raise ClosureError(f"{sol.name}: upper curve misses E by {gap:.3e}", gap)
    down = _chain_transformed(up, sol.construction)
    for ed in down.edges:
        ed.label = "down"
    inner = _segment(S, E, "in")
    curves = [ed for ed in up.edges if ed.kind != "degenerate"] + [inner] + \
             [ed for ed in down.edges if ed.kind != "degenerate"]
    junctions = [
        Junction(tuple(S), (tuple(up.edges[0].t_start), tuple(inner.t_start),
                            tuple(down.edges[0].t_start)), "S"),
        Junction(tuple(E), (tuple(-up.edges[-1].t_end), tuple(-inner.t_end),
                            tuple(-down.edges[-1].t_end)), "E"),
    ] + _chain_junctions(up, "up") + _chain_junctions(down, "down")
    rays = _merge_rays(up.rays + down.rays)
    theta_up = sum(float(ed.theta[-1] - ed.theta[0]) for ed in up.edges)
    meta = {
        "c": e.c, "construction": sol.construction, "closure_gap": gap,
        "theta_up_flow": theta_up, "R_start": sol.R_start, "R_end": sol.R_end,
        "degenerate_edges": sum(ed.kind == "degenerate" for ed in up.edges + down.edges),
    }
    return NetworkGeometry(curves, rays, junctions, sol.name, meta)


# -- checks ----------------------------------------------------------------


def _hermite(p0, p1, m0, m1, t):
    t2, t3 = t * t, t * t * t
    return ((2 * t3 - 3 * t2 + 1) * p0 + (t3 - 2 * t2 + t) * m0 +
            (-2 * t3 + 3 * t2) * p1 + (t3 - t2) * m1)


def _distance_to_curve(pts: np.ndarray, c: Polyline) -> np.ndarray:
    """Distance from each point to the cubic Hermite interpolant of ``c``."""
    P = c.points
    tang = np.column_stack([np.cos(c.phi), np.sin(c.phi)])
    ds = np.diff(c.s)
    out = np.empty(len(pts))
    for i, p in enumerate(pts):
        j = int(np.argmin(np.sum((P - p) ** 2, axis=1)))
        best = float(np.linalg.norm(P[j] - p))
        for a in (j - 1, j):
            if a < 0 or a + 1 >= len(P):
                continue
            m0, m1 = tang[a] * ds[a], tang[a + 1] * ds[a]
            f = lambda t: float(np.sum((_hermite(P[a], P[a + 1], m0, m1, t) - p) ** 2))
            r = minimize_scalar(f, bounds=(0.0, 1.0), method="bounded",
                                options={"xatol": 1e-12})
            best = min(best, math.sqrt(max(r.fun, 0.0)))
        out[i] = best
    return out


def hausdorff(a: Polyline, b: Polyline) -> float:
    """Symmetric Hausdorff distance, measured against Hermite interpolants."""
    return float(max(np.max(_distance_to_curve(a.points, b)),
                     np.max(_distance_to_curve(b.points, a))))


def _joined(edges: Sequence[Polyline]) -> Polyline:
    arcs = [ed for ed in edges if ed.kind == "arc"]
    cat = lambda name: np.concatenate([getattr(ed, name) for ed in arcs])
    s_parts, off = [], 0.0
    for ed in arcs:
        s_parts.append(ed.s - ed.s[0] + off)
        off = s_parts[-1][-1] + 1e-300
    return Polyline(cat("points"), cat("R"), cat("psi"), cat("k"), cat("theta"), cat("phi"),
                    np.concatenate(s_parts), arcs[0].label if arcs else "", 1, "arc")


def _hausdorff_edges(a: Sequence[Polyline], b: Sequence[Polyline]) -> float:
    """Hausdorff distance between two unions of arcs, each piece interpolated on its own."""
    a = [x for x in a if x.kind == "arc"]
    b = [x for x in b if x.kind == "arc"]

    def one_way(src, dst):
        worst = 0.0
        for x in src:
            d = np.min(np.vstack([_distance_to_curve(x.points, y) for y in dst]), axis=0)
            worst = max(worst, float(np.max(d)))
        return worst
    return max(one_way(a, b), one_way(b, a))


def mirror_symmetry_distance(sol: ShrinkerSolution, net: NetworkGeometry | None = None,
                             sampling: float | None = None) -> float:
    """Hausdorff distance between the lower curve and the reflected upper curve.

    The lower curve is integrated on its own here: the upper path is flowed
    counterclockwise from E (polar angle pi), which traces the lower curve
    from E back to S when the network is symmetric.  Only meaningful for
    solutions with ``R_start = R_end``.
    """
    if net is None:
        net = assemble_network(sol, sampling)
    E = np.array([-sol.R_end, 0.0])
    low = _build_chain(sol.c_up, sol.path_up, sol.psi_up, E, sampling, "down")
    reflected = [ed.transformed("mirror") for ed in net.curve("up")]
    return _hausdorff_edges(low.edges, reflected)


def star_shaped_probe(net: NetworkGeometry, n_dir: int = 4096) -> dict:
    """Count boundary crossings of ``n_dir`` rays from the origin.

    The outer boundary (upper and lower curves) is star-shaped with respect to
    the origin iff every direction meets it exactly once.
    """
    counts = np.zeros(n_dir, dtype=int)
    # offset by half a bin so no probe runs exactly through a junction on the x-axis
    alphas = 2 * math.pi * (np.arange(n_dir) + 0.5) / n_dir
    for c in net.curves:
        if c.label not in ("up", "down") or c.kind != "arc":
            continue
        ang = np.unwrap(np.arctan2(c.points[:, 1], c.points[:, 0]))
        lo, hi = np.minimum(ang[:-1], ang[1:]), np.maximum(ang[:-1], ang[1:])
        for a0, a1 in zip(lo, hi):
            # directions alpha + 2 pi m in [a0, a1); half-open so shared ends count once
            m0 = math.ceil((a0 - alphas.max()) / (2 * math.pi)) - 1
            for m in range(m0, m0 + 3 + int((a1 - a0) // (2 * math.pi))):
                t = alphas + 2 * math.pi * m
                counts += (t >= a0) & (t < a1)
    return {"directions": n_dir, "min_hits": int(counts.min()), "max_hits": int(counts.max()),
            "single_valued": bool(np.all(counts == 1))}


# -- export ----------------------------------------------------------------


def _fl(v: float) -> float:
    return float(v)


def to_json_dict(net: NetworkGeometry) -> dict:
    def pts(a):
        return [[_fl(x), _fl(y)] for x, y in a]
    return {
        "schema": SCHEMA_NET,
        "name": net.name,
        "curves": [{
            "label": c.label, "kind": c.kind, "multiplicity": c.multiplicity,
            "points": pts(c.points),
            "R": [_fl(v) for v in c.R], "psi": [_fl(v) for v in c.psi], "k": [_fl(v) for v in c.k],
        } for c in net.curves],
        "rays": [{"origin": [_fl(v) for v in r.origin], "direction": [_fl(v) for v in r.direction],
                  "multiplicity": r.multiplicity} for r in net.rays],
        "junctions": [{"label": j.label, "point": [_fl(v) for v in j.point],
                       "directions": [[_fl(v) for v in d] for d in j.directions]}
                      for j in net.junctions],
        "meta": {k: v for k, v in sorted(net.meta.items())},
    }


def dumps(obj) -> str:
    """Deterministic JSON; floats use Python's shortest round-trip repr."""
    return json.dumps(obj, sort_keys=True, indent=1, allow_nan=False, ensure_ascii=False) + "\n"


def to_json(net: NetworkGeometry) -> str:
    return dumps(to_json_dict(net))


def from_json(text: str) -> NetworkGeometry:
    d = json.loads(text)
    if d.get("schema") != SCHEMA_NET:
        raise ValueError(f"unsupported schema {d.get('schema')!r}")
    curves = []
    for c in d["curves"]:
        p = np.array(c["points"], dtype=float).reshape(-1, 2)
        n = len(p)
        nan = np.full(n, math.nan)
        curves.append(Polyline(p, np.array(c["R"]), np.array(c["psi"]), np.array(c["k"]),
                               nan, nan.copy(), nan.copy(), c["label"], c["multiplicity"],
                               c["kind"]))
    rays = [Ray(tuple(r["origin"]), tuple(r["direction"]), r["multiplicity"]) for r in d["rays"]]
    juncs = [Junction(tuple(j["point"]), tuple(tuple(x) for x in j["directions"]), j["label"])
             for j in d["junctions"]]
    return NetworkGeometry(curves, rays, juncs, d["name"], d.get("meta", {}))


def _ray_end(r: Ray, extent: float):
    o, dvec = np.asarray(r.origin), np.asarray(r.direction)
    # solve |o + t d| = extent for t >= 0
    b = float(o @ dvec)
    disc = b * b - (float(o @ o) - extent * extent)
    if disc < 0:
        return None
    t = -b + math.sqrt(disc)
    if t <= 0:
        return None
    return o + t * dvec


def to_svg(net: NetworkGeometry, ray_extent: float = 3.0, unit_circle: bool = False,
           size: int = 480) -> str:
    """SVG 1.1 drawing: regions, curves, rays clipped at ``ray_extent``, junctions, origin."""
    f = lambda v: f"{v:.6f}"
    half = 1.1 * max([ray_extent, 1.0] + [float(np.max(np.abs(c.points))) for c in net.curves])
    lines = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{size}" height="{size}" viewBox="{f(-half)} {f(-half)} {f(2 * half)} {f(2 * half)}">',
        f"<title>{net.name or 'network'}</title>",
        f'<g transform="scale(1,-1)" fill="none" stroke-linecap="round" '
        f'stroke-width="{f(half / 200)}">',
    ]
    ups, downs, inner = net.curve("up"), net.curve("down"), net.curve("in")
    if ups and downs and inner:
        seg = inner[0].points
        for name, group in (("upper", ups), ("lower", downs)):
            pts = np.vstack([c.points for c in group] + [seg[::-1]])
            d = "M " + " L ".join(f"{f(x)} {f(y)}" for x, y in pts) + " Z"
            lines.append(f'<path class="region" data-region="{name}" d="{d}" '
                         'fill="#dde8f5" fill-opacity="0.6" stroke="none"/>')
    if unit_circle:
        lines.append(f'<circle class="unit-circle" cx="0" cy="0" r="1" stroke="#999999" '
                     f'stroke-dasharray="{f(half / 80)}"/>')
    for c in net.curves:
        if len(c.points) < 2:
            continue
        d = "M " + " L ".join(f"{f(x)} {f(y)}" for x, y in c.points)
        lines.append(f'<path class="curve" data-label="{c.label}" d="{d}" stroke="#1f3b73"/>')
    for r in net.rays:
        end = _ray_end(r, ray_extent)
        if end is None:
            continue
        w = f(half / 200 * (1 + r.multiplicity))
        lines.append(f'<line class="ray" data-multiplicity="{r.multiplicity}" '
                     f'x1="{f(r.origin[0])}" y1="{f(r.origin[1])}" x2="{f(end[0])}" y2="{f(end[1])}" '
                     f'stroke="#b03a2e" stroke-width="{w}"><title>ray, multiplicity '
                     f'{r.multiplicity}</title></line>')
    for j in net.junctions:
        lines.append(f'<circle class="junction" data-label="{j.label}" cx="{f(j.point[0])}" '
                     f'cy="{f(j.point[1])}" r="{f(half / 120)}" fill="#000000" stroke="none"/>')
    lines.append(f'<circle class="origin" cx="0" cy="0" r="{f(half / 150)}" fill="none" '
                 'stroke="#444444"/>')
    lines += ["</g>", "</svg>", ""]
    return "\n".join(lines)


def export(net: NetworkGeometry, fmt: str, path=None, **options) -> str:
    """Render ``net`` as ``"svg"`` or ``"json"``; write to ``path`` when given."""
    fmt = fmt.lower()
    if fmt == "svg":
        doc = to_svg(net, **options)
    elif fmt == "json":
        doc = to_json(net)
    else:
        raise ValueError(f"unknown export format {fmt!r}")
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(doc)
    return doc


__all__ = [
    "ClosureError", "Junction", "MAX_TURN", "NetworkGeometry", "Polyline", "Ray", "SCHEMA_NET",
    "assemble_network", "dumps", "export", "from_json", "hausdorff", "mirror_symmetry_distance",
    "reconstruct_arc", "sampling_step", "star_shaped_probe", "to_json", "to_json_dict", "to_svg",
]

"""Cell topologies, closure equations and the catalog of two-region shrinkers.

A smooth piece of a network boundary is written as a path on the phase
trajectory, e.g. ``SA->BA->BE``: flow from the start point S to A, jump to B
at a triple junction with a ray, flow on to A again, jump, and finish at the
end point E.  The polar angle swept along such a path is an integer
combination of the h functions

    h1 = dtheta(C->D), h2 = dtheta(D->A) = dtheta(B->C), h3 = dtheta(A->B)

and of the end corrections h1c = dtheta(S->D), h3c = dtheta(S->B) (start
point inside resp. outside the unit circle).
"""

from __future__ import annotations

import enum
import functools
import itertools
import math
import re
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping

import numpy as np
from scipy.optimize import brentq

from .angles import delta_theta, delta_theta_PA, h_circ_psi, h_triple, period
from .config import C_BAR, C_HAT, C_STAR, TOL
from .phase_plane import (Branch, DomainError, Energy, K, PhasePoint, UndefinedPointError,
                          special_point)

SCHEMA_CATALOG = "shrinker-catalog/1"
SYMBOLS = ("h1", "h2", "h3", "h1c", "h3c", "pa")
_TERM_TEX = {"h1": "h1", "h2": "h2", "h3": "h3", "h1c": "h1°", "h3c": "h3°", "pa": "dtheta_PA"}

PI = math.pi


class NoRootError(RuntimeError):
    """The closure residual has no sign change on the bracket."""


class CatalogBuildError(RuntimeError):
    """A catalog case could not be solved."""


class AmbiguousRootWarning(UserWarning):
    """The residual is not monotone on the bracket, so uniqueness is not confirmed."""


class Region(enum.Enum):
    INSIDE = "inside"    # R < 1
    OUTSIDE = "outside"  # R > 1

    @property
    def branch(self) -> Branch:
        return Branch.LEFT if self is Region.INSIDE else Branch.RIGHT


# -- paths -----------------------------------------------------------------

_LABELS = ("S", "E", "A", "B", "C", "D")
_JUMPS = {("A", "B"), ("D", "C")}
# Ordinal position of each label along the counterclockwise cycle A->B->C->D->A.
# S and E sit half way inside the AB arc (outside) or the CD arc (inside).
_ORD = {"A": 0.0, "B": 1.0, "C": 2.0, "D": 3.0}


@dataclass(frozen=True)
class TrajectoryPath:
    """A piecewise path ``(start, end)`` arcs joined by junction jumps."""

    arcs: tuple[tuple[str, str], ...]
    start_region: Region = Region.INSIDE
    end_region: Region = Region.INSIDE

    def __post_init__(self):
        if not self.arcs:
            raise ValueError("a path needs at least one arc")
        for a, b in self.arcs:
            if a not in _LABELS or b not in _LABELS:
                raise ValueError(f"unknown label in arc {a}{b}")
        for (_, end), (start, _) in zip(self.arcs[:-1], self.arcs[1:]):
            if (end, start) not in _JUMPS:
                raise ValueError(f"junction jump {end}->{start} is not A->B or D->C")
        for i, (a, b) in enumerate(self.arcs):
            if a == "E" or b == "S":
                raise ValueError("S may only start and E may only end a path")
            if a == "S" and i != 0 or b == "E" and i != len(self.arcs) - 1:
                raise ValueError("S and E must be the path ends")

    @classmethod
    def parse(cls, text: str, start_region: Region = Region.INSIDE,
              end_region: Region = Region.INSIDE) -> "TrajectoryPath":
        """``"SA->BA->BE"`` (``→`` is accepted too)."""
        parts = [p.strip() for p in re.split(r"->|→", text)]
        arcs = []
        for p in parts:
            if len(p) != 2:
                raise ValueError(f"bad arc {p!r} in {text!r}")
            arcs.append((p[0], p[1]))
        return cls(tuple(arcs), start_region, end_region)

    @property
    def notation(self) -> str:
        return "->".join(a + b for a, b in self.arcs)

    @property
    def n_junctions(self) -> int:
        return len(self.arcs) - 1

    def _ord(self, label: str) -> float:
        if label == "S":
            return 2.5 if self.start_region is Region.INSIDE else 0.5
        if label == "E":
            return 2.5 if self.end_region is Region.INSIDE else 0.5
        return _ORD[label]

    def _pos(self, label: str) -> np.ndarray:
        """Symbolic cycle position of a label as coefficients on SYMBOLS."""
        h1, h2, h3, h1c, h3c, _ = np.eye(6, dtype=int)
        base = {"A": 0 * h1, "B": h3, "C": h3 + h2, "D": h3 + h2 + h1}
        if label in base:
            return base[label]
        inside = (self.start_region if label == "S" else self.end_region) is Region.INSIDE
        if label == "S":
            return base["D"] - h1c if inside else base["B"] - h3c
        return base["C"] + h1c if inside else base["A"] + h3c

    def coefficients(self) -> dict[str, int]:
        """Symbolic angle sum of the path as integer coefficients on SYMBOLS."""
        h1, h2, h3 = np.eye(6, dtype=int)[:3]
        T = h1 + 2 * h2 + h3
        total = np.zeros(6, dtype=int)
        for a, b in self.arcs:
            if a == b or {a, b} == {"S", "E"}:
                if {a, b} == {"S", "E"}:
                    raise ValueError("a direct S->E arc has no h-form")
                continue  # degenerate (zero length) arc
            d = self._pos(b) - self._pos(a)
            if self._ord(b) <= self._ord(a):
                d = d + T
            total += d
        if np.any(total < 0):
            raise ArithmeticError(f"negative coefficient in {self.notation}")
        return {s: int(v) for s, v in zip(SYMBOLS, total) if v}

    def expression(self) -> str:
        return format_combination(self.coefficients())


def format_combination(coeffs: Mapping[str, int | Fraction]) -> str:
    """``{'h1c': 2, 'h1': 1, 'h2': 4}`` -> ``"2h1°+h1+4h2"`` in the table's term order."""
    order = ("h1c", "h1", "h2", "h3", "h3c", "pa")
    out = []
    for s in order:
        v = coeffs.get(s, 0)
        if not v:
            continue
        out.append(("" if v == 1 else str(v)) + _TERM_TEX[s])
    return "+".join(out) or "0"


# -- the bottom-cell table -------------------------------------------------

REGION_COLUMNS = {
    "in/in": (Region.INSIDE, Region.INSIDE),
    "mixed": (Region.INSIDE, Region.OUTSIDE),
    "out/out": (Region.OUTSIDE, Region.OUTSIDE),
}


@dataclass(frozen=True)
class TableRow:
    cell: int
    paths: tuple[str, ...]
    sums: dict  # column name -> expression string

    def path_objects(self, column: str) -> list[TrajectoryPath]:
        s, e = REGION_COLUMNS[column]
        return [TrajectoryPath.parse(p, s, e) for p in self.paths]


def _all_paths(n_arcs: int) -> list[str]:
    out = []
    for ends in itertools.product("AD", repeat=n_arcs - 1):
        arcs, start = [], "S"
        for end in ends:
            arcs.append(start + end)
            start = "B" if end == "A" else "C"
        arcs.append(start + "E")
        out.append("->".join(arcs))
    return out


def enumerate_paths(bottom_cell_size: int) -> list[TableRow]:
    """All junction sequences of a bottom cell with ``bottom_cell_size`` edges.

    The cell consists of the inner curve plus ``bottom_cell_size - 1`` arcs, so
    the path has ``bottom_cell_size - 2`` junctions.  Paths with equal angle sums
    are grouped, groups ordered by increasing h2 count.  A 2-cell is a single
    S->E arc with no h-form; it is returned as one row with empty sums.
    """
    if bottom_cell_size not in (2, 3, 4, 5):
        raise ValueError("bottom cell size must be 2, 3, 4 or 5")
    if bottom_cell_size == 2:
        return [TableRow(2, ("SE",), {})]
    groups: dict[tuple, list[str]] = {}
    for p in _all_paths(bottom_cell_size - 1):
        key = tuple(sorted(TrajectoryPath.parse(p).coefficients().items()))
        groups.setdefault(key, []).append(p)
    rows = []
    for key in sorted(groups, key=lambda k: dict(k).get("h2", 0)):
        paths = tuple(sorted(groups[key]))
        sums = {}
        for col, (s, e) in REGION_COLUMNS.items():
            sums[col] = TrajectoryPath.parse(paths[0], s, e).expression()
        rows.append(TableRow(bottom_cell_size, paths, sums))
    return rows


# -- numeric angle sums ----------------------------------------------------


def end_points(e: Energy, path: TrajectoryPath, psi_start: float) -> tuple[PhasePoint, PhasePoint]:
    """Phase points of S (at ``psi_start`` in [pi/3, pi/2]) and of the mirrored E."""
    if not (PI / 3 - 1e-12 <= psi_start <= PI / 2 + 1e-12):
        raise DomainError("the start angle must lie in [pi/3, pi/2]")
    if not e.has_junction_points:
        raise UndefinedPointError(f"A, B, C, D undefined for c={e.c} < c*")
    psi_start = min(max(psi_start, PI / 3), PI / 2)
    S = PhasePoint.at_psi(e, psi_start, path.start_region.branch)
    E = PhasePoint.at_psi(e, PI - psi_start, path.end_region.branch)
    return S, E


def _label_point(e: Energy, label: str, S: PhasePoint, E: PhasePoint) -> PhasePoint:
    if label == "S":
        return S
    if label == "E":
        return E
    return special_point(e, label)


def angle_sum_psi(path: TrajectoryPath, e: Energy, psi_start: float,
                  engine: Callable = delta_theta) -> float:
    """Total polar angle swept along ``path`` with the start point at ``psi_start``."""
    S, E = end_points(e, path, psi_start)
    total = 0.0
    for a, b in path.arcs:
        if a == b:
            continue
        p, q = _label_point(e, a, S, E), _label_point(e, b, S, E)
        total += engine(e, p, q)
    return total


def angle_sum(path: TrajectoryPath, e: Energy, R_start: float,
              engine: Callable = delta_theta) -> float:
    """Total polar angle swept along ``path`` starting from radius ``R_start``.

    The start point is ``P(R_start)`` on the lower half of the trajectory;
    the region of ``path`` must match the side of the unit circle.
    """
    if (R_start < 1.0) != (path.start_region is Region.INSIDE):
        raise DomainError(f"R_start={R_start} does not lie in the {path.start_region.value} region")
    s = K(R_start) / e.c
    if s > 1.0 + 1e-12:
        raise DomainError(f"R_start={R_start} is not on the trajectory c={e.c}")
    return angle_sum_psi(path, e, math.asin(min(s, 1.0)), engine)


def symbol_values(e: Energy, psi_start: float = PI / 3, R_pa: float | None = None) -> dict[str, float]:
    """Numeric values of all SYMBOLS at energy ``e``."""
    h = h_triple(e)
    h1c, h3c = h_circ_psi(e, psi_start)
    vals = {"h1": h.h1, "h2": h.h2, "h3": h.h3, "h1c": h1c, "h3c": h3c}
    if R_pa is not None:
        vals["pa"] = delta_theta_PA(e, R_pa)
    return vals


# -- closure equations -----------------------------------------------------


@dataclass(frozen=True)
class ClosureEquation:
    """``sum coeffs[s] * s = target * pi`` as a function of the energy.

    ``psi_start`` fixes the start point used by the h1c/h3c terms and
    ``R_pa`` the radius of the dtheta_PA term.
    """

    coeffs: Mapping[str, Fraction]
    target: Fraction = Fraction(1)
    bracket: tuple[float, float] = (C_STAR + 1e-9, C_BAR)
    psi_start: float = PI / 3
    R_pa: float | None = None

    def __post_init__(self):
        clean = {}
        for s, v in dict(self.coeffs).items():
            if s not in SYMBOLS:
                raise ValueError(f"unknown term {s!r}")
            v = Fraction(v)
            if v < 0:
                raise ValueError("closure coefficients must be non-negative")
            if v:
                clean[s] = v
        if not clean:
            raise ValueError("empty closure equation")
        if "pa" in clean and self.R_pa is None:
            raise ValueError("a dtheta_PA term needs R_pa")
        object.__setattr__(self, "coeffs", clean)
        object.__setattr__(self, "target", Fraction(self.target))
        lo, hi = self.bracket
        if not lo < hi:
            raise ValueError("bracket must satisfy lo < hi")

    _TERM = re.compile(r"^\s*(?:(\d+(?:\.\d+)?(?:/\d+)?)\s*\*?\s*)?(h1|h2|h3)\s*$")
    _TARGET = re.compile(r"^\s*(?:(\d+(?:\.\d+)?(?:/\d+)?)\s*\*?\s*)?pi\s*$")

    @classmethod
    def parse(cls, text: str, bracket: tuple[float, float] | None = None) -> "ClosureEquation":
        """Parse ``"a*h1+b*h2+c*h3=K*pi"`` (coefficients may be decimals or fractions)."""
        if text.count("=") != 1:
            raise ValueError(f"equation needs exactly one '=': {text!r}")
        lhs, rhs = text.split("=")
        coeffs: dict[str, Fraction] = {}
        for term in lhs.split("+"):
            m = cls._TERM.match(term)
            if not m:
                raise ValueError(f"cannot parse term {term!r}")
            coeffs[m.group(2)] = coeffs.get(m.group(2), Fraction(0)) + Fraction(m.group(1) or 1)
        m = cls._TARGET.match(rhs)
        if not m:
            raise ValueError(f"right-hand side must be K*pi, got {rhs!r}")
        kw = {} if bracket is None else {"bracket": bracket}
        return cls(coeffs, Fraction(m.group(1) or 1), **kw)

    def __str__(self) -> str:
        lhs = "+".join(("" if v == 1 else f"{v}*") + s for s, v in self.coeffs.items())
        t = self.target
        return f"{lhs}={'' if t == 1 else f'{t}*'}pi"

    def lhs(self, c: float) -> float:
        e = Energy(c)
        need_circ = "h1c" in self.coeffs or "h3c" in self.coeffs
        h = h_triple(e)
        vals = {"h1": h.h1, "h2": h.h2, "h3": h.h3}
        if need_circ:
            vals["h1c"], vals["h3c"] = h_circ_psi(e, self.psi_start)
        if "pa" in self.coeffs:
            vals["pa"] = delta_theta_PA(e, self.R_pa)
        return sum(float(v) * vals[s] for s, v in self.coeffs.items())

    def residual(self, c: float) -> float:
        return self.lhs(c) - float(self.target) * PI


@dataclass(frozen=True)
class ClosureRoot:
    c: float
    residual: float
    iterations: int
    monotone: bool


def solve_closure(eq: ClosureEquation, scan: int = 64, xtol: float = TOL.root_xtol) -> ClosureRoot:
    """Bracketed Brent root of ``eq.residual`` with a monotonicity pre-scan.

    Raises :class:`NoRootError` when the bracket ends share a sign.  A
    residual that is not monotone on the scan grid triggers an
    :class:`AmbiguousRootWarning` and ``monotone=False`` on the result.
    """
    lo, hi = eq.bracket
    r_lo, r_hi = eq.residual(lo), eq.residual(hi)
    if r_lo == 0.0:
        return ClosureRoot(lo, 0.0, 0, True)
    if r_hi == 0.0:
        return ClosureRoot(hi, 0.0, 0, True)
    if r_lo * r_hi > 0:
        raise NoRootError(f"{eq}: no sign change on [{lo}, {hi}] "
                          f"(residuals {r_lo:.6g}, {r_hi:.6g})")
    grid = np.geomspace(lo, hi, scan)
    vals = np.array([eq.residual(float(c)) for c in grid])
    d = np.diff(vals)
    monotone = bool(np.all(d > 0) or np.all(d < 0))
    if not monotone:
        warnings.warn(f"{eq}: residual not monotone on [{lo}, {hi}]; uniqueness not confirmed",
                      AmbiguousRootWarning, stacklevel=2)
    # narrow to the scan cell holding the sign change
    idx = int(np.flatnonzero(np.sign(vals[:-1]) != np.sign(vals[1:]))[0])
    a, b = float(grid[idx]), float(grid[idx + 1])
    if vals[idx] == 0.0:
        return ClosureRoot(a, 0.0, 0, monotone)
    root, info = brentq(eq.residual, a, b, xtol=xtol, rtol=4 * np.finfo(float).eps,
                        maxiter=200, full_output=True)
    return ClosureRoot(root, eq.residual(root), info.iterations, monotone)


# -- solutions -------------------------------------------------------------


@dataclass(frozen=True)
class LineSegment:
    """Marker for a straight inner curve through the origin."""

    through_origin: bool = True

    @property
    def notation(self) -> str:
        return "segment"


@dataclass(frozen=True)
class Infinite:
    """Energy marker of a straight line (the c -> infinity limit of AL-curves)."""

    def __str__(self) -> str:
        return "inf"


@dataclass(frozen=True)
class ShrinkerSolution:
    name: str
    path_up: TrajectoryPath
    gamma_in: LineSegment | TrajectoryPath
    path_down: TrajectoryPath
    construction: str  # "mirror" (x-axis reflection) or "point" (origin symmetry)
    equation: ClosureEquation
    c_up: Energy
    c_in: Energy | Infinite
    c_down: Energy
    psi_up: float
    psi_in: float
    psi_down: float
    R_start: float
    R_end: float
    theta_up: float
    theta_in: float
    theta_down: float
    residual: float
    iterations: int = 0
    monotone: bool = True
    multiplicity_notes: tuple[str, ...] = ()
    notes: tuple[str, ...] = ()

    def invariant_errors(self) -> dict[str, float]:
        """Deviation of each defining identity; all should be ~0."""
        psi_end_up = PI - self.psi_up
        return {
            "psi_in": abs(self.psi_in - (self.psi_up + 2 * PI / 3)),
            "psi_down": abs(self.psi_down - (2 * PI / 3 - self.psi_up)),
            "energy_start_end": abs(K(self.R_start) - K(self.R_end)),
            "energy_up_start": abs(K(self.R_start) - self.c_up.c * math.sin(self.psi_up)),
            "energy_up_end": abs(K(self.R_end) - self.c_up.c * math.sin(psi_end_up)),
            "theta_up_in": abs(self.theta_up - self.theta_in),
            "theta_down": abs(self.theta_up - (2 * PI - self.theta_down)),
        }

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "equation": str(self.equation),
            "path_up": self.path_up.notation,
            "gamma_in": self.gamma_in.notation,
            "path_down": self.path_down.notation,
            "construction": self.construction,
            "c": self.c_up.c,
            "eta": self.c_up.eta,
            "c_in": "inf" if isinstance(self.c_in, Infinite) else self.c_in.c,
            "psi_up": self.psi_up,
            "psi_in": self.psi_in,
            "psi_down": self.psi_down,
            "R_start": self.R_start,
            "R_end": self.R_end,
            "theta_up": self.theta_up,
            "theta_in": self.theta_in,
            "theta_down": self.theta_down,
            "residual": self.residual,
            "monotone_bracket": self.monotone,
            "multiplicity_notes": list(self.multiplicity_notes),
            "notes": list(self.notes),
        }


@dataclass(frozen=True)
class CaseSpec:
    name: str
    path_up: str
    start_region: Region
    end_region: Region
    construction: str
    bracket: tuple[float, float]
    notes: tuple[str, ...] = ()


_LO = C_STAR + 1e-9

#: The Cisgeminate eye and the six degenerate shrinkers.  The equation of
#: each case is derived from its path (start at D or A, psi_up = pi/3).
CASES: tuple[CaseSpec, ...] = (
    CaseSpec("cisgeminate-eye", "SA->BA->BE", Region.INSIDE, Region.INSIDE, "mirror",
             (_LO, C_BAR), ("start point S = D, end point E = C",)),
    CaseSpec("heart", "DD->CB", Region.INSIDE, Region.OUTSIDE, "mirror", (_LO, 50.0)),
    CaseSpec("broken-lens", "DD->CA->BC", Region.INSIDE, Region.INSIDE, "point",
             (_LO, C_HAT), ("bracket upper end e^0.19: h1+2h2 exceeds pi there and tends "
                            "back to pi as c grows",)),
    CaseSpec("cat", "AA->BA->BB", Region.OUTSIDE, Region.OUTSIDE, "mirror", (_LO, C_HAT)),
    CaseSpec("half-lens", "DD->CA->BC", Region.INSIDE, Region.INSIDE, "mirror", (_LO, C_HAT),
             ("equation assignment inferred from the path structure (mirror copy of the "
              "broken-lens upper curve), not stated one-to-one in the source",)),
    CaseSpec("fox", "AA->BA->BC", Region.OUTSIDE, Region.INSIDE, "mirror", (_LO, C_BAR),
             ("energy lies in I_A",)),
    CaseSpec("half-4-ray-star", "DD->CD->CD->CC", Region.INSIDE, Region.INSIDE, "mirror",
             (_LO, 50.0)),
)

CASE_NAMES = tuple(cs.name for cs in CASES)


def case_equation(cs: CaseSpec) -> ClosureEquation:
    path = TrajectoryPath.parse(cs.path_up, cs.start_region, cs.end_region)
    coeffs = path.coefficients()
    # psi_up = pi/3 puts S on D (or A) and E on C (or B), so the end corrections vanish
    coeffs = {s: v for s, v in coeffs.items() if s not in ("h1c", "h3c")}
    return ClosureEquation(coeffs, Fraction(1), cs.bracket)


def _ray_multiplicities(path: TrajectoryPath, construction: str) -> tuple[str, ...]:
    if construction != "mirror":
        return ()
    notes = []
    if path.arcs[0][0] == path.arcs[0][1]:
        notes.append("ray at the start junction on the x-axis has multiplicity 2")
    if path.arcs[-1][0] == path.arcs[-1][1]:
        notes.append("ray at the end junction on the x-axis has multiplicity 2")
    return tuple(notes)


def solve_case(cs: CaseSpec) -> ShrinkerSolution:
    eq = case_equation(cs)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", AmbiguousRootWarning)
            root = solve_closure(eq)
    except (NoRootError, DomainError, ArithmeticError, RuntimeError) as exc:
        raise CatalogBuildError(f"case {cs.name!r} ({eq}): {exc}") from exc
    e = Energy(root.c)
    path_up = TrajectoryPath.parse(cs.path_up, cs.start_region, cs.end_region)
    psi_up = PI / 3
    S = special_point(e, "D" if cs.start_region is Region.INSIDE else "A")
    E = special_point(e, "C" if cs.end_region is Region.INSIDE else "B")
    theta_up = angle_sum_psi(path_up, e, psi_up)
    if cs.construction == "mirror":
        path_down = path_up
    else:
        path_down = TrajectoryPath(path_up.arcs, cs.end_region, cs.start_region)
    degenerate = path_up.arcs[0][0] == path_up.arcs[0][1]
    notes = list(cs.notes)
    if degenerate:
        notes.append("first edge of the upper curve has zero length")
    return ShrinkerSolution(
        name=cs.name, path_up=path_up, gamma_in=LineSegment(), path_down=path_down,
        construction=cs.construction, equation=eq,
        c_up=e, c_in=Infinite(), c_down=e,
        psi_up=psi_up, psi_in=psi_up + 2 * PI / 3, psi_down=2 * PI / 3 - psi_up,
        R_start=S.R, R_end=E.R,
        theta_up=theta_up, theta_in=PI, theta_down=2 * PI - theta_up,
        residual=abs(root.residual), iterations=root.iterations, monotone=root.monotone,
        multiplicity_notes=_ray_multiplicities(path_up, cs.construction),
        notes=tuple(notes),
    )


def build_catalog(names: Iterable[str] | None = None) -> list[ShrinkerSolution]:
    """Solve the catalog cases (all seven by default) in catalog order."""
    wanted = CASE_NAMES if names is None else tuple(names)
    unknown = set(wanted) - set(CASE_NAMES)
    if unknown:
        raise KeyError(f"unknown catalog entries: {sorted(unknown)}")
    return [solve_case(cs) for cs in CASES if cs.name in wanted]


def catalog_json(solutions: list[ShrinkerSolution]) -> dict:
    return {"schema": SCHEMA_CATALOG, "count": len(solutions),
            "entries": [s.to_json() for s in solutions]}


# -- exclusion checks ------------------------------------------------------


@dataclass(frozen=True)
class ExclusionCheck:
    check_id: str
    description: str
    passed: bool
    margin: float  # smallest slack over the grid (positive = holds)
    witness: dict | None = None
    points: int = 1


@dataclass
class ExclusionReport:
    checks: list[ExclusionCheck] = field(default_factory=list)
    disclaimer: str = ("grid-based numerical confirmation of the exclusion inequalities; "
                       "not a proof")

    @property
    def passed(self) -> bool:
        return all(ch.passed for ch in self.checks)

    @property
    def violations(self) -> list[ExclusionCheck]:
        return [ch for ch in self.checks if not ch.passed]

    def to_json(self) -> dict:
        return {"disclaimer": self.disclaimer, "passed": self.passed,
                "checks": [{"id": c.check_id, "description": c.description, "passed": c.passed,
                            "margin": c.margin, "points": c.points, "witness": c.witness}
                           for c in self.checks]}


@dataclass(frozen=True)
class GridSpec:
    n_c: int = 128
    c_max: float = 8.0
    n_psi: int = 9


def _grid_check(check_id, description, points, slack_fn, strict=True) -> ExclusionCheck:
    """Worst slack of an inequality over ``points``.

    Non-strict checks (``strict=False``) accept equality up to 1e-12, for
    inequalities that become equalities on a closed end of the grid.
    """
    worst, witness = math.inf, None
    n = 0
    for pt in points:
        n += 1
        s = slack_fn(*pt)
        if s < worst:
            worst, witness = s, pt
    w = None if witness is None else {"point": [float(v) for v in witness]}
    ok = worst > 0 if strict else worst >= -1e-12
    return ExclusionCheck(check_id, description, ok, worst, w, n)


def _scalar_check(check_id, description, slack) -> ExclusionCheck:
    return ExclusionCheck(check_id, description, slack > 0, float(slack))


def _h(c):
    return h_triple(Energy(c))


def check_exclusions(grid: GridSpec = GridSpec()) -> ExclusionReport:
    """Evaluate every inequality used to rule out the non-catalog topologies."""
    from . import angles as ang  # local to keep the import graph flat

    cs = np.geomspace(C_STAR, grid.c_max, grid.n_c)
    cs_A = np.geomspace(C_STAR, C_BAR, max(grid.n_c // 2, 8))
    psis = np.linspace(PI / 3, PI / 2, grid.n_psi)[:-1]  # psi in [pi/3, pi/2)
    cpsi = [(float(c), float(p)) for c in cs for p in psis]
    rep = ExclusionReport()
    add = rep.checks.append

    hc = functools.lru_cache(maxsize=None)(lambda c, psi: h_circ_psi(Energy(c), psi))

    # outer start and end: 3-cell with both junctions outside
    add(_grid_check("out-out.h3c", "2 h3° > h3 for R_start = R_end > 1", cpsi,
                    lambda c, p: 2 * hc(c, p)[1] - _h(c).h3))
    add(_grid_check("out-out.h1+T", "h1 + T > 4pi/3", [(c,) for c in cs],
                    lambda c: _h(c).h1 + _h(c).T - 4 * PI / 3))
    # mixed start and end
    add(_grid_check("mixed.h1c+h3c", "h1° + h3° >= h3 for R_start < 1 < R_end", cpsi,
                    lambda c, p: sum(hc(c, p)) - _h(c).h3, strict=False))
    add(_grid_check("mixed.h1+h3", "(h1 + h3)(c) + 0.9947pi > 2pi on I_A", [(c,) for c in cs_A],
                    lambda c: _h(c).h1 + _h(c).h3 + 0.9947 * PI - 2 * PI))
    add(_scalar_check("mixed.constants", "0.9947 + 0.7027 + 1/3 > 2",
                      0.9947 + 0.7027 + 1 / 3 - 2))
    add(_scalar_check("mixed.h1(cbar)", "h1(c_bar) >= 0.7027pi", _h(C_BAR).h1 - 0.7027 * PI))
    add(_scalar_check("mixed.h3(cbar)", "h3(c_bar) >= pi/3", _h(C_BAR).h3 - PI / 3))
    # 5-cell bottom
    add(_grid_check("5cell.sum", "(h1 + 2h2) + 2h1 > 2pi on I_A", [(c,) for c in cs_A],
                    lambda c: 3 * _h(c).h1 + 2 * _h(c).h2 - 2 * PI))
    add(_scalar_check("5cell.constants", "0.7789 + 2 * 0.7027 > 2", 0.7789 + 2 * 0.7027 - 2))
    # 2-cell bottom, three cases
    psi_floor = math.asin(math.exp(-0.19))
    add(_scalar_check("2cell.a.constants",
                      "sqrt2 pi - (pi - 2*0.3568pi)/(1 - 0.6^2) + pi < 2pi",
                      2 * PI - (math.sqrt(2) * PI - (PI - 2 * 0.3568 * PI) / (1 - 0.36) + PI)))
    add(_scalar_check("2cell.a.psi", "psi_up >= 0.3099pi from sin psi >= e^-0.19",
                      psi_floor - 0.3099 * PI))
    add(_grid_check("2cell.a.grid",
                    "dtheta_SE < pi on a bottom 2-cell arc, psi_down in [pi/3, 0.3568pi], c < c_hat",
                    _two_cell_grid(), lambda c, p: PI - _two_cell_sweep(Energy(c), p)))
    add(_grid_check("2cell.b", "dtheta_MN < pi", [(float(c),) for c in np.geomspace(1.001, 8, 512)],
                    lambda c: PI - ang.delta_theta_MN(Energy(c))))
    add(_grid_check("2cell.c", "dtheta_MN > dtheta_NM and T/2 < pi/sqrt2", [(float(c),) for c in cs],
                    lambda c: min(ang.delta_theta_MN(Energy(c)) - ang.delta_theta_NM(Energy(c)),
                                  PI / math.sqrt(2) - period(Energy(c)) / 2)))
    add(_scalar_check("2cell.V(0.6)", "V(0.6) > 1.38", 0.36 - 2 * math.log(0.6) - 1.38))
    add(_grid_check("2cell.T", "T > 1.3194pi for eta < 1.38",
                    [(float(c),) for c in np.geomspace(C_STAR, C_HAT, 64)[:-1]],
                    lambda c: _h(c).T - 1.3194 * PI))
    add(_scalar_check("2cell.T.constants", "0.6123 + 1/sqrt2 > 1.3194",
                      0.6123 + 1 / math.sqrt(2) - 1.3194))
    # upper-curve window on I_A
    add(_grid_check("upper.window", "(h1 + 2h2 + 2 dtheta_NA)(c) > pi for c >= c_bar",
                    [(float(c),) for c in np.geomspace(C_BAR, grid.c_max, 32)],
                    lambda c: _h(c).h1 + 2 * _h(c).h2 + 2 * ang.delta_theta_NA(Energy(c)) - PI))
    psi_lo = _psi_up_floor()
    add(_scalar_check("upper.psi", "psi_up > 0.3307pi", psi_lo - 0.3307 * PI))
    add(_scalar_check("upper.theta", "pi/3 + 2 psi_up > 0.9947pi",
                      PI / 3 + 2 * psi_lo - 0.9947 * PI))
    # symmetric 3-ray star
    add(_grid_check("3ray-star", "h1 + 2h2 > 2pi/3", [(float(c),) for c in cs],
                    lambda c: _h(c).h1 + 2 * _h(c).h2 - 2 * PI / 3))
    # degenerate-case helpers
    add(_grid_check("lemma.2h1+h2", "2h1 + h2 > pi", [(float(c),) for c in cs],
                    lambda c: 2 * _h(c).h1 + _h(c).h2 - PI))
    add(_scalar_check("lemma.h1(chat)", "h1(c_hat) >= 0.5945pi", _h(C_HAT).h1 - 0.5945 * PI))
    add(_scalar_check("lemma.1.5", "(3/2)(pi/3) + pi/2 >= pi",
                      1.5 * (PI / 3) + PI / 2 - PI + 1e-300))
    return rep


def _two_cell_grid(n_psi: int = 6, n_c: int = 16) -> list[tuple[float, float]]:
    pts = []
    for p in np.linspace(PI / 3, 0.3568 * PI, n_psi):
        c_lo = 1.0 / math.sin(p) * (1 + 1e-9)
        pts += [(float(c), float(p)) for c in np.geomspace(c_lo, C_HAT, n_c)]
    return pts


def _two_cell_sweep(e: Energy, psi: float) -> float:
    """Polar angle of a bottom 2-cell arc from S (inside, at ``psi``) to E at ``pi - psi``."""
    S = PhasePoint.at_psi(e, psi, Branch.LEFT)
    E = PhasePoint.at_psi(e, PI - psi, Branch.LEFT)
    return delta_theta(e, S, E)


def _psi_up_floor() -> float:
    """Solve sin(psi + pi/3) / sin(psi) = c_bar / c_star for psi."""
    ratio = C_BAR / C_STAR
    return brentq(lambda p: math.sin(p + PI / 3) / math.sin(p) - ratio, 0.2, PI / 2, xtol=1e-15)


__all__ = [
    "AmbiguousRootWarning", "CASES", "CASE_NAMES", "CaseSpec", "CatalogBuildError",
    "ClosureEquation", "ClosureRoot", "ExclusionCheck", "ExclusionReport", "GridSpec",
    "Infinite", "LineSegment", "NoRootError", "REGION_COLUMNS", "Region", "SCHEMA_CATALOG",
    "SYMBOLS", "ShrinkerSolution", "TableRow", "TrajectoryPath", "angle_sum", "angle_sum_psi",
    "build_catalog", "case_equation", "catalog_json", "check_exclusions", "end_points",
    "enumerate_paths", "format_combination", "solve_case", "solve_closure", "symbol_values",
]

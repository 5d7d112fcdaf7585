"""Line-by-line reproduction of the printed bound tables and closed-form estimates.

Every printed constant becomes a :class:`BoundRow`.  Closed-form rows evaluate
the same elementary expression the printed digit was taken from; "true" rows
evaluate the underlying quantity with the quadrature engine and check that the
printed constant really bounds it.  Values are in units of pi unless the row
says otherwise.

Row status
----------
PASS     the claimed direction holds (closed-form rows may also sit within
         5e-5 of the printed digit on the loose side, the 4-decimal rule).
FAIL     the claimed direction is violated.
ERRATUM  the printed value fails but a documented corrected reading passes.
"""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .angles import delta_phi_k, delta_theta_MN, delta_theta_NA, h_triple, period
from .config import C_BAR, C_HAT, C_STAR
from .phase_plane import DomainError, Energy, K, V, k_min_of_eta, r_minus, r_plus

PI = math.pi
DIGITS = 5e-5  # half a unit in the 4th decimal, in units of pi
SCHEMA_VERIFY = "shrinker-verify/1"
LN_C_STAR = math.log(2.0 / math.sqrt(3.0))


class Relation(str, enum.Enum):
    # paper value is a lower bound: computed >= paper
    COMPUTED_EXCEEDS_BOUND = "ComputedExceedsBound"
    # paper value is an upper bound: computed < paper
    BOUND_HOLDS = "BoundHolds"


class Status(str, enum.Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    ERRATUM = "ERRATUM"


@dataclass(frozen=True)
class BoundRow:
    claim_id: str
    description: str
    paper_value: float
    computed_value: float
    relation: Relation
    margin: float
    kind: str  # "closed-form" | "true" | "arithmetic" | "edge"
    digits_agree: bool
    direction_holds: bool
    status: Status
    corrected_value: float | None = None
    note: str = ""

    def to_json(self) -> dict:
        d = asdict(self)
        d["relation"] = self.relation.value
        d["status"] = self.status.value
        return d


def _direction(relation: Relation, computed: float, paper: float, kind: str) -> tuple[float, bool]:
    if relation is Relation.COMPUTED_EXCEEDS_BOUND:
        margin = computed - paper
    else:
        margin = paper - computed
    # closed-form digits were truncated from the same expression: allow the
    # last-digit rounding; true quantities and arithmetic chains must be strict
    if kind == "closed-form":
        ok = margin >= -DIGITS
    elif kind == "edge":  # non-strict claim attained at a range end
        ok = margin >= -1e-12
    else:
        ok = margin > 0
    return margin, ok


def make_row(claim_id: str, description: str, paper: float, computed: float,
             relation: Relation = Relation.COMPUTED_EXCEEDS_BOUND, kind: str = "closed-form",
             corrected: float | None = None, note: str = "") -> BoundRow:
    margin, ok = _direction(relation, computed, paper, kind)
    status = Status.PASS if ok else Status.FAIL
    if not ok and corrected is not None and _direction(relation, computed, corrected, kind)[1]:
        status = Status.ERRATUM
    return BoundRow(claim_id, description, float(paper), float(computed), relation, float(margin), kind,
                    abs(computed - paper) <= DIGITS, ok, status, corrected, note)


# -- closed forms --------------------------------------------------------------


def bound_L_kmin(k_min: float) -> float:
    """``pi / sqrt(1 + 1/k_min)``, in units of pi."""
    return 1.0 / math.sqrt(1.0 + 1.0 / k_min)


def bound_L(eta: float) -> float:
    """Lower bound for ``2 int_{k_min}^1 dk / sqrt(eta - V)`` (units of pi)."""
    if eta <= 1.0:
        raise DomainError("bound_L needs eta > 1")
    return bound_L_kmin(k_min_of_eta(eta))


def eta_of_R_hat(R_hat: float) -> float:
    """Energy whose point A sits at radius ``R_hat``: ``K(R_hat) = sqrt3/2 c``."""
    return R_hat * R_hat - 2.0 * math.log(R_hat) + 2.0 * LN_C_STAR


def kappa(R_hat: float) -> float:
    return math.sqrt(2.0 * math.log(R_hat) - 2.0 * LN_C_STAR + 1.0)


def bound_R(R_hat: float) -> float:
    """Lower bound for ``2 int_1^{sqrt3/2 R_hat} dk / sqrt(eta - V)`` (units of pi)."""
    if R_hat < 1.0:
        raise DomainError("bound_R needs R_hat >= 1")
    kap = kappa(R_hat)
    if kap > R_hat:
        raise DomainError(f"kappa={kap} exceeds R_hat={R_hat}")
    eta = eta_of_R_hat(R_hat)
    lin = 0.0 if kap == 1.0 else 2.0 * (kap - 1.0) / math.sqrt(eta - 1.0)
    return (2.0 * PI / 3.0 - 2.0 * math.asin(kap / R_hat) + lin) / PI


def R_hat_of_eta(eta: float) -> float:
    return r_plus(math.sqrt(3.0) / 2.0 * math.exp((eta - 1.0) / 2.0))


def f_psi0(psi0):
    """``sin psi0 + cos(sqrt2 psi0) (1 - sin psi0 / sqrt2)``."""
    psi0 = np.asarray(psi0, dtype=float)
    out = np.sin(psi0) + np.cos(math.sqrt(2.0) * psi0) * (1.0 - np.sin(psi0) / math.sqrt(2.0))
    return float(out) if out.ndim == 0 else out


def f_endpoint_bound(a: float, b: float) -> float:
    """Monotone-pieces bound for ``sup f`` on ``[a, b)``: sin at the right end, the rest at the left."""
    return math.sin(b) + math.cos(math.sqrt(2.0) * a) * (1.0 - math.sin(a) / math.sqrt(2.0))


def f_sup(a: float, b: float, n: int = 2001) -> float:
    xs = np.linspace(a, b, n)
    ys = f_psi0(xs)
    i = int(np.argmax(ys))
    lo, hi = xs[max(i - 1, 0)], xs[min(i + 1, n - 1)]
    res = minimize_scalar(lambda x: -f_psi0(x), bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-14})
    return max(float(ys.max()), -float(res.fun))


def lower2nd_h1(k0: float, k_min: float, k2: float) -> float:
    """Parabola-comparison bound ``2/sqrt(1+1/k0) (pi/2 - asin((1-k2)/(1-k_min))) + pi/3`` (units of pi)."""
    return (2.0 / math.sqrt(1.0 + 1.0 / k0) * (PI / 2.0 - math.asin((1.0 - k2) / (1.0 - k_min)))
            + PI / 3.0) / PI


def na_bound(c_lo: float, c_hi: float, k2_lo: float | None) -> float:
    """Lower bound for ``2 dtheta_NA`` on ``[c_lo, c_hi)`` (units of pi).

    ``k2_lo = None`` is the regime where A lies beyond k = 1 so the phi-part
    integrates all the way to 1.
    """
    s = math.sqrt((c_lo - 1.0) / c_lo)
    inner = math.asin(s)
    if k2_lo is not None:
        inner -= math.asin((1.0 - k2_lo) / s)
    return (2.0 / math.sqrt(1.0 + c_hi) * inner + 2.0 * (math.asin(1.0 / c_hi) - PI / 3.0)) / PI


def k2_at_A(c: float) -> float:
    return math.sqrt(3.0) / 2.0 * r_plus(math.sqrt(3.0) / 2.0 * c)


def k2_at_D(c: float) -> float:
    return math.sqrt(3.0) / 2.0 * r_minus(math.sqrt(3.0) / 2.0 * c)


def W(R: float, c: float) -> float:
    x = K(R) / c
    return x / (1.0 - x * x) ** 1.5


# -- printed tables ----------------------------------------------------------------

#: (eta, k_min >, L bound, R_hat >, R bound) as printed
TABLE1 = (
    (1.38, 0.60, 0.6123, 1.22, 0.0585),
    (1.4, 0.59, 0.6091, 1.24, 0.0748),
    (1.45, 0.56, 0.5991, 1.29, 0.1123),
    (1.5, 0.52, 0.5848, 1.34, 0.1453),
    (2.0, 0.39, 0.5927, 1.64, 0.2761),
    (3.0, 0.32, 0.4246, 2.03, 0.3631),
    (4.0, 0.13, 0.3392, 2.32, 0.4035),
    (5.0, 0.08, 0.2722, 2.56, 0.4287),
)

#: ((eta_lo, eta_hi), right-side constant, left-side constant) as printed
TABLE2 = (
    ((1.38, 1.4), 0.0585, 0.6091),
    ((1.4, 1.45), 0.0748, 0.5991),
    ((1.45, 1.5), 0.1123, 0.5848),
    ((1.5, 2.0), 0.1453, 0.5296),
    ((2.0, 3.0), 0.2792, 0.4246),
    ((3.0, 4.0), 0.3631, 0.3392),
    ((4.0, 5.0), 0.4035, 0.2722),
)

#: corrected readings of cells that fail as printed (see the decisions ledger)
TABLE1_ERRATA = {(2.0, "L"): 0.5296, (3.0, "kmin"): 0.22}
TABLE2_ERRATA = {((2.0, 3.0), "R"): 0.2761}

#: (a, b, printed bound), range ends in units of pi
F_TABLE = (
    (0.3, 1.0 / (2.0 * math.sqrt(2.0)), 0.9969),
    (0.27, 0.3, 0.9794),
    (0.24, 0.27, 0.9996),
    (0.22, 0.24, 0.9917),
    (0.21, 0.22, 0.9748),
)

TWO_THIRDS = 2.0 / 3.0


def _fmt(x: float) -> str:
    return f"{x:g}"


def _true_L(eta: float) -> float:
    e = Energy.from_eta(eta)
    return 2.0 * delta_phi_k(e, r_minus(e.c), 1.0) / PI


def _true_R(eta: float) -> float:
    e = Energy.from_eta(eta)
    return 2.0 * delta_phi_k(e, 1.0, k2_at_A(e.c)) / PI


def table1_rows() -> list[BoundRow]:
    rows = []
    for eta, km, Lp, Rh, Rp in TABLE1:
        tag = f"table1.eta={_fmt(eta)}"
        k_true = k_min_of_eta(eta)
        rows.append(make_row(f"{tag}.kmin", "k_min(eta) exceeds the printed value", km, k_true,
                             kind="true", corrected=TABLE1_ERRATA.get((eta, "kmin"))))
        rows.append(make_row(f"{tag}.L", "pi/sqrt(1+1/k_min) at the printed k_min", Lp, bound_L_kmin(km),
                             corrected=TABLE1_ERRATA.get((eta, "L"))))
        rows.append(make_row(f"{tag}.L.true", "left integral L exceeds the printed bound", Lp, _true_L(eta),
                             kind="true", corrected=TABLE1_ERRATA.get((eta, "L"))))
        rows.append(make_row(f"{tag}.Rhat", "R_hat(eta) exceeds the printed value", Rh, R_hat_of_eta(eta),
                             kind="true"))
        rows.append(make_row(f"{tag}.R", "right closed form at the printed R_hat", Rp, bound_R(Rh)))
        rows.append(make_row(f"{tag}.R.true", "right integral R exceeds the printed bound", Rp, _true_R(eta),
                             kind="true"))
    return rows


def table2_rows(n_true: int = 9) -> list[BoundRow]:
    rows = []
    for (a, b), Rp, Lp in TABLE2:
        tag = f"table2.eta=[{_fmt(a)},{_fmt(b)}]"
        # R_hat increases and k_min decreases with eta, so the interval's
        # weakest right bound sits at a and the weakest left bound at b
        rows.append(make_row(f"{tag}.R", "right closed form at R_hat(eta_lo)", Rp, bound_R(R_hat_of_eta(a)),
                             corrected=TABLE2_ERRATA.get(((a, b), "R"))))
        rows.append(make_row(f"{tag}.L", "left closed form at k_min(eta_hi)", Lp, bound_L(b)))
        rows.append(make_row(f"{tag}.sum", "printed constants sum above 2/3", TWO_THIRDS, Rp + Lp,
                             kind="arithmetic"))
        etas = np.linspace(a, b, n_true)
        true_min = min(_true_L(x) + _true_R(x) for x in etas)
        rows.append(make_row(f"{tag}.true", "min over the interval of L + R exceeds 2/3", TWO_THIRDS, true_min,
                             kind="true"))
    return rows


def case3_rows() -> list[BoundRow]:
    """Low-energy case (eta < 1.38) and the two headline constants."""
    r_hat, km = 1.0, 2.0 / 3.0
    arg = (1.0 - math.sqrt(3.0) / 2.0 * r_hat) / (1.0 - km)
    cf = (PI - 2.0 * math.asin(arg)) / math.sqrt(1.0 + math.sqrt(3.0)) / PI
    return [
        make_row("table1.lowcase.V(1/sqrt3)", "V(1/sqrt3) > 4/3", 4.0 / 3.0, V(1.0 / math.sqrt(3.0)),
                 kind="arithmetic"),
        make_row("table1.lowcase.V(2/3)", "V(2/3) < 1 + 2 ln(2/sqrt3)", 1.0 + 2.0 * LN_C_STAR, V(2.0 / 3.0),
                 relation=Relation.BOUND_HOLDS, kind="arithmetic"),
        make_row("table1.lowcase.bound", "closed form for eta below 4/3", 0.4456, cf),
        make_row("table1.lowcase.sum", "0.4456 + 1/3 reaches 0.7789", 0.7789, 0.4456 + 1.0 / 3.0,
                 kind="arithmetic", note="equality at 4 decimals"),
        make_row("table1.midcase.sum", "0.6123 + 1/3 reaches 0.9456", 0.9456, 0.6123 + 1.0 / 3.0,
                 kind="arithmetic", note="equality at 4 decimals"),
        make_row("table1.eta>=1.38.sum", "table-2 rows imply h1+2h2 > pi", 1.0,
                 min(r + l for _, r, l in TABLE2) + 1.0 / 3.0, kind="arithmetic"),
    ]


def monotone_rows(n: int = 400) -> list[BoundRow]:
    rh = np.linspace(1.22, 3.0, n)
    vals = np.array([bound_R(x) for x in rh])
    step = float(np.min(np.diff(vals)))
    return [make_row("table1.boundR.monotone", "bound_R increases on R_hat in [1.22, 3] (min step)",
                     0.0, step, kind="true")]


def f_table_rows(n_mn: int = 128) -> list[BoundRow]:
    rows = []
    for a, b, p in F_TABLE:
        tag = f"ftable.psi0=[{a:.3g},{b:.3g})pi"
        rows.append(make_row(f"{tag}.endpoint", "endpoint expression below the printed bound", p,
                             f_endpoint_bound(a * PI, b * PI), relation=Relation.BOUND_HOLDS))
        rows.append(make_row(f"{tag}.sup", "sup of f on the range below the printed bound", p,
                             f_sup(a * PI, b * PI), relation=Relation.BOUND_HOLDS, kind="true"))
    tail = f_sup(PI / (2.0 * math.sqrt(2.0)), PI / 2.0)
    rows.append(make_row("ftable.tail", "f < 1 for psi0 >= pi/(2 sqrt2)", 1.0, tail,
                         relation=Relation.BOUND_HOLDS, kind="true"))
    limit = 1.0 + math.cos(PI / math.sqrt(2.0)) * (1.0 - 1.0 / math.sqrt(2.0))
    rows.append(make_row("ftable.limit", "f at psi0 = pi/2 is below 1", 1.0, limit,
                         relation=Relation.BOUND_HOLDS, kind="arithmetic"))
    cs = np.geomspace(1.001, 8.0, n_mn)
    mn = max(delta_theta_MN(Energy(float(c))) for c in cs) / PI
    rows.append(make_row("ftable.dtheta_MN", f"max of dtheta_MN on {n_mn} points in [1.001, 8] below pi",
                         1.0, mn, relation=Relation.BOUND_HOLDS, kind="true"))
    return rows


def period_floor_rows() -> list[BoundRow]:
    return [
        make_row("period-floor.V(0.6)", "V(0.6) > 1.38", 1.38, V(0.6), kind="arithmetic"),
        make_row("period-floor.sum", "0.6123 + 1/sqrt2 > 1.3194", 1.3194, 0.6123 + 1.0 / math.sqrt(2.0),
                 kind="arithmetic"),
        make_row("period-floor.true", "T(c_hat) > 1.3194 pi (T decreases)", 1.3194,
                 period(Energy(C_HAT)) / PI, kind="true"),
    ]


def _hsum(c: float) -> float:
    h = h_triple(Energy(c))
    return (h.h1 + 2.0 * h.h2) / PI


def _na2(c: float) -> float:
    return 2.0 * delta_theta_NA(Energy(c)) / PI


def _min_on(fn: Callable[[float], float], lo: float, hi: float, n: int = 9) -> float:
    return min(fn(float(c)) for c in np.linspace(lo, hi, n))


def upper_energy_rows() -> list[BoundRow]:
    """Upper-cell energy window: three energy ranges above c_bar, then psi_up and theta_in."""
    c16, c155 = math.exp(1.0 / 6.0), math.exp(0.155)
    up = Relation.BOUND_HOLDS
    rows = [
        make_row("upper.r1.NA", "2 dtheta_NA on [e^(1/6), c_hat)", 0.1252, na_bound(c16, C_HAT, None)),
        make_row("upper.r1.k2", "k at A reaches 1 at e^(1/6)", 1.0, k2_at_A(c16), kind="edge"),
        make_row("upper.r1.sum", "0.9456 + 0.1252 > 1", 1.0, 0.9456 + 0.1252, kind="arithmetic"),
        make_row("upper.r1.NA.true", "min 2 dtheta_NA on the range", 0.1252, _min_on(_na2, c16, C_HAT),
                 kind="true"),
        make_row("upper.r2.kmin.lo", "k_min(e^(1/6)) >= 0.6235", 0.6235, r_minus(c16), kind="true"),
        make_row("upper.r2.kmin.hi", "k_min(e^0.155) <= 0.6358", 0.6358, r_minus(c155), relation=up,
                 kind="true"),
        make_row("upper.r2.k2.lo", "k2(e^0.155) >= 0.9590", 0.9590, k2_at_A(c155), kind="true"),
        make_row("upper.r2.k2.hi", "k2(e^(1/6)) <= 1", 1.0, k2_at_A(c16), relation=up, kind="edge"),
        make_row("upper.r2.h12h2", "h1+2h2 closed form", 0.9084, lower2nd_h1(0.6235, 0.6358, 0.9590)),
        make_row("upper.r2.NA", "2 dtheta_NA closed form", 0.0966, na_bound(c155, c16, 0.9590)),
        make_row("upper.r2.sum", "0.9084 + 0.0966 > 1", 1.0, 0.9084 + 0.0966, kind="arithmetic"),
        make_row("upper.r2.h12h2.true", "min h1+2h2 on the range", 0.9084, _min_on(_hsum, c155, c16),
                 kind="true"),
        make_row("upper.r2.NA.true", "min 2 dtheta_NA on the range", 0.0966, _min_on(_na2, c155, c16),
                 kind="true"),
        make_row("upper.r3.kmin.lo", "k_min(e^0.155) >= 0.6356", 0.6356, r_minus(c155), kind="true"),
        make_row("upper.r3.kmin.hi", "k_min(c_bar) <= 0.6377", 0.6377, r_minus(C_BAR), relation=up,
                 kind="true"),
        make_row("upper.r3.k2.lo", "k2(c_bar) >= 0.9513", 0.9513, k2_at_A(C_BAR), kind="true"),
        make_row("upper.r3.k2.hi", "k2(e^0.155) <= 0.9591", 0.9591, k2_at_A(c155), relation=up, kind="true"),
        make_row("upper.r3.h12h2", "h1+2h2 closed form", 0.9031, lower2nd_h1(0.6356, 0.6377, 0.9513)),
        make_row("upper.r3.NA", "2 dtheta_NA closed form", 0.0988, na_bound(C_BAR, c155, 0.9513)),
        make_row("upper.r3.sum", "0.9031 + 0.0988 > 1", 1.0, 0.9031 + 0.0988, kind="arithmetic"),
        make_row("upper.r3.h12h2.true", "min h1+2h2 on the range", 0.9031, _min_on(_hsum, C_BAR, c155),
                 kind="true"),
        make_row("upper.r3.NA.true", "min 2 dtheta_NA on the range", 0.0988, _min_on(_na2, C_BAR, c155),
                 kind="true"),
    ]
    ratio = C_BAR / C_STAR
    psi_up = brentq(lambda p: math.sin(p + PI / 3.0) / math.sin(p) - ratio, 0.2, PI / 3.0, xtol=1e-15)
    rows.append(make_row("upper.psi_up", "psi_up floor from the energy ratio", 0.3307, psi_up / PI, kind="true"))
    rows.append(make_row("upper.theta_in", "1/3 + 2 * 0.3307 > 0.9947", 0.9947, 1.0 / 3.0 + 2.0 * 0.3307,
                         kind="arithmetic"))
    return rows


def inout_rows() -> list[BoundRow]:
    """Bounds at c_bar used to exclude a start or end point outside the unit circle."""
    km, k2 = r_minus(C_BAR), k2_at_D(C_BAR)
    h = h_triple(Energy(C_BAR))
    up = Relation.BOUND_HOLDS
    return [
        make_row("inout.kmin.lo", "k_min(c_bar) > 0.6376", 0.6376, km, kind="true"),
        make_row("inout.kmin.hi", "k_min(c_bar) < 0.6377", 0.6377, km, relation=up, kind="true"),
        make_row("inout.k2.lo", "k at D(c_bar) > 0.7834", 0.7834, k2, kind="true"),
        make_row("inout.k2.hi", "k at D(c_bar) < 0.7835", 0.7835, k2, relation=up, kind="true"),
        make_row("inout.h1", "h1(c_bar) closed form", 0.7027, lower2nd_h1(0.6376, 0.6377, 0.7834)),
        make_row("inout.h1.true", "h1(c_bar) exceeds 0.7027 pi", 0.7027, h.h1 / PI, kind="true"),
        make_row("inout.Rplus", "K(sqrt2) > c_bar, so R^+ < sqrt2", C_BAR, K(math.sqrt(2.0)), kind="true"),
        make_row("inout.h3.true", "h3(c_bar) >= pi/3", 1.0 / 3.0, h.h3 / PI, kind="true"),
        make_row("inout.sum", "0.9947 + 0.7027 + 1/3 > 2", 2.0, 0.9947 + 0.7027 + 1.0 / 3.0, kind="arithmetic"),
        make_row("5cell.sum", "0.7789 + 2 * 0.7027 > 2", 2.0, 0.7789 + 2.0 * 0.7027, kind="arithmetic"),
    ]


def degenerate_rows() -> list[BoundRow]:
    """h1(c_hat) estimate and the equal-energy contradiction chains."""
    km, k2 = r_minus(C_HAT), k2_at_D(C_HAT)
    h_hat = h_triple(Energy(C_HAT))
    h_star = h_triple(Energy(C_STAR))
    up = Relation.BOUND_HOLDS
    # assuming 2 h1 = pi and h1 + 4 h2 = pi at one energy
    h1, h2 = 0.5, 0.125
    return [
        make_row("h1(chat).kmin.lo", "k_min(c_hat) > 0.6007", 0.6007, km, kind="true"),
        make_row("h1(chat).kmin.hi", "k_min(c_hat) < 0.6008", 0.6008, km, relation=up, kind="true"),
        make_row("h1(chat).k2.lo", "k at D(c_hat) > 0.6871", 0.6871, k2, kind="true"),
        make_row("h1(chat).k2.hi", "k at D(c_hat) < 0.6872", 0.6872, k2, relation=up, kind="true"),
        make_row("h1(chat).bound", "h1(c_hat) closed form", 0.5945, lower2nd_h1(0.6007, 0.6008, 0.6871)),
        make_row("h1(chat).true", "h1(c_hat) exceeds 0.5945 pi", 0.5945, h_hat.h1 / PI, kind="true"),
        make_row("h1(chat).2h1", "2 * 0.5945 > 1", 1.0, 2.0 * 0.5945, kind="arithmetic"),
        make_row("equal-energy.c1=c2", "h1 = 1/2 contradicts h1 > 0.5945", 0.5945, 0.5,
                 relation=up, kind="arithmetic"),
        make_row("equal-energy.c1=c3", "h1 = 1 contradicts h1(c*) < 1", 1.0, h_star.h1 / PI,
                 relation=up, kind="true"),
        make_row("equal-energy.c2=c3", "2h1 = 1 and h1+4h2 = 1 force h1+2h2 = 0.75 < 0.7789", 0.7789,
                 h1 + 2.0 * h2, relation=up, kind="arithmetic"),
        make_row("equal-energy.c4=c5", "0.7027 + 0 + 1/3 > 1", 1.0, 0.7027 + 1.0 / 3.0, kind="arithmetic"),
    ]


def pa_monotone_rows() -> list[BoundRow]:
    """Piecewise W estimate behind the increase of dtheta_{P(R0)A} on I_A."""
    cs = 2.0 / math.sqrt(3.0)
    pieces = (
        ("J1", 0.03 / 0.7 * W(0.7, cs), 1.81),
        ("J2", 0.07 / 0.73 * W(0.73, cs), 2.27),
        ("J3", 0.1 / 0.8 * W(0.8, cs), 1.47),
        ("J4", 0.2 / 0.9 * max(W(0.9, cs), W(1.1, cs)), 1.74),
    )
    up = Relation.BOUND_HOLDS
    rows = [make_row(f"pa-monotone.W.{name}", "piece estimate below the printed constant", p, v,
                     relation=up) for name, v, p in pieces]
    rows.append(make_row("pa-monotone.sum", "sqrt3/0.21 exceeds the sum of pieces", 1.81 + 2.27 + 1.47 + 1.74,
                         math.sqrt(3.0) / 0.21, kind="arithmetic"))
    Rs = np.linspace(0.7, 1.1, 401)
    rows.append(make_row("pa-monotone.K<c*", "K(R) < c* on [0.7, 1.1]", C_STAR, float(np.max(K(Rs))),
                         relation=up, kind="true"))
    rows.append(make_row("pa-monotone.K(1.1)", "K(1.1) > sqrt3/2 c_bar", math.sqrt(3.0) / 2.0 * C_BAR,
                         float(K(1.1)), kind="true"))
    return rows


# -- report ------------------------------------------------------------------------


@dataclass
class VerificationReport:
    rows: list[BoundRow]
    counts: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        self.rows = sorted(self.rows, key=lambda r: r.claim_id)
        ids = [r.claim_id for r in self.rows]
        if len(ids) != len(set(ids)):
            raise ValueError("duplicate claim ids")
        self.counts = {s.value: sum(r.status is s for r in self.rows) for s in Status}

    def ok(self, strict: bool = False) -> bool:
        bad = (Status.FAIL, Status.ERRATUM) if strict else (Status.FAIL,)
        return not any(r.status in bad for r in self.rows)

    def row(self, claim_id: str) -> BoundRow:
        for r in self.rows:
            if r.claim_id == claim_id:
                return r
        raise KeyError(claim_id)

    def to_json(self) -> dict:
        return {"schema": SCHEMA_VERIFY, "counts": self.counts, "rows": [r.to_json() for r in self.rows]}

    def to_text(self) -> str:
        head = ("claim_id", "paper", "computed", "rel", "margin", "4dp", "status")
        body = [(r.claim_id, f"{r.paper_value:.6g}", f"{r.computed_value:.8f}",
                 ">=" if r.relation is Relation.COMPUTED_EXCEEDS_BOUND else "<",
                 f"{r.margin:+.3e}", "yes" if r.digits_agree else "no", r.status.value)
                for r in self.rows]
        widths = [max(len(x[i]) for x in (head, *body)) for i in range(len(head))]
        lines = ["  ".join(s.ljust(w) for s, w in zip(line, widths)).rstrip() for line in (head, *body)]
        errata = [r for r in self.rows if r.status is Status.ERRATUM]
        for r in errata:
            lines.append(f"ERRATUM {r.claim_id}: printed {r.paper_value:g} fails, "
                         f"corrected {r.corrected_value:g} holds")
        lines.append("summary: " + ", ".join(f"{k}={v}" for k, v in self.counts.items()))
        return "\n".join(lines) + "\n"


def run_verification(n_mn: int = 128) -> VerificationReport:
    rows: list[BoundRow] = []
    for part in (table1_rows(), table2_rows(), case3_rows(), monotone_rows(), f_table_rows(n_mn),
                 period_floor_rows(), upper_energy_rows(), inout_rows(), degenerate_rows(),
                 pa_monotone_rows()):
        rows.extend(part)
    return VerificationReport(rows)

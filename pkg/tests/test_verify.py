import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from shrinker_lab.config import C_STAR
from shrinker_lab.phase_plane import DomainError, k_min_of_eta
from shrinker_lab.verify import (DIGITS, Relation, Status, VerificationReport, bound_L, bound_L_kmin, bound_R,
                                 eta_of_R_hat, f_endpoint_bound, f_psi0, f_sup, kappa, make_row,
                                 R_hat_of_eta)

PI = math.pi
ERRATA = {"table1.eta=2.L", "table1.eta=2.L.true", "table1.eta=3.kmin", "table2.eta=[2,3].R"}


def test_bound_L_examples():
    # printed k_min = 0.60 gives 0.6123..., the exact k_min(1.38) a little more
    assert bound_L_kmin(0.60) == pytest.approx(0.6123724357, abs=1e-10)
    assert bound_L(1.38) == pytest.approx(bound_L_kmin(k_min_of_eta(1.38)), abs=1e-15)
    assert bound_L(1.38) > bound_L_kmin(0.60)
    with pytest.raises(DomainError):
        bound_L(1.0)


def test_bound_R_examples():
    # kappa = 1 at R_hat = c*: the linear piece vanishes and the bound is zero
    assert kappa(C_STAR) == pytest.approx(1.0, abs=1e-15)
    assert bound_R(C_STAR) == pytest.approx(0.0, abs=1e-15)
    assert bound_R(1.22) == pytest.approx(0.0585, abs=5e-5)
    with pytest.raises(DomainError):
        bound_R(0.9)


@given(st.floats(1.29, 5.0))  # A exists from eta* = 1 + ln(4/3) on
def test_R_hat_round_trip(eta):
    assert eta_of_R_hat(R_hat_of_eta(eta)) == pytest.approx(eta, abs=1e-11)


def test_bound_R_increasing():
    xs = np.linspace(1.22, 3.0, 200)
    ys = [bound_R(x) for x in xs]
    assert all(a < b for a, b in zip(ys, ys[1:]))


def test_f_function():
    assert f_psi0(0.0) == 1.0
    xs = np.linspace(0.1, 0.3, 5)
    assert np.allclose(f_psi0(xs), [f_psi0(float(x)) for x in xs], rtol=0, atol=0)


@given(st.floats(0.05, 0.3), st.floats(0.001, 0.05))
def test_f_endpoint_bound_dominates(a, w):
    # sin increases and the cos part decreases on these ranges
    a, b = a * PI, (a + w) * PI
    assert f_endpoint_bound(a, b) >= f_sup(a, b) - 1e-15


def test_make_row_rules():
    r = make_row("x", "", 0.5, 0.5 - DIGITS / 2)
    assert r.status is Status.PASS and r.digits_agree
    r = make_row("x", "", 0.5, 0.5 - DIGITS / 2, kind="true")
    assert r.status is Status.FAIL
    r = make_row("x", "", 0.5, 0.4, corrected=0.39)
    assert r.status is Status.ERRATUM
    r = make_row("x", "", 0.5, 0.4, relation=Relation.BOUND_HOLDS, kind="arithmetic")
    assert r.status is Status.PASS and r.margin == pytest.approx(0.1)
    assert make_row("x", "", 1.0, 1.0, kind="edge").status is Status.PASS


def test_report_statuses(verification):
    assert verification.ok()
    assert not verification.ok(strict=True)
    assert {r.claim_id for r in verification.rows if r.status is Status.ERRATUM} == ERRATA
    assert verification.counts["FAIL"] == 0
    assert verification.row("table2.eta=[1.5,2].sum").status is Status.PASS
    assert verification.row("equal-energy.c2=c3").computed_value == pytest.approx(0.75)
    assert verification.row("equal-energy.c2=c3").status is Status.PASS


def test_report_ids_unique_and_sorted(verification):
    ids = [r.claim_id for r in verification.rows]
    assert ids == sorted(ids) and len(ids) == len(set(ids))
    with pytest.raises(ValueError):
        VerificationReport(verification.rows[:1] * 2)
    with pytest.raises(KeyError):
        verification.row("nope")


def test_report_serialisation(verification):
    doc = json.loads(json.dumps(verification.to_json()))
    assert doc["schema"] == "shrinker-verify/1"
    assert len(doc["rows"]) == len(verification.rows)
    text = verification.to_text()
    assert text.count("ERRATUM table") == len(ERRATA)
    assert "summary: PASS=" in text


def test_f_table_rows_pass(verification):
    for r in verification.rows:
        if r.claim_id.startswith("ftable."):
            assert r.status is Status.PASS, r.claim_id

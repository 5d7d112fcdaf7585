import json
import math

import numpy as np
import pytest

from shrinker_lab.geometry import (ClosureError, NetworkGeometry, assemble_network, export, from_json,
                                   hausdorff, mirror_symmetry_distance, reconstruct_arc, star_shaped_probe,
                                   to_json, to_svg)
from shrinker_lab.integrators.flow import ArcLengthReached, ThetaReached
from shrinker_lab.phase_plane import Energy, special_point

PI = math.pi
EYE = "cisgeminate-eye"


def test_closure_and_junctions(catalog, networks):
    for name, net in networks.items():
        assert net.meta["closure_gap"] < 1e-7, name
        assert net.herring_error() < 1e-6, name
        for j in net.junctions:
            assert len(j.directions) == 3


def test_curves_satisfy_shrinker_equation(networks):
    for name, net in networks.items():
        for c in net.curves:
            assert c.shrinker_residual() < 1e-8, name
            assert c.polar_residual() < 1e-8, name


def test_rays_are_radial(networks):
    for name, net in networks.items():
        for r in net.rays:
            assert r.radial_error() < 1e-8, name


def test_theta_up_flow_matches_quadrature(catalog, networks):
    for name, sol in catalog.items():
        assert networks[name].meta["theta_up_flow"] == pytest.approx(sol.theta_up, abs=1e-8), name


def test_eye_mirror_symmetry(catalog, networks):
    d = mirror_symmetry_distance(catalog[EYE], networks[EYE])
    assert d < 1e-7


def test_eye_structure(networks):
    net = networks[EYE]
    # one ray at each of the two junctions on each half
    assert len(net.rays) == 4
    assert all(r.multiplicity == 1 for r in net.rays)
    svg = to_svg(net)
    assert svg.count('class="region"') == 2
    assert svg.count('class="ray"') == 4


def test_heart_double_ray(networks):
    net = networks["heart"]
    assert sorted(r.multiplicity for r in net.rays).count(2) == 1
    assert to_svg(net).count('data-multiplicity="2"') == 1


def test_star_shaped_outer_boundary(networks):
    probe = star_shaped_probe(networks[EYE])
    assert probe["single_valued"], probe


def test_json_round_trip_exact(networks):
    for net in networks.values():
        text = to_json(net)
        back = from_json(text)
        assert to_json(back) == text
        for a, b in zip(net.curves, back.curves):
            assert np.array_equal(a.points, b.points)


def test_json_schema_checked():
    with pytest.raises(ValueError):
        from_json(json.dumps({"schema": "other/1"}))


def test_empty_network_documents():
    net = NetworkGeometry()
    svg = to_svg(net)
    assert svg.startswith("<?xml") and svg.rstrip().endswith("</svg>")
    assert 'class="curve"' not in svg
    back = from_json(to_json(net))
    assert back.curves == [] and back.rays == []


def test_export_writes_file(tmp_path, networks):
    out = tmp_path / "eye.svg"
    doc = export(networks[EYE], "svg", out, unit_circle=True)
    assert out.read_text(encoding="utf-8") == doc
    assert 'class="unit-circle"' in doc
    with pytest.raises(ValueError):
        export(networks[EYE], "png")


def test_near_circle_arc():
    e = Energy(1 + 1e-6)
    n = special_point(e, "N")
    arc = reconstruct_arc(e, ((1.0, 0.0), n), ArcLengthReached(2 * PI))
    r = np.hypot(arc.points[:, 0], arc.points[:, 1])
    assert np.max(np.abs(r - 1.0)) < 1e-2
    assert arc.shrinker_residual() < 1e-8


def test_D_to_A_arc_endpoint():
    e = Energy(1.4)
    D, A = special_point(e, "D"), special_point(e, "A")
    arc = reconstruct_arc(e, ((D.R, 0.0), D), A)
    assert np.hypot(*arc.end) == pytest.approx(A.R, abs=1e-9)
    assert arc.polar_residual() < 1e-9


def test_reconstruct_rejects_inconsistent_start():
    e = Energy(1.4)
    D = special_point(e, "D")
    with pytest.raises(ValueError):
        reconstruct_arc(e, ((1.5, 0.0), D), ThetaReached(1.0))


def test_mirror_transform_involution(networks):
    c = networks[EYE].curve("up")[0]
    back = c.transformed("mirror").transformed("mirror")
    assert np.array_equal(back.points, c.points)
    pt = c.transformed("point").transformed("point")
    assert np.allclose(pt.points, c.points, atol=0)
    assert hausdorff(c, c) == 0.0


def test_closure_error_reports_gap(catalog):
    import dataclasses
    sol = catalog[EYE]
    off = dataclasses.replace(sol, R_end=sol.R_end * 1.01)
    with pytest.raises(ClosureError) as info:
        assemble_network(off)
    assert info.value.gap > 1e-3

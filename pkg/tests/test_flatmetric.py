import math

import pytest

from hirzebruch.flatmetric import (
    SectorModel,
    consistency_identity_residual,
    line_cone_angle,
    sector_angle,
    sector_angle_closed_form,
    solve_consistency,
    triangle_shape,
    verify_metric,
)
from hirzebruch.spherical import measure, regular_polygon

PI = math.pi


@pytest.mark.parametrize("k,n", [(3, 2), (3, 3), (4, 3), (3, 5), (5, 5), (4, 7), (9, 10)])
def test_sector_angle_matches_closed_form(k, n):
    assert sector_angle(k, n) == pytest.approx(sector_angle_closed_form(k, n), abs=1e-12)


def test_sector_angle_is_half_a_regular_edge():
    P = regular_polygon(4, PI * 2 / 3)
    assert 2 * sector_angle(4, 3) == pytest.approx(measure(P).edge_lengths[0], abs=1e-12)


def test_sector_angle_edge_cases():
    assert sector_angle(2, 7) == PI / 2
    with pytest.raises(ValueError):
        sector_angle(3, 1)
    with pytest.raises(ValueError):
        sector_angle(4, 2)  # square with right angles does not exist on the sphere
    with pytest.raises(ValueError):
        sector_angle(1, 3)


def test_sector_model_skips_inadmissible():
    m = SectorModel.build(2)
    assert set(m.alpha) == {2, 3}
    assert m.cone_angle_per_line == pytest.approx(PI)
    assert line_cone_angle(5) == pytest.approx(8 * PI / 5)


@pytest.mark.parametrize(
    "d,n,deg",
    [
        (3, 2, (90.0, 45.0, 45.0)),
        (4, 3, (90.0, 54.7356103, 35.2643897)),
        (5, 5, (90.0, 58.2825256, 31.7174744)),
    ],
)
def test_flat_triangles(d, n, deg):
    t = triangle_shape(n, d)
    assert t.flat and abs(t.residual) < 1e-12
    got = sorted((math.degrees(a) for a in t.angles), reverse=True)
    assert got == pytest.approx(deg, abs=1e-6)


def test_consistency_solutions_are_exactly_three():
    c = solve_consistency(n_max=100)
    assert sorted(c.solutions) == [(3, 2), (4, 3), (5, 5)]
    assert c.max_solution_residual < 1e-12
    assert c.min_nonsolution_residual > 1e-3
    assert c.identity_agrees


def test_identity_vanishes_at_solutions():
    for d, n in [(3, 2), (4, 3), (5, 5)]:
        assert abs(consistency_identity_residual(d, n)) < 1e-15
    assert abs(consistency_identity_residual(5, 3)) > 0.01


def test_nonflat_example_residual():
    assert triangle_shape(3, 5).residual == pytest.approx(-0.2506, abs=1e-4)


@pytest.mark.parametrize("d,n", [(3, 2), (4, 3), (5, 5)])
def test_verify_metric(real_catalog, d, n):
    rep = verify_metric(real_catalog[d])
    assert rep.passed, rep.diagnostics
    assert rep.n == n and rep.isometry_classes == 1
    assert rep.total_curvature == pytest.approx(2 * PI, abs=1e-9)
    assert rep.cone_angles[2] == pytest.approx(2 * PI)


def test_cone_angles_coxeter4(real_catalog):
    rep = verify_metric(real_catalog[4])
    # cone angles 2*k*alpha: 2pi at double points and below 2pi elsewhere
    assert rep.cone_angles[3] < 2 * PI and rep.cone_angles[4] < 2 * PI
    d = rep.as_dict()
    assert d["face_angle_classes"][0][1]["deg"] == pytest.approx(54.735610, abs=1e-6)


@pytest.mark.parametrize("n", [3, 4, 6])
def test_wrong_n_fails(real_catalog, n):
    rep = verify_metric(real_catalog[3], n_override=n)
    assert not rep.passed


def test_metric_refuses_n1(real_catalog):
    with pytest.raises(ValueError):
        verify_metric(real_catalog[2])

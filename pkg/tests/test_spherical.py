import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hirzebruch.spherical import (
    DegeneratePolygonError,
    EuclideanPolygon,
    Lune,
    SphericalPolygon,
    check_consecutive_angles,
    check_consecutive_edges,
    deformation_descent,
    double,
    dual,
    flatten,
    measure,
    parity_bound,
    pentagon_refinement,
    quadrilateral_min,
    regular_edge,
    regular_polygon,
    regular_rigidity_scan,
    sample_convex,
    sample_equilateral,
)

PI = math.pi
OCTANT = SphericalPolygon(np.eye(3))


def test_octant():
    m = measure(OCTANT)
    assert np.allclose(m.edge_lengths, PI / 2) and np.allclose(m.angles, PI / 2)
    assert m.area == pytest.approx(PI / 2, abs=1e-12)


def test_octant_is_self_dual():
    D = dual(OCTANT)
    assert np.allclose(measure(D).angles, PI / 2)
    assert {tuple(np.round(x, 12)) for x in D.vertices} == {tuple(np.round(x, 12)) for x in np.eye(3)}


def test_orientation_and_convexity_are_enforced():
    with pytest.raises(DegeneratePolygonError):
        SphericalPolygon(np.eye(3)[::-1])
    with pytest.raises(DegeneratePolygonError):
        SphericalPolygon([[1, 0, 0], [0, 1, 0], [-1, 0, 0]])  # three points on a great circle


def test_lune_refused_by_measure():
    L = regular_polygon(2, 1.0)
    assert isinstance(L, Lune)
    assert L.area == pytest.approx(2.0)
    assert L.edge_lengths == (PI, PI)
    with pytest.raises(DegeneratePolygonError):
        measure(L)


@pytest.mark.parametrize("k,beta", [(3, PI / 2), (4, 2 * PI / 3), (5, 0.7 * PI), (6, 0.9 * PI)])
def test_regular_polygon(k, beta):
    P = regular_polygon(k, beta)
    m = measure(P)
    assert np.allclose(m.angles, beta, atol=1e-12)
    assert np.ptp(m.edge_lengths) < 1e-12
    assert regular_edge(k, beta) == pytest.approx(m.edge_lengths[0], abs=1e-12)


def test_regular_polygon_known_edges():
    assert regular_edge(3, PI / 2) == pytest.approx(PI / 2, abs=1e-12)
    # cube face seen from the centre: angle 2pi/3, edge arccos(1/3)
    assert regular_edge(4, 2 * PI / 3) == pytest.approx(math.acos(1 / 3), abs=1e-12)


def test_regular_polygon_inadmissible():
    with pytest.raises(ValueError):
        regular_polygon(4, PI / 2)
    with pytest.raises(ValueError):
        regular_polygon(1, 1.0)


def _dual_exchange_ok(P):
    mp, md = measure(P), measure(dual(P))
    k = len(P)
    ok_a = np.allclose(md.angles, PI - mp.edge_lengths, atol=1e-9)
    ok_e = np.allclose(md.edge_lengths, PI - np.roll(mp.angles, -1), atol=1e-9)
    return ok_a and ok_e and k == len(dual(P))


@pytest.mark.parametrize("seed", range(10))
def test_dual_exchange_and_involution(seed):
    P = sample_convex(3 + seed % 5, seed=seed)
    assert _dual_exchange_ok(P)
    # B_i sits between A_i and A_{i+1}, so the double dual is shifted by one
    DD = dual(dual(P))
    assert np.allclose(np.roll(DD.vertices, 1, axis=0), P.vertices, atol=1e-9)


@pytest.mark.parametrize("seed", range(6))
def test_gauss_bonnet_of_double(seed):
    P = sample_convex(4 + seed % 3, seed=100 + seed)
    C = double(P)
    assert abs(C.gauss_bonnet_residual) < 1e-9
    assert len(C.cone_angles) == len(P)
    assert np.allclose(C.cone_angles, 2 * measure(P).angles)


def test_flatten_equilateral_rhombus():
    # spherical rhombus: equal sides, two distinct angles
    pts = [[1, 0, 0.0], [0, 0.4, 0], [-1, 0, 0], [0, -0.4, 0]]
    P = SphericalPolygon.from_points(np.array(pts) + [0, 0, 2.0])
    m = measure(P)
    assert np.ptp(m.edge_lengths) < 1e-12
    F = flatten(P)
    assert F.convex and F.edge_error < 1e-12
    fm = measure(F.polygon)
    assert np.allclose(fm.edge_lengths, m.edge_lengths)
    assert F.min_margin > 0  # spherical angles exceed their planar images
    assert fm.angles.sum() == pytest.approx(2 * PI)


@pytest.mark.parametrize("seed", range(8))
def test_flatten_preserves_edges(seed):
    P = sample_convex(5, seed=seed)
    F = flatten(P)
    assert F.edge_error < 1e-9


def test_parity_bound():
    assert parity_bound(4) == PI and parity_bound(6) == PI
    assert parity_bound(5) == pytest.approx(2 * math.acos(1 / 4))
    assert parity_bound(3) == pytest.approx(2 * PI / 3)


def test_consecutive_edges_on_regular_duals():
    for k, beta in [(3, 1.2 * PI / 2), (5, 0.75 * PI), (6, 0.8 * PI)]:
        rep = check_consecutive_edges(regular_polygon(k, beta))
        assert rep.violations == 0 and rep.worst_margin > 0


def test_consecutive_edges_needs_equiangular():
    with pytest.raises(ValueError):
        check_consecutive_edges(sample_convex(5, seed=1))


@pytest.mark.parametrize("v", [3, 4, 5, 6, 7])
def test_consecutive_angles_plane_and_sphere(v):
    E = sample_equilateral(v, "plane", seed=v)
    rep = check_consecutive_angles(E)
    assert not rep.strict and rep.violations == 0
    S = sample_equilateral(v, "sphere", seed=v)
    rep = check_consecutive_angles(S)
    assert rep.strict and rep.violations == 0


def test_regular_plane_polygon_attains_the_bound():
    v = 6
    pts = np.array([[math.cos(2 * PI * i / v), math.sin(2 * PI * i / v)] for i in range(v)])
    rep = check_consecutive_angles(EuclideanPolygon(pts))
    assert rep.worst_margin == pytest.approx(PI / 3, abs=1e-12)
    sq = check_consecutive_angles(EuclideanPolygon(np.array([[0, 0], [1, 0], [1, 1], [0, 1.0]])))
    assert sq.worst_margin == pytest.approx(0, abs=1e-12) and sq.violations == 0


def test_pentagon_refinement_forms():
    r = pentagon_refinement(regular_polygon(5, 0.75 * PI))
    assert r["form"] == "equiangular"
    r2 = pentagon_refinement(sample_equilateral(5, "sphere", seed=4))
    assert r2["form"] == "equilateral" and r2["status"] in ("holds", "vacuous")
    with pytest.raises(ValueError):
        pentagon_refinement(OCTANT)


@pytest.mark.parametrize("sides", [(1, 1, 1, 1), (1, 2, 1, 2), (1, 2, 2, 1), (1, 1, 2, 2), (1, 3, 2, 3), (1, 2, 3, 3)])
def test_quadrilateral_minimum_respects_bound(sides):
    q = quadrilateral_min(sides)
    assert q.margin >= -1e-9


def test_quadrilateral_rhombus_infimum_is_pi():
    q = quadrilateral_min((1, 1, 1, 1))
    assert q.min_sum == pytest.approx(PI, abs=1e-9)


def test_quadrilateral_bad_sides():
    with pytest.raises(ValueError):
        quadrilateral_min((1, 1, 1, 5))
    with pytest.raises(ValueError):
        quadrilateral_min((2, 1, 1, 1))


def test_rigidity_scan():
    betas = np.linspace(0.55 * PI, 0.99 * PI, 12)
    scan = regular_rigidity_scan(betas, k_max=12)
    assert scan["violations"] == []
    row = scan["table"][float(betas[-1])]
    assert list(row) == sorted(row) and row[2] == PI


@pytest.mark.parametrize("v,seed", [(5, 1), (6, 2), (7, 3), (8, 4)])
def test_deformation_descent_directional_derivative(v, seed):
    from hirzebruch.spherical import _angle_sum_grad

    E = sample_equilateral(v, "plane", seed=seed)
    d = deformation_descent(E)
    assert d.flex_dim == v - 3
    X = E.vertices
    # edges are preserved to first order
    edges0 = measure(E).edge_lengths
    h = 1e-6
    Xp = X + h * d.direction
    edges1 = np.linalg.norm(np.roll(Xp, -1, axis=0) - Xp, axis=1)
    assert np.max(np.abs(edges1 - edges0)) < 1e-9
    # the angle sum decreases at the predicted rate
    f0, _ = _angle_sum_grad(X)
    fp, _ = _angle_sum_grad(X + h * d.direction)
    fm, _ = _angle_sum_grad(X - h * d.direction)
    assert (fp - fm) / (2 * h) == pytest.approx(d.directional_derivative, rel=1e-5)
    assert d.directional_derivative < 0


def test_deformation_descent_needs_five():
    with pytest.raises(ValueError):
        deformation_descent(sample_equilateral(4, "plane", seed=0))


def test_samplers_are_deterministic():
    a = sample_equilateral(6, "sphere", seed=11)
    b = sample_equilateral(6, "sphere", seed=11)
    assert np.array_equal(a.vertices, b.vertices)
    c = sample_convex(5, seed=2)
    d = sample_convex(5, seed=2)
    assert np.array_equal(c.vertices, d.vertices)


@settings(max_examples=25)
@given(st.integers(3, 9), st.integers(0, 10_000))
def test_sampled_sphere_polygons_are_equilateral(v, seed):
    P = sample_equilateral(v, "sphere", seed=seed)
    m = measure(P)
    assert np.ptp(m.edge_lengths) < 1e-9 and len(P) == v
    assert m.area > 0


@settings(max_examples=25)
@given(st.integers(3, 9), st.integers(0, 10_000))
def test_sampled_plane_polygons_are_convex_equilateral(v, seed):
    E = sample_equilateral(v, "plane", seed=seed)
    m = measure(E)
    assert np.allclose(m.edge_lengths, 1.0, atol=1e-9)
    assert np.all(m.angles < PI) and m.angles.sum() == pytest.approx((v - 2) * PI)

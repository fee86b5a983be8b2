import math

import numpy as np
import pytest

from setflow import convex_core as cc
from setflow.errors import GridMismatchError, InvalidBodyError, InvalidOperatorError


M = 128


def _random_bodies(seed, count=2, grid_size=M):
    rng = np.random.default_rng(seed)
    return [cc.random_polygon(rng, n_vertices=6, grid_size=grid_size) for _ in range(count)]


def test_ball_area_and_perimeter_by_quadrature():
    K = cc.make_ball(1.0, grid_size=M)
    # polígono circunscrito de M lados
    assert cc.area(K) == pytest.approx(M * math.tan(math.pi / M), rel=1e-12)
    assert cc.perimeter(K) == pytest.approx(2 * M * math.tan(math.pi / M), rel=1e-12)
    # espectral é exata para h constante
    assert cc.area(K, 'spectral') == pytest.approx(math.pi, rel=1e-12)
    assert cc.perimeter(K, 'spectral') == pytest.approx(2 * math.pi, rel=1e-12)


def test_polygon_with_normals_on_grid_is_exact():
    square = cc.make_rectangle(1.0, 1.0, grid_size=M)
    rect = cc.make_rectangle(2.0, 1.0, center=(3.0, -1.0), grid_size=M)
    assert cc.area(square) == pytest.approx(1.0, abs=1e-12)
    assert cc.perimeter(square) == pytest.approx(4.0, abs=1e-12)
    assert cc.area(rect) == pytest.approx(2.0, abs=1e-12)
    assert cc.perimeter(rect) == pytest.approx(6.0, abs=1e-12)


def test_point_and_segment_are_degenerate_but_valid():
    point = cc.make_point((1.0, 2.0), grid_size=M)
    seg = cc.make_segment(4.0, grid_size=M)
    assert cc.area(point) == 0.0
    assert cc.area(seg) == pytest.approx(0.0, abs=1e-12)
    assert cc.perimeter(seg) == pytest.approx(8.0, abs=1e-12)
    assert cc.validate(point) == []
    assert cc.validate(seg) == []


def test_mixed_area_of_orthogonal_segments():
    seg = cc.make_segment(4.0, grid_size=M)
    rotated = cc.linear_image(seg, cc.ROTATION_90)
    # S[u_N, Bu_N] = N²/2
    assert cc.mixed_area(seg, rotated) == pytest.approx(8.0, abs=1e-12)


def test_mixed_area_is_symmetric_and_bilinear():
    u, v, w = _random_bodies(7, count=3)
    assert cc.mixed_area(u, v) == pytest.approx(cc.mixed_area(v, u), rel=1e-12)
    lhs = cc.mixed_area(cc.minkowski_add(u, cc.scale(v, 2.5)), w)
    rhs = cc.mixed_area(u, w) + 2.5 * cc.mixed_area(v, w)
    assert lhs == pytest.approx(rhs, rel=1e-10)
    assert cc.mixed_area(u, u) == pytest.approx(cc.area(u), rel=1e-12)


def test_minkowski_inequality_on_random_polygons():
    for seed in range(10):
        u, v = _random_bodies(seed)
        report = cc.mixed_area_report(u, v)
        assert report.bm_slack >= -cc.inequality_tolerance(report.V_uv ** 2)


def test_steiner_area_matches_direct_sum():
    u = cc.make_rectangle(2.0, 1.0, grid_size=M)
    K = cc.make_ball(1.0, grid_size=M)
    for rho in (0.0, 0.5, 2.0):
        direct = cc.area(cc.minkowski_add(u, cc.scale(K, rho)))
        assert cc.steiner_area(u, K, rho) == pytest.approx(direct, rel=1e-10)

    c0, c1, c2 = cc.steiner_fit(u, K, [0.0, 0.5, 1.0, 1.5])
    assert c0 == pytest.approx(cc.area(u), rel=1e-8)
    assert c1 == pytest.approx(2.0 * cc.mixed_area(u, K), rel=1e-8)
    assert c2 == pytest.approx(cc.area(K), rel=1e-8)


def test_linear_image_scales_area_by_determinant():
    K = cc.make_ball(1.0, grid_size=512)
    image = cc.linear_image(K, cc.LinearOperator2D([[2.0, 0.0], [0.0, 1.0]]))
    assert cc.area(image) == pytest.approx(2.0 * cc.area(K), rel=2e-3)

    square = cc.make_rectangle(1.0, 1.0, grid_size=M)
    assert cc.area(cc.linear_image(square, cc.ROTATION_90)) == pytest.approx(1.0, abs=1e-12)


def test_singular_image_is_degenerate():
    square = cc.make_rectangle(2.0, 2.0, grid_size=M)
    projected = cc.linear_image(square, cc.LinearOperator2D([[1.0, 0.0], [0.0, 0.0]]))
    assert cc.area(projected) == pytest.approx(0.0, abs=1e-9)
    assert cc.norm(projected) == pytest.approx(1.0, abs=1e-9)


def test_hausdorff_distance_and_norm():
    K = cc.make_ball(1.0, grid_size=M)
    assert cc.hausdorff_distance(K, cc.make_ball(2.0, grid_size=M)) == pytest.approx(1.0)
    assert cc.hausdorff_distance(K, cc.make_ball(1.0, center=(1.0, 0.0), grid_size=M)) == pytest.approx(1.0)
    assert cc.hausdorff_distance(K, K) == 0.0
    assert cc.norm(cc.make_ball(1.0, center=(0.0, 2.0), grid_size=M)) == pytest.approx(3.0)


def test_hukuhara_difference():
    big, small = cc.make_ball(2.0, grid_size=M), cc.make_ball(1.0, grid_size=M)
    w = cc.hukuhara_difference(big, small)
    assert w is not cc.NO_DIFFERENCE
    assert np.allclose(w.values, 1.0)
    assert cc.hukuhara_difference(small, big) is cc.NO_DIFFERENCE
    # quadrado ⊖ bola não existe; bola ⊖ bola menor sim
    square = cc.make_rectangle(4.0, 4.0, grid_size=M)
    assert cc.hukuhara_difference(square, small) is cc.NO_DIFFERENCE
    assert str(cc.NO_DIFFERENCE) == 'no difference'
    assert not cc.NO_DIFFERENCE


def test_validate_reports_violations():
    theta = cc.grid_angles(M)
    # h + h'' = 1 - 1.5cos2θ < 0 perto de θ = 0
    bad = cc.SupportFunction2D(1.0 + 0.5 * np.cos(2 * theta))
    problems = cc.validate(bad)
    assert problems and 'convexidade' in problems[0]
    assert any('ímpar' in p for p in cc.validate(cc.SupportFunction2D(np.ones(17))))
    assert cc.validate(cc.make_ball(1.0, grid_size=M)) == []


def test_reconvexify_projects_into_support_functions():
    theta = cc.grid_angles(M)
    bad = cc.SupportFunction2D(1.0 + 0.5 * np.cos(2 * theta))
    fixed = cc.reconvexify(bad)
    assert cc.validate(fixed) == []
    assert cc.is_convex(fixed.values)
    assert np.all(fixed.values <= bad.values + 1e-12)


def test_reconvexify_drops_a_redundant_half_plane():
    square = cc.make_rectangle(1.0, 1.0, grid_size=M)
    raised = square.values.copy()
    raised[10] += 0.3
    fixed = cc.reconvexify(cc.SupportFunction2D(raised))
    assert cc.hausdorff_distance(fixed, square) < 1e-9


def test_support_points_of_square_contain_corners():
    square = cc.make_rectangle(2.0, 2.0, grid_size=M)
    pts = cc.support_points(square)
    for corner in ((1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0)):
        assert np.min(np.hypot(pts[:, 0] - corner[0], pts[:, 1] - corner[1])) < 1e-9


def test_resample_keeps_ball():
    K = cc.make_ball(1.5, grid_size=64)
    finer = cc.resample(K, 256)
    assert finer.grid_size == 256
    assert np.allclose(finer.values, 1.5)


def test_construction_errors():
    with pytest.raises(InvalidBodyError):
        cc.make_ball(-1.0)
    with pytest.raises(InvalidBodyError):
        cc.make_polygon([])
    with pytest.raises(InvalidBodyError):
        cc.make_ball(1.0, grid_size=15)
    with pytest.raises(InvalidBodyError):
        cc.scale(cc.make_ball(1.0, grid_size=M), -2.0)
    with pytest.raises(GridMismatchError):
        cc.minkowski_add(cc.make_ball(1.0, grid_size=M), cc.make_ball(1.0, grid_size=64))
    with pytest.raises(InvalidOperatorError):
        cc.LinearOperator2D([[1.0, 2.0, 3.0]])
    with pytest.raises(InvalidOperatorError):
        cc.LinearOperator2D([[1.0, float('nan')], [0.0, 1.0]])


def test_operator_helpers():
    B = cc.LinearOperator2D([[1.0, 2.0], [3.0, 4.0]])
    assert B.trace == 5.0
    assert B.det == pytest.approx(-2.0)
    assert (cc.ROTATION_90 @ cc.ROTATION_90).to_list() == [[-1.0, 0.0], [0.0, -1.0]]
    assert cc.ROTATION_90.power(4).to_list() == [[1.0, 0.0], [0.0, 1.0]]
    assert cc.LinearOperator2D.zero().is_zero


def test_property_suite_on_random_polygons():
    rng = np.random.default_rng(20240101)
    rhos = [0.0, 0.5, 1.0, 1.5]
    for _ in range(200):
        u = cc.random_polygon(rng, grid_size=M)
        v = cc.random_polygon(rng, grid_size=M)
        report = cc.mixed_area_report(u, v)
        assert report.bm_slack >= -1e-6
        assert cc.mixed_area(u, v) == pytest.approx(cc.mixed_area(v, u), rel=1e-8)
        _, c1, _ = cc.steiner_fit(u, v, rhos)
        assert 0.5 * c1 == pytest.approx(report.V_uv, rel=1e-6)
        w = cc.hukuhara_difference(cc.minkowski_add(u, v), v)
        assert w is not cc.NO_DIFFERENCE
        assert cc.hausdorff_distance(w, u) <= 1e-6


UNIT_SQUARE = np.array([[-0.5, -0.5], [0.5, -0.5], [0.5, 0.5], [-0.5, 0.5]])
OFF_GRID_OPERATORS = [cc.LinearOperator2D.rotation(0.3), cc.LinearOperator2D([[1.0, 0.5], [0.0, 1.0]])]


@pytest.mark.parametrize('op', OFF_GRID_OPERATORS, ids=['rotation', 'shear'])
def test_linear_image_of_polygon_matches_image_of_vertices(op):
    square = cc.make_rectangle(1.0, 1.0, grid_size=512)
    image = cc.linear_image(square, op)
    exact = cc.make_polygon(UNIT_SQUARE @ op.entries.T, grid_size=512)
    assert cc.hausdorff_distance(image, exact) < 1e-10
    assert cc.area(image) == pytest.approx(cc.area(exact), abs=1e-10)
    assert cc.area(image) == pytest.approx(abs(op.det), rel=1e-2)


@pytest.mark.parametrize('op', OFF_GRID_OPERATORS, ids=['rotation', 'shear'])
def test_linear_image_of_hexagon_with_off_grid_normals(op):
    angles = 0.1 + np.arange(6) * np.pi / 3
    hexagon = np.column_stack((np.cos(angles), np.sin(angles)))
    image = cc.linear_image(cc.make_polygon(hexagon, grid_size=M), op)
    assert cc.hausdorff_distance(image, cc.make_polygon(hexagon @ op.entries.T, grid_size=M)) < 1e-10


def test_linear_image_of_rotated_ball_stays_a_ball():
    K = cc.make_ball(1.0, center=(0.3, -0.2), grid_size=M)
    op = cc.LinearOperator2D.rotation(0.3)
    center = op.entries @ np.array([0.3, -0.2])
    assert cc.hausdorff_distance(cc.linear_image(K, op), cc.make_ball(1.0, center=center, grid_size=M)) < 1e-6


def test_repeated_small_rotations_keep_square():
    square = cc.make_rectangle(1.0, 1.0, grid_size=M)
    step = cc.LinearOperator2D.rotation(0.01)
    body = square
    for _ in range(100):
        body = cc.linear_image(body, step)
    exact = cc.make_polygon(UNIT_SQUARE @ cc.LinearOperator2D.rotation(1.0).entries.T, grid_size=M)
    assert cc.hausdorff_distance(body, exact) < 1e-9
    assert cc.area(body) == pytest.approx(cc.area(exact), abs=1e-9)


def test_contact_points_of_square_are_corners_and_edge_midpoints():
    square = cc.make_rectangle(2.0, 2.0, grid_size=M)
    contacts = cc.contact_points(square)
    j = np.arange(M)
    expected = np.select([j[:, None] == 0, j[:, None] < M // 4, j[:, None] == M // 4, j[:, None] < M // 2,
                          j[:, None] == M // 2, j[:, None] < 3 * M // 4, j[:, None] == 3 * M // 4],
                         [[1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [-1.0, 1.0], [-1.0, 0.0], [-1.0, -1.0], [0.0, -1.0]],
                         [1.0, -1.0])
    assert np.allclose(contacts, expected, atol=1e-9)


def test_contact_points_of_ball_lie_on_the_circle():
    contacts = cc.contact_points(cc.make_ball(2.0, grid_size=M))
    assert np.allclose(np.hypot(contacts[:, 0], contacts[:, 1]), 2.0, atol=1e-12)
    assert np.allclose(contacts, 2.0 * cc.grid_directions(M), atol=1e-12)


def test_convexity_tolerance_applies_to_second_differences():
    # ponto na origem com um valor levantado: segunda diferença -2cosΔ·bump
    for bump, ok in ((2e-9, True), (2e-8, False)):
        values = np.zeros(512)
        values[0] = bump
        body = cc.SupportFunction2D(values)
        assert cc.is_convex(body.values) is ok
        assert (cc.validate(body) == []) is ok

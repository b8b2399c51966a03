import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nonsep.app.random import SplitMix64, polytope3
from nonsep.errors import DegenerateBodyError, PreconditionError
from nonsep.geom2d import Ellipse2D, Polygon2D
from nonsep.geom3d import (
    Ball3,
    Ellipsoid3,
    SphereGrid,
    Zonotope3,
    body_from_dict,
    central_section,
    convex_hull3,
    frame,
    hausdorff_2d,
    petty_check,
    polar3,
    polar_volume_radial,
    projected_area,
    projection_body,
    santalo_product3,
    section_projection_gap,
    volume3,
)

CUBE = convex_hull3([[x, y, z] for x in (-1, 1) for y in (-1, 1) for z in (-1, 1)])
OCTA = convex_hull3(np.vstack([np.eye(3), -np.eye(3)]))
TETRA = convex_hull3([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]])
DIAG = np.ones(3) / np.sqrt(3)


def vertex_set(p):
    return sorted(map(tuple, np.round(p.vertices, 9) + 0.0))


# --- quadrature -------------------------------------------------------------

@pytest.mark.parametrize("grid", [SphereGrid.fibonacci(2562), SphereGrid.fibonacci(10242)])
def test_sphere_grid_moments(grid):
    assert grid.weights.sum() == pytest.approx(4 * np.pi, rel=1e-14)
    assert np.allclose(np.linalg.norm(grid.nodes, axis=1), 1.0)
    for axis in range(3):
        assert grid.integrate(grid.nodes[:, axis] ** 2) == pytest.approx(4 * np.pi / 3, abs=1e-6)


def test_hemisphere_grid():
    g = SphereGrid.hemisphere(1281)
    assert len(g) == 1281
    assert (g.nodes[:, 2] > 0).all()
    assert g.weights.sum() == pytest.approx(2 * np.pi)


def test_polar_volume_radial():
    assert polar_volume_radial(lambda u: np.ones(len(u))) == pytest.approx(4 * np.pi / 3, rel=1e-14)
    cube4 = lambda u: 4 * np.abs(u).sum(axis=1)  # noqa: E731
    assert polar_volume_radial(cube4, SphereGrid.fibonacci(10242)) == pytest.approx(1 / 48, rel=1e-2)
    assert polar_volume_radial(lambda u: np.full(len(u), np.pi)) == pytest.approx(4 / (3 * np.pi ** 2), rel=1e-14)


# --- hull, volume, polar ----------------------------------------------------

def test_cube_and_octahedron():
    assert len(CUBE.triangles) == 12
    assert volume3(CUBE) == pytest.approx(8.0, rel=1e-14)
    assert volume3(OCTA) == pytest.approx(4 / 3, rel=1e-14)
    assert CUBE.symmetric and not TETRA.symmetric
    assert vertex_set(polar3(CUBE)) == vertex_set(OCTA)
    assert vertex_set(polar3(OCTA)) == vertex_set(CUBE)


def test_hull_orientation_and_closure():
    for p in (CUBE, OCTA, TETRA):
        c = p.vertices.mean(axis=0)
        t = p.triangles
        assert (np.einsum("ij,ij->i", p.normals, p.vertices[t].mean(axis=1) - c) > 0).all()
        _, counts = np.unique(np.sort(np.vstack([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]]), axis=1),
                              axis=0, return_counts=True)
        assert (counts == 2).all()
        # Euler: V - E + F = 2
        assert len(p.vertices) - len(p.edges) + len(t) == 2


def test_hull_of_sphere_samples():
    pts = SplitMix64(7).sphere(100)
    p = convex_hull3(pts)
    assert len(p.vertices) == 100
    assert p.volume() < 4 * np.pi / 3
    assert (p.gauge(pts) <= 1 + 1e-9).all()


def test_ball_hull_volume_within_half_percent():
    ball = Ball3().to_polytope(2562)
    assert ball.volume() == pytest.approx(4 * np.pi / 3, rel=5e-3)


def test_coplanar_rejected():
    with pytest.raises(DegenerateBodyError):
        convex_hull3([[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0], [0.3, 0.2, 0]])


def test_polar_requires_interior_origin():
    with pytest.raises(PreconditionError):
        polar3(convex_hull3([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]]))


# --- projections ------------------------------------------------------------

def test_cube_projection_body():
    pi = projection_body(CUBE)
    u = SplitMix64(3).sphere(50)
    assert np.allclose(pi.support(u), 4 * np.abs(u).sum(axis=1), rtol=1e-12)


def test_tetrahedron_facet_projection():
    n = TETRA.normals[0]
    assert projection_body(TETRA).support(n[None])[0] == pytest.approx(projected_area(TETRA, n), rel=1e-12)
    # the shadow along a facet normal is that facet (area of the equilateral face, side 2√2)
    face_area = np.sqrt(3) / 4 * 8
    assert projected_area(TETRA, n) == pytest.approx(face_area, rel=1e-12)


def test_projected_area_examples():
    assert projected_area(CUBE, [0, 0, 1]) == pytest.approx(4.0)
    assert projected_area(CUBE, DIAG) == pytest.approx(4 * np.sqrt(3))
    assert projected_area(OCTA, [0, 0, 1]) == pytest.approx(2.0)


def test_ball_projection_body():
    pi = projection_body(Ball3())
    u = SplitMix64(4).sphere(20)
    assert np.allclose(pi.support(u), np.pi)


def test_zonotope_parity():
    z = Zonotope3(SplitMix64(5).normal((7, 3)))
    u = SplitMix64(6).sphere(40)
    assert np.array_equal(z.support(u), z.support(-u))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_cauchy_consistency(seed):
    rng = SplitMix64(seed)
    p = polytope3(rng, k=int(rng.integers(4, 12)))
    for u in rng.sphere(4):
        # projected_area itself raises when the Cauchy sum and the shadow hull disagree
        assert projection_body(p).support(u[None])[0] == pytest.approx(projected_area(p, u), abs=1e-9)


# --- sections ---------------------------------------------------------------

def test_frame_is_orthonormal_and_deterministic():
    for h in ([0, 0, 1], DIAG, [0.3, -0.9, 0.1]):
        f = frame(h)
        hn = np.asarray(h) / np.linalg.norm(h)
        assert np.allclose(f.T @ f, np.eye(2))
        assert np.allclose(hn @ f, 0)
    assert np.allclose(frame([0, 0, 1]), [[0, 1], [-1, 0], [0, 0]])


def test_cube_section_is_square():
    s = central_section(CUBE, [0, 0, 1])
    assert s.area() == pytest.approx(4.0)
    assert hausdorff_2d(s, Polygon2D([[-1, -1], [1, -1], [1, 1], [-1, 1]]).linear_image(frame([0, 0, 1])[:2].T)) \
        == pytest.approx(0, abs=1e-12)


def test_octahedron_diagonal_section_is_regular_hexagon():
    s = central_section(OCTA, DIAG)
    assert len(s.vertices) == 6
    r = np.linalg.norm(s.vertices, axis=1)
    assert np.allclose(r, r[0])
    assert np.allclose(r[0], 1 / np.sqrt(2))


def test_ellipsoid_sections_and_shadows():
    e = Ellipsoid3(2, 1, 0.5)
    assert isinstance(central_section(Ball3(), DIAG), Ellipse2D)
    assert central_section(Ball3(), DIAG).area() == pytest.approx(np.pi)
    assert central_section(e, [0, 0, 1]).area() == pytest.approx(2 * np.pi)
    assert projected_area(e, [0, 0, 1]) == pytest.approx(2 * np.pi)
    assert projected_area(e, [1, 0, 0]) == pytest.approx(0.5 * np.pi)
    # an ellipsoid hull converges to the closed forms
    poly = e.to_polytope(2562)
    assert projected_area(poly, DIAG) == pytest.approx(projected_area(e, DIAG), rel=5e-3)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_section_projection_duality(seed):
    rng = SplitMix64(seed)
    p = polytope3(rng, k=int(rng.integers(4, 12)))
    for h in rng.sphere(2):
        assert section_projection_gap(p, h) <= 1e-7


def test_section_projection_duality_ellipsoid():
    assert section_projection_gap(Ellipsoid3(2, 1, 0.7), DIAG) <= 1e-7


# --- Santaló and Petty ------------------------------------------------------

def test_santalo_ball_and_ellipsoid():
    assert santalo_product3(Ball3(2.0)) == pytest.approx((4 * np.pi / 3) ** 2, rel=1e-14)
    assert santalo_product3(Ellipsoid3(3, 1, 0.2)) == pytest.approx((4 * np.pi / 3) ** 2, rel=1e-14)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_santalo_random(seed):
    p = polytope3(SplitMix64(seed), k=8)
    assert santalo_product3(p) <= (4 * np.pi / 3) ** 2 * (1 + 1e-3)
    # polar involution
    assert vertex_set(p.polar().polar()) == vertex_set(p)


def test_petty_cube():
    rep = petty_check(CUBE)
    assert rep.value == pytest.approx(4 / 3, rel=1e-3)
    assert rep.passed


def test_petty_ellipsoid_analytic():
    rep = petty_check(Ellipsoid3(2, 1, 0.5))
    assert rep.value == pytest.approx(64 / 27, rel=1e-12)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_petty_random(seed):
    assert petty_check(polytope3(SplitMix64(seed), k=8), sizes=(642, 2562)).passed


def test_dict_roundtrip():
    assert body_from_dict(CUBE.to_dict()).volume() == pytest.approx(8.0)
    assert body_from_dict({"type": "ball3d", "r": 2}).volume() == pytest.approx(32 * np.pi / 3)
    assert body_from_dict(Ellipsoid3(1, 2, 3).to_dict()).volume() == pytest.approx(8 * np.pi)

"""Acceptance criteria 1-12.

Run with ``pytest tests/test_acceptance.py``; the terminal summary prints one
PASS/FAIL line per criterion. Populations come from the seeded generators in
``nonsep.app.suites`` with seed 0.
"""
import time

import numpy as np
import pytest

import oracles
from nonsep import geom2d, geom3d
from nonsep.app import suites
from nonsep.app.cli import main
from nonsep.calculus2d import PerturbedCurve, chord_identity_check, chord_chain_check
from nonsep.critical2d import construct_nonsep_lattice, critical_lattice, d21, minimal_central_triangle
from nonsep.geom2d import Ellipse2D, Polygon2D, SupportSampled2D
from nonsep.geom3d import Ball3, Ellipsoid3, SphereGrid
from nonsep.lattice import Lattice, is_nonseparable
from nonsep.nonsep3d import (
    BALL_TRUE_VALUE,
    SECTION_BOUND,
    THEOREM_BOUND,
    d32_upper_bound,
    direction_scan,
    section_inequality_check,
)

pytestmark = pytest.mark.acceptance

SEED = 0
D21_BOUND = np.pi * np.sqrt(3) / 8
TRIANGLE = Polygon2D([[0, 0], [1, 0.5], [0.5, 1]])
DIAMOND = Polygon2D([[1, 0], [0, 1], [-1, 0], [0, -1]])


@pytest.fixture(scope="module")
def bodies_2d():
    return {
        "symmetric-polygon": suites.symmetric_polygons(SEED, 70),
        "polygon": suites.asymmetric_polygons(SEED, 30),
        "smooth-trig": suites.trig_bodies(SEED, 100),
        "ellipse": suites.ellipse_samples(SEED, 20),
    }


@pytest.fixture(scope="module")
def bodies_3d():
    return suites.suite_3d_bodies(SEED, 20)


@pytest.fixture(scope="module")
def scans_3d(bodies_3d):
    """One 1281-direction scan per suite body, shared by criteria 10 and 11."""
    grid = SphereGrid.hemisphere(1281)
    return {name: direction_scan(b, grid.nodes) for name, b in bodies_3d.items()}


# --- 1 ----------------------------------------------------------------------

@pytest.mark.criterion_1
def test_c1_disk(acceptance_note):
    t = time.perf_counter()
    analytic = d21(Ellipse2D(1, 1))
    scanned = d21(Ellipse2D(1, 1), method="scan")
    sampled = d21(SupportSampled2D.from_body(Ellipse2D(1, 1), 1024))
    elapsed = time.perf_counter() - t
    for v in (analytic, scanned, sampled):
        assert abs(v - D21_BOUND) <= 1e-6
    assert elapsed < 1.0
    acceptance_note(f"d21(disk) = {sampled:.10f} (sampled), π√3/8 = {D21_BOUND:.10f}, {elapsed:.3f} s for 3 routes")


# --- 2 ----------------------------------------------------------------------

@pytest.mark.criterion_2
def test_c2_triangle(tmp_path, capsys, acceptance_note):
    value = d21(TRIANGLE)
    assert abs(value - 0.375) <= 1e-9
    body = tmp_path / "triangle.json"
    body.write_text('{"type": "polygon2d", "vertices": [[0, 0], [1, 0.5], [0.5, 1]]}')
    lat = tmp_path / "z2.json"
    lat.write_text('{"basis": [[1, 0], [0, 1]]}')
    assert main(["nonsep-check", str(body), str(lat)]) == 0
    assert '"verdict": true' in capsys.readouterr().out
    assert is_nonseparable(TRIANGLE, Lattice.integer(2)).verdict
    acceptance_note(f"d21(T) = {value!r}; nonsep-check certifies ℤ²")


# --- 3 ----------------------------------------------------------------------

@pytest.mark.criterion_3
def test_c3_theorem_bound(bodies_2d, acceptance_note):
    gaps = {}
    for kind, bodies in bodies_2d.items():
        if kind == "ellipse":
            continue
        for i, b in enumerate(bodies):
            v = d21(b)
            assert v <= D21_BOUND + 1e-6, (kind, i, v)
            gaps[(kind, i)] = D21_BOUND - v
    assert len(gaps) == 200
    worst = min(gaps, key=gaps.get)
    assert gaps[worst] > 1e-3, worst
    ell = [abs(D21_BOUND - d21(b)) for b in bodies_2d["ellipse"]]
    assert max(ell) <= 1e-6
    acceptance_note(f"200 bodies, smallest gap {gaps[worst]:.4g} at {worst[0]}#{worst[1]}; "
                    f"{len(ell)} ellipse samples within {max(ell):.2g}")


# --- 4 ----------------------------------------------------------------------

@pytest.mark.criterion_4
def test_c4_asymmetry(acceptance_note):
    polys = suites.asymmetric_polygons(SEED, 50)
    margins = []
    for p in polys:
        assert not p.symmetric
        margins.append(d21(geom2d.difference_body(p)) - d21(p))
    assert min(margins) > 1e-9
    acceptance_note(f"50 asymmetric polygons, smallest d21(symmetral) - d21 = {min(margins):.4g}")


# --- 5 ----------------------------------------------------------------------

@pytest.mark.criterion_5
def test_c5_construction(acceptance_note):
    bodies = suites.symmetric_polygons(SEED + 1, 25) + suites.trig_bodies(SEED + 1, 25)
    worst_prod = worst_det = 0.0
    for b in bodies:
        tri = minimal_central_triangle(geom2d.polar(b))
        con = construct_nonsep_lattice(b, tri)
        worst_prod = max(worst_prod, abs(con.triangle_area * con.polar_triangle_area - 27 / 4))
        worst_det = max(worst_det, abs(con.lattice.det - 8 / 9 * con.triangle_area))
        assert con.certificate.verdict
    assert worst_prod <= 1e-9
    assert worst_det <= 1e-9
    acceptance_note(f"50 bodies, max ||T||T°| - 27/4| = {worst_prod:.2g}, max |d - 8|T|/9| = {worst_det:.2g}")


# --- 6 ----------------------------------------------------------------------

@pytest.mark.criterion_6
def test_c6_identity(acceptance_note):
    worst = 0.0
    for curve in suites.perturbed_curves(SEED, 50):
        res = chord_identity_check(curve)
        worst = max(worst, res.residual / (1 + abs(res.lhs)))
    assert worst <= 1e-6
    c = 0.7
    t = np.linspace(0, 2 * np.pi, 256, endpoint=False)
    lhs, rhs = chord_identity_check(PerturbedCurve(np.column_stack([np.cos(t), np.sin(t)]), np.full(256, c)))
    assert lhs == pytest.approx(np.pi * c * c, rel=1e-12)
    assert rhs == pytest.approx(np.pi * c * c, rel=1e-12)
    acceptance_note(f"50 pairs, worst relative residual {worst:.2g}; circle offset {c}: lhs = rhs = πc²")


# --- 7 ----------------------------------------------------------------------

@pytest.mark.criterion_7
def test_c7_chord_chain(acceptance_note):
    worst_res, worst_final, worst_point = 0.0, np.inf, np.inf
    for b in suites.chain_bodies(SEED, 50):
        rep = chord_chain_check(b)
        assert rep.min_triangle_area == pytest.approx(1.5, rel=1e-6)
        worst_res = max(worst_res, rep.chord_residual)
        worst_final = min(worst_final, 0.75 * rep.polar_area / rep.area - 1)
        worst_point = min(worst_point, rep.pointwise_margin)
        assert rep.passed, rep.to_dict()
    assert worst_res <= 1e-5
    assert worst_final >= -1e-6
    acceptance_note(f"50 bodies, max chord residual {worst_res:.2g}, min (3/4)|K°|/|K| - 1 = {worst_final:.3g}, "
                    f"min pointwise margin {worst_point:.2g}")


# --- 8 ----------------------------------------------------------------------

@pytest.mark.criterion_8
def test_c8_santalo_2d(bodies_2d, acceptance_note):
    sym = bodies_2d["symmetric-polygon"] + bodies_2d["smooth-trig"] + bodies_2d["ellipse"]
    ratios = [geom2d.santalo_product(b) / np.pi ** 2 for b in sym]
    assert max(ratios) <= 1 + 1e-3
    e = Ellipse2D(2.0, 0.7, 0.4)
    gaps = []
    for n in (64, 128, 256):
        p = Polygon2D(e.boundary_points(2 * np.pi * np.arange(n) / n))
        gaps.append(np.pi ** 2 - geom2d.santalo_product(p))
    assert all(g > 0 for g in gaps)
    assert gaps[1] <= gaps[0] / 2 and gaps[2] <= gaps[1] / 2
    acceptance_note(f"2D: {len(sym)} bodies, max |K||K°|/π² = {max(ratios):.6f}; "
                    f"inscribed ellipse polygons n=64,128,256 gap {', '.join(f'{g:.3g}' for g in gaps)}")


@pytest.mark.criterion_8
def test_c8_santalo_3d(bodies_3d, acceptance_note):
    ratios = {name: geom3d.santalo_product3(b) / (4 * np.pi / 3) ** 2 for name, b in bodies_3d.items()}
    assert max(ratios.values()) <= 1 + 1e-3
    for name in ("ball", "ellipsoid(2,1,1)", "ellipsoid(1.5,1,0.5)"):
        assert ratios[name] == pytest.approx(1.0, rel=1e-12)
    e = Ellipsoid3(1.5, 1.0, 0.5)
    gaps = [(4 * np.pi / 3) ** 2 - geom3d.santalo_product3(e.to_polytope(n)) for n in (642, 2562, 10242)]
    assert all(g > 0 for g in gaps)
    assert gaps[1] <= gaps[0] / 2 and gaps[2] <= gaps[1] / 2
    acceptance_note(f"3D: {len(ratios)} bodies, max ratio {max(ratios.values()):.6f}; "
                    f"ellipsoid hulls 642/2562/10242 gap {', '.join(f'{g:.3g}' for g in gaps)}")


# --- 9 ----------------------------------------------------------------------

@pytest.mark.criterion_9
def test_c9_petty(bodies_3d, acceptance_note):
    values = {name: geom3d.petty_check(b).value for name, b in bodies_3d.items()}
    assert max(values.values()) <= 64 / 27 * (1 + 1e-3)
    assert values["cube"] == pytest.approx(4 / 3, rel=1e-3)
    ball = [geom3d.petty_check(Ball3().to_polytope(n)).value for n in (642, 2562, 10242)]
    gaps = [64 / 27 - v for v in ball]
    assert gaps[0] > gaps[1] > gaps[2] > 0
    assert ball[-1] == pytest.approx(64 / 27, rel=1e-2)
    acceptance_note(f"max |(ΠK)°||K|² = {max(values.values()):.6f} (64/27 = {64 / 27:.6f}); cube {values['cube']:.7f}; "
                    f"ball hulls 642/2562/10242: {', '.join(f'{v:.5f}' for v in ball)}")


# --- 10 ---------------------------------------------------------------------

@pytest.mark.criterion_10
def test_c10_d32(bodies_3d, scans_3d, acceptance_note):
    results = {name: d32_upper_bound(b, scan=scans_3d[name]) for name, b in bodies_3d.items()}
    ball = results["ball"].bound
    assert abs(ball - np.pi / (4 * np.sqrt(3))) <= 1e-4
    assert abs(ball - 0.453449) <= 1e-6
    for name, r in results.items():
        assert r.bound <= THEOREM_BOUND * (1 + 1e-3), name
        assert r.certificate.admissible_2k, name
    worst = max(results, key=lambda k: results[k].bound)
    acceptance_note(f"ball bound {ball:.6f} vs true d32(ball) = π/(6√2) = {BALL_TRUE_VALUE:.5f}")
    acceptance_note(f"{len(results)} bodies, largest bound {results[worst].bound:.6f} ({worst}), "
                    f"cube {results['cube'].bound:.6f}")


# --- 11 ---------------------------------------------------------------------

@pytest.mark.criterion_11
def test_c11_sections(bodies_3d, scans_3d, acceptance_note):
    reports = {name: section_inequality_check(b, scan=scans_3d[name]) for name, b in bodies_3d.items()}
    for name, rep in reports.items():
        assert rep.max_ratio <= 1 + 1e-3, name
    for name in ("ball", "ellipsoid(2,1,1)", "ellipsoid(1.5,1,0.5)"):
        assert np.abs(reports[name].products / SECTION_BOUND - 1).max() <= 1e-4, name
    poly = max((k for k in reports if k not in ("ball", "ellipsoid(2,1,1)", "ellipsoid(1.5,1,0.5)")),
               key=lambda k: reports[k].max_ratio)
    acceptance_note(f"{len(reports)} bodies x 1281 directions; largest polytope ratio {reports[poly].max_ratio:.6f} "
                    f"({poly})")


# --- 12 ---------------------------------------------------------------------

@pytest.mark.criterion_12
def test_c12_diamond_brute_force(acceptance_note):
    brute = float(oracles.edge_triple_delta(DIAMOND.vertices))
    delta = critical_lattice(DIAMOND).delta
    assert delta == pytest.approx(0.5, abs=1e-12)
    assert abs(delta - brute) <= 1e-9
    acceptance_note(f"Δ(diamond) = {delta!r}, edge brute force {brute!r}")


@pytest.mark.criterion_12
def test_c12_direct_lattice_search(acceptance_note):
    tri = oracles.direct_d21(TRIANGLE.area(), oracles.polygon_width(TRIANGLE.vertices), starts=6)
    disk = oracles.direct_d21(np.pi, oracles.disk_width(), starts=6)
    assert abs(d21(TRIANGLE) - tri) <= 1e-4
    assert abs(d21(Ellipse2D(1, 1), method="scan") - disk) <= 1e-4
    acceptance_note(f"direct search: triangle {tri:.8f}, disk {disk:.8f}")

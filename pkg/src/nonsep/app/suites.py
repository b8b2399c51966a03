"""Seeded body populations and the verification suites built on them.

Every population is a pure function of (seed, count): body i is generated
from its own SplitMix64 stream seeded by the i-th draw of a master stream.
"""
from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .. import geom2d, geom3d
from .._numerics import angle_grid
from ..calculus2d import PerturbedCurve, chord_identity_check, chord_chain_check
from ..critical2d import construct_nonsep_lattice, d21, minimal_central_triangle
from ..geom3d import Ball3, Ellipsoid3, SphereGrid
from ..nonsep3d import (
    BOUND_RTOL,
    THEOREM_BOUND,
    d32_upper_bound,
    direction_scan,
    section_inequality_check,
)
from . import random as rnd

D21_BOUND = math.pi * math.sqrt(3.0) / 8.0
SANTALO_2D = math.pi ** 2
SANTALO_3D = (4.0 * math.pi / 3.0) ** 2
PETTY_BOUND = geom3d.PETTY_BOUND

# salts separating the populations drawn from one user seed
_SALT = {"sympoly": 1, "poly": 2, "trig": 3, "ellipse": 4, "curve": 5, "chain": 6, "poly3": 7}


def _streams(seed, family, count):
    master = rnd.SplitMix64((int(seed) << 8) ^ _SALT[family])
    return [rnd.SplitMix64(master.next_u64()) for _ in range(count)]


def symmetric_polygons(seed, count):
    return [rnd.symmetric_polygon(r, 3 + r.integers(0, 6)) for r in _streams(seed, "sympoly", count)]


def asymmetric_polygons(seed, count):
    return [rnd.polygon(r, 3 + r.integers(0, 8)) for r in _streams(seed, "poly", count)]


def trig_bodies(seed, count, m_range=(2, 4), a_range=(0.3, 0.6)):
    out = []
    for r in _streams(seed, "trig", count):
        m = m_range[0] + r.integers(0, m_range[1] - m_range[0] + 1)
        out.append(rnd.smooth_trig(r, m, r.uniform(*a_range)))
    return out


def ellipse_samples(seed, count, n=1024):
    return [rnd.ellipse(r, n) for r in _streams(seed, "ellipse", count)]


def chain_bodies(seed, count):
    return trig_bodies(seed ^ 0x5A5A, count, m_range=(1, 4), a_range=(0.1, 0.6))


def perturbed_curves(seed, count, n=256):
    """γ: support parameterization of a random smooth body; l: low-order trig offset."""
    out = []
    for r in _streams(seed, "curve", count):
        body = rnd.smooth_trig(r, 1 + r.integers(0, 3), r.uniform(0.1, 0.5), n)
        t = angle_grid(n)
        c = r.normal(size=(4, 2)) * 0.2
        j = np.arange(4)[:, None]
        l = (c[:, :1] * np.cos(j * t) + c[:, 1:] * np.sin(j * t)).sum(axis=0)
        out.append(PerturbedCurve(body.boundary_points(t), l))
    return out


def polytopes3(seed, count):
    return [rnd.polytope3(r, 4 + r.integers(0, 9)) for r in _streams(seed, "poly3", count)]


def fixed_3d_bodies():
    cube = geom3d.convex_hull3(list(itertools.product([-1.0, 1.0], repeat=3)))
    octa = geom3d.convex_hull3(np.vstack([np.eye(3), -np.eye(3)]))
    return {
        "ball": Ball3(1.0),
        "ellipsoid(2,1,1)": Ellipsoid3(2.0, 1.0, 1.0),
        "ellipsoid(1.5,1,0.5)": Ellipsoid3(1.5, 1.0, 0.5),
        "cube": cube,
        "octahedron": octa,
    }


def suite_3d_bodies(seed=0, count=20):
    bodies = fixed_3d_bodies()
    for i, p in enumerate(polytopes3(seed, count)):
        bodies[f"polytope#{i}"] = p
    return bodies


# ---------------------------------------------------------------------------
# case runners


@dataclass
class Case:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)

    def to_dict(self):
        return {"name": self.name, "passed": bool(self.passed), **self.details}


def _threads():
    try:
        return max(1, int(os.environ.get("NONSEP_THREADS", "1")))
    except ValueError:
        return 1


def run_cases(fn, items):
    """Map ``fn`` over ``items``; results keep the item order."""
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        return list(pool.map(fn, items))


def check_d21_bound(body, name, ellipse=False):
    val = d21(body)
    gap = D21_BOUND - val
    ok = val <= D21_BOUND + 1e-6 and (abs(gap) <= 1e-6 if ellipse else gap > 1e-3)
    return Case(name, ok, {"d21": val, "gap": gap})


def check_asymmetry(body, name):
    a = d21(body)
    b = d21(geom2d.difference_body(body))
    return Case(name, a < b - 1e-9, {"d21": a, "d21Symmetral": b})


def check_construction(body, name):
    kp = geom2d.polar(body)
    tri = minimal_central_triangle(kp)
    con = construct_nonsep_lattice(body, tri)
    prod = con.triangle_area * con.polar_triangle_area
    ok = (abs(prod - 6.75) <= 1e-9 * 6.75
          and abs(con.lattice.det - 8.0 / 9.0 * con.triangle_area) <= 1e-9 * con.triangle_area
          and con.certificate.verdict)
    return Case(name, ok, {"product": prod, "det": con.lattice.det, "triangleArea": con.triangle_area,
                           "verdict": con.certificate.verdict})


def check_santalo_2d(body, name):
    p = geom2d.santalo_product(body)
    return Case(name, p <= SANTALO_2D * (1 + 1e-3), {"product": p, "ratio": p / SANTALO_2D})


def check_santalo_3d(body, name):
    p = geom3d.santalo_product3(body)
    return Case(name, p <= SANTALO_3D * (1 + 1e-3), {"product": p, "ratio": p / SANTALO_3D})


def check_identity(curve, name):
    res = chord_identity_check(curve)
    return Case(name, res.residual <= 1e-6 * (1 + abs(res.lhs)), {"lhs": res.lhs, "rhs": res.rhs})


def check_chord_chain(body, name):
    rep = chord_chain_check(body)
    return Case(name, rep.passed, rep.to_dict())


def check_petty(body, name):
    rep = geom3d.petty_check(body)
    return Case(name, rep.passed, {"value": rep.value, "ratio": rep.ratio})


def check_3d_direction_suite(body, name, grid):
    scan = direction_scan(body, grid.nodes)
    bound = d32_upper_bound(body, scan=scan)
    sec = section_inequality_check(body, scan=scan)
    ok = bound.passed and sec.passed
    return Case(name, ok, {"d32Bound": bound.bound, "boundRatio": bound.bound / THEOREM_BOUND,
                           "admissible": bound.certificate.admissible_2k,
                           "sectionMaxRatio": sec.max_ratio, "sectionMinRatio": sec.to_dict()["minRatio"]})


# ---------------------------------------------------------------------------
# suites


def suite_2d(seed=0, count=50):
    sym = symmetric_polygons(seed, count)
    trig = trig_bodies(seed, count)
    ell = ellipse_samples(seed, max(1, count // 5))
    asym = asymmetric_polygons(seed, count)
    cases = []
    cases += run_cases(lambda ib: check_d21_bound(ib[1], f"d21 symmetric-polygon#{ib[0]}"), enumerate(sym))
    cases += run_cases(lambda ib: check_d21_bound(ib[1], f"d21 smooth-trig#{ib[0]}"), enumerate(trig))
    cases += run_cases(lambda ib: check_d21_bound(ib[1], f"d21 polygon#{ib[0]}"), enumerate(asym))
    cases += run_cases(lambda ib: check_d21_bound(ib[1], f"d21 ellipse#{ib[0]}", ellipse=True), enumerate(ell))
    cases += run_cases(lambda ib: check_asymmetry(ib[1], f"asymmetry polygon#{ib[0]}"), enumerate(asym))
    both = list(itertools.chain(sym, trig))
    cases += run_cases(lambda ib: check_construction(ib[1], f"construction#{ib[0]}"), enumerate(both))
    cases += run_cases(lambda ib: check_santalo_2d(ib[1], f"santalo2d#{ib[0]}"), enumerate(both + ell))
    return cases


def suite_calculus(seed=0, count=50):
    cases = run_cases(lambda ic: check_identity(ic[1], f"identity#{ic[0]}"),
                      enumerate(perturbed_curves(seed, count)))
    cases += run_cases(lambda ib: check_chord_chain(ib[1], f"chord-chain#{ib[0]}"),
                       enumerate(chain_bodies(seed, count)))
    return cases


def suite_3d(seed=0, count=20, nodes=1281):
    bodies = suite_3d_bodies(seed, count)
    grid = SphereGrid.hemisphere(nodes)
    items = list(bodies.items())
    cases = run_cases(lambda nb: check_santalo_3d(nb[1], f"santalo3d {nb[0]}"), items)
    cases += run_cases(lambda nb: check_petty(nb[1], f"petty {nb[0]}"), items)
    cases += run_cases(lambda nb: check_3d_direction_suite(nb[1], f"d32/section {nb[0]}", grid), items)
    return cases


SUITES = {"2d": suite_2d, "3d": suite_3d, "calculus": suite_calculus}


__all__ = [
    "Case", "SUITES", "suite_2d", "suite_3d", "suite_calculus", "run_cases",
    "symmetric_polygons", "asymmetric_polygons", "trig_bodies", "ellipse_samples",
    "chain_bodies", "perturbed_curves", "polytopes3", "fixed_3d_bodies", "suite_3d_bodies",
    "D21_BOUND", "SANTALO_2D", "SANTALO_3D", "PETTY_BOUND", "BOUND_RTOL",
]

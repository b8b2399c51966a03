"""Layered lattice packings of K° and the resulting upper bound on d_{3,2}(K).

For a direction h, the section K° ∩ h⊥ carries a critical lattice with basis
p1, p2; the lattice spanned by 2p1, 2p2 and v = 2 h_{K°}(h) h packs K°. Half
of it is K°-admissible, so Δ(K°) <= d(Λ_h)/8 and d_{3,2}(K) <= |K| d(Λ_h)/64.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._numerics import golden_section
from .critical2d import CriticalCertificate, critical_lattice
from .errors import NumericalError, PreconditionError
from .geom3d import Ellipsoid3, SphereGrid, frame
from .lattice import Lattice, is_admissible

THEOREM_BOUND = np.pi / (4.0 * np.sqrt(3.0))
BALL_TRUE_VALUE = np.pi / (6.0 * np.sqrt(2.0))
SECTION_BOUND = np.sqrt(3.0) * np.pi / 2.0
SECTION_RESOLUTION = 512
SECTION_REL_TOL = 1e-7
SECTION_CANDIDATES = 4
BOUND_RTOL = 1e-3


@dataclass(frozen=True)
class PackingCertificate:
    direction: np.ndarray
    section_critical: CriticalCertificate
    v: np.ndarray
    lattice: Lattice
    det: float
    admissible_2k: bool
    scan_radius: float

    @property
    def hexagon(self):
        """A1..A6 lifted to ℝ³."""
        return self.section_critical.hexagon @ frame(self.direction).T

    def to_dict(self):
        return {
            "direction": self.direction.tolist(),
            "sectionCritical": self.section_critical.to_dict(),
            "v": self.v.tolist(),
            "basis": self.lattice.basis.tolist(),
            "det": self.det,
            "admissible2K": self.admissible_2k,
            "scanRadius": self.scan_radius,
        }


def _unit(h):
    h = np.asarray(h, dtype=float)
    return h / np.linalg.norm(h)


def _section_delta(kpolar, h, resolution):
    return critical_lattice(kpolar.central_section(h), resolution=resolution,
                            rel_tol=SECTION_REL_TOL, candidates=SECTION_CANDIDATES)


def layered_packing(kpolar, h, resolution=SECTION_RESOLUTION):
    """Layered packing lattice of ``kpolar`` with layers orthogonal to ``h``."""
    if not kpolar.symmetric:
        raise PreconditionError("layered packing needs a centrally symmetric body")
    h = _unit(h)
    cert = _section_delta(kpolar, h, resolution)
    e = frame(h)
    p1, p2 = e @ cert.p1, e @ cert.p2
    d_h = float(kpolar.support(h))
    v = 2.0 * d_h * h
    lat = Lattice.from_vectors(2.0 * p1, 2.0 * p2, v)
    expected = 8.0 * cert.delta * d_h
    if abs(lat.det - expected) > 1e-7 * expected:
        raise NumericalError(f"d(Λ) = {lat.det} differs from 8Δd_h = {expected}")
    adm = is_admissible(kpolar.scaled(2.0), lat)
    return PackingCertificate(h, cert, v, lat, lat.det, adm.admissible, adm.radius)


# ---------------------------------------------------------------------------
# direction scans


@dataclass(frozen=True)
class DirectionScan:
    """Per-direction data for a symmetric body K on a grid of directions."""

    body: object
    polar: object
    directions: np.ndarray
    delta: np.ndarray       # Δ(K° ∩ h⊥)
    d_h: np.ndarray         # h_{K°}(h)
    shadow: np.ndarray      # |Pr_{h⊥} K|

    @property
    def det(self):
        return 8.0 * self.delta * self.d_h


def direction_scan(body, directions, resolution=SECTION_RESOLUTION):
    if not body.symmetric:
        raise PreconditionError("direction scan needs a centrally symmetric body")
    kp = body.polar()
    dirs = np.asarray(directions, dtype=float)
    delta = np.array([_section_delta(kp, h, resolution).delta for h in dirs])
    shadow = np.array([body.projected_area(h) for h in dirs])
    return DirectionScan(body, kp, dirs, delta, kp.support(dirs), shadow)


# ---------------------------------------------------------------------------
# d_{3,2} bound


@dataclass(frozen=True)
class D32Bound:
    bound: float
    best_h: np.ndarray
    volume: float
    symmetral_volume: float
    certificate: PackingCertificate
    grid_bound: float
    nodes: int

    @property
    def symmetral_bound(self):
        """The same packing read for the central symmetral (K - K)/2."""
        return self.symmetral_volume * self.certificate.det / 64.0

    @property
    def passed(self):
        return self.bound <= THEOREM_BOUND * (1 + BOUND_RTOL) and self.certificate.admissible_2k

    def to_dict(self):
        return {
            "bound": self.bound,
            "bestH": self.best_h.tolist(),
            "volume": self.volume,
            "symmetralVolume": self.symmetral_volume,
            "symmetralBound": self.symmetral_bound,
            "gridBound": self.grid_bound,
            "nodes": self.nodes,
            "theoremBound": THEOREM_BOUND,
            "ballValue": BALL_TRUE_VALUE,
            "certificate": self.certificate.to_dict(),
        }


def _refine(kp, h0, step, resolution):
    """Coordinate golden-section search along two great circles through h0."""
    e = frame(h0)

    def point(a, b):
        return _unit(np.cos(a) * np.cos(b) * h0 + np.sin(a) * e[:, 0] + np.sin(b) * e[:, 1])

    def det_at(h):
        return 8.0 * _section_delta(kp, h, resolution).delta * float(kp.support(h))

    xa, fa = golden_section(lambda a: np.array([det_at(point(t, 0.0)) for t in a]),
                            np.array([-step]), np.array([step]), rel_tol=1e-3, scale=step)
    best_a = float(xa[0])
    xb, fb = golden_section(lambda b: np.array([det_at(point(best_a, t)) for t in b]),
                            np.array([-step]), np.array([step]), rel_tol=1e-3, scale=step)
    h = point(best_a, float(xb[0]))
    return h, float(fb[0])


def d32_upper_bound(body, grid=None, resolution=SECTION_RESOLUTION, refine=True, scan=None):
    """Certified upper bound |K| min_h d(Λ_h) / 64 on d_{3,2}(K).

    Parameters
    ----------
    body : Polytope3 or Ellipsoid3
        Asymmetric bodies are replaced by (K - K)/2 for the packing; the bound
        is reported for |K| and, for comparison, for |(K - K)/2|.
    grid : SphereGrid, optional
        Directions to scan; defaults to the 1281-node hemisphere.
    refine : bool
        Polish the best node by golden-section search on two great circles.
    scan : DirectionScan, optional
        Precomputed per-direction data for the symmetral.
    """
    ks = body if body.symmetric else body.difference_body()
    if scan is None:
        grid = grid or SphereGrid.hemisphere()
        scan = direction_scan(ks, grid.nodes, resolution)
    dets = scan.det
    k = int(np.argmin(dets))
    h = scan.directions[k]
    grid_det = float(dets[k])
    if refine and not isinstance(ks, Ellipsoid3):
        step = np.sqrt(4.0 * np.pi / max(len(scan.directions), 1))
        h_ref, det_ref = _refine(scan.polar, h, step, resolution)
        if det_ref < grid_det:
            h = h_ref
    cert = layered_packing(scan.polar, h, resolution)
    vol = body.volume()
    return D32Bound(vol * cert.det / 64.0, h, vol, ks.volume(), cert,
                    vol * grid_det / 64.0, len(scan.directions))


# ---------------------------------------------------------------------------
# section inequality


@dataclass(frozen=True)
class SectionReport:
    products: np.ndarray
    max_ratio: float
    argmax: np.ndarray
    bound: float = SECTION_BOUND

    @property
    def passed(self):
        return self.max_ratio <= 1.0 + BOUND_RTOL

    def to_dict(self):
        return {"maxRatio": self.max_ratio, "argmax": self.argmax.tolist(), "bound": self.bound,
                "minRatio": float(self.products.min() / self.bound)}


def section_inequality_check(body, grid=None, resolution=SECTION_RESOLUTION, scan=None):
    """Δ(K° ∩ h⊥) |Pr_{h⊥} K| against √3π/2 at every grid direction."""
    if scan is None:
        grid = grid or SphereGrid.hemisphere()
        scan = direction_scan(body, grid.nodes, resolution)
    prod = scan.delta * scan.shadow
    k = int(np.argmax(prod))
    return SectionReport(prod, float(prod[k] / SECTION_BOUND), scan.directions[k])


__all__ = [
    "PackingCertificate", "layered_packing", "DirectionScan", "direction_scan",
    "D32Bound", "d32_upper_bound", "SectionReport", "section_inequality_check",
    "THEOREM_BOUND", "BALL_TRUE_VALUE", "SECTION_BOUND",
]
